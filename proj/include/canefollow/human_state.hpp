#pragma once

#include "canefollow/fusion.hpp"

#include <array>
#include <optional>

namespace canefollow {

enum class Provenance { Detected, Estimated, Absent };

/// Point-foot human state: midpoint of the two legs in the body frame.
struct HumanState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double timestamp = 0.0;
    Provenance left = Provenance::Absent;
    Provenance right = Provenance::Absent;
};

HumanState midpoint(const LegState& left, const LegState& right);

/// Direct-form coefficients of a second-order IIR section, a0 normalized to 1.
struct BiquadCoefficients {
    std::array<double, 3> b{};
    std::array<double, 3> a{1.0, 0.0, 0.0};

    double dc_gain() const;
    /// Largest pole magnitude.
    double pole_radius() const;
};

/// Second-order Butterworth low-pass via the bilinear transform, prewarped at
/// the cutoff. Throws ConfigError unless 0 < cutoff < sample_rate / 2 and the
/// resulting poles lie strictly inside the unit circle.
BiquadCoefficients butterworth_lowpass(double cutoff_hz, double sample_rate_hz);

class Biquad {
public:
    explicit Biquad(const BiquadCoefficients& c) : c_(c) {}

    /// Sets the memory to the steady state for a constant input.
    void prime(double value);
    double step(double input);

private:
    BiquadCoefficients c_;
    std::array<double, 2> x_{};
    std::array<double, 2> y_{};
};

/// Per-channel low-pass on (x, y, theta). The first sample primes the filter;
/// theta is filtered unwrapped and re-normalized on output.
class HumanStateFilter {
public:
    HumanStateFilter(double cutoff_hz, double sample_rate_hz);

    HumanState step(const HumanState& raw);
    void reset() { primed_ = false; }
    bool primed() const { return primed_; }
    double sample_period() const { return period_; }

private:
    double period_;
    Biquad fx_;
    Biquad fy_;
    Biquad ftheta_;
    bool primed_ = false;
    double unwrapped_theta_ = 0.0;
};

}  // namespace canefollow
