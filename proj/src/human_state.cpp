#include "canefollow/human_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace canefollow {

HumanState midpoint(const LegState& left, const LegState& right) {
    HumanState h;
    h.x = 0.5 * (left.x + right.x);
    h.y = 0.5 * (left.y + right.y);
    const std::array<double, 2> headings{left.theta, right.theta};
    h.theta = circular_mean(headings);
    h.timestamp = std::max(left.timestamp, right.timestamp);
    return h;
}

double BiquadCoefficients::dc_gain() const {
    return (b[0] + b[1] + b[2]) / (a[0] + a[1] + a[2]);
}

double BiquadCoefficients::pole_radius() const {
    // z^2 + a1 z + a2 = 0
    const std::complex<double> disc = std::sqrt(std::complex<double>(a[1] * a[1] - 4.0 * a[2]));
    const std::complex<double> p1 = (-a[1] + disc) / 2.0;
    const std::complex<double> p2 = (-a[1] - disc) / 2.0;
    return std::max(std::abs(p1), std::abs(p2));
}

BiquadCoefficients butterworth_lowpass(double cutoff_hz, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * sample_rate_hz)) {
        throw ConfigError("butterworth: require 0 < cutoff < sample_rate / 2");
    }
    const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
    const double k2 = k * k;
    const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * k + k2);
    BiquadCoefficients c;
    c.b = {k2 * norm, 2.0 * k2 * norm, k2 * norm};
    c.a = {1.0, 2.0 * (k2 - 1.0) * norm, (1.0 - std::numbers::sqrt2 * k + k2) * norm};
    if (!(c.pole_radius() < 1.0)) {
        throw ConfigError("butterworth: designed filter is unstable");
    }
    return c;
}

void Biquad::prime(double value) {
    x_ = {value, value};
    y_ = {value, value};
}

double Biquad::step(double input) {
    const double out = c_.b[0] * input + c_.b[1] * x_[0] + c_.b[2] * x_[1]
                     - c_.a[1] * y_[0] - c_.a[2] * y_[1];
    x_ = {input, x_[0]};
    y_ = {out, y_[0]};
    return out;
}

HumanStateFilter::HumanStateFilter(double cutoff_hz, double sample_rate_hz)
    : period_(1.0 / sample_rate_hz),
      fx_(butterworth_lowpass(cutoff_hz, sample_rate_hz)),
      fy_(butterworth_lowpass(cutoff_hz, sample_rate_hz)),
      ftheta_(butterworth_lowpass(cutoff_hz, sample_rate_hz)) {}

HumanState HumanStateFilter::step(const HumanState& raw) {
    if (!primed_) {
        fx_.prime(raw.x);
        fy_.prime(raw.y);
        ftheta_.prime(raw.theta);
        unwrapped_theta_ = raw.theta;
        primed_ = true;
    } else {
        unwrapped_theta_ += wrap_angle(raw.theta - unwrapped_theta_);
    }
    HumanState out = raw;
    out.x = fx_.step(raw.x);
    out.y = fy_.step(raw.y);
    out.theta = wrap_angle(ftheta_.step(unwrapped_theta_));
    return out;
}

}  // namespace canefollow
