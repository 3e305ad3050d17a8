#pragma once

#include "canefollow/fusion.hpp"

#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace canefollow {

class OrderingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Occlusion regimes for an undetected leg.
///  I   - absent longer than T1: the user has likely stopped; mirror the other leg.
///  II  - recent and densely spaced history: extrapolate linearly.
///  III - recent but sparse history: hold the last detection.
enum class Condition { I, II, III, Insufficient };

std::string_view to_string(Condition c);

struct EstimatorParams {
    double t1 = 0.100;  // s
    double t2 = 0.060;  // s
    double d = 0.20;    // m, lateral leg spacing while standing

    void validate() const;
};

/// Fixed-capacity history of fused (never estimated) states of one leg.
class LegWindow {
public:
    explicit LegWindow(std::size_t capacity = 10);

    /// Throws OrderingError unless s is strictly newer than the newest entry.
    void observe(const LegState& s);

    std::size_t size() const { return states_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return states_.empty(); }

    /// Most recent entry (t_{k-1}); precondition: size() >= 1.
    const LegState& last() const { return states_.back(); }
    /// Entry before the most recent (t_{k-2}); precondition: size() >= 2.
    const LegState& previous() const { return states_[states_.size() - 2]; }

    auto begin() const { return states_.begin(); }
    auto end() const { return states_.end(); }

private:
    std::size_t capacity_;
    std::deque<LegState> states_;
};

Condition classify(const LegWindow& win, const EstimatorParams& params, double now);

/// Estimated state of the undetected leg at `now`, or nullopt when the window
/// is too short or Condition I has no other leg to mirror.
std::optional<LegState> estimate(const LegWindow& win, const std::optional<LegState>& other_leg,
                                 const EstimatorParams& params, double now);

}  // namespace canefollow
