#include "canefollow/occlusion.hpp"

#include <string>

namespace canefollow {

std::string_view to_string(Condition c) {
    switch (c) {
        case Condition::I: return "I";
        case Condition::II: return "II";
        case Condition::III: return "III";
        case Condition::Insufficient: return "insufficient";
    }
    return "?";
}

void EstimatorParams::validate() const {
    if (!(t2 > 0.0) || !(t1 > t2)) {
        throw ConfigError("estimator: require T1 > T2 > 0");
    }
    if (!(d > 0.0)) {
        throw ConfigError("estimator: require d > 0");
    }
}

LegWindow::LegWindow(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 2) {
        throw ConfigError("leg window capacity must be >= 2");
    }
}

void LegWindow::observe(const LegState& s) {
    if (!states_.empty() && !(s.timestamp > states_.back().timestamp)) {
        throw OrderingError("leg window: timestamp " + std::to_string(s.timestamp) +
                            " is not newer than " + std::to_string(states_.back().timestamp));
    }
    if (states_.size() == capacity_) {
        states_.pop_front();
    }
    states_.push_back(s);
}

Condition classify(const LegWindow& win, const EstimatorParams& params, double now) {
    if (win.size() < 2) {
        return Condition::Insufficient;
    }
    const double dt_k = now - win.last().timestamp;
    const double dt_km1 = win.last().timestamp - win.previous().timestamp;
    if (dt_k > params.t1) {
        return Condition::I;
    }
    return dt_km1 <= params.t2 ? Condition::II : Condition::III;
}

std::optional<LegState> estimate(const LegWindow& win, const std::optional<LegState>& other_leg,
                                 const EstimatorParams& params, double now) {
    switch (classify(win, params, now)) {
        case Condition::Insufficient:
            return std::nullopt;
        case Condition::I: {
            if (!other_leg) {
                return std::nullopt;
            }
            // Left leg sits at +y of the right leg in the body frame.
            const Side side = other_side(other_leg->side);
            const double offset = side == Side::Left ? params.d : -params.d;
            return LegState{other_leg->x, other_leg->y + offset, other_leg->theta, side, now};
        }
        case Condition::II: {
            const LegState& a = win.previous();
            const LegState& b = win.last();
            const double span = b.timestamp - a.timestamp;
            const double ahead = now - b.timestamp;
            const double rate = ahead / span;
            return LegState{b.x + (b.x - a.x) * rate,
                            b.y + (b.y - a.y) * rate,
                            wrap_angle(b.theta + wrap_angle(b.theta - a.theta) * rate),
                            b.side, now};
        }
        case Condition::III: {
            LegState held = win.last();
            held.timestamp = now;
            return held;
        }
    }
    return std::nullopt;
}

}  // namespace canefollow
