#pragma once

#include "canefollow/human_state.hpp"
#include "canefollow/motion_control.hpp"
#include "canefollow/occlusion.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace canefollow {

enum class LegStatus { Detected, ConditionI, ConditionII, ConditionIII, Lost };

std::string_view to_string(LegStatus s);

struct TrackerParams {
    GateRegion gate;
    EstimatorParams estimator;
    std::size_t window_capacity = 10;
    double filter_cutoff_hz = 5.0;
    double sample_rate_hz = 120.0;
};

struct TrackerOutput {
    std::optional<LegState> left;
    std::optional<LegState> right;
    LegStatus left_status = LegStatus::Lost;
    LegStatus right_status = LegStatus::Lost;
    std::optional<HumanState> raw;       // leg midpoint before smoothing
    std::optional<HumanState> filtered;
};

/// Per-tick perception: fuse each leg, bridge occlusions from the sliding
/// windows, and smooth the leg midpoint. Only fused states enter the windows.
class HumanTracker {
public:
    HumanTracker(const RigConfig& rig, const TrackerParams& params);

    TrackerOutput update(std::span<const TagDetection> dets, double now);

    const LegWindow& window(Side s) const { return s == Side::Left ? left_window_ : right_window_; }

private:
    RigConfig rig_;
    TrackerParams params_;
    LegWindow left_window_;
    LegWindow right_window_;
    HumanStateFilter filter_;
};

/// PID on the smoothed human state, Mecanum mapping, and a decaying stop while
/// the human is unavailable.
class FollowController {
public:
    FollowController(const ControllerParams& control, const KinematicsParams& kinematics);

    struct Command {
        BodyTwist twist;
        WheelSpeeds wheels;
    };

    Command step(const std::optional<HumanState>& human, double dt);

    const BodyTwist& last_twist() const { return last_; }

private:
    ControllerParams control_;
    KinematicsParams kinematics_;
    PidController pid_;
    BodyTwist last_;
    bool tracking_ = false;
};

}  // namespace canefollow
