#include "canefollow/tracker.hpp"

namespace canefollow {

namespace {

LegStatus status_of(Condition c) {
    switch (c) {
        case Condition::I: return LegStatus::ConditionI;
        case Condition::II: return LegStatus::ConditionII;
        case Condition::III: return LegStatus::ConditionIII;
        case Condition::Insufficient: return LegStatus::Lost;
    }
    return LegStatus::Lost;
}

Provenance provenance_of(LegStatus s) {
    switch (s) {
        case LegStatus::Detected: return Provenance::Detected;
        case LegStatus::Lost: return Provenance::Absent;
        default: return Provenance::Estimated;
    }
}

}  // namespace

std::string_view to_string(LegStatus s) {
    switch (s) {
        case LegStatus::Detected: return "D";
        case LegStatus::ConditionI: return "I";
        case LegStatus::ConditionII: return "II";
        case LegStatus::ConditionIII: return "III";
        case LegStatus::Lost: return "-";
    }
    return "?";
}

HumanTracker::HumanTracker(const RigConfig& rig, const TrackerParams& params)
    : rig_(rig),
      params_(params),
      left_window_(params.window_capacity),
      right_window_(params.window_capacity),
      filter_(params.filter_cutoff_hz, params.sample_rate_hz) {
    rig_.validate();
    params_.gate.validate();
    params_.estimator.validate();
}

TrackerOutput HumanTracker::update(std::span<const TagDetection> dets, double now) {
    TrackerOutput out;
    const auto fused_left = fuse_leg(rig_, params_.gate, dets, Side::Left, now);
    const auto fused_right = fuse_leg(rig_, params_.gate, dets, Side::Right, now);

    auto resolve = [&](Side side, const std::optional<LegState>& fused, const std::optional<LegState>& other,
                       LegWindow& window, std::optional<LegState>& leg, LegStatus& status) {
        if (fused) {
            window.observe(*fused);
            leg = fused;
            status = LegStatus::Detected;
            return;
        }
        status = status_of(classify(window, params_.estimator, now));
        leg = estimate(window, other, params_.estimator, now);
        if (!leg) {
            status = LegStatus::Lost;
        } else {
            leg->side = side;
        }
    };
    resolve(Side::Left, fused_left, fused_right, left_window_, out.left, out.left_status);
    resolve(Side::Right, fused_right, fused_left, right_window_, out.right, out.right_status);

    if (out.left && out.right) {
        HumanState h = midpoint(*out.left, *out.right);
        h.timestamp = now;
        h.left = provenance_of(out.left_status);
        h.right = provenance_of(out.right_status);
        out.raw = h;
        out.filtered = filter_.step(h);
    } else {
        filter_.reset();
    }
    return out;
}

FollowController::FollowController(const ControllerParams& control, const KinematicsParams& kinematics)
    : control_(control), kinematics_(kinematics), pid_(control) {
    kinematics_.validate();
}

FollowController::Command FollowController::step(const std::optional<HumanState>& human, double dt) {
    if (human) {
        if (!tracking_) {
            pid_.reset_derivative();
        }
        tracking_ = true;
        last_ = saturate(pid_.step(pose_error(*human, control_), dt), control_.v_max, control_.w_max);
    } else {
        tracking_ = false;
        last_ = decay_toward_stop(last_, dt, control_.stop_time_constant);
    }
    return {last_, inverse_kinematics(last_, kinematics_)};
}

}  // namespace canefollow
