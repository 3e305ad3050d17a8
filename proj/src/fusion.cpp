#include "canefollow/fusion.hpp"

#include <array>
#include <cmath>
#include <tuple>

namespace canefollow {

namespace {

// Order-independent tie-break for duplicate pairs with equal timestamps.
bool precedes(const TagDetection& a, const TagDetection& b) {
    const auto& p = a.pose.trans;
    const auto& q = b.pose.trans;
    return std::tie(p.x(), p.y(), p.z()) < std::tie(q.x(), q.y(), q.z());
}

}  // namespace

void GateRegion::validate() const {
    if (!(x_min < x_max) || !(y_min < y_max)) {
        throw ConfigError("gate region must satisfy x_min < x_max and y_min < y_max");
    }
}

bool gate(const GateRegion& region, const Pose3& body_pose) {
    const double x = body_pose.trans.x();
    const double y = body_pose.trans.y();
    return x >= region.x_min && x <= region.x_max && y >= region.y_min && y <= region.y_max;
}

double circular_mean(std::span<const double> angles) {
    double s = 0.0;
    double c = 0.0;
    for (double a : angles) {
        s += std::sin(a);
        c += std::cos(a);
    }
    if (angles.empty()) {
        return 0.0;
    }
    return wrap_angle(std::atan2(s, c));
}

Pose3 leg_pose_from_detection(const RigConfig& cfg, const TagDetection& det) {
    return compose(tag_to_body(cfg, det), leg_in_tag_frame(cfg, det.tag_id));
}

std::optional<LegState> fuse_leg(const RigConfig& cfg, const GateRegion& region,
                                 std::span<const TagDetection> dets, Side side, double now) {
    // Latest detection per (camera, tag) slot.
    std::array<const TagDetection*, kCameraCount * kTagCount> slots{};
    for (const auto& det : dets) {
        if (det.tag_id < 0 || det.tag_id >= kTagCount) {
            throw ConfigError("unknown tag id " + std::to_string(det.tag_id));
        }
        if (det.camera_id < 0 || det.camera_id >= kCameraCount) {
            throw ConfigError("camera id out of range: " + std::to_string(det.camera_id));
        }
        if (cfg.tag_side[det.tag_id] != side) {
            continue;
        }
        auto& slot = slots[det.camera_id * kTagCount + det.tag_id];
        if (slot == nullptr || det.timestamp > slot->timestamp ||
            (det.timestamp == slot->timestamp && precedes(det, *slot))) {
            slot = &det;
        }
    }

    double sum_x = 0.0;
    double sum_y = 0.0;
    double sum_sin = 0.0;
    double sum_cos = 0.0;
    int count = 0;
    for (const TagDetection* det : slots) {
        if (det == nullptr || !gate(region, tag_to_body(cfg, *det))) {
            continue;
        }
        const Pose3 leg = leg_pose_from_detection(cfg, *det);
        double heading = 0.0;
        try {
            heading = yaw_of(leg.rot);
        } catch (const DegenerateOrientationError&) {
            continue;
        }
        sum_x += leg.trans.x();
        sum_y += leg.trans.y();
        sum_sin += std::sin(heading);
        sum_cos += std::cos(heading);
        ++count;
    }
    if (count == 0) {
        return std::nullopt;
    }
    const double n = static_cast<double>(count);
    return LegState{sum_x / n, sum_y / n, wrap_angle(std::atan2(sum_sin, sum_cos)), side, now};
}

}  // namespace canefollow
