#pragma once

#include "canefollow/tag_rig.hpp"

#include <optional>
#include <span>
#include <vector>

namespace canefollow {

/// Planar leg state in the robot body frame.
struct LegState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // (-pi, pi]
    Side side = Side::Left;
    double timestamp = 0.0;
};

/// Axis-aligned acceptance box for tag positions in the body frame (closed).
struct GateRegion {
    double x_min = 0.10;
    double x_max = 1.20;
    double y_min = -0.80;
    double y_max = 0.80;

    void validate() const;
};

/// True iff the pose's (x, y) lies inside the region; z is ignored.
bool gate(const GateRegion& region, const Pose3& body_pose);

/// atan2 of the mean sine and cosine. Empty input yields 0.
double circular_mean(std::span<const double> angles);

/// Leg pose in the body frame implied by a single detection.
Pose3 leg_pose_from_detection(const RigConfig& cfg, const TagDetection& det);

/// Averages every gated observation of `side` taken this tick into one leg state.
/// Duplicate (camera, tag) pairs keep the latest timestamp. Returns nullopt when
/// nothing survives the gate.
std::optional<LegState> fuse_leg(const RigConfig& cfg, const GateRegion& region,
                                 std::span<const TagDetection> dets, Side side, double now);

}  // namespace canefollow
