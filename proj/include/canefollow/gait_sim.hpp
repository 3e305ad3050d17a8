#pragma once

#include "canefollow/motion_control.hpp"
#include "canefollow/tag_rig.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace canefollow {

struct PlanarPose {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;
};

/// Arc-length parameterized walking path starting at the origin heading +x.
/// Queries before the start or past the end extend the first/last tangent.
class Path {
public:
    static Path straight();
    /// Turns through `angle` (rad, positive = left) at `radius`, then continues straight.
    static Path arc(double radius, double angle);
    /// Polyline through the given points; the first point is the start.
    static Path waypoints(std::vector<Eigen::Vector2d> points);

    Eigen::Vector2d point(double s) const;
    double heading(double s) const;

private:
    enum class Kind { Straight, Arc, Waypoints };
    Kind kind_ = Kind::Straight;
    double radius_ = 0.0;
    double angle_ = 0.0;
    std::vector<Eigen::Vector2d> points_;
    std::vector<double> cumulative_;  // arc length at each waypoint
};

struct GaitParams {
    double speed = 1.0;               // m/s
    double step_length = 0.60;        // m
    double lateral_separation = 0.20; // m
    double duty_factor = 0.6;
    double start_ramp = 0.0;          // s, linear speed ramp from standstill
    double stance_roll = 0.5;         // stance advance of the tag-height leg point, fraction of walking speed
    Path path = Path::straight();

    void validate() const;
    /// Full gait cycle (one stride per leg): 2 * step_length / speed.
    double cycle_time() const;
    double swing_time() const;
    /// Arc length covered by the walking centerline at time t.
    double centerline_distance(double t) const;
};

/// Along-path offset of one leg from the walking centerline at time t.
/// The gait phase advances with centerline distance. During stance the foot is
/// pinned and the tracked leg point (at tag height) advances at `stance_roll`
/// times the walking speed as the shank rotates over the foot; swing covers the
/// rest of the stride (two step lengths) with a raised-cosine profile.
/// Averages to zero over a cycle.
double leg_path_offset(const GaitParams& gait, double t, Side side);

/// True leg pose in the world frame.
PlanarPose leg_world_pose(const GaitParams& gait, double t, Side side);

/// True point-foot human pose (leg midpoint) in the world frame.
PlanarPose human_world_pose(const GaitParams& gait, double t);

struct SensorNoise {
    double position_sigma = 0.006;  // m
    double heading_sigma = 0.02;    // rad
    double dropout = 0.05;          // per (camera, tag) per tick
    std::uint64_t seed = 1;

    static SensorNoise flat() { return {}; }
    static SensorNoise rough() { return {0.006, 0.02, 0.15, 1}; }
    static SensorNoise none() { return {0.0, 0.0, 0.0, 1}; }

    void validate() const;
};

struct VisibilityParams {
    double fov_half_angle = 40.0 * 3.14159265358979323846 / 180.0;  // rad
    bool leg_occlusion = true;
};

/// Interval during which every tag of one leg is suppressed.
struct ForcedOcclusion {
    Side side = Side::Left;
    double start = 0.0;
    double duration = 0.0;

    bool active(Side s, double t) const { return s == side && t >= start && t < start + duration; }
};

struct PlantParams {
    double tau = 0.05;          // s, per-axis first-order lag
    double tick_rate = 120.0;   // Hz

    void validate() const;
    double dt() const { return 1.0 / tick_rate; }
};

struct World {
    double time = 0.0;
    PlanarPose robot;
    BodyTwist robot_velocity;  // body frame, after the actuator lag
    GaitParams gait;
    std::mt19937_64 rng;

    /// Robot placed so the human sits at the controller target (plus offset).
    static World at_target(const GaitParams& gait, const ControllerParams& target, std::uint64_t seed,
                           const PlanarPose& offset = {});
};

/// Advances the plant and the clock by dt.
void world_step(World& world, const BodyTwist& commanded, const PlantParams& plant, double dt);

/// Pose of `p` (world) expressed in the robot body frame.
PlanarPose to_body(const PlanarPose& robot, const PlanarPose& p);

/// Synthesized detections for the current world time. Every (camera, tag) pair
/// consumes the same random draws whether or not it is visible.
std::vector<TagDetection> render_detections(World& world, const RigConfig& rig, const SensorNoise& noise,
                                            const VisibilityParams& vis = {},
                                            const std::vector<ForcedOcclusion>& forced = {});

/// True if the segment from `a` to `b` passes within `radius` of `center` (planar).
bool segment_hits_disk(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& center,
                       double radius);

/// (emx, emy, emtheta): true human pose in the true body frame minus the target.
PoseError ground_truth_error(const World& world, const ControllerParams& target);

}  // namespace canefollow
