#include "canefollow/gait_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace canefollow {

Path Path::straight() {
    return Path{};
}

Path Path::arc(double radius, double angle) {
    if (!(radius > 0.0) || !std::isfinite(angle)) {
        throw ConfigError("arc path: radius must be > 0 and angle finite");
    }
    Path p;
    p.kind_ = Kind::Arc;
    p.radius_ = radius;
    p.angle_ = angle;
    return p;
}

Path Path::waypoints(std::vector<Eigen::Vector2d> points) {
    if (points.size() < 2) {
        throw ConfigError("waypoint path needs at least 2 points");
    }
    Path p;
    p.kind_ = Kind::Waypoints;
    p.cumulative_.push_back(0.0);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double len = (points[i] - points[i - 1]).norm();
        if (!(len > 0.0)) {
            throw ConfigError("waypoint path has a zero-length segment");
        }
        p.cumulative_.push_back(p.cumulative_.back() + len);
    }
    p.points_ = std::move(points);
    return p;
}

Eigen::Vector2d Path::point(double s) const {
    switch (kind_) {
        case Kind::Straight:
            return {s, 0.0};
        case Kind::Arc: {
            if (s <= 0.0) {
                return {s, 0.0};
            }
            const double dir = angle_ >= 0.0 ? 1.0 : -1.0;
            const double arc_len = std::abs(angle_) * radius_;
            const double along = std::min(s, arc_len);
            const double phi = along / radius_;
            Eigen::Vector2d p(radius_ * std::sin(phi), dir * radius_ * (1.0 - std::cos(phi)));
            if (s > arc_len) {
                const double h = dir * std::abs(angle_);
                p += (s - arc_len) * Eigen::Vector2d(std::cos(h), std::sin(h));
            }
            return p;
        }
        case Kind::Waypoints: {
            const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
            std::size_t seg = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
            seg = std::min(seg, points_.size() - 2);
            const Eigen::Vector2d dir = (points_[seg + 1] - points_[seg]).normalized();
            return points_[seg] + (s - cumulative_[seg]) * dir;
        }
    }
    return {0.0, 0.0};
}

double Path::heading(double s) const {
    switch (kind_) {
        case Kind::Straight:
            return 0.0;
        case Kind::Arc: {
            const double dir = angle_ >= 0.0 ? 1.0 : -1.0;
            const double along = std::clamp(s, 0.0, std::abs(angle_) * radius_);
            return wrap_angle(dir * along / radius_);
        }
        case Kind::Waypoints: {
            const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
            std::size_t seg = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
            seg = std::min(seg, points_.size() - 2);
            const Eigen::Vector2d d = points_[seg + 1] - points_[seg];
            return std::atan2(d.y(), d.x());
        }
    }
    return 0.0;
}

void GaitParams::validate() const {
    if (!(speed >= 0.0)) throw ConfigError("gait: speed must be >= 0");
    if (!(step_length > 0.0)) throw ConfigError("gait: step_length must be > 0");
    if (!(lateral_separation >= 0.0)) throw ConfigError("gait: lateral_separation must be >= 0");
    if (!(duty_factor >= 0.5 && duty_factor < 1.0)) throw ConfigError("gait: duty_factor must be in [0.5, 1)");
    if (!(start_ramp >= 0.0)) throw ConfigError("gait: start_ramp must be >= 0");
    if (!(stance_roll >= 0.0 && stance_roll < 1.0)) throw ConfigError("gait: stance_roll must be in [0, 1)");
}

double GaitParams::centerline_distance(double t) const {
    if (start_ramp > 0.0 && t < start_ramp) {
        return 0.5 * speed * t * t / start_ramp;
    }
    return speed * (t - 0.5 * start_ramp);
}

double GaitParams::cycle_time() const {
    return 2.0 * step_length / speed;
}

double GaitParams::swing_time() const {
    return (1.0 - duty_factor) * cycle_time();
}

double leg_path_offset(const GaitParams& gait, double t, Side side) {
    if (gait.speed == 0.0) {
        return 0.0;
    }
    const double stride = 2.0 * gait.step_length;
    const double swing = 1.0 - gait.duty_factor;
    // Fractions of the stride covered during stance and swing.
    const double stance_share = gait.stance_roll * gait.duty_factor;
    const double swing_share = 1.0 - stance_share;
    const double u = gait.centerline_distance(t) / stride + (side == Side::Left ? 0.0 : 0.5);
    const double phase = u - std::floor(u);
    const double progress =
        phase < swing ? swing_share * 0.5 * (1.0 - std::cos(std::numbers::pi * phase / swing))
                      : swing_share + stance_share * (phase - swing) / gait.duty_factor;
    const double mean_progress = swing_share * (1.0 - 0.5 * swing) + 0.5 * stance_share * gait.duty_factor;
    return stride * (progress - phase - (mean_progress - 0.5));
}

PlanarPose leg_world_pose(const GaitParams& gait, double t, Side side) {
    const double s = gait.centerline_distance(t) + leg_path_offset(gait, t, side);
    const double heading = gait.path.heading(s);
    const double lateral = (side == Side::Left ? 0.5 : -0.5) * gait.lateral_separation;
    const Eigen::Vector2d p = gait.path.point(s) + lateral * Eigen::Vector2d(-std::sin(heading), std::cos(heading));
    return {p.x(), p.y(), heading};
}

PlanarPose human_world_pose(const GaitParams& gait, double t) {
    const PlanarPose l = leg_world_pose(gait, t, Side::Left);
    const PlanarPose r = leg_world_pose(gait, t, Side::Right);
    const std::array<double, 2> headings{l.yaw, r.yaw};
    return {0.5 * (l.x + r.x), 0.5 * (l.y + r.y), circular_mean(headings)};
}

void SensorNoise::validate() const {
    if (!(position_sigma >= 0.0) || !(heading_sigma >= 0.0)) {
        throw ConfigError("noise: sigmas must be >= 0");
    }
    if (!(dropout >= 0.0 && dropout <= 1.0)) {
        throw ConfigError("noise: dropout must be in [0, 1]");
    }
}

void PlantParams::validate() const {
    if (!(tau > 0.0)) throw ConfigError("plant: tau must be > 0");
    if (!(tick_rate > 0.0)) throw ConfigError("plant: tick_rate must be > 0");
}

World World::at_target(const GaitParams& gait, const ControllerParams& target, std::uint64_t seed,
                       const PlanarPose& offset) {
    World w;
    w.gait = gait;
    w.rng.seed(seed);
    const PlanarPose h = human_world_pose(gait, 0.0);
    // Human at (target + offset) in the body frame.
    const double yaw = wrap_angle(h.yaw - target.target_theta - offset.yaw);
    const double bx = target.target_x + offset.x;
    const double by = target.target_y + offset.y;
    w.robot = {h.x - (std::cos(yaw) * bx - std::sin(yaw) * by),
               h.y - (std::sin(yaw) * bx + std::cos(yaw) * by), yaw};
    return w;
}

void world_step(World& world, const BodyTwist& commanded, const PlantParams& plant, double dt) {
    const double k = dt / plant.tau;
    BodyTwist& v = world.robot_velocity;
    v.vx += k * (commanded.vx - v.vx);
    v.vy += k * (commanded.vy - v.vy);
    v.wz += k * (commanded.wz - v.wz);

    PlanarPose& r = world.robot;
    const double mid_yaw = r.yaw + 0.5 * v.wz * dt;
    r.x += (std::cos(mid_yaw) * v.vx - std::sin(mid_yaw) * v.vy) * dt;
    r.y += (std::sin(mid_yaw) * v.vx + std::cos(mid_yaw) * v.vy) * dt;
    r.yaw = wrap_angle(r.yaw + v.wz * dt);
    world.time += dt;
}

PlanarPose to_body(const PlanarPose& robot, const PlanarPose& p) {
    const double c = std::cos(robot.yaw);
    const double s = std::sin(robot.yaw);
    const double dx = p.x - robot.x;
    const double dy = p.y - robot.y;
    return {c * dx + s * dy, -s * dx + c * dy, wrap_angle(p.yaw - robot.yaw)};
}

bool segment_hits_disk(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& center,
                       double radius) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((center - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (a + t * ab - center).norm() < radius;
}

std::vector<TagDetection> render_detections(World& world, const RigConfig& rig, const SensorNoise& noise,
                                            const VisibilityParams& vis,
                                            const std::vector<ForcedOcclusion>& forced) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::array<Pose3, 2> leg_body;
    for (Side side : {Side::Left, Side::Right}) {
        const PlanarPose p = to_body(world.robot, leg_world_pose(world.gait, world.time, side));
        leg_body[static_cast<int>(side)] = Pose3::planar(p.x, p.y, p.yaw);
    }

    std::vector<TagDetection> out;
    for (int cam = 0; cam < kCameraCount; ++cam) {
        const Pose3 extrinsic = rig.cameras[cam].extrinsic();
        const Pose3 body_to_cam = inverse(extrinsic);
        for (int tag = 0; tag < kTagCount; ++tag) {
            // Fixed draw order keeps streams aligned across visibility changes.
            const double u = coin(world.rng);
            const Eigen::Vector3d dp(gauss(world.rng), gauss(world.rng), gauss(world.rng));
            const double dyaw = gauss(world.rng);

            const Side side = rig.tag_side[tag];
            const Pose3 tag_body = compose(leg_body[static_cast<int>(side)], inverse(leg_in_tag_frame(rig, tag)));
            const Pose3 tag_cam = compose(body_to_cam, tag_body);

            const double range = tag_cam.trans.norm();
            if (!(range > 0.0) || tag_cam.trans.x() <= 0.0 ||
                std::acos(std::clamp(tag_cam.trans.x() / range, -1.0, 1.0)) > vis.fov_half_angle) {
                continue;
            }
            if (vis.leg_occlusion) {
                const Pose3& blocker = leg_body[static_cast<int>(other_side(side))];
                if (segment_hits_disk(extrinsic.trans.head<2>(), tag_body.trans.head<2>(),
                                      blocker.trans.head<2>(), rig.leg_radius)) {
                    continue;
                }
            }
            if (std::any_of(forced.begin(), forced.end(),
                            [&](const ForcedOcclusion& f) { return f.active(side, world.time); })) {
                continue;
            }
            if (u < noise.dropout) {
                continue;
            }
            Pose3 noisy = tag_cam;
            noisy.trans += noise.position_sigma * dp;
            if (noise.heading_sigma > 0.0) {
                noisy.rot = Rot3::rot_z(noise.heading_sigma * dyaw) * noisy.rot;
            }
            out.push_back({cam, tag, noisy, world.time});
        }
    }
    return out;
}

PoseError ground_truth_error(const World& world, const ControllerParams& target) {
    const PlanarPose h = to_body(world.robot, human_world_pose(world.gait, world.time));
    return {h.x - target.target_x, h.y - target.target_y, wrap_angle(h.yaw - target.target_theta)};
}

}  // namespace canefollow
