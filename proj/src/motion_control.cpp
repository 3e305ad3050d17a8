#include "canefollow/motion_control.hpp"

#include <algorithm>
#include <cmath>

namespace canefollow {

namespace {

bool valid_gains(const PidGains& g) {
    return g.kp >= 0.0 && g.ki >= 0.0 && g.kd >= 0.0;
}

}  // namespace

void ControllerParams::validate() const {
    if (!valid_gains(x) || !valid_gains(y) || !valid_gains(theta)) {
        throw ConfigError("controller: gains must be >= 0");
    }
    if (!(v_max > 0.0) || !(w_max > 0.0)) {
        throw ConfigError("controller: v_max and w_max must be > 0");
    }
    if (!(integral_clamp >= 0.0) || !(stop_time_constant > 0.0)) {
        throw ConfigError("controller: integral_clamp >= 0 and stop_time_constant > 0 required");
    }
}

void KinematicsParams::validate() const {
    if (!(wheel_radius > 0.0) || !(half_length > 0.0) || !(half_width > 0.0)) {
        throw ConfigError("kinematics: r, a, b must be > 0");
    }
}

PoseError pose_error(const HumanState& h, const ControllerParams& p) {
    return {h.x - p.target_x, h.y - p.target_y, wrap_angle(h.theta - p.target_theta)};
}

BodyTwist saturate(const BodyTwist& t, double v_max, double w_max) {
    return {std::clamp(t.vx, -v_max, v_max), std::clamp(t.vy, -v_max, v_max),
            std::clamp(t.wz, -w_max, w_max)};
}

PidController::PidController(const ControllerParams& params) : params_(params) {
    params_.validate();
}

void PidController::reset() {
    integral_ = {};
    previous_ = {};
    has_previous_ = false;
}

BodyTwist PidController::step(const PoseError& err, double dt) {
    PoseError rate;
    if (has_previous_) {
        rate = {(err.ex - previous_.ex) / dt, (err.ey - previous_.ey) / dt,
                wrap_angle(err.etheta - previous_.etheta) / dt};
    }
    previous_ = err;
    has_previous_ = true;

    const double clamp = params_.integral_clamp;
    auto axis = [&](const PidGains& g, double e, double de, double& integral, double limit) {
        const double candidate = std::clamp(integral + e * dt, -clamp, clamp);
        const double u = g.kp * e + g.ki * candidate + g.kd * de;
        if (std::abs(u) > limit) {
            return std::clamp(u, -limit, limit);
        }
        integral = candidate;
        return u;
    };

    return {axis(params_.x, err.ex, rate.ex, integral_.ex, params_.v_max),
            axis(params_.y, err.ey, rate.ey, integral_.ey, params_.v_max),
            axis(params_.theta, err.etheta, rate.etheta, integral_.etheta, params_.w_max)};
}

WheelSpeeds inverse_kinematics(const BodyTwist& t, const KinematicsParams& k) {
    const double ab = k.half_length + k.half_width;
    const double inv_r = 1.0 / k.wheel_radius;
    return {{inv_r * (t.vx - t.vy + ab * t.wz),
             inv_r * (t.vx + t.vy - ab * t.wz),
             inv_r * (t.vx - t.vy - ab * t.wz),
             inv_r * (t.vx + t.vy + ab * t.wz)}};
}

BodyTwist forward_kinematics(const WheelSpeeds& w, const KinematicsParams& k) {
    // Columns of the inverse-kinematics matrix are mutually orthogonal, so the
    // pseudo-inverse is the transpose scaled column by column.
    const double ab = k.half_length + k.half_width;
    const double q = k.wheel_radius / 4.0;
    return {q * (w[0] + w[1] + w[2] + w[3]),
            q * (-w[0] + w[1] - w[2] + w[3]),
            q * (w[0] - w[1] - w[2] + w[3]) / ab};
}

BodyTwist decay_toward_stop(const BodyTwist& t, double dt, double time_constant) {
    return std::exp(-dt / time_constant) * t;
}

}  // namespace canefollow
