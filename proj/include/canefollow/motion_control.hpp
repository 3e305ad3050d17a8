#pragma once

#include "canefollow/human_state.hpp"

#include <array>

namespace canefollow {

struct BodyTwist {
    double vx = 0.0;  // m/s
    double vy = 0.0;  // m/s
    double wz = 0.0;  // rad/s

    friend BodyTwist operator+(const BodyTwist& a, const BodyTwist& b) {
        return {a.vx + b.vx, a.vy + b.vy, a.wz + b.wz};
    }
    friend BodyTwist operator*(double s, const BodyTwist& t) { return {s * t.vx, s * t.vy, s * t.wz}; }
};

/// Motor angular velocities, rad/s, in the wheel order of the inverse kinematics.
struct WheelSpeeds {
    std::array<double, 4> w{};

    double& operator[](std::size_t i) { return w[i]; }
    double operator[](std::size_t i) const { return w[i]; }
};

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

struct ControllerParams {
    // Desired human pose in the body frame.
    double target_x = 0.350;
    double target_y = 0.450;
    double target_theta = 0.0;

    PidGains x{4.0, 8.0, 2.0};
    PidGains y{4.0, 8.0, 2.0};
    PidGains theta{4.0, 8.0, 1.0};

    double v_max = 1.6;        // m/s
    double w_max = 1.5;        // rad/s
    double integral_clamp = 5.0;
    double stop_time_constant = 0.3;  // s, command decay while the human is lost

    void validate() const;
};

struct KinematicsParams {
    double wheel_radius = 0.05;  // r
    double half_length = 0.21;   // a
    double half_width = 0.145;   // b

    void validate() const;
};

struct PoseError {
    double ex = 0.0;
    double ey = 0.0;
    double etheta = 0.0;
};

PoseError pose_error(const HumanState& h, const ControllerParams& p);

BodyTwist saturate(const BodyTwist& t, double v_max, double w_max);

/// Per-axis PID on the pose error. Derivative is a first difference of the
/// error; the integral is frozen on ticks where the output saturates.
class PidController {
public:
    explicit PidController(const ControllerParams& params);

    BodyTwist step(const PoseError& err, double dt);
    /// Clears derivative memory (keeps the integral), e.g. after the human is reacquired.
    void reset_derivative() { has_previous_ = false; }
    void reset();

    const PoseError& integral() const { return integral_; }

private:
    ControllerParams params_;
    PoseError integral_;
    PoseError previous_;
    bool has_previous_ = false;
};

/// Wheel speeds for a body twist (four-wheel Mecanum layout).
WheelSpeeds inverse_kinematics(const BodyTwist& t, const KinematicsParams& k);

/// Least-squares body twist for the given wheel speeds.
BodyTwist forward_kinematics(const WheelSpeeds& w, const KinematicsParams& k);

/// Exponential decay of a command toward zero over one tick.
BodyTwist decay_toward_stop(const BodyTwist& t, double dt, double time_constant);

}  // namespace canefollow
