#include "canefollow/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>

namespace canefollow {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

void read_gains(const json& j, const char* key, PidGains& g) {
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::array<double, 3>>();
    g = {v[0], v[1], v[2]};
}

Path parse_path(const json& j) {
    const std::string type = j.value("type", "straight");
    if (type == "straight") {
        return Path::straight();
    }
    if (type == "arc") {
        double angle = 2.0 * std::numbers::pi;
        if (j.contains("angle_deg")) {
            angle = j.at("angle_deg").get<double>() * kDeg;
        } else {
            read(j, "angle", angle);
        }
        return Path::arc(j.at("radius").get<double>(), angle);
    }
    if (type == "waypoints") {
        std::vector<Eigen::Vector2d> pts;
        for (const auto& p : j.at("points")) {
            const auto xy = p.get<std::array<double, 2>>();
            pts.emplace_back(xy[0], xy[1]);
        }
        return Path::waypoints(std::move(pts));
    }
    throw ConfigError("unknown path type \"" + type + "\"");
}

Side parse_side(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    throw ConfigError("expected \"left\" or \"right\", got \"" + s + "\"");
}

void check_finite(std::int64_t tick, std::initializer_list<double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw SimulationError(std::string("non-finite ") + what + " at tick " + std::to_string(tick), tick);
        }
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

SensorNoise noise_profile(Ground ground, bool incline, std::uint64_t seed) {
    SensorNoise n = ground == Ground::Rough ? SensorNoise::rough() : SensorNoise::flat();
    if (incline) {
        n.dropout += 0.5 * (SensorNoise::rough().dropout - SensorNoise::flat().dropout);
    }
    n.seed = seed;
    return n;
}

void Scenario::validate() const {
    if (!(duration > 0.0)) throw ConfigError("scenario: duration must be > 0");
    rig.validate();
    gait.validate();
    noise.validate();
    plant.validate();
    controller.validate();
    kinematics.validate();
    tracker.gate.validate();
    tracker.estimator.validate();
    for (const auto& f : forced_occlusions) {
        if (!(f.duration >= 0.0)) throw ConfigError("forced occlusion: duration must be >= 0");
    }
}

std::int64_t Scenario::tick_count() const {
    return std::llround(duration * plant.tick_rate);
}

Scenario Scenario::from_json(const json& j, const std::filesystem::path& base_dir) {
    Scenario s;
    try {
        read(j, "name", s.name);
        read(j, "duration", s.duration);
        std::uint64_t seed = 1;
        read(j, "seed", seed);

        if (j.contains("rig")) {
            const auto& r = j.at("rig");
            if (r.is_string()) {
                std::filesystem::path p = r.get<std::string>();
                s.rig = RigConfig::load(p.is_absolute() ? p : base_dir / p);
            } else {
                s.rig = RigConfig::from_json(r);
            }
        }

        if (j.contains("gait")) {
            const auto& g = j.at("gait");
            read(g, "speed", s.gait.speed);
            read(g, "step_length", s.gait.step_length);
            read(g, "lateral_separation", s.gait.lateral_separation);
            read(g, "duty_factor", s.gait.duty_factor);
            read(g, "start_ramp", s.gait.start_ramp);
            read(g, "stance_roll", s.gait.stance_roll);
            if (g.contains("path")) {
                s.gait.path = parse_path(g.at("path"));
            }
        }

        const std::string ground = j.value("ground", "flat");
        if (ground == "flat") {
            s.ground = Ground::Flat;
        } else if (ground == "rough") {
            s.ground = Ground::Rough;
        } else {
            throw ConfigError("ground must be \"flat\" or \"rough\"");
        }
        read(j, "incline", s.incline);
        s.noise = noise_profile(s.ground, s.incline, seed);
        if (j.contains("noise")) {
            const auto& n = j.at("noise");
            read(n, "position_sigma", s.noise.position_sigma);
            read(n, "heading_sigma", s.noise.heading_sigma);
            read(n, "dropout", s.noise.dropout);
        }

        if (j.contains("visibility")) {
            const auto& v = j.at("visibility");
            if (v.contains("fov_half_angle_deg")) {
                s.visibility.fov_half_angle = v.at("fov_half_angle_deg").get<double>() * kDeg;
            }
            read(v, "leg_occlusion", s.visibility.leg_occlusion);
        }

        if (j.contains("gate")) {
            const auto& g = j.at("gate");
            read(g, "x_min", s.tracker.gate.x_min);
            read(g, "x_max", s.tracker.gate.x_max);
            read(g, "y_min", s.tracker.gate.y_min);
            read(g, "y_max", s.tracker.gate.y_max);
        }
        if (j.contains("estimator")) {
            const auto& e = j.at("estimator");
            read(e, "T1", s.tracker.estimator.t1);
            read(e, "T2", s.tracker.estimator.t2);
            read(e, "d", s.tracker.estimator.d);
            read(e, "window", s.tracker.window_capacity);
        }
        if (j.contains("filter")) {
            read(j.at("filter"), "cutoff_hz", s.tracker.filter_cutoff_hz);
        }

        if (j.contains("controller")) {
            const auto& c = j.at("controller");
            if (c.contains("target")) {
                const auto t = c.at("target").get<std::array<double, 3>>();
                s.controller.target_x = t[0];
                s.controller.target_y = t[1];
                s.controller.target_theta = t[2];
            }
            read_gains(c, "gains_x", s.controller.x);
            read_gains(c, "gains_y", s.controller.y);
            read_gains(c, "gains_theta", s.controller.theta);
            read(c, "v_max", s.controller.v_max);
            read(c, "w_max", s.controller.w_max);
            read(c, "integral_clamp", s.controller.integral_clamp);
            read(c, "stop_time_constant", s.controller.stop_time_constant);
        }
        if (j.contains("kinematics")) {
            const auto& k = j.at("kinematics");
            read(k, "r", s.kinematics.wheel_radius);
            read(k, "a", s.kinematics.half_length);
            read(k, "b", s.kinematics.half_width);
        }
        if (j.contains("plant")) {
            const auto& p = j.at("plant");
            read(p, "tau", s.plant.tau);
            read(p, "tick_rate", s.plant.tick_rate);
        }
        s.tracker.sample_rate_hz = s.plant.tick_rate;

        if (j.contains("initial_offset")) {
            const auto o = j.at("initial_offset").get<std::array<double, 3>>();
            s.initial_offset = {o[0], o[1], o[2]};
        }
        if (j.contains("forced_occlusions")) {
            for (const auto& f : j.at("forced_occlusions")) {
                s.forced_occlusions.push_back({parse_side(f.at("side").get<std::string>()),
                                               f.at("start").get<double>(), f.at("duration").get<double>()});
            }
        }
        if (j.contains("output")) {
            std::filesystem::path p = j.at("output").get<std::string>();
            s.output = p.is_absolute() ? p : base_dir / p;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    s.validate();
    return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario: " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("scenario " + path.string() + ": " + e.what());
    }
    return from_json(j, path.parent_path());
}

json RunSummary::to_json() const {
    return {{"mean_abs_emx", mean_abs_emx},
            {"mean_abs_emy", mean_abs_emy},
            {"mean_abs_emtheta", mean_abs_emtheta},
            {"mean_position_error", mean_position_error},
            {"max_position_error", max_position_error},
            {"rows", rows},
            {"condition_counts", {{"I", condition_counts[0]}, {"II", condition_counts[1]}, {"III", condition_counts[2]}}},
            {"lost_leg_ticks", lost_leg_ticks},
            {"human_unavailable_ticks", human_unavailable_ticks},
            {"camera_detection_rate", camera_detection_rate},
            {"detection_rate", detection_rate}};
}

RunSummary run_scenario(const Scenario& s, std::ostream* trace) {
    s.validate();
    const double dt = s.plant.dt();
    const std::int64_t ticks = s.tick_count();

    World world = World::at_target(s.gait, s.controller, s.noise.seed, s.initial_offset);
    TrackerParams tracker_params = s.tracker;
    tracker_params.sample_rate_hz = s.plant.tick_rate;
    HumanTracker tracker(s.rig, tracker_params);
    FollowController controller(s.controller, s.kinematics);

    if (trace) {
        *trace << kTraceHeader << '\n';
    }

    RunSummary sum;
    std::array<std::int64_t, kCameraCount> camera_hits{};
    std::int64_t ticks_with_detection = 0;
    double acc_x = 0.0;
    double acc_y = 0.0;
    double acc_theta = 0.0;
    double acc_pos = 0.0;

    auto count_status = [&](LegStatus st) {
        switch (st) {
            case LegStatus::ConditionI: ++sum.condition_counts[0]; break;
            case LegStatus::ConditionII: ++sum.condition_counts[1]; break;
            case LegStatus::ConditionIII: ++sum.condition_counts[2]; break;
            case LegStatus::Lost: ++sum.lost_leg_ticks; break;
            case LegStatus::Detected: break;
        }
    };

    for (std::int64_t k = 0; k < ticks; ++k) {
        // Tick time from the index keeps timestamps free of accumulated rounding.
        world.time = static_cast<double>(k) * dt;
        const double t = world.time;

        const auto dets = render_detections(world, s.rig, s.noise, s.visibility, s.forced_occlusions);
        std::array<bool, kCameraCount> cam_seen{};
        for (const auto& d : dets) cam_seen[d.camera_id] = true;
        for (int c = 0; c < kCameraCount; ++c) camera_hits[c] += cam_seen[c] ? 1 : 0;
        ticks_with_detection += dets.empty() ? 0 : 1;

        const TrackerOutput tracked = tracker.update(dets, t);
        count_status(tracked.left_status);
        count_status(tracked.right_status);
        if (!tracked.filtered) ++sum.human_unavailable_ticks;

        const auto cmd = controller.step(tracked.filtered, dt);
        const PoseError gt_err = ground_truth_error(world, s.controller);
        const PlanarPose gt = to_body(world.robot, human_world_pose(world.gait, t));

        check_finite(k, {gt_err.ex, gt_err.ey, gt_err.etheta}, "ground-truth error");
        check_finite(k, {cmd.twist.vx, cmd.twist.vy, cmd.twist.wz}, "command");
        if (tracked.filtered) {
            check_finite(k, {tracked.filtered->x, tracked.filtered->y, tracked.filtered->theta}, "human estimate");
        }

        const double pos_err = std::hypot(gt_err.ex, gt_err.ey);
        acc_x += std::abs(gt_err.ex);
        acc_y += std::abs(gt_err.ey);
        acc_theta += std::abs(gt_err.etheta);
        acc_pos += pos_err;
        sum.max_position_error = std::max(sum.max_position_error, pos_err);

        if (trace) {
            auto& o = *trace;
            const auto est = [&](double HumanState::*field) {
                return tracked.filtered ? format_double((*tracked.filtered).*field) : std::string();
            };
            o << format_double(t) << ',' << format_double(gt.x) << ',' << format_double(gt.y) << ','
              << format_double(gt.yaw) << ',' << est(&HumanState::x) << ',' << est(&HumanState::y) << ','
              << est(&HumanState::theta) << ',' << format_double(gt_err.ex) << ',' << format_double(gt_err.ey)
              << ',' << format_double(gt_err.etheta) << ',' << to_string(tracked.left_status) << ','
              << to_string(tracked.right_status) << ',' << dets.size() << ',' << format_double(cmd.twist.vx)
              << ',' << format_double(cmd.twist.vy) << ',' << format_double(cmd.twist.wz);
            for (double w : cmd.wheels.w) o << ',' << format_double(w);
            o << '\n';
        }

        world_step(world, forward_kinematics(cmd.wheels, s.kinematics), s.plant, dt);
        check_finite(k, {world.robot.x, world.robot.y, world.robot.yaw}, "robot pose");
    }

    const double n = static_cast<double>(ticks);
    sum.rows = ticks;
    sum.mean_abs_emx = acc_x / n;
    sum.mean_abs_emy = acc_y / n;
    sum.mean_abs_emtheta = acc_theta / n;
    sum.mean_position_error = acc_pos / n;
    for (int c = 0; c < kCameraCount; ++c) {
        sum.camera_detection_rate[c] = static_cast<double>(camera_hits[c]) / n;
    }
    sum.detection_rate = static_cast<double>(ticks_with_detection) / n;
    return sum;
}

RunSummary run_scenario_to_dir(const Scenario& s, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto trace_path = out_dir / "trace.csv";
    std::ofstream trace(trace_path, std::ios::binary);
    if (!trace) {
        throw ConfigError("cannot write " + trace_path.string());
    }
    const RunSummary sum = run_scenario(s, &trace);
    std::ofstream summary(out_dir / "summary.json", std::ios::binary);
    if (!summary) {
        throw ConfigError("cannot write " + (out_dir / "summary.json").string());
    }
    json j = sum.to_json();
    j["name"] = s.name;
    summary << j.dump(2) << '\n';
    return sum;
}

VelocityErrors run_velocity_benchmark(double vmax, double freq, const PlantParams& plant,
                                      const KinematicsParams& kinematics) {
    if (!(vmax > 0.0) || !(freq > 0.0)) {
        throw ConfigError("bench-velocity: vmax and freq must be > 0");
    }
    plant.validate();
    kinematics.validate();
    const double dt = plant.dt();
    const std::int64_t ticks = std::llround(5.0 / freq * plant.tick_rate);
    const double omega = 2.0 * std::numbers::pi * freq;

    World world;
    VelocityErrors acc;
    for (std::int64_t k = 0; k < ticks; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double a = vmax * std::sin(omega * t);
        const BodyTwist cmd{a, a, a};
        world_step(world, forward_kinematics(inverse_kinematics(cmd, kinematics), kinematics), plant, dt);
        const double target = vmax * std::sin(omega * (t + dt));
        acc.vx += std::abs(target - world.robot_velocity.vx);
        acc.vy += std::abs(target - world.robot_velocity.vy);
        acc.wz += std::abs(target - world.robot_velocity.wz);
    }
    const double n = static_cast<double>(ticks);
    return {acc.vx / n, acc.vy / n, acc.wz / n};
}

bool within_tracking_limits(const RunSummary& s, const TrackingLimits& limits) {
    return s.mean_abs_emx <= limits.emx && s.mean_abs_emy <= limits.emy && s.mean_abs_emtheta <= limits.emtheta;
}

bool within_sweep_limits(const RunSummary& s, const TrackingLimits& limits) {
    return s.max_position_error <= limits.max_position && s.mean_position_error <= limits.mean_position;
}

std::vector<double> parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) {
        throw ConfigError("range must look like start:stop:count, got \"" + text + "\"");
    }
    double a = 0.0;
    double b = 0.0;
    int n = 0;
    try {
        a = std::stod(parts[0]);
        b = std::stod(parts[1]);
        n = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw ConfigError("range must look like start:stop:count, got \"" + text + "\"");
    }
    if (n < 1 || (n == 1 && a != b)) {
        throw ConfigError("range count must be >= 1 (and 1 only when start == stop)");
    }
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

std::vector<RunSummary> run_sweep(const Scenario& base, const std::vector<double>& speeds,
                                  const std::optional<std::filesystem::path>& out_dir, bool parallel) {
    auto one = [&](std::size_t i) {
        Scenario s = base;
        s.gait.speed = speeds[i];
        s.name = base.name + "_v" + format_double(speeds[i]);
        if (out_dir) {
            return run_scenario_to_dir(s, *out_dir / ("speed_" + format_double(speeds[i])));
        }
        return run_scenario(s);
    };
    std::vector<RunSummary> out(speeds.size());
    if (!parallel) {
        for (std::size_t i = 0; i < speeds.size(); ++i) out[i] = one(i);
        return out;
    }
    std::vector<std::future<RunSummary>> jobs;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        jobs.push_back(std::async(std::launch::async, one, i));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i].get();
    return out;
}

}  // namespace canefollow
