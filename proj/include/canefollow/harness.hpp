#pragma once

#include "canefollow/gait_sim.hpp"
#include "canefollow/tracker.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace canefollow {

/// Non-finite state during a run; carries the offending tick index.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, std::int64_t tick) : std::runtime_error(what), tick_(tick) {}
    std::int64_t tick() const { return tick_; }

private:
    std::int64_t tick_;
};

enum class Ground { Flat, Rough };

/// One closed-loop experiment.
struct Scenario {
    std::string name = "scenario";
    RigConfig rig = RigConfig::defaults();
    GaitParams gait;
    Ground ground = Ground::Flat;
    bool incline = false;
    SensorNoise noise = SensorNoise::flat();
    VisibilityParams visibility;
    TrackerParams tracker;
    ControllerParams controller;
    KinematicsParams kinematics;
    PlantParams plant;
    PlanarPose initial_offset;
    std::vector<ForcedOcclusion> forced_occlusions;
    double duration = 60.0;  // s
    std::filesystem::path output;

    void validate() const;
    std::int64_t tick_count() const;

    /// Relative paths (rig file) resolve against `base_dir`.
    static Scenario from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
    static Scenario load(const std::filesystem::path& path);
};

/// Sensor noise for a ground profile; the incline adds half of the rough
/// profile's extra dropout on top.
SensorNoise noise_profile(Ground ground, bool incline, std::uint64_t seed);

struct RunSummary {
    double mean_abs_emx = 0.0;       // m
    double mean_abs_emy = 0.0;       // m
    double mean_abs_emtheta = 0.0;   // rad
    double mean_position_error = 0.0;  // m, Euclidean
    double max_position_error = 0.0;   // m
    std::int64_t rows = 0;
    std::array<std::int64_t, 3> condition_counts{};  // I, II, III over both legs
    std::int64_t lost_leg_ticks = 0;
    std::int64_t human_unavailable_ticks = 0;
    std::array<double, kCameraCount> camera_detection_rate{};
    double detection_rate = 0.0;  // ticks with at least one detection

    nlohmann::json to_json() const;
};

inline constexpr std::string_view kTraceHeader =
    "t,gt_human_x,gt_human_y,gt_human_theta,est_human_x,est_human_y,est_human_theta,"
    "emx,emy,emtheta,cond_left,cond_right,n_detections,v_x_cmd,v_y_cmd,w_z_cmd,w1,w2,w3,w4";

/// Closed-loop run. Writes one CSV row per tick to `trace` when given.
RunSummary run_scenario(const Scenario& s, std::ostream* trace = nullptr);

/// Runs and writes `trace.csv` and `summary.json` into `out_dir`.
RunSummary run_scenario_to_dir(const Scenario& s, const std::filesystem::path& out_dir);

/// Mean absolute velocity tracking error per body axis.
struct VelocityErrors {
    double vx = 0.0;  // m/s
    double vy = 0.0;  // m/s
    double wz = 0.0;  // rad/s
};

/// Open-loop sinusoidal twist of amplitude `vmax` on every axis (rad/s for
/// rotation) through the wheel mapping and plant, over five cycles from rest.
VelocityErrors run_velocity_benchmark(double vmax, double freq, const PlantParams& plant,
                                      const KinematicsParams& kinematics = {});

/// Thresholds used by --check.
struct TrackingLimits {
    double emx = 0.04;
    double emy = 0.05;
    double emtheta = 0.262;
    double mean_position = 0.06;
    double max_position = 0.5;
};

bool within_tracking_limits(const RunSummary& s, const TrackingLimits& limits = {});
bool within_sweep_limits(const RunSummary& s, const TrackingLimits& limits = {});

/// "a:b:n" -> n evenly spaced values from a to b inclusive.
std::vector<double> parse_range(const std::string& text);

/// One run per speed; results in input order. Runs on worker threads when `parallel`.
std::vector<RunSummary> run_sweep(const Scenario& base, const std::vector<double>& speeds,
                                  const std::optional<std::filesystem::path>& out_dir, bool parallel);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace canefollow
