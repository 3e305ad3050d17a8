// Scenario runner for the cane-robot following simulation.
//
//   canefollow run <scenario.json> [--out dir] [--seed N] [--check]
//   canefollow bench-velocity --vmax <m/s> --freq <Hz> [--tau s]
//   canefollow sweep --speeds 0.75:1.45:7 <scenario.json> [--out dir] [--check] [--parallel]
//
// Exit codes: 0 success, 1 error, 2 threshold violation under --check.

#include "canefollow/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace cf = canefollow;

namespace {

constexpr int kExitError = 1;
constexpr int kExitCheckFailed = 2;

void print_summary(const std::string& label, const cf::RunSummary& s) {
    std::printf("%-24s |emx| %.4f m  |emy| %.4f m  |emtheta| %.4f rad  pos %.4f m (max %.4f)  "
                "cond I/II/III %lld/%lld/%lld  detect %.1f%%\n",
                label.c_str(), s.mean_abs_emx, s.mean_abs_emy, s.mean_abs_emtheta, s.mean_position_error,
                s.max_position_error, static_cast<long long>(s.condition_counts[0]),
                static_cast<long long>(s.condition_counts[1]), static_cast<long long>(s.condition_counts[2]),
                100.0 * s.detection_rate);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Close-range human-following simulation for a Mecanum cane robot"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool check = false;

    auto* run = app.add_subcommand("run", "Run one closed-loop scenario");
    run->add_option("scenario", scenario_path, "Scenario JSON")->required();
    run->add_option("--out", out_dir, "Output directory (trace.csv, summary.json)");
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_flag("--check", check, "Exit 2 when tracking limits are exceeded");

    double vmax = 1.5;
    double freq = 0.5;
    double tau = cf::PlantParams{}.tau;
    auto* bench = app.add_subcommand("bench-velocity", "Open-loop sinusoidal velocity tracking");
    bench->add_option("--vmax", vmax, "Amplitude (m/s and rad/s)")->required();
    bench->add_option("--freq", freq, "Frequency (Hz)")->required();
    bench->add_option("--tau", tau, "Plant time constant (s)");

    std::string speeds;
    bool parallel = false;
    auto* sweep = app.add_subcommand("sweep", "Walking-speed sweep over one scenario");
    sweep->add_option("--speeds", speeds, "start:stop:count")->required();
    sweep->add_option("scenario", scenario_path, "Scenario JSON")->required();
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--seed", seed, "Override the scenario seed");
    sweep->add_flag("--check", check, "Exit 2 when any run diverges or exceeds the mean position limit");
    sweep->add_flag("--parallel", parallel, "Run speeds on worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*run) {
            cf::Scenario s = cf::Scenario::load(scenario_path);
            if (seed) s.noise.seed = *seed;
            std::filesystem::path dir = out_dir.empty() ? s.output : std::filesystem::path(out_dir);
            if (dir.empty()) dir = "out/" + s.name;
            const cf::RunSummary sum = cf::run_scenario_to_dir(s, dir);
            print_summary(s.name, sum);
            std::cout << "wrote " << (dir / "trace.csv").string() << '\n';
            if (check && !cf::within_tracking_limits(sum)) {
                std::cerr << "tracking limits exceeded\n";
                return kExitCheckFailed;
            }
            return 0;
        }
        if (*bench) {
            cf::PlantParams plant;
            plant.tau = tau;
            const auto e = cf::run_velocity_benchmark(vmax, freq, plant);
            std::printf("vmax %.3f m/s  freq %.3f Hz  tau %.3f s  mean error: vx %.4f m/s  vy %.4f m/s  wz %.4f rad/s\n",
                        vmax, freq, tau, e.vx, e.vy, e.wz);
            return 0;
        }
        if (*sweep) {
            cf::Scenario s = cf::Scenario::load(scenario_path);
            if (seed) s.noise.seed = *seed;
            const auto values = cf::parse_range(speeds);
            std::optional<std::filesystem::path> dir;
            if (!out_dir.empty()) dir = out_dir;
            const auto results = cf::run_sweep(s, values, dir, parallel);
            bool ok = true;
            for (std::size_t i = 0; i < values.size(); ++i) {
                print_summary("speed " + cf::format_double(values[i]) + " m/s", results[i]);
                ok = ok && cf::within_sweep_limits(results[i]);
            }
            if (check && !ok) {
                std::cerr << "sweep limits exceeded\n";
                return kExitCheckFailed;
            }
            return 0;
        }
    } catch (const cf::SimulationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return 0;
}
