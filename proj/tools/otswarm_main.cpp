#include "otswarm/config.hpp"
#include "otswarm/frame_io.hpp"
#include "otswarm/render.hpp"
#include "otswarm/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

namespace fs = std::filesystem;
using namespace otswarm;

// Exit codes: 0 clean run, 1 completed with Sinkhorn non-convergence
// warnings, 2 configuration error, 3 I/O failure.
constexpr int kExitOk = 0;
constexpr int kExitWarnings = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::optional<int> steps_override;
};

SimConfig load_with_overrides(const CommonOptions& opts) {
    SimConfig config = load_config(opts.config_path);
    if (opts.seed_override) config.seed = *opts.seed_override;
    if (opts.steps_override) {
        config.horizon.n_steps = *opts.steps_override;
        config.horizon.end_time.reset();
        config.validate();
    }
    return config;
}

std::string frame_name(int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06d.ppm", k);
    return buf;
}

int render_trajectory(const SimConfig& config, const Trajectory& trajectory,
                      const fs::path& out_dir) {
    int written = 0;
    for (const Frame& frame : trajectory.frames) {
        if (frame.k % config.output.render_every != 0) continue;
        const GaussianMixture mixture = demand_at(config.demand, frame.t, config.domain);
        const GridDensity density =
            rasterize(mixture, config.domain, config.grid.width, config.grid.height);
        const Image image = render_frame(density, frame.positions, frame.targets);
        write_ppm(image, (out_dir / frame_name(frame.k)).string());
        ++written;
    }
    return written;
}

int run_command(const CommonOptions& opts) {
    const SimConfig config = load_with_overrides(opts);
    const Trajectory trajectory = run_simulation(config);

    const fs::path out_dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir.string());

    const fs::path frames_path = out_dir / config.output.frames_path;
    const fs::path metrics_path = out_dir / config.output.metrics_path;
    write_frames_file(trajectory, frames_path.string());
    write_metrics_file(trajectory, metrics_path.string());
    if (config.output.render) {
        render_trajectory(config, trajectory, out_dir);
    }

    const Frame& last = trajectory.frames.back();
    std::cout << "steps: " << last.k << "\n"
              << "objective: " << trajectory.objective << "\n"
              << "final_w2_sq: " << last.w2_sq_estimate << "\n"
              << "sinkhorn_warnings: " << trajectory.nonconvergence_warnings << "\n"
              << "frames: " << frames_path.string() << "\n"
              << "metrics: " << metrics_path.string() << "\n";
    return trajectory.nonconvergence_warnings == 0 ? kExitOk : kExitWarnings;
}

int render_command(const CommonOptions& opts, const std::string& frames_path) {
    const SimConfig config = load_with_overrides(opts);
    const Trajectory trajectory = read_frames_file(frames_path);

    const fs::path out_dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir.string());

    const int written = render_trajectory(config, trajectory, out_dir);
    std::cout << "rendered " << written << " of " << trajectory.frames.size() << " frames to "
              << out_dir.string() << "\n";
    return kExitOk;
}

int validate_command(const CommonOptions& opts) {
    const SimConfig config = load_with_overrides(opts);
    std::cout << dump_config(config);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"otswarm — optimal-transport swarm tracking simulator"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string frames_path;

    auto add_common = [&opts](CLI::App* cmd, bool with_overrides) {
        cmd->add_option("config", opts.config_path, "scenario config file (JSON)")->required();
        cmd->add_option("--out-dir", opts.out_dir, "output directory")
            ->envname("OTSWARM_OUT_DIR");
        if (with_overrides) {
            cmd->add_option("--seed", opts.seed_override, "override the scenario seed");
            cmd->add_option("--steps", opts.steps_override, "override the step count")
                ->check(CLI::NonNegativeNumber);
        }
    };

    CLI::App* run = app.add_subcommand("run", "run a scenario and write frame/metric CSVs");
    add_common(run, true);

    CLI::App* render = app.add_subcommand("render", "render PPM images from a frames CSV");
    render->add_option("frames", frames_path, "frames CSV produced by `run`")->required();
    add_common(render, false);

    CLI::App* validate =
        app.add_subcommand("validate", "parse a scenario and print the normalized config");
    add_common(validate, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(opts);
        if (render->parsed()) return render_command(opts, frames_path);
        return validate_command(opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
