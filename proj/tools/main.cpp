#include "commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

using namespace gla::cli;

int main(int argc, char** argv) {
    CLI::App app{"Adaptive gust load alleviation: ROM construction, simulation and sweeps", "gla"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, axis;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<double> grid;
    app.add_option("--config", config_path, "run configuration (JSON)");
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "seed for stochastic gusts");
    auto* workers_opt = app.add_option("--workers", workers, "concurrent sweep points (0: all cores)");

    auto* rom_build = app.add_subcommand("rom-build", "build, cache and validate the reduced-order model");
    auto* simulate = app.add_subcommand("simulate", "open- and closed-loop gust simulation with metrics");
    auto* sweep = app.add_subcommand("sweep", "sweep the adaptation rate or the gust gradient");
    auto* gust_gen = app.add_subcommand("gust-gen", "write a gust realization to CSV");
    auto* validate = app.add_subcommand("validate", "check the configuration, plant, ROM and controller design");
    auto* axis_opt =
        sweep->add_option("--axis", axis, "gamma or gust-gradient")->check(CLI::IsMember({"gamma", "gust-gradient"}));
    auto* grid_opt = sweep->add_option("--grid", grid, "grid values")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        RunConfig cfg = config_path.empty() ? parse_run_config("{}", "") : load_run_config(config_path);
        if (*out_opt) cfg.output.directory = std::filesystem::absolute(out_dir).lexically_normal().string();
        if (*seed_opt) cfg.seed = seed;
        if (*workers_opt) cfg.workers = workers;
        if (*axis_opt) cfg.sweep.axis = axis;
        if (*grid_opt) cfg.sweep.grid = grid;
        if (cfg.workers < 0) throw ConfigError("--workers must be non-negative");

        if (*rom_build) return cmd_rom_build(cfg, std::cout);
        if (*simulate) return cmd_simulate(cfg, std::cout);
        if (*sweep) return cmd_sweep(cfg, std::cout);
        if (*gust_gen) return cmd_gust_gen(cfg, std::cout);
        if (*validate) return cmd_validate(cfg, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const gla::FormatError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const gla::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const gla::DivergenceError& e) {
        std::cerr << "diverged: " << e.what() << "\n";
        return kDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
