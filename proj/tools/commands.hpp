#pragma once

#include "run_config.hpp"

#include <gla/plantio.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gla::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kValidationFailed = 2, kConfigError = 3, kDiverged = 4 };

struct Model {
    std::optional<FullOrderModel> fom;
    std::optional<ReducedOrderModel> rom;
    Plant plant;
    std::string source_path;  // file the plant came from, empty for built-in defaults
    std::string source_hash;
    bool rom_from_cache = false;
    std::vector<std::string> warnings;
};

// need_fom: the command compares against the full-order model.
Model load_model(const RunConfig& cfg, bool need_fom);

struct ControllerSetup {
    Controller controller;
    std::optional<MinimumPhaseResult> zero_correction;
    IdealGains matching;
};

ControllerSetup make_controller(const RunConfig& cfg, const Model& model, double gamma);

int cmd_rom_build(const RunConfig& cfg, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_gust_gen(const RunConfig& cfg, std::ostream& log);
int cmd_validate(const RunConfig& cfg, std::ostream& log);

// Creates the output directory and writes resolved_config.json into it.
std::string prepare_output(const RunConfig& cfg);

}  // namespace gla::cli
