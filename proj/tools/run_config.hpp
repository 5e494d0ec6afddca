#pragma once

#include <gla/sim.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gla::cli {

constexpr int kRunSchemaVersion = 1;

// Problems with the run configuration or the files it points to (exit code 3).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class PlantSource { Aerofoil, Bundle, Rom };

struct PlantBlock {
    PlantSource source = PlantSource::Aerofoil;
    std::string parameters;  // aerofoil parameter file, empty: built-in defaults
    std::string bundle;      // external state-space bundle
    std::string rom;         // ROM container (source = rom)
};

struct RomBlock {
    bool enabled = true;  // false: simulate the full-order plant
    ModeCriteria criteria;
    std::string cache;  // reuse this ROM file if present and not stale
};

struct ControllerBlock {
    bool enabled = true;
    DampingSpec damping;
    std::string q_preset = "default";
    std::vector<double> q_diagonal;  // overrides the preset when non-empty
    double gamma = 0.5;
    GammaMode gamma_mode = GammaMode::ScaledQ;
    bool include_nonlinear_reference = true;
    bool zero_correction = false;
    std::optional<Matrix> Bm;
};

struct GustBlock {
    GustKind kind = GustKind::OneCosine;
    double w_gmax = 0.14;
    double H_g = 55.0;
    double U_inf = 1.0;
    std::optional<double> sigma;         // required for von-karman
    std::optional<double> length_scale;  // required for von-karman
};

struct SweepBlock {
    std::string axis = "gamma";  // gamma | gust-gradient
    std::vector<double> grid;
};

struct OutputBlock {
    std::string directory = "out";
    int output = 0;  // metric output row
    bool flap_in_degrees = true;
    bool write_traces = true;
};

struct ValidationBlock {
    double peak_tolerance_percent = 5.0;
    double rms_tolerance_percent = 2.0;
};

struct RunConfig {
    std::string origin;  // config file path, empty when defaults only
    std::uint64_t seed = 1;
    int workers = 1;
    PlantBlock plant;
    RomBlock rom;
    ControllerBlock controller;
    GustBlock gust;
    SimulationConfig sim;
    bool duration_given = false;
    SweepBlock sweep;
    OutputBlock output;
    ValidationBlock validation;

    // Q on the ROM state (n entries).
    Matrix Q(int n) const;
    // Duration used for a discrete gust of gradient H_g when none is configured: ten gust windows.
    double duration_for(double H_g) const;
    GustSignal make_gust(double duration) const;
};

RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::string& path);
// Fully resolved configuration (defaults filled, absolute paths, effective seed).
std::string resolved_config_text(const RunConfig& cfg);

std::vector<double> q_preset(const std::string& name, int n);
std::vector<std::string> q_preset_names();

}  // namespace gla::cli
