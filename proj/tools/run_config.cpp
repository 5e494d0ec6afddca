#include "run_config.hpp"

#include <gla/plantio.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

namespace gla::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) { throw ConfigError(where + ": " + msg); }

class Reader {
  public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) bad(where_, "expected an object");
    }

    // Rejects keys the schema does not know, so typos do not pass silently.
    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!ok.count(it.key())) bad(where_ + "." + it.key(), "unknown key");
    }

    bool has(const char* k) const { return j_.contains(k); }
    std::string path(const char* k) const { return where_ + "." + k; }

    void get(const char* k, double& out) const {
        if (!has(k)) return;
        const auto& v = j_.at(k);
        if (!v.is_number() || !std::isfinite(v.get<double>())) bad(path(k), "expected a finite number");
        out = v.get<double>();
    }
    void get(const char* k, int& out) const {
        if (!has(k)) return;
        const auto& v = j_.at(k);
        if (!v.is_number_integer()) bad(path(k), "expected an integer");
        out = v.get<int>();
    }
    void get(const char* k, bool& out) const {
        if (!has(k)) return;
        const auto& v = j_.at(k);
        if (!v.is_boolean()) bad(path(k), "expected true or false");
        out = v.get<bool>();
    }
    void get(const char* k, std::string& out) const {
        if (!has(k)) return;
        const auto& v = j_.at(k);
        if (!v.is_string()) bad(path(k), "expected a string");
        out = v.get<std::string>();
    }
    void get(const char* k, std::vector<double>& out) const {
        if (!has(k)) return;
        const auto& v = j_.at(k);
        if (!v.is_array()) bad(path(k), "expected an array of numbers");
        out.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
                bad(path(k) + "[" + std::to_string(i) + "]", "expected a finite number");
            out.push_back(v[i].get<double>());
        }
    }
    void get(const char* k, std::optional<double>& out) const {
        if (!has(k) || j_.at(k).is_null()) return;
        double v = 0.0;
        get(k, v);
        out = v;
    }
    Reader sub(const char* k) const { return Reader(j_.at(k), path(k)); }
    const json& raw(const char* k) const { return j_.at(k); }

  private:
    const json& j_;
    std::string where_;
};

std::string resolve_path(const std::string& p, const fs::path& base) {
    if (p.empty()) return p;
    fs::path q(p);
    if (q.is_relative()) q = base / q;
    return q.lexically_normal().string();
}

json matrix_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

std::vector<std::string> q_preset_names() { return {"default", "large", "small", "unit"}; }

std::vector<double> q_preset(const std::string& name, int n) {
    // Pattern for the 8-state aerofoil ROM: two gust-lag states, then three oscillatory pairs.
    static const std::vector<double> pattern{10, 10, 30, 30, 30, 10, 30, 30};
    if (name == "default" || name == "large") {
        if (n != static_cast<int>(pattern.size()))
            throw ConfigError(
                "controller.q_preset: preset '" + name +
                "' is defined for 8-state models; give controller.q_diagonal for n = " + std::to_string(n));
        std::vector<double> q = pattern;
        if (name == "default")
            for (double& v : q) v *= 0.01;
        return q;
    }
    if (name == "small") return std::vector<double>(static_cast<std::size_t>(n), 1e-4);
    if (name == "unit") return std::vector<double>(static_cast<std::size_t>(n), 1.0);
    throw ConfigError("controller.q_preset: unknown preset '" + name + "'");
}

Matrix RunConfig::Q(int n) const {
    std::vector<double> q = controller.q_diagonal.empty() ? q_preset(controller.q_preset, n) : controller.q_diagonal;
    if (static_cast<int>(q.size()) != n)
        throw ConfigError("controller.q_diagonal: expected " + std::to_string(n) + " entries, found " +
                          std::to_string(q.size()));
    for (double v : q)
        if (!(v > 0.0)) throw ConfigError("controller.q_diagonal: entries must be positive");
    return Eigen::Map<const Vector>(q.data(), n).asDiagonal();
}

double RunConfig::duration_for(double H_g) const {
    if (duration_given) return sim.duration;
    return 10.0 * 2.0 * H_g / gust.U_inf;
}

GustSignal RunConfig::make_gust(double duration) const {
    switch (gust.kind) {
        case GustKind::OneCosine:
            return GustSignal::one_cosine(gust.w_gmax, gust.H_g, gust.U_inf);
        case GustKind::VonKarman:
            return GustSignal::von_karman(*gust.sigma, *gust.length_scale, gust.U_inf, sim.dt, duration, seed);
        case GustKind::Zero:
            break;
    }
    return GustSignal::zero();
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(origin, std::string("parse error: ") + e.what());
    }
    RunConfig cfg;
    cfg.origin = origin;
    const fs::path base = origin.empty() ? fs::current_path() : fs::absolute(fs::path(origin)).parent_path();

    Reader top(j, "config");
    top.allow({"schema", "schema_version", "seed", "workers", "plant", "rom", "controller", "gust", "simulation",
               "sweep", "output", "validation"});
    if (top.has("schema")) {
        std::string s;
        top.get("schema", s);
        if (s != "gla.run") bad("config.schema", "expected 'gla.run'");
    }
    if (top.has("schema_version")) {
        int v = 0;
        top.get("schema_version", v);
        if (v > kRunSchemaVersion)
            bad("config.schema_version", "config version " + std::to_string(v) + " is newer than supported version " +
                                             std::to_string(kRunSchemaVersion));
    }
    if (top.has("seed")) {
        const auto& s = top.raw("seed");
        if (!s.is_number_unsigned()) bad("config.seed", "expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    top.get("workers", cfg.workers);

    if (top.has("plant")) {
        auto p = top.sub("plant");
        p.allow({"source", "parameters", "bundle", "rom"});
        std::string src = "aerofoil";
        p.get("source", src);
        if (src == "aerofoil")
            cfg.plant.source = PlantSource::Aerofoil;
        else if (src == "bundle")
            cfg.plant.source = PlantSource::Bundle;
        else if (src == "rom")
            cfg.plant.source = PlantSource::Rom;
        else
            bad("config.plant.source", "expected aerofoil, bundle or rom");
        p.get("parameters", cfg.plant.parameters);
        p.get("bundle", cfg.plant.bundle);
        p.get("rom", cfg.plant.rom);
        cfg.plant.parameters = resolve_path(cfg.plant.parameters, base);
        cfg.plant.bundle = resolve_path(cfg.plant.bundle, base);
        cfg.plant.rom = resolve_path(cfg.plant.rom, base);
        if (cfg.plant.source == PlantSource::Bundle && cfg.plant.bundle.empty())
            bad("config.plant.bundle", "required when source is bundle");
        if (cfg.plant.source == PlantSource::Rom && cfg.plant.rom.empty())
            bad("config.plant.rom", "required when source is rom");
    }

    if (top.has("rom")) {
        auto r = top.sub("rom");
        r.allow({"enabled", "n", "real_modes", "cluster_tol", "cache"});
        r.get("enabled", cfg.rom.enabled);
        r.get("n", cfg.rom.criteria.n);
        r.get("real_modes", cfg.rom.criteria.real_modes);
        r.get("cluster_tol", cfg.rom.criteria.cluster_tol);
        r.get("cache", cfg.rom.cache);
        cfg.rom.cache = resolve_path(cfg.rom.cache, base);
        if (cfg.rom.criteria.n < 1) bad("config.rom.n", "must be positive");
        if (cfg.rom.criteria.real_modes < 0) bad("config.rom.real_modes", "must be non-negative");
    }

    if (top.has("controller")) {
        auto c = top.sub("controller");
        c.allow({"enabled", "damping", "q_preset", "q_diagonal", "gamma", "gamma_mode", "include_nonlinear_reference",
                 "zero_correction", "B_m"});
        c.get("enabled", cfg.controller.enabled);
        if (c.has("damping")) {
            auto d = c.sub("damping");
            d.allow({"oscillatory_factor", "real_factor", "allow_destabilizing"});
            d.get("oscillatory_factor", cfg.controller.damping.oscillatory_factor);
            d.get("real_factor", cfg.controller.damping.real_factor);
            d.get("allow_destabilizing", cfg.controller.damping.allow_destabilizing);
        }
        c.get("q_preset", cfg.controller.q_preset);
        c.get("q_diagonal", cfg.controller.q_diagonal);
        c.get("gamma", cfg.controller.gamma);
        if (cfg.controller.gamma < 0.0) bad("config.controller.gamma", "must be non-negative");
        std::string mode = "scaled_q";
        c.get("gamma_mode", mode);
        if (mode == "scaled_q")
            cfg.controller.gamma_mode = GammaMode::ScaledQ;
        else if (mode == "identity")
            cfg.controller.gamma_mode = GammaMode::Identity;
        else
            bad("config.controller.gamma_mode", "expected scaled_q or identity");
        c.get("include_nonlinear_reference", cfg.controller.include_nonlinear_reference);
        c.get("zero_correction", cfg.controller.zero_correction);
        if (c.has("B_m")) {
            try {
                const auto& m = c.raw("B_m");
                Matrix B(static_cast<Eigen::Index>(m.size()), m.size() ? static_cast<Eigen::Index>(m[0].size()) : 0);
                for (std::size_t i = 0; i < m.size(); ++i) {
                    if (m[i].size() != static_cast<std::size_t>(B.cols())) bad("config.controller.B_m", "ragged rows");
                    for (std::size_t k = 0; k < m[i].size(); ++k)
                        B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = m[i][k].get<double>();
                }
                cfg.controller.Bm = B;
            } catch (const json::exception&) {
                bad("config.controller.B_m", "expected an array of numeric rows");
            }
        }
        if (c.has("q_preset") && cfg.controller.q_diagonal.empty()) {
            const auto names = q_preset_names();
            if (std::find(names.begin(), names.end(), cfg.controller.q_preset) == names.end())
                bad("config.controller.q_preset", "unknown preset '" + cfg.controller.q_preset + "'");
        }
    }

    if (top.has("gust")) {
        auto g = top.sub("gust");
        g.allow({"type", "w_gmax", "H_g", "U_inf", "sigma", "length_scale"});
        std::string kind = "one-cosine";
        g.get("type", kind);
        try {
            cfg.gust.kind = parse_gust_kind(kind);
        } catch (const Error& e) {
            bad("config.gust.type", e.what());
        }
        g.get("w_gmax", cfg.gust.w_gmax);
        g.get("H_g", cfg.gust.H_g);
        g.get("U_inf", cfg.gust.U_inf);
        g.get("sigma", cfg.gust.sigma);
        g.get("length_scale", cfg.gust.length_scale);
    }
    if (!(cfg.gust.U_inf > 0.0)) bad("config.gust.U_inf", "must be positive");
    if (!(cfg.gust.H_g > 0.0)) bad("config.gust.H_g", "must be positive");
    if (cfg.gust.kind == GustKind::VonKarman) {
        if (!cfg.gust.sigma) bad("config.gust.sigma", "required for von-karman gusts");
        if (!cfg.gust.length_scale) bad("config.gust.length_scale", "required for von-karman gusts");
        if (*cfg.gust.sigma < 0.0) bad("config.gust.sigma", "must be non-negative");
        if (!(*cfg.gust.length_scale > 0.0)) bad("config.gust.length_scale", "must be positive");
    }

    if (top.has("simulation")) {
        auto s = top.sub("simulation");
        s.allow({"dt", "duration", "nonlinear", "stride", "divergence_bound", "certificate", "monitor"});
        s.get("dt", cfg.sim.dt);
        cfg.duration_given = s.has("duration");
        s.get("duration", cfg.sim.duration);
        s.get("nonlinear", cfg.sim.nonlinear);
        s.get("stride", cfg.sim.stride);
        s.get("divergence_bound", cfg.sim.divergence_bound);
        s.get("certificate", cfg.sim.certificate);
        s.get("monitor", cfg.sim.monitor);
    }
    if (cfg.gust.kind == GustKind::VonKarman && !cfg.duration_given)
        bad("config.simulation.duration", "required for von-karman gusts");
    if (!cfg.duration_given) cfg.sim.duration = cfg.duration_for(cfg.gust.H_g);
    try {
        cfg.sim.validate();
    } catch (const Error& e) {
        bad("config.simulation", e.what());
    }

    if (top.has("sweep")) {
        auto s = top.sub("sweep");
        s.allow({"axis", "grid"});
        s.get("axis", cfg.sweep.axis);
        s.get("grid", cfg.sweep.grid);
        if (cfg.sweep.axis != "gamma" && cfg.sweep.axis != "gust-gradient")
            bad("config.sweep.axis", "expected gamma or gust-gradient");
    }

    if (top.has("output")) {
        auto o = top.sub("output");
        o.allow({"directory", "output", "flap_units", "write_traces"});
        o.get("directory", cfg.output.directory);
        o.get("output", cfg.output.output);
        std::string units = "deg";
        o.get("flap_units", units);
        if (units == "deg")
            cfg.output.flap_in_degrees = true;
        else if (units == "rad")
            cfg.output.flap_in_degrees = false;
        else
            bad("config.output.flap_units", "expected deg or rad");
        o.get("write_traces", cfg.output.write_traces);
        if (cfg.output.output < 0) bad("config.output.output", "must be non-negative");
    }
    cfg.output.directory = resolve_path(cfg.output.directory, base);

    if (top.has("validation")) {
        auto v = top.sub("validation");
        v.allow({"peak_tolerance_percent", "rms_tolerance_percent"});
        v.get("peak_tolerance_percent", cfg.validation.peak_tolerance_percent);
        v.get("rms_tolerance_percent", cfg.validation.rms_tolerance_percent);
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path);
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return parse_run_config(text, path);
}

std::string resolved_config_text(const RunConfig& cfg) {
    json j;
    j["schema"] = "gla.run";
    j["schema_version"] = kRunSchemaVersion;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    const char* src = cfg.plant.source == PlantSource::Aerofoil ? "aerofoil"
                      : cfg.plant.source == PlantSource::Bundle ? "bundle"
                                                                : "rom";
    json plant{{"source", src}};
    if (!cfg.plant.parameters.empty()) plant["parameters"] = cfg.plant.parameters;
    if (!cfg.plant.bundle.empty()) plant["bundle"] = cfg.plant.bundle;
    if (!cfg.plant.rom.empty()) plant["rom"] = cfg.plant.rom;
    j["plant"] = plant;
    json rom{{"enabled", cfg.rom.enabled},
             {"n", cfg.rom.criteria.n},
             {"real_modes", cfg.rom.criteria.real_modes},
             {"cluster_tol", cfg.rom.criteria.cluster_tol}};
    if (!cfg.rom.cache.empty()) rom["cache"] = cfg.rom.cache;
    j["rom"] = rom;
    const auto& c = cfg.controller;
    json ctl{{"enabled", c.enabled},
             {"damping",
              {{"oscillatory_factor", c.damping.oscillatory_factor},
               {"real_factor", c.damping.real_factor},
               {"allow_destabilizing", c.damping.allow_destabilizing}}},
             {"q_preset", c.q_preset}};
    if (!c.q_diagonal.empty()) ctl["q_diagonal"] = c.q_diagonal;
    ctl["gamma"] = c.gamma;
    ctl["gamma_mode"] = c.gamma_mode == GammaMode::ScaledQ ? "scaled_q" : "identity";
    ctl["include_nonlinear_reference"] = c.include_nonlinear_reference;
    ctl["zero_correction"] = c.zero_correction;
    if (c.Bm) ctl["B_m"] = matrix_json(*c.Bm);
    j["controller"] = ctl;
    json gust{{"type", to_string(cfg.gust.kind)},
              {"w_gmax", cfg.gust.w_gmax},
              {"H_g", cfg.gust.H_g},
              {"U_inf", cfg.gust.U_inf}};
    if (cfg.gust.sigma) gust["sigma"] = *cfg.gust.sigma;
    if (cfg.gust.length_scale) gust["length_scale"] = *cfg.gust.length_scale;
    j["gust"] = gust;
    j["simulation"] = {{"dt", cfg.sim.dt},
                       {"duration", cfg.sim.duration},
                       {"nonlinear", cfg.sim.nonlinear},
                       {"stride", cfg.sim.stride},
                       {"divergence_bound", cfg.sim.divergence_bound},
                       {"certificate", cfg.sim.certificate},
                       {"monitor", cfg.sim.monitor}};
    j["sweep"] = {{"axis", cfg.sweep.axis}, {"grid", cfg.sweep.grid}};
    j["output"] = {{"directory", cfg.output.directory},
                   {"output", cfg.output.output},
                   {"flap_units", cfg.output.flap_in_degrees ? "deg" : "rad"},
                   {"write_traces", cfg.output.write_traces}};
    j["validation"] = {{"peak_tolerance_percent", cfg.validation.peak_tolerance_percent},
                       {"rms_tolerance_percent", cfg.validation.rms_tolerance_percent}};
    return j.dump(2) + "\n";
}

}  // namespace gla::cli
