#include "commands.hpp"

#include <filesystem>

namespace gla::cli {

namespace fs = std::filesystem;

namespace {

AerofoilParams aerofoil_params(const RunConfig& cfg, std::string& text) {
    if (cfg.plant.parameters.empty()) {
        AerofoilParams p;
        text = aerofoil_params_to_text(p);
        return p;
    }
    if (!fs::exists(cfg.plant.parameters)) throw ConfigError("parameter file not found: " + cfg.plant.parameters);
    text = read_file(cfg.plant.parameters);
    try {
        return aerofoil_params_from_text(text, cfg.plant.parameters);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

bool rom_matches(const ReducedOrderModel& rom, const ModeCriteria& c) { return rom.states() == c.n; }

}  // namespace

Model load_model(const RunConfig& cfg, bool need_fom) {
    Model m;
    switch (cfg.plant.source) {
        case PlantSource::Aerofoil: {
            std::string text;
            const auto p = aerofoil_params(cfg, text);
            m.fom = assemble_fom(p);
            m.source_path = cfg.plant.parameters;
            m.source_hash = sha256_hex(text);
            break;
        }
        case PlantSource::Bundle: {
            if (!fs::exists(cfg.plant.bundle)) throw ConfigError("plant bundle not found: " + cfg.plant.bundle);
            try {
                const auto b = load_plant(cfg.plant.bundle);
                m.fom = b.to_model();
                m.source_hash = b.provenance;
            } catch (const FormatError& e) {
                throw ConfigError(e.what());
            }
            m.source_path = cfg.plant.bundle;
            break;
        }
        case PlantSource::Rom: {
            if (need_fom) throw ConfigError("plant.source = rom has no full-order model to compare against");
            if (!fs::exists(cfg.plant.rom)) throw ConfigError("ROM file not found: " + cfg.plant.rom);
            LoadedRom lr;
            try {
                lr = load_rom(cfg.plant.rom);
            } catch (const FormatError& e) {
                throw ConfigError(e.what());
            }
            if (lr.stale) m.warnings.push_back(lr.warning);
            m.rom = std::move(lr.rom);
            m.source_path = cfg.plant.rom;
            m.source_hash = lr.info.source_hash;
            m.rom_from_cache = true;
            m.plant = Plant::from_rom(*m.rom);
            return m;
        }
    }

    if (!cfg.rom.enabled) {
        m.plant = Plant::from_fom(*m.fom);
        return m;
    }
    if (!cfg.rom.cache.empty() && fs::exists(cfg.rom.cache)) {
        try {
            auto lr = load_rom(cfg.rom.cache);
            if (lr.info.source_hash != m.source_hash) {
                m.warnings.push_back("ROM cache '" + cfg.rom.cache +
                                     "' was built from a different parameter file; rebuilding");
            } else if (!rom_matches(lr.rom, cfg.rom.criteria)) {
                m.warnings.push_back("ROM cache '" + cfg.rom.cache + "' has a different order; rebuilding");
            } else {
                m.rom = std::move(lr.rom);
                m.rom_from_cache = true;
            }
        } catch (const FormatError& e) {
            m.warnings.push_back(std::string("ignoring unreadable ROM cache: ") + e.what());
        }
    }
    if (!m.rom) {
        m.rom = build_nrom(*m.fom, cfg.rom.criteria);
        m.rom->source_hash = m.source_hash;
    }
    m.plant = Plant::from_rom(*m.rom);
    return m;
}

ControllerSetup make_controller(const RunConfig& cfg, const Model& model, double gamma) {
    if (!model.rom) throw ConfigError("the adaptive controller needs the modal-form ROM; set rom.enabled = true");
    const auto& rom = *model.rom;
    auto ref = build_reference_model(rom, cfg.controller.damping);
    ref.include_nonlinear = cfg.controller.include_nonlinear_reference;
    if (cfg.controller.Bm) {
        if (cfg.controller.Bm->rows() != rom.A.rows() || cfg.controller.Bm->cols() != rom.Bc.cols())
            throw ConfigError("controller.B_m: expected " + std::to_string(rom.A.rows()) + "x" +
                              std::to_string(rom.Bc.cols()));
        ref.Bm = *cfg.controller.Bm;
    }
    ControllerSetup s;
    s.controller = Controller::make(model.plant, ref, cfg.Q(rom.states()), gamma, cfg.controller.gamma_mode);
    s.matching = ideal_gains(rom.A, rom.Bc, ref.Am, ref.Bm);
    if (cfg.controller.zero_correction) {
        if (cfg.output.output >= rom.C.rows()) throw ConfigError("output.output: no such output row");
        try {
            s.zero_correction = minimum_phase_correct(rom, cfg.output.output);
        } catch (const NumericalError& e) {
            throw ConfigError(std::string("controller.zero_correction: ") + e.what());
        }
        s.controller.initial.K0 = s.zero_correction->K0;
    }
    return s;
}

std::string prepare_output(const RunConfig& cfg) {
    const fs::path dir(cfg.output.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_file((dir / "resolved_config.json").string(), resolved_config_text(cfg));
    return dir.string();
}

}  // namespace gla::cli
