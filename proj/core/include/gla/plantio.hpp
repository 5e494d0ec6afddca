#pragma once

#include <gla/aerofoil.hpp>
#include <gla/rom.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gla {

constexpr int kPlantSchemaVersion = 1;
constexpr int kRomSchemaVersion = 1;
constexpr int kAerofoilSchemaVersion = 1;

struct ExternalPlantBundle {
    std::string name;
    std::string units;
    std::string provenance;  // SHA-256 of the file the bundle was loaded from (empty when built in memory)
    Matrix A, Bc, Bg, C;
    std::vector<std::string> output_labels;
    PolynomialField nonlinear;
    bool stable = true;  // declared flag, verified against the spectrum on load
    double spectral_abscissa = 0.0;

    FullOrderModel to_model() const;
    static ExternalPlantBundle from_model(const FullOrderModel& fom, std::string name);
};

ExternalPlantBundle load_plant(const std::string& path);
void save_plant(const ExternalPlantBundle& bundle, const std::string& path);
std::string plant_to_text(const ExternalPlantBundle& bundle);
ExternalPlantBundle plant_from_text(const std::string& text, const std::string& origin = "<memory>");

AerofoilParams load_aerofoil_params(const std::string& path);
void save_aerofoil_params(const AerofoilParams& p, const std::string& path);
std::string aerofoil_params_to_text(const AerofoilParams& p);
AerofoilParams aerofoil_params_from_text(const std::string& text, const std::string& origin = "<memory>");

struct RomFileInfo {
    std::string source_path;  // parameter file the ROM was built from
    std::string source_hash;
};

struct LoadedRom {
    ReducedOrderModel rom;
    RomFileInfo info;
    bool stale = false;
    std::string warning;
};

// Binary CBOR container.
void save_rom(const ReducedOrderModel& rom, const RomFileInfo& info, const std::string& path);
LoadedRom load_rom(const std::string& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace gla
