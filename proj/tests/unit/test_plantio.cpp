#include <gla/error.hpp>
#include <gla/plantio.hpp>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <filesystem>
#include <random>

using namespace gla;
namespace fs = std::filesystem;

namespace {

class TempDir {
  public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("gla_plantio_" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    fs::path path_;
};

std::string example_text() { return read_file(std::string(GLA_DATA_DIR) + "/example_plant.json"); }

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    if (pos == std::string::npos) throw std::logic_error("pattern not found: " + from);
    return s.replace(pos, from.size(), to);
}

template <class F>
std::string format_error(F&& f) {
    try {
        f();
    } catch (const FormatError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(PlantFile, ExampleLoadsWithProvenance) {
    const std::string path = std::string(GLA_DATA_DIR) + "/example_plant.json";
    const auto b = load_plant(path);
    EXPECT_EQ(b.A.rows(), 4);
    EXPECT_EQ(b.output_labels, (std::vector<std::string>{"tip", "twist"}));
    EXPECT_EQ(b.provenance, sha256_file(path));
    EXPECT_TRUE(b.stable);
    EXPECT_LT(b.spectral_abscissa, 0.0);
    Vector x(4);
    x << 0.5, 0.0, 0.0, 0.0;
    EXPECT_DOUBLE_EQ(b.nonlinear(x)(1), -0.5 * 0.125);
}

TEST(PlantFile, RoundTripIsExact) {
    auto fom = assemble_fom(AerofoilParams{});
    const auto b = ExternalPlantBundle::from_model(fom, "section");
    const auto back = plant_from_text(plant_to_text(b));
    EXPECT_EQ((back.A - b.A).norm(), 0.0);
    EXPECT_EQ((back.Bc - b.Bc).norm(), 0.0);
    EXPECT_EQ((back.Bg - b.Bg).norm(), 0.0);
    EXPECT_EQ((back.C - b.C).norm(), 0.0);
    EXPECT_EQ(back.output_labels, b.output_labels);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd(0.0, 0.3);
    Vector w(14);
    for (int i = 0; i < 14; ++i) w(i) = nd(rng);
    EXPECT_EQ((back.to_model().eval_nonlinear(w) - fom.eval_nonlinear(w)).norm(), 0.0);

    Eigen::EigenSolver<Matrix> e1(b.A, false), e2(back.A, false);
    EXPECT_LE((e1.eigenvalues() - e2.eigenvalues()).norm(), 1e-12);
}

TEST(PlantFile, NewerSchemaFailsClosed) {
    const auto text = replace(example_text(), "\"schema_version\": 1", "\"schema_version\": 2");
    const auto msg = format_error([&] { plant_from_text(text, "p.json"); });
    EXPECT_NE(msg.find("p.json.schema_version"), std::string::npos) << msg;
    EXPECT_NE(msg.find("newer"), std::string::npos) << msg;
}

TEST(PlantFile, CorruptedEntryIsNamed) {
    const auto text = replace(example_text(), "[-1.0, -0.1, 0.5, 0.0]", "[-1.0, \"x\", 0.5, 0.0]");
    const auto msg = format_error([&] { plant_from_text(text, "p.json"); });
    EXPECT_NE(msg.find("A[1][1]"), std::string::npos) << msg;

    const auto short_row = replace(example_text(), "[0.5, 0.0, -4.0, -0.2]", "[0.5, 0.0, -4.0]");
    EXPECT_NE(format_error([&] { plant_from_text(short_row, "p.json"); }).find("A[3]"), std::string::npos);

    const auto missing = replace(example_text(), "\"B_g\"", "\"B_gust\"");
    EXPECT_FALSE(format_error([&] { plant_from_text(missing, "p.json"); }).empty());

    EXPECT_FALSE(format_error([&] { plant_from_text("{ not json", "p.json"); }).empty());
}

TEST(PlantFile, DeclaredStabilityIsVerified) {
    const auto text = replace(example_text(), "\"stable\": true", "\"stable\": false");
    EXPECT_NE(format_error([&] { plant_from_text(text, "p.json"); }).find("stable"), std::string::npos);
    // an unstable plant declared stable
    const auto unstable = replace(example_text(), "[-1.0, -0.1, 0.5, 0.0]", "[-1.0, 0.3, 0.5, 0.0]");
    EXPECT_FALSE(format_error([&] { plant_from_text(unstable, "p.json"); }).empty());
    const auto declared = replace(unstable, "\"stable\": true", "\"stable\": false");
    const auto b = plant_from_text(declared, "p.json");
    EXPECT_FALSE(b.stable);
    EXPECT_GT(b.spectral_abscissa, 0.0);
}

TEST(AerofoilFile, RoundTripAndDefaults) {
    AerofoilParams p;
    p.reduced_velocity = 4.25;
    p.k_alpha3 = 3.5;
    p.aero_scale = 0.5;
    const auto q = aerofoil_params_from_text(aerofoil_params_to_text(p));
    EXPECT_EQ(q.reduced_velocity, 4.25);
    EXPECT_EQ(q.k_alpha3, 3.5);
    EXPECT_EQ(q.aero_scale, 0.5);
    EXPECT_EQ((assemble_fom(q).A - assemble_fom(p).A).norm(), 0.0);

    const auto d = aerofoil_params_from_text(R"({"schema": "gla.aerofoil", "schema_version": 1})");
    EXPECT_EQ((assemble_fom(d).A - assemble_fom(AerofoilParams{}).A).norm(), 0.0);
    EXPECT_EQ((load_aerofoil_params(std::string(GLA_DATA_DIR) + "/aerofoil_default.json").mass_ratio),
              AerofoilParams{}.mass_ratio);
}

TEST(AerofoilFile, InvalidValuesAreFormatErrors) {
    EXPECT_THROW(aerofoil_params_from_text(R"({"schema": "gla.aerofoil", "schema_version": 1, "mass_ratio": -2})"),
                 FormatError);
    EXPECT_THROW(aerofoil_params_from_text(R"({"schema": "gla.plant", "schema_version": 1})"), FormatError);
    EXPECT_THROW(aerofoil_params_from_text(R"({"schema": "gla.aerofoil", "schema_version": 7})"), FormatError);
}

TEST(RomFile, RoundTripPreservesModel) {
    TempDir dir;
    const auto fom = assemble_fom(AerofoilParams{});
    ModeCriteria c;
    c.n = 8;
    const auto rom = build_nrom(fom, c);
    const std::string params = dir.file("params.json");
    save_aerofoil_params(AerofoilParams{}, params);
    save_rom(rom, {params, sha256_file(params)}, dir.file("rom.cbor"));

    const auto loaded = load_rom(dir.file("rom.cbor"));
    EXPECT_FALSE(loaded.stale);
    EXPECT_EQ(loaded.info.source_hash, sha256_file(params));
    const auto& r = loaded.rom;
    EXPECT_EQ((r.A - rom.A).norm(), 0.0);
    EXPECT_EQ((r.Phi - rom.Phi).norm(), 0.0);
    EXPECT_EQ((r.Psi - rom.Psi).norm(), 0.0);
    EXPECT_LE((r.eigenvalues - rom.eigenvalues).norm(), 1e-12);
    Eigen::EigenSolver<Matrix> e1(rom.A, false), e2(r.A, false);
    EXPECT_LE((e1.eigenvalues() - e2.eigenvalues()).norm(), 1e-12);
    Vector x = Vector::Constant(8, 0.05);
    EXPECT_EQ((r.eval_f_nr(x) - rom.eval_f_nr(x)).norm(), 0.0);
}

TEST(RomFile, EditedSourceMarksRomStale) {
    TempDir dir;
    const auto fom = assemble_fom(AerofoilParams{});
    ModeCriteria c;
    c.n = 4;
    const std::string params = dir.file("params.json");
    save_aerofoil_params(AerofoilParams{}, params);
    save_rom(build_nrom(fom, c), {params, sha256_file(params)}, dir.file("rom.cbor"));
    AerofoilParams edited;
    edited.reduced_velocity = 3.0;
    save_aerofoil_params(edited, params);
    const auto loaded = load_rom(dir.file("rom.cbor"));
    EXPECT_TRUE(loaded.stale);
    EXPECT_NE(loaded.warning.find("stale"), std::string::npos);
}

TEST(RomFile, GarbageIsRejected) {
    TempDir dir;
    write_file(dir.file("bad.cbor"), "definitely not cbor");
    EXPECT_THROW(load_rom(dir.file("bad.cbor")), FormatError);
    EXPECT_THROW(load_rom(dir.file("missing.cbor")), Error);
}
