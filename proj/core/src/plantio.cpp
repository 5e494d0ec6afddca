#include <gla/error.hpp>
#include <gla/plantio.hpp>

#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace gla {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) { throw FormatError(where + ": " + msg); }

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field '") + key + "'");
    return j.at(key);
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "non-finite value");
    return v;
}

json matrix_to_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

// Rows of numbers; expected_rows / expected_cols < 0 means "any".
Matrix matrix_from_json(const json& j, const std::string& where, Eigen::Index expected_rows,
                        Eigen::Index expected_cols) {
    if (!j.is_array()) fail(where, "expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (expected_rows >= 0 && rows != expected_rows)
        fail(where, "expected " + std::to_string(expected_rows) + " rows, found " + std::to_string(rows));
    Eigen::Index cols = expected_cols;
    if (rows > 0 && cols < 0) cols = j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : -1;
    if (cols < 0) cols = 0;
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& r = j[static_cast<std::size_t>(i)];
        const std::string wr = where + "[" + std::to_string(i) + "]";
        if (!r.is_array()) fail(wr, "expected a row array");
        if (static_cast<Eigen::Index>(r.size()) != cols)
            fail(wr, "expected " + std::to_string(cols) + " columns, found " + std::to_string(r.size()));
        for (Eigen::Index k = 0; k < cols; ++k)
            M(i, k) = number(r[static_cast<std::size_t>(k)], wr + "[" + std::to_string(k) + "]");
    }
    return M;
}

json poly_to_json(const PolynomialField& f) {
    json terms = json::array();
    for (const auto& t : f.terms()) {
        json idx = json::array({t.idx[0], t.idx[1]});
        if (!t.quadratic()) idx.push_back(t.idx[2]);
        terms.push_back(json{{"row", t.row}, {"coeff", t.coeff}, {"factors", idx}});
    }
    return terms;
}

PolynomialField poly_from_json(const json& j, int dim, const std::string& where) {
    PolynomialField f(dim);
    if (j.is_null()) return f;
    if (!j.is_array()) fail(where, "expected an array of terms");
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string w = where + "[" + std::to_string(k) + "]";
        const auto& t = j[k];
        const auto& row = field(t, "row", w);
        const auto& idx = field(t, "factors", w);
        if (!row.is_number_integer()) fail(w + ".row", "expected an integer");
        if (!idx.is_array() || (idx.size() != 2 && idx.size() != 3)) fail(w + ".factors", "expected 2 or 3 indices");
        for (const auto& i : idx)
            if (!i.is_number_integer()) fail(w + ".factors", "expected integer indices");
        const double c = number(field(t, "coeff", w), w + ".coeff");
        try {
            if (idx.size() == 2)
                f.add_quadratic(row.get<int>(), c, idx[0].get<int>(), idx[1].get<int>());
            else
                f.add_cubic(row.get<int>(), c, idx[0].get<int>(), idx[1].get<int>(), idx[2].get<int>());
        } catch (const InvalidArgument& e) {
            fail(w, e.what());
        }
    }
    return f;
}

void check_schema(const json& j, const char* schema, int version, const std::string& where) {
    const auto& s = field(j, "schema", where);
    if (!s.is_string() || s.get<std::string>() != schema)
        fail(where + ".schema", std::string("expected '") + schema + "'");
    const auto& v = field(j, "schema_version", where);
    if (!v.is_number_integer()) fail(where + ".schema_version", "expected an integer");
    const int got = v.get<int>();
    if (got > version)
        fail(where + ".schema_version",
             "file version " + std::to_string(got) + " is newer than supported version " + std::to_string(version));
    if (got < 1) fail(where + ".schema_version", "invalid version " + std::to_string(got));
}

std::vector<std::string> labels_from_json(const json& j, std::size_t expected, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of strings");
    if (j.size() != expected) fail(where, "expected " + std::to_string(expected) + " labels");
    std::vector<std::string> out;
    for (const auto& s : j) {
        if (!s.is_string()) fail(where, "expected strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << bytes;
    if (!out) throw FormatError("write to '" + path + "' failed");
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw Error("SHA-256 computation failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

FullOrderModel ExternalPlantBundle::to_model() const {
    FullOrderModel m;
    m.A = A;
    m.Bc = Bc;
    m.Bg = Bg;
    m.C = C;
    m.nonlinear = nonlinear.dim() == A.rows() ? nonlinear : PolynomialField(static_cast<int>(A.rows()));
    m.output_labels = output_labels;
    for (Eigen::Index i = 0; i < A.rows(); ++i) m.state_labels.push_back("x" + std::to_string(i));
    return m;
}

ExternalPlantBundle ExternalPlantBundle::from_model(const FullOrderModel& fom, std::string name) {
    ExternalPlantBundle b;
    b.name = std::move(name);
    b.units = "nondimensional";
    b.A = fom.A;
    b.Bc = fom.Bc;
    b.Bg = fom.Bg;
    b.C = fom.C;
    b.output_labels = fom.output_labels;
    b.nonlinear = fom.nonlinear;
    b.spectral_abscissa = gla::spectral_abscissa(fom.A);
    b.stable = b.spectral_abscissa < 0.0;
    return b;
}

std::string plant_to_text(const ExternalPlantBundle& b) {
    json j;
    j["schema"] = "gla.plant";
    j["schema_version"] = kPlantSchemaVersion;
    j["name"] = b.name;
    j["units"] = b.units;
    j["states"] = b.A.rows();
    j["inputs"] = b.Bc.cols();
    j["gust_channels"] = b.Bg.cols();
    j["outputs"] = b.C.rows();
    j["stable"] = b.stable;
    j["A"] = matrix_to_json(b.A);
    j["B_c"] = matrix_to_json(b.Bc);
    j["B_g"] = matrix_to_json(b.Bg);
    j["C_out"] = matrix_to_json(b.C);
    j["output_labels"] = b.output_labels;
    j["nonlinearity"] = poly_to_json(b.nonlinear);
    return j.dump(2) + "\n";
}

ExternalPlantBundle plant_from_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("parse error: ") + e.what());
    }
    check_schema(j, "gla.plant", kPlantSchemaVersion, origin);
    auto count = [&](const char* key) {
        const auto& v = field(j, key, origin);
        if (!v.is_number_integer() || v.get<long long>() < 1) fail(origin + "." + key, "expected a positive integer");
        return static_cast<Eigen::Index>(v.get<long long>());
    };
    const auto n = count("states"), m = count("inputs"), p = count("gust_channels"), q = count("outputs");
    ExternalPlantBundle b;
    if (j.contains("name") && j["name"].is_string()) b.name = j["name"].get<std::string>();
    if (j.contains("units") && j["units"].is_string()) b.units = j["units"].get<std::string>();
    b.A = matrix_from_json(field(j, "A", origin), origin + ".A", n, n);
    b.Bc = matrix_from_json(field(j, "B_c", origin), origin + ".B_c", n, m);
    b.Bg = matrix_from_json(field(j, "B_g", origin), origin + ".B_g", n, p);
    b.C = matrix_from_json(field(j, "C_out", origin), origin + ".C_out", q, n);
    if (j.contains("output_labels")) {
        b.output_labels = labels_from_json(j["output_labels"], static_cast<std::size_t>(q), origin + ".output_labels");
    } else {
        for (Eigen::Index i = 0; i < q; ++i) b.output_labels.push_back("y" + std::to_string(i));
    }
    b.nonlinear = poly_from_json(j.contains("nonlinearity") ? j["nonlinearity"] : json(), static_cast<int>(n),
                                 origin + ".nonlinearity");
    const auto& st = field(j, "stable", origin);
    if (!st.is_boolean()) fail(origin + ".stable", "expected a boolean");
    b.stable = st.get<bool>();
    b.spectral_abscissa = gla::spectral_abscissa(b.A);
    if (b.stable != (b.spectral_abscissa < 0.0)) {
        std::ostringstream os;
        os << "declared stable=" << (b.stable ? "true" : "false") << " but the spectral abscissa is "
           << b.spectral_abscissa;
        fail(origin + ".stable", os.str());
    }
    return b;
}

ExternalPlantBundle load_plant(const std::string& path) {
    const std::string text = read_file(path);
    auto b = plant_from_text(text, path);
    b.provenance = sha256_hex(text);
    return b;
}

void save_plant(const ExternalPlantBundle& bundle, const std::string& path) { write_file(path, plant_to_text(bundle)); }

std::string aerofoil_params_to_text(const AerofoilParams& p) {
    json j;
    j["schema"] = "gla.aerofoil";
    j["schema_version"] = kAerofoilSchemaVersion;
    j["reduced_velocity"] = p.reduced_velocity;
    j["mass_ratio"] = p.mass_ratio;
    j["a"] = p.a;
    j["c"] = p.c;
    j["x_alpha"] = p.x_alpha;
    j["r_alpha"] = p.r_alpha;
    j["x_beta"] = p.x_beta;
    j["r_beta_sq"] = p.r_beta_sq;
    j["omega_xi_ratio"] = p.omega_xi_ratio;
    j["omega_beta_ratio"] = p.omega_beta_ratio;
    j["damping"] = {{"zeta_alpha", p.zeta_alpha}, {"zeta_xi", p.zeta_xi}, {"zeta_beta", p.zeta_beta}};
    j["stiffness"] = {{"k_alpha1", p.k_alpha1}, {"k_xi1", p.k_xi1},       {"k_alpha2", p.k_alpha2},
                      {"k_xi2", p.k_xi2},       {"k_alpha3", p.k_alpha3}, {"k_xi3", p.k_xi3}};
    j["aero_scale"] = p.aero_scale;
    j["lags"] = {{"wagner_weights", p.lags.wagner_weights},
                 {"wagner_rates", p.lags.wagner_rates},
                 {"kussner_lift_rate", p.lags.kussner_lift_rate},
                 {"kussner_hinge_rate", p.lags.kussner_hinge_rate}};
    return j.dump(2) + "\n";
}

AerofoilParams aerofoil_params_from_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("parse error: ") + e.what());
    }
    check_schema(j, "gla.aerofoil", kAerofoilSchemaVersion, origin);
    AerofoilParams p;
    auto opt = [&](const json& obj, const char* key, double& out, const std::string& where) {
        if (obj.contains(key)) out = number(obj.at(key), where + "." + key);
    };
    opt(j, "reduced_velocity", p.reduced_velocity, origin);
    opt(j, "mass_ratio", p.mass_ratio, origin);
    opt(j, "a", p.a, origin);
    opt(j, "c", p.c, origin);
    opt(j, "x_alpha", p.x_alpha, origin);
    opt(j, "r_alpha", p.r_alpha, origin);
    opt(j, "x_beta", p.x_beta, origin);
    opt(j, "r_beta_sq", p.r_beta_sq, origin);
    opt(j, "omega_xi_ratio", p.omega_xi_ratio, origin);
    opt(j, "omega_beta_ratio", p.omega_beta_ratio, origin);
    opt(j, "aero_scale", p.aero_scale, origin);
    if (j.contains("damping")) {
        const auto& d = j["damping"];
        const std::string w = origin + ".damping";
        opt(d, "zeta_alpha", p.zeta_alpha, w);
        opt(d, "zeta_xi", p.zeta_xi, w);
        opt(d, "zeta_beta", p.zeta_beta, w);
    }
    if (j.contains("stiffness")) {
        const auto& s = j["stiffness"];
        const std::string w = origin + ".stiffness";
        opt(s, "k_alpha1", p.k_alpha1, w);
        opt(s, "k_xi1", p.k_xi1, w);
        opt(s, "k_alpha2", p.k_alpha2, w);
        opt(s, "k_xi2", p.k_xi2, w);
        opt(s, "k_alpha3", p.k_alpha3, w);
        opt(s, "k_xi3", p.k_xi3, w);
    }
    if (j.contains("lags")) {
        const auto& l = j["lags"];
        const std::string w = origin + ".lags";
        auto vec = [&](const char* key, std::vector<double>& out) {
            if (!l.contains(key)) return;
            const auto& a = l.at(key);
            if (!a.is_array()) fail(w + "." + key, "expected an array");
            out.clear();
            for (std::size_t k = 0; k < a.size(); ++k)
                out.push_back(number(a[k], w + "." + key + "[" + std::to_string(k) + "]"));
        };
        vec("wagner_weights", p.lags.wagner_weights);
        vec("wagner_rates", p.lags.wagner_rates);
        opt(l, "kussner_lift_rate", p.lags.kussner_lift_rate, w);
        opt(l, "kussner_hinge_rate", p.lags.kussner_hinge_rate, w);
    }
    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        fail(origin, e.what());
    }
    return p;
}

AerofoilParams load_aerofoil_params(const std::string& path) {
    return aerofoil_params_from_text(read_file(path), path);
}

void save_aerofoil_params(const AerofoilParams& p, const std::string& path) {
    write_file(path, aerofoil_params_to_text(p));
}

void save_rom(const ReducedOrderModel& rom, const RomFileInfo& info, const std::string& path) {
    json j;
    j["schema"] = "gla.rom";
    j["schema_version"] = kRomSchemaVersion;
    j["n"] = rom.A.rows();
    j["N"] = rom.Phi.rows();
    j["A"] = matrix_to_json(rom.A);
    j["B_c"] = matrix_to_json(rom.Bc);
    j["B_g"] = matrix_to_json(rom.Bg);
    j["C_out"] = matrix_to_json(rom.C);
    j["Phi"] = matrix_to_json(rom.Phi);
    j["Psi"] = matrix_to_json(rom.Psi);
    json ev = json::array();
    for (Eigen::Index i = 0; i < rom.eigenvalues.size(); ++i)
        ev.push_back(json::array({rom.eigenvalues(i).real(), rom.eigenvalues(i).imag()}));
    j["eigenvalues"] = ev;
    json modes = json::array();
    for (const auto& m : rom.modes)
        modes.push_back(json{{"eigenvalue", json::array({m.eigenvalue.real(), m.eigenvalue.imag()})},
                             {"frequency", m.frequency},
                             {"damping_ratio", m.damping_ratio},
                             {"kind", m.kind == ModeKind::Real ? "real" : "oscillatory"},
                             {"source_index", m.source_index},
                             {"gust_participation", m.gust_participation},
                             {"control_participation", m.control_participation}});
    j["modes"] = modes;
    j["output_labels"] = rom.output_labels;
    j["nonlinearity"] = poly_to_json(rom.full_nonlinear);
    j["source"] = {{"path", info.source_path}, {"sha256", info.source_hash}};
    const auto bytes = json::to_cbor(j);
    write_file(path, std::string(bytes.begin(), bytes.end()));
}

LoadedRom load_rom(const std::string& path) {
    const std::string bytes = read_file(path);
    json j;
    try {
        j = json::from_cbor(bytes);
    } catch (const json::exception& e) {
        fail(path, std::string("not a ROM container: ") + e.what());
    }
    check_schema(j, "gla.rom", kRomSchemaVersion, path);
    auto count = [&](const char* key) {
        const auto& v = field(j, key, path);
        if (!v.is_number_integer() || v.get<long long>() < 1) fail(path + "." + key, "expected a positive integer");
        return static_cast<Eigen::Index>(v.get<long long>());
    };
    const auto n = count("n"), N = count("N");
    LoadedRom out;
    auto& r = out.rom;
    r.A = matrix_from_json(field(j, "A", path), path + ".A", n, n);
    r.Bc = matrix_from_json(field(j, "B_c", path), path + ".B_c", n, -1);
    r.Bg = matrix_from_json(field(j, "B_g", path), path + ".B_g", n, -1);
    r.C = matrix_from_json(field(j, "C_out", path), path + ".C_out", -1, n);
    r.Phi = matrix_from_json(field(j, "Phi", path), path + ".Phi", N, n);
    r.Psi = matrix_from_json(field(j, "Psi", path), path + ".Psi", n, N);
    const auto& ev = field(j, "eigenvalues", path);
    if (!ev.is_array() || static_cast<Eigen::Index>(ev.size()) != n) fail(path + ".eigenvalues", "expected n entries");
    r.eigenvalues.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& e = ev[static_cast<std::size_t>(i)];
        const std::string w = path + ".eigenvalues[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2) fail(w, "expected [re, im]");
        r.eigenvalues(i) = Complex(number(e[0], w), number(e[1], w));
    }
    const auto& modes = field(j, "modes", path);
    if (!modes.is_array()) fail(path + ".modes", "expected an array");
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const auto& m = modes[k];
        const std::string w = path + ".modes[" + std::to_string(k) + "]";
        ModeInfo mi;
        const auto& e = field(m, "eigenvalue", w);
        if (!e.is_array() || e.size() != 2) fail(w + ".eigenvalue", "expected [re, im]");
        mi.eigenvalue = Complex(number(e[0], w), number(e[1], w));
        mi.frequency = number(field(m, "frequency", w), w + ".frequency");
        mi.damping_ratio = number(field(m, "damping_ratio", w), w + ".damping_ratio");
        const auto& kind = field(m, "kind", w);
        if (!kind.is_string()) fail(w + ".kind", "expected a string");
        mi.kind = kind.get<std::string>() == "real" ? ModeKind::Real : ModeKind::Oscillatory;
        const auto& si = field(m, "source_index", w);
        if (!si.is_number_integer()) fail(w + ".source_index", "expected an integer");
        mi.source_index = si.get<int>();
        mi.gust_participation = number(field(m, "gust_participation", w), w);
        mi.control_participation = number(field(m, "control_participation", w), w);
        r.modes.push_back(mi);
    }
    r.output_labels = labels_from_json(field(j, "output_labels", path), static_cast<std::size_t>(r.C.rows()),
                                       path + ".output_labels");
    r.full_nonlinear = poly_from_json(j.contains("nonlinearity") ? j["nonlinearity"] : json(), static_cast<int>(N),
                                      path + ".nonlinearity");
    if (j.contains("source")) {
        const auto& s = j["source"];
        if (s.contains("path") && s["path"].is_string()) out.info.source_path = s["path"].get<std::string>();
        if (s.contains("sha256") && s["sha256"].is_string()) out.info.source_hash = s["sha256"].get<std::string>();
    }
    r.source_hash = out.info.source_hash;
    if (!out.info.source_path.empty() && std::filesystem::exists(out.info.source_path)) {
        const auto now = sha256_file(out.info.source_path);
        if (now != out.info.source_hash) {
            out.stale = true;
            out.warning = "ROM '" + path + "' is stale: parameter file '" + out.info.source_path +
                          "' changed since the ROM was built";
        }
    }
    return out;
}

}  // namespace gla
