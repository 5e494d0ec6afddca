#pragma once

#include <gla/numerics.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace gla {

// "1-cosine" discrete gust, zero outside [0, 2 H_g / U_inf].
double one_cosine(double t, double w_gmax, double H_g, double U_inf);

// One-sided vertical Von Karman PSD in (units^2) per Hz at frequency f in Hz.
double von_karman_psd(double f_hz, double sigma_g, double L_g, double U_inf);

// Continuous-time shaping filter: unit-intensity white noise in, vertical turbulence out.
// Classic third-order rational fit times a fractional s^(1/6) stage restoring the -5/3 slope.
struct ShapingFilter {
    Matrix A;
    Vector B;
    RowVector C;
    double max_accurate_x = 3000.0;  // L omega / U up to which the fit holds (0.2 dB)
};
ShapingFilter von_karman_filter(double sigma_g, double L_g, double U_inf);

struct TurbulenceRealization {
    double dt = 0.0;
    std::vector<double> samples;  // w(k dt), k = 0..
    bool spectral_check_warning = false;
    std::string warning;
};

TurbulenceRealization von_karman_realization(double sigma_g, double L_g, double U_inf, double dt, double duration,
                                             std::uint64_t seed);

enum class GustKind { OneCosine, VonKarman, Zero };

GustKind parse_gust_kind(const std::string& s);
std::string to_string(GustKind k);

// Immutable disturbance u_d(t). Stochastic samples are precomputed; evaluation between
// samples is linear, zero past the end of the record.
class GustSignal {
  public:
    static GustSignal zero();
    static GustSignal one_cosine(double w_gmax, double H_g, double U_inf);
    static GustSignal von_karman(double sigma_g, double L_g, double U_inf, double dt, double duration,
                                 std::uint64_t seed);
    static GustSignal sampled(double dt, std::vector<double> samples);

    double operator()(double t) const;
    GustKind kind() const { return kind_; }
    double w_gmax() const { return w_gmax_; }
    double H_g() const { return H_g_; }
    double U_inf() const { return U_inf_; }
    // End of the active window for discrete gusts (0 for zero / stochastic).
    double active_until() const;
    const TurbulenceRealization* realization() const { return record_.get(); }
    GustSignal scaled(double c) const;

  private:
    GustKind kind_ = GustKind::Zero;
    double w_gmax_ = 0.0, H_g_ = 1.0, U_inf_ = 1.0, scale_ = 1.0;
    std::shared_ptr<const TurbulenceRealization> record_;
};

struct GradientSweepRow {
    double H_g;
    double peak;
    bool ok = true;
    std::string error;
};

struct GradientSweepResult {
    double H_g_star = 0.0;
    double peak_star = 0.0;
    std::vector<GradientSweepRow> table;
};

// peak_response(H_g) returns the peak |output| for a 1-cosine gust of that gradient.
GradientSweepResult worst_case_gradient_sweep(const std::function<double(double)>& peak_response,
                                              const std::vector<double>& Hg_range);

void write_gust_csv(std::ostream& os, const GustSignal& g, double dt, double duration);

}  // namespace gla
