#pragma once

#include <gla/aerofoil.hpp>
#include <gla/error.hpp>
#include <gla/gusts.hpp>
#include <gla/mrac.hpp>
#include <gla/rom.hpp>

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gla {

// x' = A x + Bc u + Bg u_d + F(x), with F(x) = Psi F_full(Phi x) (Phi, Psi empty: identity).
class Plant {
  public:
    Plant() = default;
    Plant(Matrix A, Matrix Bc, Matrix Bg, Matrix C, std::vector<std::string> output_labels = {});

    static Plant from_fom(const FullOrderModel& fom);
    static Plant from_rom(const ReducedOrderModel& rom);

    const Matrix& A() const { return A_; }
    const Matrix& Bc() const { return Bc_; }
    const Matrix& Bg() const { return Bg_; }
    const Matrix& C() const { return C_; }
    const std::vector<std::string>& output_labels() const { return labels_; }
    int states() const { return static_cast<int>(A_.rows()); }
    int inputs() const { return static_cast<int>(Bc_.cols()); }

    bool has_nonlinearity() const { return !field_.empty(); }
    void set_nonlinearity(PolynomialField field, Matrix Phi = Matrix(), Matrix Psi = Matrix());
    Vector f(const Vector& x) const;
    void add_f(const Vector& x, Vector& out) const;

  private:
    Matrix A_, Bc_, Bg_, C_;
    std::vector<std::string> labels_;
    PolynomialField field_;
    Matrix Phi_, Psi_;
};

struct SimulationConfig {
    double dt = 0.01;
    double duration = 550.0;
    bool nonlinear = true;
    int stride = 1;
    double divergence_bound = 1e8;
    bool certificate = false;  // needs theta* on the controller
    bool monitor = true;       // Lipschitz monitor on closed-loop runs

    void validate() const;
};

struct Controller {
    ReferenceModel reference;
    LyapunovDesign design;
    ControllerState initial;
    std::optional<Matrix> theta_star;
    Vector r;  // constant reference command, empty means zero

    static Controller make(const Plant& plant, const ReferenceModel& ref, const Matrix& Q, double gamma,
                           GammaMode mode = GammaMode::ScaledQ);
};

struct SimulationTrace {
    std::vector<double> t;
    std::vector<Vector> x;
    std::vector<Vector> xm;
    std::vector<Matrix> theta;
    std::vector<Vector> u;
    std::vector<double> ud;
    std::vector<Vector> y;
    std::vector<double> V;
    std::vector<double> monitor_ratio;
    std::vector<std::string> output_labels;
    std::vector<std::string> warnings;
    std::optional<LipschitzMonitor> monitor;
    bool closed_loop = false;
    bool complete = true;

    std::size_t size() const { return t.size(); }
    std::vector<Vector> errors() const;
};

class SimulationDiverged : public DivergenceError {
  public:
    SimulationDiverged(const std::string& what, SimulationTrace partial);
    const SimulationTrace& partial() const { return *partial_; }

  private:
    std::shared_ptr<const SimulationTrace> partial_;
};

SimulationTrace integrate_open_loop(const Plant& plant, const GustSignal& gust, const SimulationConfig& cfg);
SimulationTrace integrate_closed_loop(const Plant& plant, const Controller& ctrl, const GustSignal& gust,
                                      const SimulationConfig& cfg);

CertificateResult lyapunov_certificate(const SimulationTrace& trace, const LyapunovDesign& design,
                                       const std::optional<Matrix>& theta_star,
                                       CertificateMode mode = CertificateMode::Full);

struct GlaMetrics {
    int output = 0;
    std::string output_label;
    double peak_open = 0.0;
    double peak_closed = 0.0;
    double reduction_percent = 0.0;
    double max_flap = 0.0;  // max |u_c|
    bool flap_in_degrees = true;
    double rms_open = 0.0;
    double rms_closed = 0.0;
    bool settled = false;
};

GlaMetrics compute_metrics(const SimulationTrace& open, const SimulationTrace& closed, int output,
                           bool flap_in_degrees = true);

double peak_abs(const SimulationTrace& trace, int output);

struct RomValidation {
    std::vector<std::string> labels;
    std::vector<double> peak_full, peak_rom;
    std::vector<double> peak_error_percent;  // |peak_rom - peak_full| / peak_full
    std::vector<double> nrms_percent;        // RMS(rom - full) / max|full|
    SimulationTrace full, reduced;
};

RomValidation validate_rom(const FullOrderModel& fom, const ReducedOrderModel& rom, const GustSignal& gust,
                           const SimulationConfig& cfg);

GradientSweepResult sweep_gust_gradient(const Plant& plant, const Controller* ctrl, const std::vector<double>& Hg,
                                        double W0, double U_inf, const SimulationConfig& cfg, int output);

// t, outputs..., u_c..., u_d, V, monitor_ratio
void write_trace_csv(std::ostream& os, const SimulationTrace& trace, bool angles_in_degrees = false);
void write_metrics_csv(std::ostream& os, const std::vector<GlaMetrics>& rows,
                       const std::vector<std::string>& labels = {});
std::string metrics_summary(const GlaMetrics& m);

}  // namespace gla
