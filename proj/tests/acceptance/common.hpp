#pragma once

#include <gla/plantio.hpp>
#include <gla/sim.hpp>

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Criteria live in two translation units; each returns its verdict and a one-line detail.
Outcome lyapunov_residual();
Outcome linear_tracking();
Outcome model_matching();
Outcome rom_fidelity();
Outcome gamma_trend();
Outcome kussner_eigenvalues();
Outcome minimum_phase();
Outcome lipschitz_monitor();
Outcome one_cosine_exactness();
Outcome von_karman_generator();
Outcome integrator_order();
Outcome determinism();

class Stopwatch {
  public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

class TempDir {
  public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

Csv read_csv(const std::string& path);

// Exit status of the command-line tool run with the given arguments (output discarded).
int run_cli(const std::string& args);
std::string config_path(const std::string& name);

const gla::FullOrderModel& default_fom();
const gla::ReducedOrderModel& default_rom();

std::string fmt(double v, int precision = 3);

}  // namespace acceptance
