#include <gla/gusts.hpp>
#include <gla/mrac.hpp>
#include <gla/rom.hpp>
#include <gla/sim.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace gla;

namespace {

Matrix stable_matrix(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = nd(rng);
    // shift left of the spectral abscissa
    return M - (spectral_abscissa(M) + 0.5) * Matrix::Identity(n, n);
}

const FullOrderModel& fom() {
    static const FullOrderModel m = assemble_fom(AerofoilParams{});
    return m;
}

}  // namespace

static void BM_Lyapunov(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix A = stable_matrix(n, 7);
    const Matrix Q = Matrix::Identity(n, n);
    for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(A, Q));
}
BENCHMARK(BM_Lyapunov)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

static void BM_AssembleFom(benchmark::State& state) {
    const AerofoilParams p;
    for (auto _ : state) benchmark::DoNotOptimize(assemble_fom(p));
}
BENCHMARK(BM_AssembleFom);

static void BM_BuildRom(benchmark::State& state) {
    ModeCriteria c;
    c.n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_nrom(fom(), c));
}
BENCHMARK(BM_BuildRom)->Arg(4)->Arg(8)->Arg(14);

// Coupled plant / reference / adaptation integration, reported per RK4 step.
static void BM_ClosedLoopSteps(benchmark::State& state) {
    ModeCriteria c;
    c.n = 8;
    const auto rom = build_nrom(fom(), c);
    const Plant plant = Plant::from_rom(rom);
    const auto ctrl = Controller::make(plant, build_reference_model(rom, DampingSpec{}), Matrix::Identity(8, 8), 0.5);
    SimulationConfig cfg;
    cfg.duration = 10.0;
    cfg.nonlinear = state.range(0) != 0;
    cfg.stride = 100;
    const auto gust = GustSignal::one_cosine(0.14, 5.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_closed_loop(plant, ctrl, gust, cfg));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_ClosedLoopSteps)->Arg(0)->Arg(1);

static void BM_FullOrderOpenLoop(benchmark::State& state) {
    const Plant plant = Plant::from_fom(fom());
    SimulationConfig cfg;
    cfg.duration = 10.0;
    cfg.stride = 100;
    const auto gust = GustSignal::one_cosine(0.14, 5.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_open_loop(plant, gust, cfg));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_FullOrderOpenLoop);

static void BM_VonKarmanRealization(benchmark::State& state) {
    const double duration = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(von_karman_realization(1.0, 200.0, 59.0, 0.05, duration, 3));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(duration / 0.05));
}
BENCHMARK(BM_VonKarmanRealization)->Arg(200)->Arg(2000);

static void BM_MinimumPhaseCorrection(benchmark::State& state) {
    // companion plant (s - 1)(s + 4) / ((s + 1)(s + 2)(s + 3))
    Matrix A(3, 3);
    A << 0, 1, 0, 0, 0, 1, -6, -11, -6;
    Matrix b(3, 1);
    b << 0, 0, 1;
    RowVector c(3);
    c << -4, 3, 1;
    for (auto _ : state) benchmark::DoNotOptimize(minimum_phase_correct(A, b, c));
}
BENCHMARK(BM_MinimumPhaseCorrection);
BENCHMARK_MAIN();
