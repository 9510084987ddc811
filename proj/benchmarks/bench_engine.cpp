#include <benchmark/benchmark.h>

#include "armsim/arm_model.hpp"
#include "armsim/lindblad.hpp"
#include "armsim/spectra.hpp"

using namespace armsim;

namespace {

ArmParams model(int n_max, double theta = 0.0) {
    ArmParams p;
    p.omega_r = 5.0;
    p.omega_q = 5.0;
    p.coupling = Polar{0.1, theta};
    p.kappa = 1e-3;
    p.n_max = n_max;
    return p;
}

Liouvillian liouvillian(const ArmParams& p) {
    return build_liouvillian(build_hamiltonian(p), standard_collapses(p.dims(), p.kappa, p.gamma), p.dims());
}

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1);
    return x;
}

}  // namespace

static void BM_BuildLiouvillian(benchmark::State& state) {
    const ArmParams p = model(static_cast<int>(state.range(0)));
    const Operator h = build_hamiltonian(p);
    const auto collapses = standard_collapses(p.dims(), p.kappa, p.gamma);
    for (auto _ : state) benchmark::DoNotOptimize(build_liouvillian(h, collapses, p.dims()));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_SteadyState(benchmark::State& state) {
    const Liouvillian l = liouvillian(model(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(steady_state(l));
}
BENCHMARK(BM_SteadyState)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

// One 400-point probe sweep; the per-point cost is the sparse LU refactorization.
static void BM_ResponseSweep(benchmark::State& state) {
    const ArmParams p = model(static_cast<int>(state.range(0)));
    SweepSpec sweep;
    sweep.probe_grid = grid(4.8, 5.2, 400);
    for (auto _ : state) benchmark::DoNotOptimize(transmission_map(p, sweep, 1));
    state.SetItemsProcessed(state.iterations() * 400);
}
BENCHMARK(BM_ResponseSweep)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_ChiNumeric(benchmark::State& state) {
    ArmParams p = model(static_cast<int>(state.range(0)), 0.5);
    p.omega_q = 8.0;
    for (auto _ : state) benchmark::DoNotOptimize(chi_numeric(p));
}
BENCHMARK(BM_ChiNumeric)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
