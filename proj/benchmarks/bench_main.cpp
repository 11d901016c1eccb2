#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rewet/block_tridiag.hpp"
#include "rewet/discretization.hpp"
#include "rewet/integrator.hpp"
#include "rewet/params.hpp"

using namespace rewet;

static void BM_RhsAssembly(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    ParameterSet p = preset("base");
    Grid grid(N, p.L);
    FvSystem sys(p, grid);
    std::vector<double> y = sys.initial_state();
    y[0] = p.theta_max;  // wet first cell so fluxes are nontrivial
    std::vector<double> dydt(y.size());
    for (auto _ : state) {
        sys.rhs(0.0, y, dydt);
        benchmark::DoNotOptimize(dydt.data());
    }
    state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_RhsAssembly)->Arg(100)->Arg(400)->Arg(800);

static void BM_FdJacobian(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    ParameterSet p = preset("base");
    Grid grid(N, p.L);
    FvSystem fv(p, grid);
    std::vector<double> y = fv.initial_state();
    y[0] = p.theta_max;
    std::vector<double> f0(y.size());
    fv.rhs(0.0, y, f0);
    OdeSystem sys{N, kNumFields,
                  [&fv](double t, std::span<const double> yy, std::span<double> dy) {
                      fv.rhs(t, yy, dy);
                  },
                  nullptr};
    for (auto _ : state) {
        BlockTridiag J = fd_jacobian(sys, 0.0, y, f0);
        benchmark::DoNotOptimize(&J);
    }
}
BENCHMARK(BM_FdJacobian)->Arg(100)->Arg(400);

static void BM_BlockTridiagSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0)), m = 5;
    BlockTridiag A(n, m);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int b = 0; b < n; ++b)
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                A.diag(b, r, c) = u(rng) + (r == c ? 4.0 : 0.0);
                if (b > 0) A.lower(b, r, c) = u(rng);
                if (b + 1 < n) A.upper(b, r, c) = u(rng);
            }
    std::vector<double> rhs(n * m);
    for (double& v : rhs) v = u(rng);
    for (auto _ : state) {
        BlockTridiagLU lu(A);
        std::vector<double> x = rhs;
        lu.solve(x);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_BlockTridiagSolve)->Arg(100)->Arg(400)->Arg(800);

BENCHMARK_MAIN();
