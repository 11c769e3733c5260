#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dsproj/admm.hpp"
#include "dsproj/baselines.hpp"

namespace {

using namespace dsproj;

SymmetricSparseMatrix banded(int n, int bandwidth) {
  std::vector<Entry> entries;
  for (int col = 1; col <= n; ++col)
    for (int row = std::max(1, col - bandwidth); row <= col; ++row)
      entries.push_back({row, col, 1.0 / (1.0 + col - row)});
  return SymmetricSparseMatrix::from_upper_entries(n, std::move(entries));
}

ReducedProblem reduce(const SymmetricSparseMatrix& m) {
  ProblemSpec spec;
  spec.matrix = m;
  return build_reduced_problem(spec);
}

void BM_ApplyA(benchmark::State& state) {
  const auto rp = reduce(banded(static_cast<int>(state.range(0)), 5));
  Eigen::VectorXd x = Eigen::VectorXd::Random(rp.m()).cwiseAbs();
  Eigen::VectorXd out(rp.n());
  for (auto _ : state) {
    rp.apply_A(x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * rp.m());
}
BENCHMARK(BM_ApplyA)->Arg(1 << 12)->Arg(1 << 15)->Arg(1 << 18);

void BM_AssembleReducedMatrix(benchmark::State& state) {
  const auto rp = reduce(banded(static_cast<int>(state.range(0)), 5));
  for (auto _ : state) {
    auto sys = assemble_reduced_matrix(rp, 1.0, 1.0);
    benchmark::DoNotOptimize(sys.matrix.valuePtr());
  }
  state.SetItemsProcessed(state.iterations() * rp.m());
}
BENCHMARK(BM_AssembleReducedMatrix)->Arg(1 << 12)->Arg(1 << 15)->Arg(1 << 18);

void BM_CholeskyFactorize(benchmark::State& state) {
  const auto rp = reduce(banded(static_cast<int>(state.range(0)), 5));
  const auto sys = assemble_reduced_matrix(rp, 1.0, 1.0);
  for (auto _ : state) {
    CholeskyFactor factor(sys);
    benchmark::DoNotOptimize(&factor);
  }
}
BENCHMARK(BM_CholeskyFactorize)->Arg(1 << 12)->Arg(1 << 15);

void BM_AdmmIteration(benchmark::State& state) {
  const auto m = banded(static_cast<int>(state.range(0)), 5);
  const auto rp = reduce(m);
  SolverConfig cfg;
  cfg.backend.kind = state.range(1) == 0 ? BackendKind::kCholesky
                                         : BackendKind::kConjugateGradient;
  const KktSolver kkt(rp, cfg.rho, cfg.sigma, cfg.backend);
  SolverState st = make_initial_state(rp);
  for (auto _ : state) {
    admm_step(st, rp, cfg, kkt);
    benchmark::DoNotOptimize(st.x.data());
  }
  state.SetItemsProcessed(state.iterations() * rp.m());
}
BENCHMARK(BM_AdmmIteration)
    ->Args({1 << 12, 0})
    ->Args({1 << 15, 0})
    ->Args({1 << 12, 1})
    ->Args({1 << 15, 1});

void BM_ShermanMorrisonKkt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<Entry> entries;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.01, 1.0);
  for (int col = 1; col <= n; ++col)
    for (int row = 1; row <= col; ++row) entries.push_back({row, col, unif(rng)});
  const auto rp =
      reduce(SymmetricSparseMatrix::from_upper_entries(n, std::move(entries)));
  LinearBackend backend;
  backend.kind = BackendKind::kShermanMorrison;
  const KktSolver kkt(rp, 1.0, 1.0, backend);
  Eigen::VectorXd r = Eigen::VectorXd::Random(rp.m());
  Eigen::VectorXd xt, zt;
  for (auto _ : state) {
    kkt.solve(r, xt, zt);
    benchmark::DoNotOptimize(xt.data());
  }
  state.SetItemsProcessed(state.iterations() * rp.m());
}
BENCHMARK(BM_ShermanMorrisonKkt)->Arg(256)->Arg(512);

void BM_SinkhornBalance(benchmark::State& state) {
  const auto m = banded(static_cast<int>(state.range(0)), 5);
  const Eigen::VectorXd target = Eigen::VectorXd::Ones(m.n());
  for (auto _ : state) {
    auto result = sinkhorn_balance(m, target, 1e-8, 10'000);
    benchmark::DoNotOptimize(result.d.data());
  }
}
BENCHMARK(BM_SinkhornBalance)->Arg(1 << 12);

}  // namespace

BENCHMARK_MAIN();
