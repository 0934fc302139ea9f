#include "monosplit/tools/demos.hpp"
#include "monosplit/tools/generators.hpp"
#include "monosplit/tools/run.hpp"

#include <benchmark/benchmark.h>

using namespace monosplit;
using namespace monosplit::tools;

namespace {

FbfConfig fixed_iterations(std::size_t n) {
  FbfConfig cfg;
  cfg.max_iters = n;
  cfg.residual_tol = 0.0;
  cfg.keep_history = false;
  return cfg;
}

// 100 iterations of the block loops on a random coupled system.
void BM_SystemIterations(benchmark::State& state) {
  Rng rng(static_cast<std::uint64_t>(state.range(0)));
  const auto prob = random_system(rng, 3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_system(prob, fixed_iterations(100)));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SystemIterations)->Arg(2)->Arg(4)->Arg(16);

// The same iterations through the generic product-space engine.
void BM_ProductSpaceEngine(benchmark::State& state) {
  Rng rng(static_cast<std::uint64_t>(state.range(0)));
  const auto prob = random_system(rng, 3, static_cast<int>(state.range(0)));
  const auto [P, Q] = product_space_pair(prob);
  const double beta = compute_beta(prob);
  const auto w0 = BlockVector::zeros(prob.stacked_dims());
  for (auto _ : state) benchmark::DoNotOptimize(fbf_solve(P, Q, beta, w0, fixed_iterations(100)));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_ProductSpaceEngine)->Arg(2)->Arg(4)->Arg(16);

void BM_ParallelSum(benchmark::State& state) {
  Rng rng(3);
  const auto p = random_parallel_sum(rng, 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_parallel_sum(p, fixed_iterations(100)));
}
BENCHMARK(BM_ParallelSum);

void BM_Legendre(benchmark::State& state) {
  Rng rng(5);
  const auto inst = random_legendre(rng, static_cast<int>(state.range(0)), static_cast<int>(2 * state.range(0)));
  FbfConfig cfg;
  cfg.keep_history = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_common_zero(inst.problem, cfg));
}
BENCHMARK(BM_Legendre)->Arg(2)->Arg(5);

// Full demo solves to the default tolerance.
void BM_Demo(benchmark::State& state) {
  const Demo& d = demos().at(static_cast<std::size_t>(state.range(0)));
  const auto pf = parse_problem_string(d.text);
  const auto inst = build_instance(pf);
  const auto cfg = config_from(pf.config);
  state.SetLabel(d.name);
  for (auto _ : state) benchmark::DoNotOptimize(run_instance(inst, cfg));
}
BENCHMARK(BM_Demo)->DenseRange(0, 3);

void BM_PowerIteration(benchmark::State& state) {
  Rng rng(7);
  const int n = static_cast<int>(state.range(0));
  std::vector<LinearEntry> entries;
  for (int j = 0; j < 4; ++j) entries.push_back(LinearEntry::dense(rng.matrix(n, n)));
  const BlockLinearOp L(SpaceSig{{n, n}, {n, n}}, std::move(entries));
  for (auto _ : state) benchmark::DoNotOptimize(lambda_power_iteration(L));
}
BENCHMARK(BM_PowerIteration)->Arg(4)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
