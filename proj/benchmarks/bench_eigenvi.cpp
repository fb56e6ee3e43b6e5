// Cost structure of a fit: score evaluation, M assembly (dominant, O(B K^2 D)),
// the eigensolve, and sampling from the result.

#include <benchmark/benchmark.h>

#include "eigenvi/eigenvi.hpp"

namespace {

using namespace eigenvi;

ScoreCache mixture_cache(std::size_t batch) {
  Rng rng(1);
  return draw_scores(*mixture_2d(), Proposal::uniform_box(2, -9, 9), batch, rng);
}

void BM_ScoreEvaluation(benchmark::State& state) {
  const auto target = mixture_2d();
  const auto pi = Proposal::uniform_box(2, -9, 9);
  Rng rng(1);
  const Eigen::MatrixXd z = pi.sample(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_scores(*target, pi, z));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScoreEvaluation)->Arg(10000)->Unit(benchmark::kMillisecond);

// K = order^2 with B = 10 K.
void BM_AssembleM(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const auto basis = ProductBasis::uniform(BasisFamily::hermite(), 2, order);
  const auto cache = mixture_cache(10 * static_cast<std::size_t>(basis.size()));
  AssemblyOptions opts;
  opts.workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_M(basis, cache, opts));
  state.counters["K"] = basis.size();
}
BENCHMARK(BM_AssembleM)->Args({3, 1})->Args({6, 1})->Args({10, 1})->Args({10, 4})->Unit(benchmark::kMillisecond);

void BM_MinEigenpair(benchmark::State& state) {
  const auto n = state.range(0);
  Rng rng(2);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  const Eigen::MatrixXd m = a * a.transpose();
  EigenOptions opts;
  opts.dense_limit = state.range(1) ? 0 : n;
  for (auto _ : state) benchmark::DoNotOptimize(min_eigenpair(m, opts));
}
BENCHMARK(BM_MinEigenpair)->Args({100, 0})->Args({400, 0})->Args({400, 1})->Unit(benchmark::kMillisecond);

void BM_CdfTableBuild(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(CdfTable::build(BasisFamily::hermite(), order));
}
BENCHMARK(BM_CdfTableBuild)->Arg(6)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Sample(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const auto basis = ProductBasis::uniform(BasisFamily::hermite(), 2, order);
  Rng rng(3);
  const OfeDensity q(basis, WeightVector::from_unnormalized(Eigen::VectorXd::Random(basis.size())));
  sample(q, rng, 1);  // builds the cached CDF table outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(sample(q, rng, 1000));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Sample)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
