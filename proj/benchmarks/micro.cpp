#include <benchmark/benchmark.h>

#include "fpump/certificate.hpp"
#include "fpump/gen.hpp"
#include "fpump/lp.hpp"
#include "fpump/projection.hpp"
#include "fpump/pump.hpp"

using namespace fpump;

namespace {

BinaryPoint point_at(int n, std::uint64_t seed) {
  Rng rng(seed);
  BinaryPoint p(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) p.set(static_cast<std::size_t>(j), rng.below(2) == 1);
  return p;
}

}  // namespace

static void BM_RelaxationSolve(benchmark::State& state) {
  TwoStageSpec spec;
  spec.k = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto lp = relaxation(gen_two_stage(spec, rng).instance);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp).objective);
}
BENCHMARK(BM_RelaxationSolve)->Arg(5)->Arg(25)->Arg(45)->Unit(benchmark::kMillisecond);

static void BM_ProjectCold(benchmark::State& state) {
  Rng rng(2);
  const auto g = gen_subset_sum(4, static_cast<int>(state.range(0)), 20, rng);
  const auto t = point_at(g.instance.n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(l1_proj(g.instance, t).distance);
}
BENCHMARK(BM_ProjectCold)->Arg(5)->Arg(20);

static void BM_ProjectWarm(benchmark::State& state) {
  Rng rng(2);
  const auto g = gen_subset_sum(4, static_cast<int>(state.range(0)), 20, rng);
  Projector proj(g.instance);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(proj.project(point_at(g.instance.n, ++seed)).distance);
}
BENCHMARK(BM_ProjectWarm)->Arg(5)->Arg(20);

static void BM_MinCertificate(benchmark::State& state) {
  Rng rng(4);
  std::vector<BlockSpec> specs(3);
  for (auto& s : specs) s.d = 2;
  const auto g = gen_decomposable(specs, rng);
  BinaryPoint x;
  for (std::uint64_t seed = 1;; ++seed) {
    x = point_at(g.instance.n, seed);
    if (!lift(g.instance, x)) break;
  }
  for (auto _ : state) benchmark::DoNotOptimize(min_certificate(g.instance, x).violation);
}
BENCHMARK(BM_MinCertificate);

static void BM_WfpRun(benchmark::State& state) {
  TwoStageSpec spec;
  spec.k = 15;
  Rng gen(5);
  const auto inst = gen_two_stage(spec, gen).instance;
  PumpOptions o;
  o.max_iter = 1000;
  o.record_points = false;
  o.keep_history = false;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(run_algorithm(Algorithm::WfpBase, inst, o, rng).iterations);
  }
}
BENCHMARK(BM_WfpRun)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
