#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fpump/model.hpp"
#include "fpump/pump.hpp"

namespace fpump {

/// exp(mean(ln(v + shift))) - shift. Throws InvalidArgument for a
/// non-positive shift or a negative value; an empty list gives 0.
double shifted_geomean(std::span<const double> values, double shift);

struct BenchConfig {
  std::vector<MixedBinaryInstance> instances;
  std::vector<Algorithm> algorithms;
  std::vector<std::uint64_t> seeds;
  int max_iter = 1000;
  /// Wall-clock seconds per run; <= 0 disables the limit.
  double time_limit = 60.0;
  int l = 2;
  TTRange tt_range{};
  double time_shift = 1.0;
  double iter_shift = 1.0;
  /// Worker threads; 0 reads FPUMP_WORKERS and falls back to 1.
  int workers = 0;
};

struct RunRow {
  std::string instance;
  int instance_index = 0;
  Algorithm algorithm = Algorithm::Original;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::IterLimit;
  int iterations = 0;
  int perturbations = 0;
  int restarts = 0;
  double wall_time = 0.0;
  std::string error;
};

struct SeedSummary {
  int found = 0;
  double sgm_time = 0.0;
  double sgm_iterations = 0.0;
};

struct BenchTable {
  int instance_count = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<Algorithm> algorithms;
  /// cells[s][a] for seeds[s], algorithms[a].
  std::vector<std::vector<SeedSummary>> cells;
  /// Cross-seed means per algorithm.
  std::vector<SeedSummary> average;
  double time_shift = 1.0;
  double iter_shift = 1.0;
};

struct BenchResult {
  /// Sorted by (instance, algorithm, seed).
  std::vector<RunRow> rows;
  BenchTable table;
};

/// Seed actually handed to the Rng of a run: the same for every algorithm
/// on a given (seed, instance) pair.
std::uint64_t run_seed(std::uint64_t seed, int instance_index);

BenchResult run_benchmark(const BenchConfig& config);

BenchTable aggregate(const std::vector<RunRow>& rows, const BenchConfig& config);

/// Columns: instance,algorithm,seed,outcome,iterations,perturbations,
/// restarts,wall_time. Without timing the last column is dropped.
void write_csv(std::ostream& out, const std::vector<RunRow>& rows,
               bool include_time = true);

/// Seed rows, then averages and the relative change of every algorithm
/// against the first one.
void write_table(std::ostream& out, const BenchTable& table);

int worker_count(int requested);

/// Monte Carlo check of a runtime bound on generated subset-sum instances.
///   T1: mbWalkSAT (l = 1) from a uniform start, k blocks of n columns.
///   T2: WFP (l = 2), k blocks of n columns.
///   T3: mbWalkSAT (l = 1) with budget `t3_iterations`, tail compared.
///   T5: WFP (l = 2) with the cap 2T computed from the total n.
/// Run i draws its instance from derive_seed(seed, 2i) and its walk from
/// derive_seed(seed, 2i + 1).
struct BoundCheckSpec {
  Theorem theorem = Theorem::T1;
  int k = 1;
  int n = 3;
  int runs = 200;
  double delta = 0.1;
  std::uint64_t seed = 1;
  int coeff_max = 20;
  /// Iteration caps above this are clamped.
  double cap_limit = 1e6;
  double t3_iterations = 0.0;
};

struct BoundCheckResult {
  BoundReport bound;
  /// Iterations each run was allowed.
  int cap = 0;
  int runs = 0;
  int failures = 0;
  int errors = 0;
  /// Failure probability the bound promises (delta, or the T3 tail).
  double allowed = 0.0;
  double failure_rate = 0.0;
  /// Binomial standard deviation at `allowed`.
  double sigma = 0.0;
  double median_iterations = 0.0;
  bool pass = false;
};

BoundCheckResult verify_bound(const BoundCheckSpec& spec);

}  // namespace fpump
