#include "fpump/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "fpump/certificate.hpp"
#include "fpump/errors.hpp"
#include "fpump/gen.hpp"

namespace fpump {

double shifted_geomean(std::span<const double> values, double shift) {
  if (!(shift > 0.0)) throw InvalidArgument("shift must be positive");
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) {
    if (v < 0.0) throw InvalidArgument("shifted geomean of a negative value");
    sum += std::log(v + shift);
  }
  return std::exp(sum / static_cast<double>(values.size())) - shift;
}

std::uint64_t run_seed(std::uint64_t seed, int instance_index) {
  return derive_seed(seed, static_cast<std::uint64_t>(instance_index));
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FPUMP_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

namespace {

struct Job {
  int instance;
  int algorithm;
  int seed;
};

RunRow run_one(const BenchConfig& config, const Job& job) {
  using Clock = std::chrono::steady_clock;
  const auto& inst = config.instances[static_cast<std::size_t>(job.instance)];
  RunRow row;
  row.instance = inst.name;
  row.instance_index = job.instance;
  row.algorithm = config.algorithms[static_cast<std::size_t>(job.algorithm)];
  row.seed = config.seeds[static_cast<std::size_t>(job.seed)];

  PumpOptions opt;
  opt.max_iter = config.max_iter;
  opt.l = config.l;
  opt.tt_range = config.tt_range;
  opt.record_points = false;
  opt.keep_history = false;
  const auto start = Clock::now();
  if (config.time_limit > 0.0) {
    const auto deadline =
        start + std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(config.time_limit));
    opt.should_stop = [deadline] { return Clock::now() >= deadline; };
  }
  Rng rng(run_seed(row.seed, job.instance));
  try {
    const PumpTrace trace = run_algorithm(row.algorithm, inst, opt, rng);
    row.outcome = trace.outcome;
    row.iterations = trace.iterations;
    row.perturbations = trace.perturbations;
    row.restarts = trace.restarts;
    row.error = trace.error;
  } catch (const std::exception& e) {
    row.outcome = Outcome::Error;
    row.error = e.what();
  }
  row.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return row;
}

}  // namespace

BenchResult run_benchmark(const BenchConfig& config) {
  if (config.algorithms.empty()) throw InvalidArgument("bench: no algorithms");
  if (config.seeds.empty()) throw InvalidArgument("bench: no seeds");
  std::vector<Job> jobs;
  for (int i = 0; i < static_cast<int>(config.instances.size()); ++i) {
    for (int a = 0; a < static_cast<int>(config.algorithms.size()); ++a) {
      for (int s = 0; s < static_cast<int>(config.seeds.size()); ++s) {
        jobs.push_back({i, a, s});
      }
    }
  }
  std::vector<RunRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      rows[j] = run_one(config, jobs[j]);
    }
  };
  const int workers =
      std::min<int>(worker_count(config.workers), std::max<int>(1, static_cast<int>(jobs.size())));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  // Jobs were laid out in (instance, algorithm, seed) order already.
  BenchResult result;
  result.table = aggregate(rows, config);
  result.rows = std::move(rows);
  return result;
}

BenchTable aggregate(const std::vector<RunRow>& rows, const BenchConfig& config) {
  BenchTable table;
  table.instance_count = static_cast<int>(config.instances.size());
  table.seeds = config.seeds;
  table.algorithms = config.algorithms;
  table.time_shift = config.time_shift;
  table.iter_shift = config.iter_shift;
  const std::size_t ns = config.seeds.size();
  const std::size_t na = config.algorithms.size();
  table.cells.assign(ns, std::vector<SeedSummary>(na));
  table.average.assign(na, SeedSummary{});
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      std::vector<double> times;
      std::vector<double> iters;
      int found = 0;
      for (const auto& r : rows) {
        if (r.seed != config.seeds[s] || r.algorithm != config.algorithms[a]) continue;
        times.push_back(r.wall_time);
        iters.push_back(r.iterations);
        if (r.outcome == Outcome::Found) ++found;
      }
      SeedSummary& cell = table.cells[s][a];
      cell.found = found;
      cell.sgm_time = shifted_geomean(times, config.time_shift);
      cell.sgm_iterations = shifted_geomean(iters, config.iter_shift);
    }
  }
  for (std::size_t a = 0; a < na; ++a) {
    double f = 0.0;
    double t = 0.0;
    double it = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      f += table.cells[s][a].found;
      t += table.cells[s][a].sgm_time;
      it += table.cells[s][a].sgm_iterations;
    }
    const double d = ns > 0 ? static_cast<double>(ns) : 1.0;
    table.average[a] = {static_cast<int>(std::lround(f / d)), t / d, it / d};
  }
  return table;
}

void write_csv(std::ostream& out, const std::vector<RunRow>& rows,
               bool include_time) {
  out << "instance,algorithm,seed,outcome,iterations,perturbations,restarts";
  if (include_time) out << ",wall_time";
  out << "\n";
  for (const auto& r : rows) {
    out << r.instance << ',' << to_string(r.algorithm) << ',' << r.seed << ','
        << to_string(r.outcome) << ',' << r.iterations << ',' << r.perturbations
        << ',' << r.restarts;
    if (include_time) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", r.wall_time);
      out << ',' << buf;
    }
    out << "\n";
  }
}

void write_table(std::ostream& out, const BenchTable& table) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# %d instances, sgm shift: time %g, itr %g\n",
                table.instance_count, table.time_shift, table.iter_shift);
  out << buf;
  out << "seed  ";
  for (Algorithm a : table.algorithms) {
    std::snprintf(buf, sizeof buf, "| %-26s", to_string(a));
    out << buf;
  }
  out << "\n      ";
  for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
    out << "| # found  time (s)     itr. ";
  }
  out << "\n";
  auto cell = [&](const SeedSummary& c, bool avg_found, double found_avg) {
    if (avg_found) {
      std::snprintf(buf, sizeof buf, "| %6.1f %10.4f %9.2f ", found_avg, c.sgm_time,
                    c.sgm_iterations);
    } else {
      std::snprintf(buf, sizeof buf, "| %6d %10.4f %9.2f ", c.found, c.sgm_time,
                    c.sgm_iterations);
    }
    out << buf;
  };
  for (std::size_t s = 0; s < table.seeds.size(); ++s) {
    std::snprintf(buf, sizeof buf, "%-6llu", static_cast<unsigned long long>(table.seeds[s]));
    out << buf;
    for (std::size_t a = 0; a < table.algorithms.size(); ++a) cell(table.cells[s][a], false, 0);
    out << "\n";
  }
  if (table.seeds.empty()) return;
  out << "avg   ";
  std::vector<double> found_avg(table.algorithms.size(), 0.0);
  for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
    for (const auto& row : table.cells) found_avg[a] += row[a].found;
    found_avg[a] /= static_cast<double>(table.seeds.size());
    cell(table.average[a], true, found_avg[a]);
  }
  out << "\n";
  if (table.algorithms.size() < 2) return;
  out << "delta ";
  auto pct = [](double v, double base) {
    return base != 0.0 ? 100.0 * (v - base) / base : 0.0;
  };
  for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
    if (a == 0) {
      out << "|                            ";
      continue;
    }
    std::snprintf(buf, sizeof buf, "| %+5.0f%% %+9.0f%% %+8.0f%% ",
                  pct(found_avg[a], found_avg[0]),
                  pct(table.average[a].sgm_time, table.average[0].sgm_time),
                  pct(table.average[a].sgm_iterations, table.average[0].sgm_iterations));
    out << buf;
  }
  out << "\n";
}

BoundCheckResult verify_bound(const BoundCheckSpec& spec) {
  if (spec.k < 1 || spec.n < 1 || spec.runs < 1) {
    throw InvalidArgument("verify_bound: k, n and runs must be positive");
  }
  BoundParams params;
  params.delta = spec.delta;
  const std::vector<int> blocks(static_cast<std::size_t>(spec.k), spec.n);
  switch (spec.theorem) {
    case Theorem::T1:
      params.n = blocks;
      params.l = 1;
      break;
    case Theorem::T2:
      params.n = blocks;
      params.l = 2;
      break;
    case Theorem::T3:
      params.n = {spec.k * spec.n};
      params.l = 1;
      params.iterations = spec.t3_iterations;
      if (!(spec.t3_iterations >= 1.0)) {
        throw InvalidArgument("verify_bound: T3 needs an iteration budget");
      }
      break;
    case Theorem::T5:
      params.n = {spec.k * spec.n};
      params.l = 2;
      break;
  }

  BoundCheckResult res;
  res.runs = spec.runs;
  std::vector<double> iterations;
  for (int i = 0; i < spec.runs; ++i) {
    Rng gen_rng(derive_seed(spec.seed, 2 * static_cast<std::uint64_t>(i)));
    Rng walk(derive_seed(spec.seed, 2 * static_cast<std::uint64_t>(i) + 1));
    const GeneratedInstance g = gen_subset_sum(blocks, spec.coeff_max, gen_rng);
    BoundParams p = params;
    if (spec.theorem == Theorem::T1) p.c = cert_supp_bound(g.instance);
    if (spec.theorem == Theorem::T3) {
      const auto c = cert_supp_bound(g.instance);
      p.cert_supp = *std::max_element(c.begin(), c.end());
    }
    res.bound = theorem_bound(spec.theorem, p);
    res.cap = static_cast<int>(std::min(res.bound.bound, spec.cap_limit));

    PumpOptions opt;
    opt.max_iter = res.cap;
    opt.l = p.l;
    opt.record_points = false;
    opt.keep_history = false;
    PumpTrace trace;
    try {
      if (spec.theorem == Theorem::T1 || spec.theorem == Theorem::T3) {
        BinaryPoint start(static_cast<std::size_t>(g.instance.n));
        for (int j = 0; j < g.instance.n; ++j) {
          start.set(static_cast<std::size_t>(j), static_cast<int>(walk.below(2)));
        }
        trace = run_mb_walksat(g.instance, opt, start, walk);
      } else {
        trace = run_wfp(g.instance, opt, walk);
      }
    } catch (const Error&) {
      trace.outcome = Outcome::Error;
    }
    if (trace.outcome == Outcome::Error) ++res.errors;
    if (trace.outcome != Outcome::Found) ++res.failures;
    iterations.push_back(trace.iterations);
  }
  std::sort(iterations.begin(), iterations.end());
  const std::size_t mid = iterations.size() / 2;
  res.median_iterations = iterations.size() % 2 == 1
                              ? iterations[mid]
                              : 0.5 * (iterations[mid - 1] + iterations[mid]);
  res.allowed = spec.theorem == Theorem::T3 ? res.bound.tail : spec.delta;
  res.failure_rate = static_cast<double>(res.failures) / spec.runs;
  res.sigma = std::sqrt(res.allowed * (1.0 - res.allowed) / spec.runs);
  res.pass = res.errors == 0 && res.failure_rate <= res.allowed + 3.0 * res.sigma;
  return res;
}

}  // namespace fpump
