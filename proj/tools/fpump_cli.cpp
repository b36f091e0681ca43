// fpump: generate instances, run pumps, benchmark them and check the
// runtime bounds by simulation.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fpump/fpump.hpp"

namespace fs = std::filesystem;
using namespace fpump;

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    if (dots != std::string::npos) {
      const auto lo = std::stoull(part.substr(0, dots));
      const auto hi = std::stoull(part.substr(dots + 2));
      if (hi < lo) throw InvalidArgument("empty seed range '" + part + "'");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else if (!part.empty()) {
      seeds.push_back(std::stoull(part));
    }
  }
  if (seeds.empty()) throw InvalidArgument("no seeds in '" + text + "'");
  return seeds;
}

std::vector<Algorithm> parse_algorithms(const std::string& text) {
  std::vector<Algorithm> algs;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) algs.push_back(parse_algorithm(part));
  }
  return algs;
}

// Builtins: "remark", "appendix-b:T". Anything else is a file path.
MixedBinaryInstance resolve_instance(const std::string& arg) {
  if (arg == "remark") return remark_instance();
  const std::string prefix = "appendix-b:";
  if (arg.rfind(prefix, 0) == 0) return appendix_b_instance(std::stoi(arg.substr(prefix.size())));
  return load_instance(arg);
}

std::string format_point(const MixedPoint& p) {
  std::ostringstream out;
  out << "(";
  for (std::size_t j = 0; j < p.x.size(); ++j) out << (j ? "," : "") << p.x[j];
  out << ")";
  if (!p.y.empty()) {
    out << " y=(";
    for (std::size_t j = 0; j < p.y.size(); ++j) out << (j ? "," : "") << p.y[j];
    out << ")";
  }
  return out.str();
}

struct RunArgs {
  std::string alg = "wfp";
  int l = 2;
  std::uint64_t seed = 1;
  int max_iter = 10000;
  int tt_lo = 10;
  int tt_hi = 30;
  std::string instance;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--alg", a.alg, "naive, orig, origzf, mbwalksat, wfp, wfpc, wfpbase")
      ->capture_default_str();
  cmd->add_option("--l", a.l, "flips per Perturb_l call")->capture_default_str();
  cmd->add_option("--seed", a.seed, "rng seed")->capture_default_str();
  cmd->add_option("--max-iter", a.max_iter, "iteration limit")->capture_default_str();
  cmd->add_option("--tt-lo", a.tt_lo, "smallest flip count TT")->capture_default_str();
  cmd->add_option("--tt-hi", a.tt_hi, "largest flip count TT")->capture_default_str();
  cmd->add_option("instance", a.instance, "file (.mps or native), remark, appendix-b:T")
      ->required();
}

PumpTrace run_from_args(const RunArgs& a, bool record) {
  const MixedBinaryInstance inst = resolve_instance(a.instance);
  PumpOptions opt;
  opt.max_iter = a.max_iter;
  opt.l = a.l;
  opt.tt_range = {a.tt_lo, a.tt_hi};
  opt.record_points = record;
  Rng rng(a.seed);
  return run_algorithm(parse_algorithm(a.alg), inst, opt, rng);
}

struct GenArgs {
  GenSpec spec;
  std::string family = "subset-sum";
  std::string out;
  std::string out_dir;
  bool grid = false;
};

void write_generated(const GeneratedInstance& g, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << write_native(g.instance);
    return;
  }
  save_instance(g.instance, path);
}

int cmd_gen(const GenArgs& a) {
  if (a.grid) {
    const std::string dir = a.out_dir.empty() ? "." : a.out_dir;
    fs::create_directories(dir);
    for (const auto& g : two_stage_grid(a.spec.seed)) {
      save_instance(g.instance, (fs::path(dir) / (g.instance.name + ".fpi")).string());
    }
    std::cout << "wrote 50 instances to " << dir << "\n";
    return 0;
  }
  GenSpec spec = a.spec;
  spec.family = parse_family(a.family);
  write_generated(generate(spec), a.out);
  return 0;
}

struct BenchArgs {
  std::string family;
  std::vector<std::string> instances;
  std::string algs = "orig,wfpbase";
  std::string seeds = "1..10";
  std::uint64_t gen_seed = 2024;
  int count = 10;
  GenSpec spec;
  int max_iter = 1000;
  double time_limit = 60.0;
  int l = 2;
  int tt_lo = 10;
  int tt_hi = 30;
  std::string csv;
  bool no_time = false;
  int workers = 0;
};

int cmd_bench(const BenchArgs& a) {
  BenchConfig cfg;
  if (!a.family.empty()) {
    const Family f = parse_family(a.family);
    if (f == Family::TwoStage) {
      for (auto& g : two_stage_grid(a.gen_seed)) cfg.instances.push_back(std::move(g.instance));
    } else {
      for (int i = 0; i < a.count; ++i) {
        GenSpec spec = a.spec;
        spec.family = f;
        spec.seed = derive_seed(a.gen_seed, static_cast<std::uint64_t>(i));
        MixedBinaryInstance inst = generate(spec).instance;
        inst.name += "-" + std::to_string(i + 1);
        cfg.instances.push_back(std::move(inst));
      }
    }
  }
  for (const auto& path : a.instances) cfg.instances.push_back(resolve_instance(path));
  cfg.algorithms = parse_algorithms(a.algs);
  cfg.seeds = parse_seeds(a.seeds);
  cfg.max_iter = a.max_iter;
  cfg.time_limit = a.time_limit;
  cfg.l = a.l;
  cfg.tt_range = {a.tt_lo, a.tt_hi};
  cfg.workers = a.workers;
  const BenchResult res = run_benchmark(cfg);
  write_table(std::cout, res.table);
  if (!a.csv.empty()) {
    if (a.csv == "-") {
      write_csv(std::cout, res.rows, !a.no_time);
    } else {
      std::ofstream out(a.csv, std::ios::binary);
      if (!out) throw InvalidArgument("cannot write '" + a.csv + "'");
      write_csv(out, res.rows, !a.no_time);
    }
  }
  return 0;
}

struct BoundArgs {
  int theorem = 5;
  BoundCheckSpec spec;
};

int cmd_verify_bounds(BoundArgs a) {
  switch (a.theorem) {
    case 1:
      a.spec.theorem = Theorem::T1;
      break;
    case 2:
      a.spec.theorem = Theorem::T2;
      break;
    case 3:
      a.spec.theorem = Theorem::T3;
      break;
    case 5:
      a.spec.theorem = Theorem::T5;
      break;
    default:
      throw InvalidArgument("theorem must be 1, 2, 3 or 5");
  }
  const BoundCheckResult r = verify_bound(a.spec);
  std::printf("theorem      %s\n", to_string(a.spec.theorem));
  std::printf("blocks       %d x n=%d\n", a.spec.k, a.spec.n);
  std::printf("bound        %.6g iterations (cap used %d)\n", r.bound.bound, r.cap);
  std::printf("runs         %d (errors %d)\n", r.runs, r.errors);
  std::printf("median itr   %.1f\n", r.median_iterations);
  std::printf("failures     %d\n", r.failures);
  std::printf("empirical    %.4f\n", r.failure_rate);
  std::printf("tail bound   %.4f\n", r.bound.tail);
  std::printf("allowed      %.4f (+3 sigma = %.4f)\n", r.allowed, r.allowed + 3 * r.sigma);
  std::printf("result       %s\n", r.pass ? "PASS" : "FAIL");
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasibility pump laboratory for mixed-binary programs"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated instance");
  gen_cmd->add_option("--family", gen.family,
                      "subset-sum, decomposable, two-stage, remark, appendix-b")
      ->capture_default_str();
  gen_cmd->add_option("--k", gen.spec.k, "blocks or scenarios")->capture_default_str();
  gen_cmd->add_option("--n", gen.spec.n, "binary columns per block")->capture_default_str();
  gen_cmd->add_option("--d", gen.spec.d, "continuous columns per block")->capture_default_str();
  gen_cmd->add_option("--rows", gen.spec.rows, "rows per block")->capture_default_str();
  gen_cmd->add_option("--s", gen.spec.s, "binary support per row")->capture_default_str();
  gen_cmd->add_option("--p", gen.spec.p, "first-stage columns")->capture_default_str();
  gen_cmd->add_option("--q", gen.spec.q, "second-stage columns per scenario")
      ->capture_default_str();
  gen_cmd->add_option("--scenario-rows", gen.spec.rows_per_scenario, "rows per scenario")
      ->capture_default_str();
  gen_cmd->add_option("--T", gen.spec.T, "appendix-b parameter")->capture_default_str();
  gen_cmd->add_option("--coeff-max", gen.spec.coeff_max, "largest coefficient")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output file (.mps or native); stdout if omitted");
  gen_cmd->add_flag("--grid", gen.grid, "write the 50-instance two-stage grid");
  gen_cmd->add_option("--out-dir", gen.out_dir, "directory for --grid");

  RunArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run one pump on one instance");
  add_run_options(solve_cmd, solve);

  RunArgs trace;
  std::string trace_out;
  auto* trace_cmd = app.add_subcommand("trace", "Run one pump and dump its trace");
  add_run_options(trace_cmd, trace);
  trace_cmd->add_option("--out", trace_out, "trace file; stdout if omitted");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run every (instance, algorithm, seed)");
  bench_cmd->add_option("--family", bench.family, "generate instances of this family");
  bench_cmd->add_option("--gen-seed", bench.gen_seed, "seed of the instance generator")
      ->capture_default_str();
  bench_cmd->add_option("--count", bench.count, "instances for non-grid families")
      ->capture_default_str();
  bench_cmd->add_option("--k", bench.spec.k, "blocks")->capture_default_str();
  bench_cmd->add_option("--n", bench.spec.n, "binary columns per block")->capture_default_str();
  bench_cmd->add_option("--T", bench.spec.T, "appendix-b parameter")->capture_default_str();
  bench_cmd->add_option("--algs", bench.algs, "comma-separated algorithms")->capture_default_str();
  bench_cmd->add_option("--seeds", bench.seeds, "list like 1,2,7 or range 1..10")
      ->capture_default_str();
  bench_cmd->add_option("--max-iter", bench.max_iter, "iteration limit per run")
      ->capture_default_str();
  bench_cmd->add_option("--time-limit", bench.time_limit, "seconds per run, 0 for none")
      ->capture_default_str();
  bench_cmd->add_option("--l", bench.l, "flips per Perturb_l call")->capture_default_str();
  bench_cmd->add_option("--tt-lo", bench.tt_lo, "smallest flip count TT")->capture_default_str();
  bench_cmd->add_option("--tt-hi", bench.tt_hi, "largest flip count TT")->capture_default_str();
  bench_cmd->add_option("--csv", bench.csv, "per-run CSV file ('-' for stdout)");
  bench_cmd->add_flag("--no-time", bench.no_time, "drop the wall_time column");
  bench_cmd->add_option("--workers", bench.workers, "worker threads (default FPUMP_WORKERS or 1)");
  bench_cmd->add_option("instances", bench.instances, "instance files or builtins");

  BoundArgs bounds;
  auto* bounds_cmd = app.add_subcommand("verify-bounds", "Monte Carlo check of a runtime bound");
  bounds_cmd->add_option("--theorem", bounds.theorem, "1, 2, 3 or 5")->capture_default_str();
  bounds_cmd->add_option("--n", bounds.spec.n, "binary columns per block")->capture_default_str();
  bounds_cmd->add_option("--k", bounds.spec.k, "blocks")->capture_default_str();
  bounds_cmd->add_option("--runs", bounds.spec.runs, "simulated runs")->capture_default_str();
  bounds_cmd->add_option("--delta", bounds.spec.delta, "failure probability")
      ->capture_default_str();
  bounds_cmd->add_option("--seed", bounds.spec.seed, "base seed")->capture_default_str();
  bounds_cmd->add_option("--iterations", bounds.spec.t3_iterations,
                         "iteration budget for theorem 3");
  bounds_cmd->add_option("--cap-limit", bounds.spec.cap_limit, "largest iteration cap")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*solve_cmd) {
      const PumpTrace t = run_from_args(solve, false);
      std::cout << "instance    " << t.instance << "\n";
      std::cout << "algorithm   " << t.algorithm << " (seed " << t.seed << ", " << t.rng << ")\n";
      std::cout << "outcome     " << to_string(t.outcome) << "\n";
      std::cout << "iterations  " << t.iterations << "\n";
      std::cout << "perturbs    " << t.perturbations << "\n";
      std::cout << "restarts    " << t.restarts << "\n";
      if (t.solution) std::cout << "solution    " << format_point(*t.solution) << "\n";
      if (!t.error.empty()) std::cout << "error       " << t.error << "\n";
      return t.outcome == Outcome::Error ? 1 : 0;
    }
    if (*trace_cmd) {
      const PumpTrace t = run_from_args(trace, true);
      if (trace_out.empty()) {
        write_trace(std::cout, t);
      } else {
        std::ofstream out(trace_out, std::ios::binary);
        if (!out) throw InvalidArgument("cannot write '" + trace_out + "'");
        write_trace(out, t);
      }
      return 0;
    }
    if (*bench_cmd) return cmd_bench(bench);
    if (*bounds_cmd) return cmd_verify_bounds(bounds);
  } catch (const std::exception& e) {
    std::cerr << "fpump: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
