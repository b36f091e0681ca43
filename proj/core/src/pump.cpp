#include "fpump/pump.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <unordered_map>

#include "fpump/errors.hpp"
#include "fpump/lp.hpp"
#include "fpump/projection.hpp"

namespace fpump {

const char* to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::Naive:
      return "naive";
    case Algorithm::Original:
      return "orig";
    case Algorithm::OriginalZeroFrac:
      return "origzf";
    case Algorithm::MbWalkSat:
      return "mbwalksat";
    case Algorithm::Wfp:
      return "wfp";
    case Algorithm::WfpCompressed:
      return "wfpc";
    case Algorithm::WfpBase:
      return "wfpbase";
  }
  return "?";
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::Naive,     Algorithm::Original, Algorithm::OriginalZeroFrac,
          Algorithm::MbWalkSat, Algorithm::Wfp,      Algorithm::WfpCompressed,
          Algorithm::WfpBase};
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : all_algorithms()) {
    if (name == to_string(a)) return a;
  }
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

const char* to_string(Event event) {
  switch (event) {
    case Event::Start:
      return "Start";
    case Event::Project:
      return "Project";
    case Event::Round:
      return "Round";
    case Event::Stall:
      return "Stall";
    case Event::Perturb:
      return "Perturb";
    case Event::Restart:
      return "Restart";
    case Event::Return:
      return "Return";
  }
  return "?";
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Found:
      return "Found";
    case Outcome::IterLimit:
      return "IterLimit";
    case Outcome::TimeLimit:
      return "TimeLimit";
    case Outcome::Error:
      return "Error";
  }
  return "?";
}

namespace {

class Recorder {
 public:
  Recorder(PumpTrace& trace, const PumpOptions& options)
      : trace_(trace), options_(options) {}

  TraceRecord& add(int t, Event event, const BinaryPoint* x_tilde = nullptr,
                   const std::vector<double>* x_bar = nullptr) {
    TraceRecord rec;
    rec.t = t;
    rec.event = event;
    if (options_.record_points) {
      if (x_tilde) rec.x_tilde = *x_tilde;
      if (x_bar) rec.x_bar = *x_bar;
    }
    trace_.records.push_back(std::move(rec));
    return trace_.records.back();
  }

  void perturbed(int t, const PerturbOutcome& out) {
    const bool restart = out.kind == PerturbKind::Restart;
    TraceRecord& rec =
        add(t, restart ? Event::Restart : Event::Perturb, &out.new_x);
    rec.kind = out.kind;
    rec.flipped = out.flipped;
    if (options_.record_points) rec.certificate = out.certificate;
    if (restart) {
      ++trace_.restarts;
    } else {
      ++trace_.perturbations;
    }
  }

  void visit(const BinaryPoint& x) {
    if (options_.keep_history) trace_.history.push_back(x);
  }

  void found(int t, MixedPoint point) {
    BinaryPoint x = BinaryPoint::from_doubles(point.x);
    add(t, Event::Return, &x);
    trace_.outcome = Outcome::Found;
    trace_.solution = std::move(point);
  }

  bool stop_requested(int t) {
    if (options_.should_stop && options_.should_stop()) {
      trace_.outcome = Outcome::TimeLimit;
      trace_.iterations = t;
      return true;
    }
    return false;
  }

 private:
  PumpTrace& trace_;
  const PumpOptions& options_;
};

PumpTrace new_trace(const MixedBinaryInstance& instance, Algorithm alg,
                    std::uint64_t seed) {
  PumpTrace trace;
  trace.instance = instance.name;
  trace.algorithm = to_string(alg);
  trace.seed = seed;
  return trace;
}

void check_options(const PumpOptions& options) {
  if (options.max_iter < 0) throw InvalidArgument("max_iter must be >= 0");
  if (options.l < 1) throw InvalidArgument("l must be at least 1");
}

// Accepts (x~, y) when it satisfies the rows; with continuous columns a
// failing y is replaced by a fresh lift when `try_lift` is set.
std::optional<MixedPoint> accept(const MixedBinaryInstance& instance,
                                 const BinaryPoint& x_tilde,
                                 const std::vector<double>& y, bool try_lift) {
  MixedPoint p{x_tilde.as_doubles(), y};
  if (check_feasible(instance, p)) return p;
  if (try_lift && instance.d > 0) return lift(instance, x_tilde);
  return std::nullopt;
}

double max_gap(const BinaryPoint& x, const std::vector<double>& xbar) {
  double g = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    g = std::max(g, std::abs(xbar[j] - x[j]));
  }
  return g;
}

// Remembers the iteration at which each binary iterate was last seen,
// bounded to the most recent `limit` distinct points.
class VisitHistory {
 public:
  explicit VisitHistory(std::size_t limit) : limit_(std::max<std::size_t>(limit, 1)) {}

  std::optional<int> last_seen(const BinaryPoint& x) const {
    auto it = seen_.find(x);
    if (it == seen_.end()) return std::nullopt;
    return it->second;
  }

  void insert(const BinaryPoint& x, int t) {
    auto [it, fresh] = seen_.insert_or_assign(x, t);
    (void)it;
    order_.emplace_back(x, t);
    if (fresh) ++distinct_;
    while (distinct_ > limit_ && !order_.empty()) {
      auto& [old, when] = order_.front();
      auto found = seen_.find(old);
      if (found != seen_.end() && found->second == when) {
        seen_.erase(found);
        --distinct_;
      }
      order_.pop_front();
    }
  }

  void clear() {
    seen_.clear();
    order_.clear();
    distinct_ = 0;
  }

 private:
  std::size_t limit_;
  std::size_t distinct_ = 0;
  std::unordered_map<BinaryPoint, int, BinaryPointHash> seen_;
  std::deque<std::pair<BinaryPoint, int>> order_;
};

// Round / project loop shared by the naive, original and WFPbase pumps.
PumpTrace run_rounding_pump(const MixedBinaryInstance& instance,
                            const PumpOptions& options, Rng* rng,
                            Algorithm alg) {
  check_options(options);
  PumpTrace trace = new_trace(instance, alg, rng ? rng->seed() : 0);
  Recorder rec(trace, options);
  Projector projector(instance);

  MixedPoint lp = projector.relaxation_optimum();
  BinaryPoint x_tilde = round_point(lp.x);
  rec.add(0, Event::Start, &x_tilde, &lp.x);
  rec.visit(x_tilde);
  if (max_gap(x_tilde, lp.x) <= kIntegralityTolerance) {
    if (auto p = accept(instance, x_tilde, lp.y, true)) {
      rec.found(0, std::move(*p));
      return trace;
    }
  }

  VisitHistory visits(options.wfpbase_history_limit);
  visits.insert(x_tilde, 0);
  for (int t = 1; t <= options.max_iter; ++t) {
    if (rec.stop_requested(t - 1)) return trace;
    trace.iterations = t;
    ProjectionResult proj = projector.project(x_tilde);
    rec.add(t, Event::Project, nullptr, &proj.projected.x).distance =
        proj.distance;
    BinaryPoint next = proj.rounded;
    rec.add(t, Event::Round, &next);

    const bool integral = max_gap(next, proj.projected.x) <= kIntegralityTolerance;
    if (auto p = accept(instance, next, proj.projected.y, integral)) {
      rec.found(t, std::move(*p));
      return trace;
    }

    const auto frac_target = proj.projected.x;
    if (alg == Algorithm::WfpBase) {
      const auto seen = visits.last_seen(next);
      if (seen && t - *seen == 1) {
        rec.add(t, Event::Stall, &next);
        MixedPoint current{next.as_doubles(), proj.projected.y};
        PerturbOutcome out = wfpbase_perturb(next, frac_target, instance,
                                             current, *rng, options.tt_range);
        rec.perturbed(t, out);
        next = std::move(out.new_x);
      } else if (seen) {
        rec.add(t, Event::Stall, &next);
        PerturbOutcome out =
            restart_perturb(next, frac_target, *rng, options.restart);
        rec.perturbed(t, out);
        next = std::move(out.new_x);
        visits.clear();
      }
      visits.insert(next, t);
    } else if (next == x_tilde) {
      rec.add(t, Event::Stall, &next);
      if (alg != Algorithm::Naive) {
        PerturbOutcome out =
            alg == Algorithm::OriginalZeroFrac
                ? original_perturb_zero_frac(next, frac_target, *rng,
                                             options.tt_range)
                : original_perturb(next, frac_target, *rng, options.tt_range);
        rec.perturbed(t, out);
        next = std::move(out.new_x);
      }
    }
    rec.visit(next);
    x_tilde = std::move(next);
  }
  trace.outcome = Outcome::IterLimit;
  return trace;
}

// Certificate of x~ over the normalized rows; a failure here after the
// lift said "infeasible" is a tolerance disagreement and ends the run.
std::optional<ProjectedCertificate> certificate_or_error(
    const MixedBinaryInstance& normalized, const BinaryPoint& x,
    PumpTrace& trace) {
  try {
    return min_certificate(normalized, x);
  } catch (const NotACertificate& e) {
    trace.outcome = Outcome::Error;
    trace.error = e.what();
    return std::nullopt;
  }
}

std::optional<MixedPoint> accept_binary(const MixedBinaryInstance& instance,
                                        const BinaryPoint& x) {
  if (instance.d == 0) {
    if (check_feasible_binary(instance, x)) return MixedPoint{x.as_doubles(), {}};
    return std::nullopt;
  }
  return lift(instance, x);
}

}  // namespace

PumpTrace run_naive_fp(const MixedBinaryInstance& instance,
                       const PumpOptions& options) {
  return run_rounding_pump(instance, options, nullptr, Algorithm::Naive);
}

PumpTrace run_original_fp(const MixedBinaryInstance& instance,
                          const PumpOptions& options, Rng& rng,
                          bool zero_frac_flips) {
  return run_rounding_pump(
      instance, options, &rng,
      zero_frac_flips ? Algorithm::OriginalZeroFrac : Algorithm::Original);
}

PumpTrace run_wfpbase_fp(const MixedBinaryInstance& instance,
                         const PumpOptions& options, Rng& rng) {
  return run_rounding_pump(instance, options, &rng, Algorithm::WfpBase);
}

PumpTrace run_mb_walksat(const MixedBinaryInstance& instance,
                         const PumpOptions& options,
                         const std::optional<BinaryPoint>& start, Rng& rng) {
  check_options(options);
  PumpTrace trace = new_trace(instance, Algorithm::MbWalkSat, rng.seed());
  Recorder rec(trace, options);
  BinaryPoint x;
  if (start) {
    if (start->size() != static_cast<std::size_t>(instance.n)) {
      throw InvalidArgument("start point has the wrong dimension");
    }
    x = *start;
  } else {
    Projector projector(instance);
    x = round_point(projector.relaxation_optimum().x);
  }
  const MixedBinaryInstance normalized = normalize(instance);
  rec.add(0, Event::Start, &x);
  rec.visit(x);
  for (int t = 0;; ++t) {
    trace.iterations = t;
    if (auto p = accept_binary(instance, x)) {
      rec.found(t, std::move(*p));
      return trace;
    }
    if (t == options.max_iter) break;
    if (rec.stop_requested(t)) return trace;
    auto cert = certificate_or_error(normalized, x, trace);
    if (!cert) return trace;
    PerturbOutcome out = perturb_l(x, *cert, options.l, rng);
    rec.perturbed(t + 1, out);
    x = std::move(out.new_x);
    rec.visit(x);
  }
  trace.outcome = Outcome::IterLimit;
  return trace;
}

PumpTrace run_wfp(const MixedBinaryInstance& instance,
                  const PumpOptions& options, Rng& rng) {
  check_options(options);
  PumpTrace trace = new_trace(instance, Algorithm::Wfp, rng.seed());
  Recorder rec(trace, options);
  Projector projector(instance);
  const MixedBinaryInstance normalized = normalize(instance);

  MixedPoint lp = projector.relaxation_optimum();
  BinaryPoint x_tilde = round_point(lp.x);
  rec.add(0, Event::Start, &x_tilde, &lp.x);
  rec.visit(x_tilde);
  for (int t = 1; t <= options.max_iter; ++t) {
    if (rec.stop_requested(t - 1)) return trace;
    trace.iterations = t;
    ProjectionResult proj = projector.project(x_tilde);
    rec.add(t, Event::Project, nullptr, &proj.projected.x).distance =
        proj.distance;
    BinaryPoint next = proj.rounded;
    rec.add(t, Event::Round, &next);
    if (auto p = accept(instance, next, proj.projected.y, true)) {
      rec.found(t, std::move(*p));
      return trace;
    }
    if (next == x_tilde) {
      rec.add(t, Event::Stall, &next);
      auto cert = certificate_or_error(normalized, next, trace);
      if (!cert) return trace;
      PerturbOutcome out = perturb_l(next, *cert, options.l, rng);
      rec.perturbed(t, out);
      next = std::move(out.new_x);
    }
    rec.visit(next);
    x_tilde = std::move(next);
  }
  trace.outcome = Outcome::IterLimit;
  return trace;
}

PumpTrace run_wfp_compressed(const MixedBinaryInstance& instance,
                             const PumpOptions& options, Rng& rng) {
  check_options(options);
  PumpTrace trace = new_trace(instance, Algorithm::WfpCompressed, rng.seed());
  Recorder rec(trace, options);
  Projector projector(instance);
  const MixedBinaryInstance normalized = normalize(instance);
  const int cap = options.fixpoint_cap > 0 ? options.fixpoint_cap
                                           : default_fixpoint_cap(instance);

  MixedPoint lp = projector.relaxation_optimum();
  BinaryPoint z = round_point(lp.x);
  rec.add(0, Event::Start, &z, &lp.x);
  rec.visit(z);
  for (int tau = 1; tau <= options.max_iter; ++tau) {
    if (rec.stop_requested(tau - 1)) return trace;
    trace.iterations = tau;
    FixpointResult fix = alt_proj_fixpoint(projector, z, cap);
    if (!fix.reached) {
      trace.outcome = Outcome::Error;
      trace.error = "no fixpoint within " + std::to_string(cap) +
                    " alternating projections";
      return trace;
    }
    z = std::move(fix.point);
    rec.add(tau, Event::Round, &z).distance = fix.applications;
    if (auto p = accept_binary(instance, z)) {
      rec.found(tau, std::move(*p));
      return trace;
    }
    auto cert = certificate_or_error(normalized, z, trace);
    if (!cert) return trace;
    PerturbOutcome out = perturb_l(z, *cert, options.l, rng);
    rec.perturbed(tau, out);
    z = std::move(out.new_x);
    rec.visit(z);
  }
  trace.outcome = Outcome::IterLimit;
  return trace;
}

PumpTrace run_algorithm(Algorithm alg, const MixedBinaryInstance& instance,
                        const PumpOptions& options, Rng& rng) {
  switch (alg) {
    case Algorithm::Naive: {
      PumpTrace t = run_naive_fp(instance, options);
      t.seed = rng.seed();
      return t;
    }
    case Algorithm::Original:
      return run_original_fp(instance, options, rng, false);
    case Algorithm::OriginalZeroFrac:
      return run_original_fp(instance, options, rng, true);
    case Algorithm::MbWalkSat:
      return run_mb_walksat(instance, options, std::nullopt, rng);
    case Algorithm::Wfp:
      return run_wfp(instance, options, rng);
    case Algorithm::WfpCompressed:
      return run_wfp_compressed(instance, options, rng);
    case Algorithm::WfpBase:
      return run_wfpbase_fp(instance, options, rng);
  }
  throw InvalidArgument("unknown algorithm");
}

CycleInfo detect_cycle(const std::vector<BinaryPoint>& history) {
  std::unordered_map<BinaryPoint, int, BinaryPointHash> last;
  for (int i = 0; i < static_cast<int>(history.size()); ++i) {
    auto it = last.find(history[static_cast<std::size_t>(i)]);
    if (it != last.end()) {
      CycleInfo info;
      info.length = i - it->second;
      info.kind = info.length == 1 ? CycleInfo::Kind::OneCycle
                                   : CycleInfo::Kind::LongCycle;
      info.at = i;
      return info;
    }
    last.emplace(history[static_cast<std::size_t>(i)], i);
  }
  return {};
}

const char* to_string(Theorem id) {
  switch (id) {
    case Theorem::T1:
      return "T1";
    case Theorem::T2:
      return "T2";
    case Theorem::T3:
      return "T3";
    case Theorem::T5:
      return "T5";
  }
  return "?";
}

namespace {

// ln(e) evaluates a hair above 1; do not let that bump the ceiling.
double ceil_clean(double v) { return std::ceil(v - 1e-12); }

double total(const std::vector<int>& v) {
  double s = 0.0;
  for (int x : v) s += x;
  return s;
}

}  // namespace

BoundReport theorem_bound(Theorem id, const BoundParams& params) {
  if (!(params.delta > 0.0 && params.delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
  if (params.n.empty()) throw InvalidArgument("bound needs at least one n");
  for (int n : params.n) {
    if (n < 1) throw InvalidArgument("block sizes must be positive");
  }
  BoundReport rep;
  rep.id = id;
  rep.params = params;
  rep.tail = params.delta;
  const double k = static_cast<double>(params.n.size());
  switch (id) {
    case Theorem::T1: {
      if (params.c.size() != params.n.size()) {
        throw InvalidArgument("T1 needs one c per block");
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < params.n.size(); ++i) {
        if (params.c[i] < 1) throw InvalidArgument("c must be positive");
        sum += params.n[i] * std::pow(static_cast<double>(params.c[i]), params.n[i]);
      }
      rep.bound = ceil_clean(std::log(k / params.delta)) * sum;
      break;
    }
    case Theorem::T2: {
      double sum = 0.0;
      for (int n : params.n) {
        sum += n * std::pow(static_cast<double>(n), 2.0 * n);
      }
      rep.bound = ceil_clean(std::log(k / params.delta)) * sum;
      break;
    }
    case Theorem::T3: {
      if (params.cert_supp < 1) throw InvalidArgument("T3 needs cert_supp >= 1");
      const double n = total(params.n);
      rep.p = std::pow(static_cast<double>(params.cert_supp), -n);
      rep.bound = params.iterations;
      rep.tail = std::pow(1.0 - rep.p, std::floor(params.iterations / n));
      break;
    }
    case Theorem::T5: {
      const double n = total(params.n);
      const double t = n * std::pow(n, 2.0 * n) *
                       ceil_clean(std::log(1.0 / params.delta));
      rep.p = std::pow(1.0 / (n * n), n);
      rep.bound = 2.0 * t;
      rep.tail = std::pow(1.0 - rep.p, std::floor(t / n));
      break;
    }
  }
  rep.success_floor = 1.0 - rep.tail;
  return rep;
}

namespace {

void write_indices(std::ostream& out, const std::vector<int>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
}

void write_doubles(std::ostream& out, const std::vector<double>& v) {
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << (i ? "," : "") << buf;
  }
}

}  // namespace

void write_trace(std::ostream& out, const PumpTrace& trace) {
  out << "trace 1\n";
  out << "instance " << trace.instance << "\n";
  out << "algorithm " << trace.algorithm << "\n";
  out << "seed " << trace.seed << "\n";
  out << "rng " << trace.rng << "\n";
  for (const auto& r : trace.records) {
    out << "t=" << r.t << " event=" << to_string(r.event);
    if (r.kind) out << " kind=" << to_string(*r.kind);
    if (r.distance >= 0.0) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", r.distance);
      out << " dist=" << buf;
    }
    if (r.event == Event::Perturb || r.event == Event::Restart) {
      out << " flipped=";
      write_indices(out, r.flipped);
    }
    if (r.x_tilde) out << " x~=" << r.x_tilde->to_string();
    if (!r.x_bar.empty()) {
      out << " xbar=";
      write_doubles(out, r.x_bar);
    }
    out << "\n";
    if (r.certificate) {
      out << "  certificate rows=";
      write_indices(out, r.certificate->original_rows);
      std::vector<int> support;
      for (const auto& e : r.certificate->a) support.push_back(e.index);
      out << " supp(a)=";
      write_indices(out, support);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", r.certificate->violation);
      out << " violation=" << buf << "\n";
    }
  }
  out << "outcome " << to_string(trace.outcome) << " iterations=" << trace.iterations
      << " perturbations=" << trace.perturbations
      << " restarts=" << trace.restarts << "\n";
  if (!trace.error.empty()) out << "error " << trace.error << "\n";
  if (trace.solution) {
    out << "solution x=";
    write_doubles(out, trace.solution->x);
    out << " y=";
    write_doubles(out, trace.solution->y);
    out << "\n";
  }
}

}  // namespace fpump
