#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fpump/certificate.hpp"
#include "fpump/model.hpp"
#include "fpump/perturb.hpp"
#include "fpump/rng.hpp"

namespace fpump {

enum class Algorithm {
  Naive,
  Original,
  OriginalZeroFrac,
  MbWalkSat,
  Wfp,
  WfpCompressed,
  WfpBase
};

/// Short names used on the command line and in CSV output:
/// naive, orig, origzf, mbwalksat, wfp, wfpc, wfpbase.
const char* to_string(Algorithm alg);
Algorithm parse_algorithm(const std::string& name);
std::vector<Algorithm> all_algorithms();

enum class Event { Start, Project, Round, Stall, Perturb, Restart, Return };
const char* to_string(Event event);

enum class Outcome { Found, IterLimit, TimeLimit, Error };
const char* to_string(Outcome outcome);

struct TraceRecord {
  int t = 0;
  Event event = Event::Start;
  /// l1 distance of the projection (Project events), -1 otherwise.
  double distance = -1.0;
  /// Set for Perturb and Restart events.
  std::optional<PerturbKind> kind;
  std::vector<int> flipped;
  /// Binary iterate after the event; empty when points are not recorded.
  std::optional<BinaryPoint> x_tilde;
  /// LP point for Start and Project events; empty when not recorded.
  std::vector<double> x_bar;
  std::optional<ProjectedCertificate> certificate;
};

struct PumpTrace {
  std::string instance;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::string rng = Rng::kAlgorithm;
  std::vector<TraceRecord> records;
  Outcome outcome = Outcome::IterLimit;
  std::optional<MixedPoint> solution;
  std::string error;
  /// Projections for the pump variants, AltProj* calls for WFP-Compressed,
  /// certificate flips for mbWalkSAT.
  int iterations = 0;
  int perturbations = 0;
  int restarts = 0;
  /// Sequence of binary iterates after each iteration (after any
  /// perturbation); filled even when points are not recorded.
  std::vector<BinaryPoint> history;
};

struct PumpOptions {
  int max_iter = 10000;
  /// Flips per Perturb_l call.
  int l = 2;
  TTRange tt_range{};
  RestartRule restart{};
  /// AltProj* application cap; 0 means default_fixpoint_cap(instance).
  int fixpoint_cap = 0;
  /// Store x~ and x-bar on every record.
  bool record_points = true;
  /// Keep the history of binary iterates in the trace.
  bool keep_history = true;
  /// Most recent distinct iterates remembered by WFPbase.
  std::size_t wfpbase_history_limit = 10000;
  /// Polled once per iteration; true ends the run with TimeLimit.
  std::function<bool()> should_stop;
};

PumpTrace run_naive_fp(const MixedBinaryInstance& instance,
                       const PumpOptions& options);
PumpTrace run_original_fp(const MixedBinaryInstance& instance,
                          const PumpOptions& options, Rng& rng,
                          bool zero_frac_flips);
/// Starts from `start`, or from the rounded LP optimum when absent.
PumpTrace run_mb_walksat(const MixedBinaryInstance& instance,
                         const PumpOptions& options,
                         const std::optional<BinaryPoint>& start, Rng& rng);
PumpTrace run_wfp(const MixedBinaryInstance& instance,
                  const PumpOptions& options, Rng& rng);
PumpTrace run_wfp_compressed(const MixedBinaryInstance& instance,
                             const PumpOptions& options, Rng& rng);
PumpTrace run_wfpbase_fp(const MixedBinaryInstance& instance,
                         const PumpOptions& options, Rng& rng);

/// Dispatches on the algorithm; mbWalkSAT starts from the rounded LP
/// optimum.
PumpTrace run_algorithm(Algorithm alg, const MixedBinaryInstance& instance,
                        const PumpOptions& options, Rng& rng);

struct CycleInfo {
  enum class Kind { None, OneCycle, LongCycle };
  Kind kind = Kind::None;
  /// Gap between the first repeated iterate and its previous occurrence.
  int length = 0;
  /// Index in the history where the first revisit happens, -1 if none.
  int at = -1;
};

CycleInfo detect_cycle(const std::vector<BinaryPoint>& history);

enum class Theorem { T1, T2, T3, T5 };
const char* to_string(Theorem id);

struct BoundParams {
  /// Binary columns per block (T1, T2); total n for T3 and T5.
  std::vector<int> n;
  /// Certificate support bounds per block (T1).
  std::vector<int> c;
  double delta = 0.1;
  int l = 1;
  /// T3: certificate support and the iteration budget for the tail.
  int cert_supp = 0;
  double iterations = 0.0;
};

struct BoundReport {
  Theorem id = Theorem::T1;
  BoundParams params;
  /// Iteration bound; for T5 this is 2T (WFP iterations).
  double bound = 0.0;
  /// Per-block-of-n success probability p (T3, T5).
  double p = 0.0;
  /// Upper bound on the failure probability.
  double tail = 0.0;
  double success_floor = 0.0;
};

/// Closed forms of the runtime bounds. Throws InvalidArgument for delta
/// outside (0, 1) or malformed parameters.
BoundReport theorem_bound(Theorem id, const BoundParams& params);

/// Line-delimited text dump of a trace.
void write_trace(std::ostream& out, const PumpTrace& trace);

}  // namespace fpump
