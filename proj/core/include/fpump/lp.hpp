#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "fpump/model.hpp"

namespace fpump {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ObjSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class BasisTag : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

const char* to_string(LpStatus status);

struct LpRowSpec {
  SparseVector coeffs;
  Sense sense = Sense::LE;
  double rhs = 0.0;
};

struct LpProblem {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> cost;
  std::vector<LpRowSpec> rows;
  ObjSense sense = ObjSense::Minimize;

  int num_cols() const { return static_cast<int>(lower.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  int add_column(double lo, double up, double c = 0.0);
  void add_row(SparseVector coeffs, Sense sense, double rhs);
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  std::vector<double> row_activity;
  double objective = 0.0;
  std::vector<BasisTag> col_basis;
  std::vector<BasisTag> row_basis;
  /// True when the point is basic: every nonbasic column sits at a bound.
  bool is_vertex = false;
  int iterations = 0;
};

/// Dense bounded-variable primal simplex (two phases, Dantzig pricing with
/// smallest-index ties, permanent switch to Bland's rule after a run of
/// 10 (m + n) degenerate pivots).
///
/// The solver keeps its basis between calls, so changing only the
/// objective and calling solve() again re-optimizes from the previous
/// optimal basis without a new phase 1.
class LpSolver {
 public:
  explicit LpSolver(LpProblem problem);
  ~LpSolver();
  LpSolver(LpSolver&&) noexcept;
  LpSolver& operator=(LpSolver&&) noexcept;
  LpSolver(const LpSolver&) = delete;
  LpSolver& operator=(const LpSolver&) = delete;

  /// Throws SolverFailure on numerical breakdown.
  LpSolution solve();

  void set_objective(std::vector<double> cost, ObjSense sense);
  const LpProblem& problem() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LpSolution solve_lp(const LpProblem& problem);

/// Finds y with (x, y) in P for a fixed binary x. Returns nullopt when x is
/// not in the binary projection of P.
std::optional<MixedPoint> lift(const MixedBinaryInstance& instance,
                               const BinaryPoint& x);

/// LP relaxation of the instance over [0,1]^n x R^d, maximizing the
/// instance objective (or the zero objective when absent).
LpProblem relaxation(const MixedBinaryInstance& instance);

}  // namespace fpump
