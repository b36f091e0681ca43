#include "fpump/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpump/errors.hpp"

namespace fpump {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "Optimal";
    case LpStatus::Infeasible:
      return "Infeasible";
    case LpStatus::Unbounded:
      return "Unbounded";
  }
  return "?";
}

int LpProblem::add_column(double lo, double up, double c) {
  lower.push_back(lo);
  upper.push_back(up);
  cost.push_back(c);
  return num_cols() - 1;
}

void LpProblem::add_row(SparseVector coeffs, Sense s, double rhs) {
  rows.push_back(LpRowSpec{std::move(coeffs), s, rhs});
}

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kSnapTol = 1e-11;
constexpr int kReinvertEvery = 100;

enum class VarState : std::uint8_t { Basic, Lower, Upper, Free, Fixed };

}  // namespace

// Variables are laid out as [structural | slack | artificial]. Row i reads
//   A_i x + s_i + sign_i * art_i = b_i
// with slack bounds [0, inf) for LE, (-inf, 0] for GE and [0, 0] for EQ.
struct LpSolver::Impl {
  LpProblem prob;
  int m = 0;
  int ncols = 0;
  int nvars = 0;
  int width = 0;
  std::vector<double> dense_a;  // m x ncols, row-major
  std::vector<double> lo, up, val, cost, d, art_sign;
  std::vector<VarState> state;
  std::vector<int> basis;
  std::vector<int> pos;
  std::vector<double> tab;  // m x nvars, row-major: B^-1 [A | I | diag(sign)]
  bool has_basis = false;
  bool bland = false;
  int degenerate_run = 0;
  int since_reinvert = 0;
  int iterations = 0;

  explicit Impl(LpProblem p) : prob(std::move(p)) {
    m = prob.num_rows();
    ncols = prob.num_cols();
    nvars = ncols + 2 * m;
    if (prob.upper.size() != prob.lower.size() ||
        prob.cost.size() != prob.lower.size()) {
      throw InvalidArgument("LP column arrays differ in length");
    }
    for (int j = 0; j < ncols; ++j) {
      if (!(prob.lower[j] <= prob.upper[j]) || std::isnan(prob.lower[j]) ||
          prob.lower[j] == kInfinity || prob.upper[j] == -kInfinity) {
        throw InvalidArgument("LP column " + std::to_string(j) +
                              " has inconsistent bounds");
      }
    }
    dense_a.assign(static_cast<std::size_t>(m) * ncols, 0.0);
    for (int i = 0; i < m; ++i) {
      for (const auto& e : prob.rows[i].coeffs) {
        if (e.index < 0 || e.index >= ncols || !std::isfinite(e.value)) {
          throw InvalidArgument("LP row " + std::to_string(i) +
                                " has a bad coefficient");
        }
        a(i, e.index) += e.value;
      }
      if (!std::isfinite(prob.rows[i].rhs)) {
        throw InvalidArgument("LP row " + std::to_string(i) + " rhs not finite");
      }
    }
  }

  double& a(int i, int j) {
    return dense_a[static_cast<std::size_t>(i) * ncols + j];
  }
  double& t(int i, int j) {
    return tab[static_cast<std::size_t>(i) * nvars + j];
  }
  double* trow(int i) { return tab.data() + static_cast<std::size_t>(i) * nvars; }

  // Column k of [A | I | diag(sign)] at row i.
  double matrix_entry(int i, int k) {
    if (k < ncols) return a(i, k);
    if (k < ncols + m) return k - ncols == i ? 1.0 : 0.0;
    return k - ncols - m == i ? art_sign[i] : 0.0;
  }

  void cold_start() {
    lo.assign(nvars, 0.0);
    up.assign(nvars, 0.0);
    val.assign(nvars, 0.0);
    state.assign(nvars, VarState::Fixed);
    art_sign.assign(m, 1.0);
    basis.assign(m, -1);
    pos.assign(nvars, -1);
    for (int j = 0; j < ncols; ++j) {
      lo[j] = prob.lower[j];
      up[j] = prob.upper[j];
      if (lo[j] == up[j]) {
        state[j] = VarState::Fixed;
        val[j] = lo[j];
      } else if (std::isfinite(lo[j])) {
        state[j] = VarState::Lower;
        val[j] = lo[j];
      } else if (std::isfinite(up[j])) {
        state[j] = VarState::Upper;
        val[j] = up[j];
      } else {
        state[j] = VarState::Free;
        val[j] = 0.0;
      }
    }
    for (int i = 0; i < m; ++i) {
      const int s = ncols + i;
      const int art = ncols + m + i;
      switch (prob.rows[i].sense) {
        case Sense::LE:
          lo[s] = 0.0;
          up[s] = kInfinity;
          break;
        case Sense::GE:
          lo[s] = -kInfinity;
          up[s] = 0.0;
          break;
        case Sense::EQ:
          lo[s] = 0.0;
          up[s] = 0.0;
          break;
      }
      double residual = prob.rows[i].rhs;
      for (const auto& e : prob.rows[i].coeffs) residual -= e.value * val[e.index];
      if (residual >= lo[s] && residual <= up[s]) {
        basis[i] = s;
        pos[s] = i;
        state[s] = VarState::Basic;
        val[s] = residual;
        lo[art] = up[art] = 0.0;
        state[art] = VarState::Fixed;
      } else {
        val[s] = 0.0;
        state[s] = lo[s] == up[s]
                       ? VarState::Fixed
                       : (lo[s] == 0.0 ? VarState::Lower : VarState::Upper);
        art_sign[i] = residual >= 0.0 ? 1.0 : -1.0;
        lo[art] = 0.0;
        up[art] = kInfinity;
        val[art] = std::abs(residual);
        basis[i] = art;
        pos[art] = i;
        state[art] = VarState::Basic;
      }
    }
    tab.assign(static_cast<std::size_t>(m) * nvars, 0.0);
    for (int i = 0; i < m; ++i) {
      const double inv = basis[i] == ncols + i ? 1.0 : 1.0 / art_sign[i];
      double* row = trow(i);
      for (int j = 0; j < ncols; ++j) row[j] = a(i, j) * inv;
      row[ncols + i] = inv;
      row[ncols + m + i] = art_sign[i] * inv;
    }
    width = nvars;
    has_basis = false;
    since_reinvert = 0;
  }

  void compute_reduced_costs() {
    d.assign(nvars, 0.0);
    for (int j = 0; j < width; ++j) d[j] = cost[j];
    for (int i = 0; i < m; ++i) {
      const double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      const double* row = trow(i);
      for (int j = 0; j < width; ++j) d[j] -= cb * row[j];
    }
    for (int i = 0; i < m; ++i) d[basis[i]] = 0.0;
  }

  // Rebuilds the tableau and basic values from the original data.
  void reinvert() {
    const int w = width;
    const int aug = m + w + 1;
    std::vector<double> work(static_cast<std::size_t>(m) * aug, 0.0);
    auto wk = [&](int i, int j) -> double& {
      return work[static_cast<std::size_t>(i) * aug + j];
    };
    for (int i = 0; i < m; ++i) {
      for (int c = 0; c < m; ++c) wk(i, c) = matrix_entry(i, basis[c]);
      for (int j = 0; j < w; ++j) wk(i, m + j) = matrix_entry(i, j);
      double r = prob.rows[i].rhs;
      for (int k = 0; k < nvars; ++k) {
        if (state[k] == VarState::Basic || val[k] == 0.0) continue;
        r -= matrix_entry(i, k) * val[k];
      }
      wk(i, m + w) = r;
    }
    for (int c = 0; c < m; ++c) {
      int piv = c;
      for (int i = c + 1; i < m; ++i) {
        if (std::abs(wk(i, c)) > std::abs(wk(piv, c))) piv = i;
      }
      if (std::abs(wk(piv, c)) < 1e-11) {
        throw SolverFailure("singular basis during reinversion");
      }
      if (piv != c) {
        for (int j = 0; j < aug; ++j) std::swap(wk(c, j), wk(piv, j));
      }
      const double inv = 1.0 / wk(c, c);
      for (int j = c; j < aug; ++j) wk(c, j) *= inv;
      for (int i = 0; i < m; ++i) {
        if (i == c) continue;
        const double f = wk(i, c);
        if (f == 0.0) continue;
        for (int j = c; j < aug; ++j) wk(i, j) -= f * wk(c, j);
      }
    }
    for (int i = 0; i < m; ++i) {
      double* row = trow(i);
      for (int j = 0; j < w; ++j) row[j] = wk(i, m + j);
      for (int j = w; j < nvars; ++j) row[j] = 0.0;
      val[basis[i]] = wk(i, m + w);
      row[basis[i]] = 1.0;
    }
    compute_reduced_costs();
    since_reinvert = 0;
  }

  double max_primal_infeasibility() const {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      const int k = basis[i];
      worst = std::max(worst, lo[k] - val[k]);
      worst = std::max(worst, val[k] - up[k]);
    }
    return worst;
  }

  double max_residual() {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      double r = -prob.rows[i].rhs;
      for (const auto& e : prob.rows[i].coeffs) r += e.value * val[e.index];
      r += val[ncols + i] + art_sign[i] * val[ncols + m + i];
      worst = std::max(worst, std::abs(r) / (1.0 + std::abs(prob.rows[i].rhs)));
    }
    return worst;
  }

  void pivot(int r, int q) {
    double* prow = trow(r);
    const double inv = 1.0 / prow[q];
    for (int j = 0; j < width; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      double* row = trow(i);
      const double f = row[q];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double fd = d[q];
    if (fd != 0.0) {
      for (int j = 0; j < width; ++j) d[j] -= fd * prow[j];
    }
    d[q] = 0.0;
    const int leaving = basis[r];
    pos[leaving] = -1;
    basis[r] = q;
    pos[q] = r;
    state[q] = VarState::Basic;
    ++since_reinvert;
  }

  // Entering candidate and direction (+1 increase, -1 decrease).
  bool choose_entering(int& q, int& dir) {
    q = -1;
    double best = 0.0;
    for (int j = 0; j < width; ++j) {
      int dj_dir = 0;
      switch (state[j]) {
        case VarState::Lower:
          if (d[j] < -kDualTol) dj_dir = 1;
          break;
        case VarState::Upper:
          if (d[j] > kDualTol) dj_dir = -1;
          break;
        case VarState::Free:
          if (std::abs(d[j]) > kDualTol) dj_dir = d[j] < 0.0 ? 1 : -1;
          break;
        default:
          break;
      }
      if (dj_dir == 0) continue;
      if (bland) {
        q = j;
        dir = dj_dir;
        return true;
      }
      if (std::abs(d[j]) > best) {
        best = std::abs(d[j]);
        q = j;
        dir = dj_dir;
      }
    }
    return q >= 0;
  }

  // Ratio test; returns the blocking row (-1 for a bound flip, -2 when
  // unbounded) and the step length.
  int ratio_test(int q, int dir, double& step) {
    double min_ratio = kInfinity;
    for (int i = 0; i < m; ++i) {
      const double alpha = t(i, q);
      if (std::abs(alpha) <= kPivotTol) continue;
      const double delta = -alpha * dir;
      const int k = basis[i];
      double ratio = kInfinity;
      if (delta < 0.0 && std::isfinite(lo[k])) {
        ratio = (val[k] - lo[k]) / -delta;
      } else if (delta > 0.0 && std::isfinite(up[k])) {
        ratio = (up[k] - val[k]) / delta;
      }
      min_ratio = std::min(min_ratio, std::max(ratio, 0.0));
    }
    const double range = up[q] - lo[q];
    if (std::isfinite(range) && range <= min_ratio) {
      step = range;
      return -1;
    }
    if (!std::isfinite(min_ratio)) return -2;
    const double slack = 1e-12 * (1.0 + min_ratio);
    int row = -1;
    for (int i = 0; i < m; ++i) {
      const double alpha = t(i, q);
      if (std::abs(alpha) <= kPivotTol) continue;
      const double delta = -alpha * dir;
      const int k = basis[i];
      double ratio = kInfinity;
      if (delta < 0.0 && std::isfinite(lo[k])) {
        ratio = (val[k] - lo[k]) / -delta;
      } else if (delta > 0.0 && std::isfinite(up[k])) {
        ratio = (up[k] - val[k]) / delta;
      }
      if (std::max(ratio, 0.0) > min_ratio + slack) continue;
      if (row < 0) {
        row = i;
      } else if (bland) {
        if (basis[i] < basis[row]) row = i;
      } else if (std::abs(alpha) > std::abs(t(row, q))) {
        row = i;
      }
    }
    step = min_ratio;
    return row;
  }

  // Runs primal simplex iterations with the current cost vector.
  LpStatus iterate() {
    const int cap = 200 * (m + ncols) + 20000;
    bland = false;
    degenerate_run = 0;
    const int degenerate_limit = 10 * (m + ncols);
    int refreshes = 0;
    for (;;) {
      if (++iterations > cap) throw SolverFailure("simplex iteration cap hit");
      if (since_reinvert >= kReinvertEvery) reinvert();
      int q = -1, dir = 0;
      if (!choose_entering(q, dir)) {
        // Confirm optimality on freshly computed data.
        if (since_reinvert > 0 &&
            (max_residual() > 1e-10 || max_primal_infeasibility() > kPrimalTol) &&
            refreshes < 3) {
          ++refreshes;
          reinvert();
          if (max_primal_infeasibility() > 1e-7) {
            throw SolverFailure("lost primal feasibility");
          }
          continue;
        }
        return LpStatus::Optimal;
      }
      double step = 0.0;
      const int r = ratio_test(q, dir, step);
      if (r == -2) return LpStatus::Unbounded;
      if (step > 0.0) {
        val[q] += dir * step;
        for (int i = 0; i < m; ++i) {
          const double alpha = t(i, q);
          if (alpha != 0.0) val[basis[i]] -= alpha * dir * step;
        }
      }
      if (r == -1) {
        if (dir > 0) {
          val[q] = up[q];
          state[q] = VarState::Upper;
        } else {
          val[q] = lo[q];
          state[q] = VarState::Lower;
        }
      } else {
        const int leaving = basis[r];
        const double delta = -t(r, q) * dir;
        pivot(r, q);
        if (lo[leaving] == up[leaving]) {
          val[leaving] = lo[leaving];
          state[leaving] = VarState::Fixed;
        } else if (delta < 0.0) {
          val[leaving] = lo[leaving];
          state[leaving] = VarState::Lower;
        } else {
          val[leaving] = up[leaving];
          state[leaving] = VarState::Upper;
        }
      }
      if (step <= 1e-12) {
        if (++degenerate_run >= degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
      }
    }
  }

  void set_costs(bool phase_one) {
    cost.assign(nvars, 0.0);
    if (phase_one) {
      for (int i = 0; i < m; ++i) {
        const int art = ncols + m + i;
        if (up[art] > 0.0) cost[art] = 1.0;
      }
    } else {
      const double sign = prob.sense == ObjSense::Maximize ? -1.0 : 1.0;
      for (int j = 0; j < ncols; ++j) cost[j] = sign * prob.cost[j];
    }
    compute_reduced_costs();
  }

  // Phase 1; returns false when the problem is infeasible.
  bool phase_one() {
    cold_start();
    bool any_art = false;
    for (int i = 0; i < m; ++i) any_art |= basis[i] >= ncols + m;
    if (any_art) {
      set_costs(true);
      if (iterate() != LpStatus::Optimal) {
        throw SolverFailure("phase 1 reported unbounded");
      }
      double art_sum = 0.0;
      double scale = 1.0;
      for (int i = 0; i < m; ++i) {
        art_sum += val[ncols + m + i];
        scale = std::max(scale, std::abs(prob.rows[i].rhs));
      }
      if (art_sum > kPrimalTol * scale) return false;
      // Drive remaining basic artificials out of the basis.
      for (int i = 0; i < m; ++i) {
        if (basis[i] < ncols + m) continue;
        int best = -1;
        double best_abs = 1e-7;
        for (int j = 0; j < ncols + m; ++j) {
          if (state[j] == VarState::Basic) continue;
          if (std::abs(t(i, j)) > best_abs) {
            best_abs = std::abs(t(i, j));
            best = j;
          }
        }
        if (best >= 0) {
          // Degenerate pivot; reinvert() below recomputes basic values.
          const int leaving = basis[i];
          pivot(i, best);
          val[leaving] = 0.0;
          state[leaving] = VarState::Fixed;
        }
      }
      for (int i = 0; i < m; ++i) {
        const int art = ncols + m + i;
        lo[art] = up[art] = 0.0;
        if (state[art] != VarState::Basic) {
          state[art] = VarState::Fixed;
          val[art] = 0.0;
        }
      }
      width = ncols + m;
      reinvert();
    } else {
      width = ncols + m;
    }
    has_basis = true;
    return true;
  }

  // Tries to move nonbasic free columns into the basis without changing
  // the objective, so the final point is a vertex whenever one exists.
  void basify_free_columns() {
    for (int j = 0; j < ncols; ++j) {
      if (state[j] != VarState::Free) continue;
      for (int dir : {1, -1}) {
        double step = 0.0;
        const int r = ratio_test(j, dir, step);
        if (r < 0) continue;
        val[j] += dir * step;
        for (int i = 0; i < m; ++i) {
          const double alpha = t(i, j);
          if (alpha != 0.0) val[basis[i]] -= alpha * dir * step;
        }
        const int leaving = basis[r];
        const double delta = -t(r, j) * dir;
        pivot(r, j);
        if (lo[leaving] == up[leaving]) {
          val[leaving] = lo[leaving];
          state[leaving] = VarState::Fixed;
        } else if (delta < 0.0) {
          val[leaving] = lo[leaving];
          state[leaving] = VarState::Lower;
        } else {
          val[leaving] = up[leaving];
          state[leaving] = VarState::Upper;
        }
        break;
      }
    }
  }

  LpSolution extract(LpStatus status) {
    LpSolution sol;
    sol.status = status;
    sol.iterations = iterations;
    if (status != LpStatus::Optimal) return sol;
    sol.x.assign(val.begin(), val.begin() + ncols);
    for (int j = 0; j < ncols; ++j) {
      if (std::isfinite(lo[j]) && std::abs(sol.x[j] - lo[j]) <= kSnapTol) {
        sol.x[j] = lo[j];
      } else if (std::isfinite(up[j]) && std::abs(sol.x[j] - up[j]) <= kSnapTol) {
        sol.x[j] = up[j];
      }
    }
    sol.row_activity.resize(m);
    for (int i = 0; i < m; ++i) {
      double act = 0.0;
      for (const auto& e : prob.rows[i].coeffs) act += e.value * sol.x[e.index];
      sol.row_activity[i] = act;
    }
    double obj = 0.0;
    for (int j = 0; j < ncols; ++j) obj += prob.cost[j] * sol.x[j];
    sol.objective = obj;
    auto tag = [&](int k) {
      switch (state[k]) {
        case VarState::Basic:
          return BasisTag::Basic;
        case VarState::Upper:
          return BasisTag::AtUpper;
        case VarState::Free:
          return BasisTag::FreeZero;
        default:
          return BasisTag::AtLower;
      }
    };
    sol.col_basis.resize(ncols);
    for (int j = 0; j < ncols; ++j) sol.col_basis[j] = tag(j);
    sol.row_basis.resize(m);
    for (int i = 0; i < m; ++i) sol.row_basis[i] = tag(ncols + i);
    sol.is_vertex = std::none_of(sol.col_basis.begin(), sol.col_basis.end(),
                                 [](BasisTag b) { return b == BasisTag::FreeZero; });
    return sol;
  }

  LpSolution run() {
    iterations = 0;
    if (!has_basis) {
      if (!phase_one()) return extract(LpStatus::Infeasible);
    }
    set_costs(false);
    const LpStatus status = iterate();
    if (status == LpStatus::Optimal) basify_free_columns();
    return extract(status);
  }
};

LpSolver::LpSolver(LpProblem problem)
    : impl_(std::make_unique<Impl>(std::move(problem))) {}
LpSolver::~LpSolver() = default;
LpSolver::LpSolver(LpSolver&&) noexcept = default;
LpSolver& LpSolver::operator=(LpSolver&&) noexcept = default;

LpSolution LpSolver::solve() {
  try {
    return impl_->run();
  } catch (const SolverFailure&) {
    if (!impl_->has_basis) throw;
    // Numerical trouble on a warm basis: retry once from scratch.
    impl_->has_basis = false;
    return impl_->run();
  }
}

void LpSolver::set_objective(std::vector<double> cost, ObjSense sense) {
  if (cost.size() != impl_->prob.cost.size()) {
    throw InvalidArgument("objective length differs from column count");
  }
  impl_->prob.cost = std::move(cost);
  impl_->prob.sense = sense;
}

const LpProblem& LpSolver::problem() const { return impl_->prob; }

LpSolution solve_lp(const LpProblem& problem) {
  LpSolver solver(problem);
  return solver.solve();
}

LpProblem relaxation(const MixedBinaryInstance& instance) {
  LpProblem lp;
  lp.sense = ObjSense::Maximize;
  for (int j = 0; j < instance.n; ++j) {
    lp.add_column(0.0, 1.0,
                  instance.objective ? (*instance.objective)[j] : 0.0);
  }
  for (int j = 0; j < instance.d; ++j) {
    lp.add_column(-kInfinity, kInfinity,
                  instance.objective ? (*instance.objective)[instance.n + j]
                                     : 0.0);
  }
  for (const auto& row : instance.rows) {
    SparseVector coeffs = row.bin_coeffs;
    for (const auto& e : row.cont_coeffs) {
      coeffs.push_back({instance.n + e.index, e.value});
    }
    lp.add_row(std::move(coeffs), row.sense, row.rhs);
  }
  return lp;
}

std::optional<MixedPoint> lift(const MixedBinaryInstance& instance,
                               const BinaryPoint& x) {
  if (x.size() != static_cast<std::size_t>(instance.n)) {
    throw InvalidArgument("lift: point dimension does not match the instance");
  }
  const auto xs = x.as_doubles();
  if (instance.d == 0) {
    for (const auto& row : instance.rows) {
      if (row_violation(row, xs, {}) > kRowTolerance) return std::nullopt;
    }
    return MixedPoint{xs, {}};
  }
  LpProblem lp;
  for (int j = 0; j < instance.d; ++j) lp.add_column(-kInfinity, kInfinity);
  for (const auto& row : instance.rows) {
    const double rhs = row.rhs - dot(row.bin_coeffs, xs);
    if (row.cont_coeffs.empty()) {
      const double zero[1] = {0.0};
      LinearRow fixed{{}, {}, row.sense, rhs};
      if (row_violation(fixed, zero, zero) > kRowTolerance) return std::nullopt;
      continue;
    }
    lp.add_row(row.cont_coeffs, row.sense, rhs);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  MixedPoint p{xs, sol.x};
  if (!check_feasible(instance, p, 1e-7)) return std::nullopt;
  return p;
}

}  // namespace fpump
