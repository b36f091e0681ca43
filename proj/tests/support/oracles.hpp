#pragma once

// Brute-force reference computations used to check the library. None of
// these call into the solver code they are compared against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "fpump/lp.hpp"
#include "fpump/model.hpp"

namespace oracle {

// Solves the square system M z = r by Gaussian elimination with partial
// pivoting. Returns nullopt when M is (numerically) singular.
inline std::optional<std::vector<double>> solve_square(
    std::vector<std::vector<double>> m, std::vector<double> r) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    }
    if (std::abs(m[piv][c]) < 1e-10) return std::nullopt;
    std::swap(m[piv], m[c]);
    std::swap(r[piv], r[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = m[i][c] / m[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
      r[i] -= f * r[c];
    }
  }
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / m[i][i];
  return z;
}

struct BruteLp {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
};

// Optimum of a bounded LP by enumerating every basic solution: choose n
// tight constraints among column bounds and rows, solve, keep the feasible
// ones. Every column needs finite bounds.
inline BruteLp brute_force_lp(const fpump::LpProblem& lp, double tol = 1e-7) {
  const int n = lp.num_cols();
  struct Hyper {
    std::vector<double> coeffs;
    double rhs;
  };
  std::vector<Hyper> planes;
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    planes.push_back({e, lp.lower[static_cast<std::size_t>(j)]});
    if (lp.upper[static_cast<std::size_t>(j)] != lp.lower[static_cast<std::size_t>(j)]) {
      planes.push_back({e, lp.upper[static_cast<std::size_t>(j)]});
    }
  }
  for (const auto& row : lp.rows) {
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    for (const auto& e : row.coeffs) c[static_cast<std::size_t>(e.index)] = e.value;
    planes.push_back({c, row.rhs});
  }

  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j) {
      const auto u = static_cast<std::size_t>(j);
      if (x[u] < lp.lower[u] - tol || x[u] > lp.upper[u] + tol) return false;
    }
    for (const auto& row : lp.rows) {
      const double v = fpump::dot(row.coeffs, x);
      const double scale = 1.0 + std::abs(row.rhs);
      if (row.sense == fpump::Sense::LE && v > row.rhs + tol * scale) return false;
      if (row.sense == fpump::Sense::GE && v < row.rhs - tol * scale) return false;
      if (row.sense == fpump::Sense::EQ && std::abs(v - row.rhs) > tol * scale) return false;
    }
    return true;
  };

  BruteLp best;
  const int pool = static_cast<int>(planes.size());
  if (n > pool) return best;
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::iota(pick.begin(), pick.end(), 0);
  const bool maximize = lp.sense == fpump::ObjSense::Maximize;
  while (true) {
    std::vector<std::vector<double>> m;
    std::vector<double> r;
    for (int i : pick) {
      m.push_back(planes[static_cast<std::size_t>(i)].coeffs);
      r.push_back(planes[static_cast<std::size_t>(i)].rhs);
    }
    if (auto z = solve_square(m, r); z && feasible(*z)) {
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += lp.cost[static_cast<std::size_t>(j)] * (*z)[static_cast<std::size_t>(j)];
      if (!best.feasible || (maximize ? obj > best.objective : obj < best.objective)) {
        best.feasible = true;
        best.objective = obj;
        best.x = *z;
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == pool - n + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) pick[static_cast<std::size_t>(k)] = pick[static_cast<std::size_t>(k - 1)] + 1;
  }
  return best;
}

// min sum |x_j - t_j|  s.t.  a x = b,  x in [0,1]^n  for a > 0 and binary t.
// Moving coordinates away from t in the direction that closes the gap, the
// cheapest per unit of activity are those with the largest a_j, so the
// fractional knapsack greedy is exact. Returns -1 when infeasible.
inline double subset_sum_projection_distance(const std::vector<double>& a,
                                             double b,
                                             const std::vector<int>& t) {
  double act = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) act += a[j] * t[j];
  double gap = b - act;
  if (std::abs(gap) < 1e-12) return 0.0;
  const int movable = gap > 0 ? 0 : 1;
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (t[j] == movable) idx.push_back(j);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) { return a[p] > a[q]; });
  double need = std::abs(gap);
  double dist = 0.0;
  for (std::size_t j : idx) {
    if (need <= 1e-12) break;
    const double take = std::min(1.0, need / a[j]);
    dist += take;
    need -= take * a[j];
  }
  return need > 1e-9 ? -1.0 : dist;
}

// All binary points of a pure-binary instance that satisfy every row.
inline std::vector<fpump::BinaryPoint> enumerate_feasible(
    const fpump::MixedBinaryInstance& inst) {
  std::vector<fpump::BinaryPoint> out;
  const int n = inst.n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    fpump::BinaryPoint p(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) p.set(static_cast<std::size_t>(j), (mask >> j) & 1u);
    const auto xd = p.as_doubles();
    bool ok = true;
    for (const auto& row : inst.rows) {
      const double v = fpump::dot(row.bin_coeffs, xd);
      if ((row.sense == fpump::Sense::LE && v > row.rhs + 1e-9) ||
          (row.sense == fpump::Sense::GE && v < row.rhs - 1e-9) ||
          (row.sense == fpump::Sense::EQ && std::abs(v - row.rhs) > 1e-9)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(p);
  }
  return out;
}

// Componentwise rounding by brute force over {0,1}^n: the l1-nearest point,
// with exact halves going to 1.
inline std::vector<int> nearest_binary(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> best;
  double best_d = 1e300;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> z(static_cast<std::size_t>(n));
    double d = 0.0;
    for (int j = 0; j < n; ++j) {
      z[static_cast<std::size_t>(j)] = (mask >> j) & 1u;
      d += std::abs(v[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(j)]);
    }
    // Among ties prefer more ones: that is the 1/2 -> 1 convention.
    const int ones = static_cast<int>(std::count(z.begin(), z.end(), 1));
    const int best_ones = static_cast<int>(std::count(best.begin(), best.end(), 1));
    if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && ones > best_ones)) {
      best_d = d;
      best = z;
    }
  }
  return best;
}

}  // namespace oracle
