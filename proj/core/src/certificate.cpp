#include "fpump/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fpump/errors.hpp"
#include "fpump/lp.hpp"

namespace fpump {

namespace {

constexpr double kLambdaZero = 1e-12;

// Certificate LP restricted to `rows` of a normalized instance.
LpSolution solve_certificate_lp(const MixedBinaryInstance& inst,
                                const std::vector<int>& rows,
                                const std::vector<double>& xs) {
  LpProblem lp;
  lp.sense = ObjSense::Maximize;
  for (int r : rows) {
    const auto& row = inst.rows[static_cast<std::size_t>(r)];
    lp.add_column(0.0, kInfinity, dot(row.bin_coeffs, xs) - row.rhs);
  }
  // One equation per continuous column that the rows touch.
  std::vector<std::vector<SparseEntry>> by_cont(static_cast<std::size_t>(inst.d));
  for (int c = 0; c < static_cast<int>(rows.size()); ++c) {
    const auto& row = inst.rows[static_cast<std::size_t>(rows[c])];
    for (const auto& e : row.cont_coeffs) {
      by_cont[static_cast<std::size_t>(e.index)].push_back({c, e.value});
    }
  }
  for (auto& entries : by_cont) {
    if (entries.empty()) continue;
    lp.add_row(make_sparse(std::move(entries)), Sense::EQ, 0.0);
  }
  SparseVector ones;
  for (int c = 0; c < static_cast<int>(rows.size()); ++c) ones.push_back({c, 1.0});
  lp.add_row(std::move(ones), Sense::EQ, 1.0);
  return solve_lp(lp);
}

}  // namespace

ProjectedCertificate min_certificate(const MixedBinaryInstance& instance,
                                     const BinaryPoint& x) {
  const MixedBinaryInstance inst =
      instance.is_normalized() ? instance : normalize(instance);
  if (x.size() != static_cast<std::size_t>(inst.n)) {
    throw InvalidArgument("certificate: point dimension mismatch");
  }
  if (inst.rows.empty()) {
    throw NotACertificate("instance has no rows; every point is feasible");
  }
  const auto xs = x.as_doubles();
  std::vector<int> all(inst.rows.size());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = static_cast<int>(r);
  const LpSolution sol = solve_certificate_lp(inst, all, xs);
  if (sol.status != LpStatus::Optimal) {
    throw SolverFailure(std::string("certificate LP ended ") +
                        to_string(sol.status));
  }
  if (sol.objective <= kCertificateTolerance) {
    throw NotACertificate("point lies in the binary projection (optimum " +
                          std::to_string(sol.objective) + ")");
  }

  ProjectedCertificate cert;
  std::vector<double> a(static_cast<std::size_t>(inst.n), 0.0);
  std::vector<double> lam_b(static_cast<std::size_t>(inst.d), 0.0);
  for (int r = 0; r < inst.num_rows(); ++r) {
    const double lam = sol.x[static_cast<std::size_t>(r)];
    if (lam <= kLambdaZero) continue;
    const auto& row = inst.rows[static_cast<std::size_t>(r)];
    cert.lambda.push_back({r, lam});
    cert.support_rows.push_back(r);
    for (const auto& e : row.bin_coeffs) a[e.index] += lam * e.value;
    for (const auto& e : row.cont_coeffs) lam_b[e.index] += lam * e.value;
    cert.beta += lam * row.rhs;
  }
  for (int j = 0; j < inst.n; ++j) {
    if (std::abs(a[j]) > kLambdaZero) cert.a.push_back({j, a[j]});
  }
  for (double v : lam_b) {
    if (std::abs(v) > kCertificateTolerance) {
      throw SolverFailure("certificate multipliers do not cancel B");
    }
  }
  cert.violation = dot(cert.a, xs) - cert.beta;
  if (cert.violation <= kCertificateTolerance) {
    throw NotACertificate("aggregated inequality is not violated");
  }
  std::set<int> originals;
  for (int r : cert.support_rows) originals.insert(inst.origin_of(r));
  cert.original_rows.assign(originals.begin(), originals.end());
  return cert;
}

double best_violation_on_rows(const MixedBinaryInstance& normalized,
                              const std::vector<int>& rows,
                              const BinaryPoint& x) {
  if (rows.empty()) return 0.0;
  const auto xs = x.as_doubles();
  const LpSolution sol = solve_certificate_lp(normalized, rows, xs);
  if (sol.status == LpStatus::Infeasible) return -kInfinity;
  if (sol.status != LpStatus::Optimal) {
    throw SolverFailure("subset certificate LP unbounded");
  }
  return sol.objective;
}

bool verify_minimal(const MixedBinaryInstance& instance,
                    const ProjectedCertificate& cert, const BinaryPoint& x) {
  const MixedBinaryInstance inst =
      instance.is_normalized() ? instance : normalize(instance);
  if (inst.num_rows() > 12) {
    throw InvalidArgument("verify_minimal: more than 12 rows");
  }
  const auto& support = cert.support_rows;
  const std::size_t k = support.size();
  if (k <= 1) return true;
  // Every nonempty proper subset of the support.
  const unsigned full = (1u << k) - 1u;
  for (unsigned mask = 1; mask < full; ++mask) {
    std::vector<int> subset;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) subset.push_back(support[i]);
    }
    if (best_violation_on_rows(inst, subset, x) > kCertificateTolerance) {
      return false;
    }
  }
  return true;
}

std::vector<int> cert_supp_bound(const MixedBinaryInstance& instance) {
  const std::vector<Block> blocks =
      instance.blocks ? *instance.blocks : detect_blocks(instance);
  std::vector<int> bounds;
  bounds.reserve(blocks.size());
  for (const auto& blk : blocks) {
    int s = 0;
    for (int r : blk.rows) {
      s = std::max(s, static_cast<int>(
                          instance.rows[static_cast<std::size_t>(r)].bin_coeffs.size()));
    }
    const int d = static_cast<int>(blk.cont_cols.size());
    const int n = static_cast<int>(blk.bin_cols.size());
    bounds.push_back(std::min(s * (d + 1), n));
  }
  return bounds;
}

}  // namespace fpump
