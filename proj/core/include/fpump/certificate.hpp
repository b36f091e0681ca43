#pragma once

#include <vector>

#include "fpump/model.hpp"

namespace fpump {

inline constexpr double kCertificateTolerance = 1e-7;

/// A non-negative combination of <= rows whose continuous part cancels,
/// leaving an inequality  a x <= beta  on the binary columns that the
/// point violates.
///
/// Row indices refer to normalize(instance); `original_rows` maps them back
/// through the origin map (an EQ row can show up through either copy).
struct ProjectedCertificate {
  SparseVector lambda;
  SparseVector a;
  double beta = 0.0;
  std::vector<int> support_rows;
  std::vector<int> original_rows;
  double violation = 0.0;
};

/// Extreme-point optimum of
///   max lambda (A x - b)  s.t.  B^T lambda = 0,  sum lambda = 1,  lambda >= 0
/// over the normalized rows. A basic optimum has inclusion-minimal support
/// of size at most d + 1.
///
/// Throws NotACertificate when the optimum is not above tolerance, which
/// means x lies in the binary projection of the relaxation.
ProjectedCertificate min_certificate(const MixedBinaryInstance& instance,
                                     const BinaryPoint& x);

/// Brute-force minimality check: true iff no proper subset of the
/// support rows admits a projected certificate for x. Throws
/// InvalidArgument when the normalized instance has more than 12 rows.
bool verify_minimal(const MixedBinaryInstance& instance,
                    const ProjectedCertificate& cert, const BinaryPoint& x);

/// Max violation of  lambda (A x - b) > 0  achievable on the given subset
/// of normalized rows (negative or zero when none exists).
double best_violation_on_rows(const MixedBinaryInstance& normalized,
                              const std::vector<int>& rows,
                              const BinaryPoint& x);

/// min{ s_i (d_i + 1), n_i } per block, with s_i the largest binary row
/// support inside the block. Uses the stored blocks when present.
std::vector<int> cert_supp_bound(const MixedBinaryInstance& instance);

}  // namespace fpump
