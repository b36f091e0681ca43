#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpump/certificate.hpp"
#include "fpump/model.hpp"
#include "fpump/rng.hpp"

namespace fpump {

enum class PerturbKind { WalkSat, Original, WfpBaseHybrid, Restart };

const char* to_string(PerturbKind kind);

/// Inclusive range the flip count TT is drawn from.
struct TTRange {
  int lo = 10;
  int hi = 30;
};

/// Restart rule: flip j iff  f_j + max(r_j - offset, 0) > threshold.
struct RestartRule {
  double offset = 0.3;
  double threshold = 0.5;
};

/// Fractionalities at or below this count as zero.
inline constexpr double kFractionalityEps = 1e-9;

struct PerturbOutcome {
  BinaryPoint new_x;
  /// Sorted, distinct.
  std::vector<int> flipped;
  PerturbKind kind = PerturbKind::WalkSat;
  std::optional<ProjectedCertificate> certificate;
  /// Drawn flip count, -1 when the rule does not draw one.
  int tt = -1;
};

/// |xbar_j - x_j| per coordinate.
std::vector<double> fractionality(const BinaryPoint& x,
                                  std::span<const double> xbar);

/// Draws `l` indices from supp(cert.a) uniformly with replacement and
/// flips the distinct ones. Throws InvalidArgument on an empty support.
PerturbOutcome perturb_l(const BinaryPoint& x, const ProjectedCertificate& cert,
                         int l, Rng& rng);

/// Flips the min{TT, NN} most fractional coordinates (ties by index),
/// where NN counts coordinates with positive fractionality.
PerturbOutcome original_perturb(const BinaryPoint& x,
                                std::span<const double> xbar, Rng& rng,
                                TTRange range = {});

/// Flips exactly TT coordinates (all of them if TT > n) ordered by
/// fractionality, then index; zero-fractionality ones included.
PerturbOutcome original_perturb_zero_frac(const BinaryPoint& x,
                                          std::span<const double> xbar,
                                          Rng& rng, TTRange range = {});

/// Original rule while TT <= |F|. Otherwise flips all of F plus up to
/// TT - |F| coordinates drawn without replacement from the binary
/// supports of the rows violated by `current`, excluding F.
PerturbOutcome wfpbase_perturb(const BinaryPoint& x,
                               std::span<const double> xbar,
                               const MixedBinaryInstance& instance,
                               const MixedPoint& current, Rng& rng,
                               TTRange range = {});

/// The restart decision for one coordinate.
bool restart_flip(double f, double r, RestartRule rule = {});

/// Draws r_j ~ U[0,1) for every j in index order and flips where
/// restart_flip holds.
PerturbOutcome restart_perturb(const BinaryPoint& x,
                               std::span<const double> xbar, Rng& rng,
                               RestartRule rule = {});

}  // namespace fpump
