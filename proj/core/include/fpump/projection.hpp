#pragma once

#include <memory>
#include <span>

#include "fpump/lp.hpp"
#include "fpump/model.hpp"

namespace fpump {

struct ProjectionResult {
  MixedPoint projected;
  /// ||x~ - x||_1 over the binary coordinates.
  double distance = 0.0;
  BinaryPoint rounded;
};

/// Values within this distance of 1/2 are treated as exactly 1/2.
inline constexpr double kHalfSnap = 1e-9;

/// Nearest 0/1 vector, with 1/2 rounded up. Throws InvalidArgument on an
/// entry outside [-tol, 1 + tol].
BinaryPoint round_point(std::span<const double> x,
                        double tol = kIntegralityTolerance);

/// l1-projection of a binary point onto the LP relaxation.
///
/// Holds one LP solver for the relaxation and re-optimizes it for every
/// target, so successive projections start from the previous basis.
class Projector {
 public:
  explicit Projector(const MixedBinaryInstance& instance);
  ~Projector();
  Projector(Projector&&) noexcept;
  Projector& operator=(Projector&&) noexcept;

  /// Throws InstanceInfeasible when the relaxation is empty.
  ProjectionResult project(const BinaryPoint& target);
  /// Optimal vertex of the relaxation for the instance objective (zero
  /// objective when absent).
  MixedPoint relaxation_optimum();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Cold-start projection: a pure function of (instance, target).
ProjectionResult l1_proj(const MixedBinaryInstance& instance,
                         const BinaryPoint& target);

BinaryPoint alt_proj(const MixedBinaryInstance& instance,
                     const BinaryPoint& target);

struct FixpointResult {
  BinaryPoint point;
  int applications = 0;
  bool reached = false;
};

/// Iterates alt_proj until the point stops changing or `cap` applications
/// have been made.
FixpointResult alt_proj_fixpoint(const MixedBinaryInstance& instance,
                                 const BinaryPoint& start, int cap);
FixpointResult alt_proj_fixpoint(Projector& projector, const BinaryPoint& start,
                                 int cap);

/// Like alt_proj_fixpoint but throws NoFixpoint when the cap is exhausted.
BinaryPoint alt_proj_star(const MixedBinaryInstance& instance,
                          const BinaryPoint& start, int cap);

int default_fixpoint_cap(const MixedBinaryInstance& instance);

/// AltProj(x~) == x~.
bool is_stalling(const MixedBinaryInstance& instance, const BinaryPoint& x);

}  // namespace fpump
