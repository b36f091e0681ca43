#include "fpump/projection.hpp"

#include <cmath>

#include "fpump/errors.hpp"

namespace fpump {

BinaryPoint round_point(std::span<const double> x, double tol) {
  BinaryPoint out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    double v = x[j];
    if (!(v >= -tol && v <= 1.0 + tol)) {
      throw InvalidArgument("round: entry " + std::to_string(j) +
                            " outside [0,1]");
    }
    if (std::abs(v - 0.5) <= kHalfSnap) v = 0.5;
    out.set(j, v >= 0.5 ? 1 : 0);
  }
  return out;
}

struct Projector::Impl {
  const MixedBinaryInstance& instance;
  LpSolver solver;
  std::vector<double> cost;

  explicit Impl(const MixedBinaryInstance& inst)
      : instance(inst), solver(relaxation(inst)) {
    cost.assign(static_cast<std::size_t>(inst.n + inst.d), 0.0);
  }

  LpSolution solve() {
    LpSolution sol = solver.solve();
    if (sol.status == LpStatus::Infeasible) {
      throw InstanceInfeasible("LP relaxation of '" + instance.name +
                               "' is infeasible");
    }
    if (sol.status == LpStatus::Unbounded) {
      throw SolverFailure("LP relaxation of '" + instance.name +
                          "' is unbounded");
    }
    return sol;
  }

  MixedPoint split(const LpSolution& sol) const {
    MixedPoint p;
    p.x.assign(sol.x.begin(), sol.x.begin() + instance.n);
    p.y.assign(sol.x.begin() + instance.n, sol.x.end());
    return p;
  }
};

Projector::Projector(const MixedBinaryInstance& instance)
    : impl_(std::make_unique<Impl>(instance)) {}
Projector::~Projector() = default;
Projector::Projector(Projector&&) noexcept = default;
Projector& Projector::operator=(Projector&&) noexcept = default;

ProjectionResult Projector::project(const BinaryPoint& target) {
  const auto& inst = impl_->instance;
  if (target.size() != static_cast<std::size_t>(inst.n)) {
    throw InvalidArgument("projection target has the wrong dimension");
  }
  // |x~_j - x_j| is x_j when x~_j = 0 and 1 - x_j when x~_j = 1.
  auto& cost = impl_->cost;
  for (int j = 0; j < inst.n; ++j) cost[j] = target[j] ? -1.0 : 1.0;
  impl_->solver.set_objective(cost, ObjSense::Minimize);
  const LpSolution sol = impl_->solve();
  ProjectionResult res;
  res.projected = impl_->split(sol);
  double dist = 0.0;
  for (int j = 0; j < inst.n; ++j) {
    dist += std::abs(res.projected.x[j] - target[j]);
  }
  res.distance = dist;
  res.rounded = round_point(res.projected.x);
  return res;
}

MixedPoint Projector::relaxation_optimum() {
  const auto& inst = impl_->instance;
  std::vector<double> cost(static_cast<std::size_t>(inst.n + inst.d), 0.0);
  if (inst.objective) cost = *inst.objective;
  impl_->solver.set_objective(std::move(cost), ObjSense::Maximize);
  return impl_->split(impl_->solve());
}

ProjectionResult l1_proj(const MixedBinaryInstance& instance,
                         const BinaryPoint& target) {
  Projector projector(instance);
  return projector.project(target);
}

BinaryPoint alt_proj(const MixedBinaryInstance& instance,
                     const BinaryPoint& target) {
  return l1_proj(instance, target).rounded;
}

FixpointResult alt_proj_fixpoint(Projector& projector, const BinaryPoint& start,
                                 int cap) {
  if (cap < 1) throw InvalidArgument("fixpoint cap must be at least 1");
  FixpointResult res{start, 0, false};
  while (res.applications < cap) {
    BinaryPoint next = projector.project(res.point).rounded;
    ++res.applications;
    if (next == res.point) {
      res.reached = true;
      return res;
    }
    res.point = std::move(next);
  }
  return res;
}

FixpointResult alt_proj_fixpoint(const MixedBinaryInstance& instance,
                                 const BinaryPoint& start, int cap) {
  if (cap < 1) throw InvalidArgument("fixpoint cap must be at least 1");
  // Cold projections keep every application a function of its input only.
  FixpointResult res{start, 0, false};
  while (res.applications < cap) {
    BinaryPoint next = alt_proj(instance, res.point);
    ++res.applications;
    if (next == res.point) {
      res.reached = true;
      return res;
    }
    res.point = std::move(next);
  }
  return res;
}

BinaryPoint alt_proj_star(const MixedBinaryInstance& instance,
                          const BinaryPoint& start, int cap) {
  FixpointResult res = alt_proj_fixpoint(instance, start, cap);
  if (!res.reached) {
    throw NoFixpoint("alternating projection did not stabilize within " +
                     std::to_string(cap) + " applications");
  }
  return res.point;
}

int default_fixpoint_cap(const MixedBinaryInstance& instance) {
  return 2 * instance.n + 10;
}

bool is_stalling(const MixedBinaryInstance& instance, const BinaryPoint& x) {
  return alt_proj(instance, x) == x;
}

}  // namespace fpump
