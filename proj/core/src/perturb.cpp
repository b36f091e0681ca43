#include "fpump/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpump/errors.hpp"

namespace fpump {

const char* to_string(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::WalkSat:
      return "WalkSat";
    case PerturbKind::Original:
      return "Original";
    case PerturbKind::WfpBaseHybrid:
      return "WfpBaseHybrid";
    case PerturbKind::Restart:
      return "Restart";
  }
  return "?";
}

namespace {

PerturbOutcome apply_flips(const BinaryPoint& x, std::vector<int> flipped,
                           PerturbKind kind) {
  std::sort(flipped.begin(), flipped.end());
  flipped.erase(std::unique(flipped.begin(), flipped.end()), flipped.end());
  PerturbOutcome out;
  out.new_x = x;
  for (int j : flipped) out.new_x.flip(static_cast<std::size_t>(j));
  out.flipped = std::move(flipped);
  out.kind = kind;
  return out;
}

void check_dims(const BinaryPoint& x, std::span<const double> xbar) {
  if (x.size() != xbar.size()) {
    throw InvalidArgument("perturbation: dimension mismatch");
  }
}

int draw_tt(Rng& rng, TTRange range) {
  if (range.lo < 0 || range.hi < range.lo) {
    throw InvalidArgument("perturbation: bad TT range");
  }
  return static_cast<int>(rng.between(range.lo, range.hi));
}

// Indices ordered by fractionality (descending), then index. Values are
// compared on a 1e-12 grid so that float noise does not beat the index.
std::vector<int> by_fractionality(const std::vector<double>& f) {
  std::vector<long long> key(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) key[j] = std::llround(f[j] * 1e12);
  std::vector<int> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return key[a] > key[b]; });
  return order;
}

}  // namespace

std::vector<double> fractionality(const BinaryPoint& x,
                                  std::span<const double> xbar) {
  check_dims(x, xbar);
  std::vector<double> f(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) f[j] = std::abs(xbar[j] - x[j]);
  return f;
}

PerturbOutcome perturb_l(const BinaryPoint& x, const ProjectedCertificate& cert,
                         int l, Rng& rng) {
  if (l < 1) throw InvalidArgument("perturb_l: l must be at least 1");
  if (cert.a.empty()) {
    throw InvalidArgument("perturb_l: certificate has empty binary support");
  }
  std::vector<int> drawn;
  drawn.reserve(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) {
    drawn.push_back(cert.a[rng.below(cert.a.size())].index);
  }
  PerturbOutcome out = apply_flips(x, std::move(drawn), PerturbKind::WalkSat);
  out.certificate = cert;
  return out;
}

PerturbOutcome original_perturb(const BinaryPoint& x,
                                std::span<const double> xbar, Rng& rng,
                                TTRange range) {
  const auto f = fractionality(x, xbar);
  const int tt = draw_tt(rng, range);
  std::vector<int> flips;
  for (int j : by_fractionality(f)) {
    if (static_cast<int>(flips.size()) >= tt) break;
    if (f[j] <= kFractionalityEps) break;
    flips.push_back(j);
  }
  PerturbOutcome out = apply_flips(x, std::move(flips), PerturbKind::Original);
  out.tt = tt;
  return out;
}

PerturbOutcome original_perturb_zero_frac(const BinaryPoint& x,
                                          std::span<const double> xbar,
                                          Rng& rng, TTRange range) {
  const auto f = fractionality(x, xbar);
  const int tt = draw_tt(rng, range);
  const auto order = by_fractionality(f);
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(tt), order.size());
  PerturbOutcome out = apply_flips(
      x, std::vector<int>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count)),
      PerturbKind::Original);
  out.tt = tt;
  return out;
}

PerturbOutcome wfpbase_perturb(const BinaryPoint& x,
                               std::span<const double> xbar,
                               const MixedBinaryInstance& instance,
                               const MixedPoint& current, Rng& rng,
                               TTRange range) {
  const auto f = fractionality(x, xbar);
  const int tt = draw_tt(rng, range);
  std::vector<int> frac;
  for (int j : by_fractionality(f)) {
    if (f[j] <= kFractionalityEps) break;
    frac.push_back(j);
  }
  const int nf = static_cast<int>(frac.size());
  if (tt <= nf) {
    frac.resize(static_cast<std::size_t>(tt));
    PerturbOutcome out = apply_flips(x, std::move(frac), PerturbKind::Original);
    out.tt = tt;
    return out;
  }
  std::vector<char> in_f(x.size(), 0);
  for (int j : frac) in_f[static_cast<std::size_t>(j)] = 1;
  std::vector<char> in_s(x.size(), 0);
  for (const auto& row : instance.rows) {
    if (row_violation(row, current.x, current.y) <= kRowTolerance) continue;
    for (const auto& e : row.bin_coeffs) in_s[static_cast<std::size_t>(e.index)] = 1;
  }
  std::vector<int> pool;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (in_s[j] && !in_f[j]) pool.push_back(static_cast<int>(j));
  }
  const auto extra = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(tt - nf));
  // Partial Fisher-Yates: the first `extra` slots become the sample.
  for (std::size_t i = 0; i < extra; ++i) {
    const auto k = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[k]);
  }
  std::vector<int> flips = frac;
  flips.insert(flips.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(extra));
  PerturbOutcome out =
      apply_flips(x, std::move(flips), PerturbKind::WfpBaseHybrid);
  out.tt = tt;
  return out;
}

bool restart_flip(double f, double r, RestartRule rule) {
  return f + std::max(r - rule.offset, 0.0) > rule.threshold;
}

PerturbOutcome restart_perturb(const BinaryPoint& x,
                               std::span<const double> xbar, Rng& rng,
                               RestartRule rule) {
  const auto f = fractionality(x, xbar);
  std::vector<int> flips;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double r = rng.uniform();
    if (restart_flip(f[j], r, rule)) {
      flips.push_back(static_cast<int>(j));
    }
  }
  return apply_flips(x, std::move(flips), PerturbKind::Restart);
}

}  // namespace fpump
