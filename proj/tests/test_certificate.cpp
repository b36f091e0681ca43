#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fpump/certificate.hpp"
#include "fpump/errors.hpp"
#include "fpump/gen.hpp"
#include "fpump/lp.hpp"
#include "support/random.hpp"

using namespace fpump;

namespace {

BinaryPoint bp(std::vector<int> v) { return BinaryPoint(v); }

// Rebuilds lambda A, lambda B, lambda b from the normalized rows and checks
// every stated property of a certificate for x.
void expect_valid(const MixedBinaryInstance& inst, const ProjectedCertificate& c,
                  const BinaryPoint& x) {
  const auto norm = normalize(inst);
  std::vector<double> a(static_cast<std::size_t>(inst.n), 0.0);
  std::vector<double> b(static_cast<std::size_t>(inst.d), 0.0);
  double beta = 0.0, sum = 0.0;
  std::vector<int> rows;
  for (const auto& e : c.lambda) {
    ASSERT_GT(e.value, 0.0);
    sum += e.value;
    rows.push_back(e.index);
    const auto& row = norm.rows[static_cast<std::size_t>(e.index)];
    for (const auto& q : row.bin_coeffs) a[static_cast<std::size_t>(q.index)] += e.value * q.value;
    for (const auto& q : row.cont_coeffs) b[static_cast<std::size_t>(q.index)] += e.value * q.value;
    beta += e.value * row.rhs;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
  for (double v : b) EXPECT_LE(std::abs(v), 1e-7);
  EXPECT_EQ(rows, c.support_rows);
  EXPECT_LE(static_cast<int>(c.support_rows.size()), inst.d + 1);
  EXPECT_NEAR(beta, c.beta, 1e-9);
  for (const auto& q : c.a) EXPECT_NEAR(a[static_cast<std::size_t>(q.index)], q.value, 1e-9);
  double ax = 0.0;
  for (int j = 0; j < inst.n; ++j) ax += a[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
  EXPECT_NEAR(ax - beta, c.violation, 1e-9);
  EXPECT_GT(c.violation, kCertificateTolerance);
  for (std::size_t i = 0; i < c.support_rows.size(); ++i) {
    EXPECT_EQ(c.original_rows[i], norm.origin_of(c.support_rows[i]));
  }
}

}  // namespace

TEST(MinCertificate, RemarkPoint) {
  const auto inst = remark_instance();
  const auto c = min_certificate(inst, bp({1, 1}));
  expect_valid(inst, c, bp({1, 1}));
  ASSERT_EQ(c.support_rows, (std::vector<int>{0}));
  EXPECT_EQ(c.a, (SparseVector{{0, 3.0}, {1, 1.0}}));
  EXPECT_DOUBLE_EQ(c.beta, 3.0);
  EXPECT_DOUBLE_EQ(c.violation, 1.0);
  EXPECT_TRUE(verify_minimal(inst, c, bp({1, 1})));
}

TEST(MinCertificate, PointInProjectionThrows) {
  EXPECT_THROW(min_certificate(remark_instance(), bp({1, 0})), NotACertificate);
}

TEST(MinCertificate, StaysInViolatedBlock) {
  const auto g = subset_sum_from({{1, 2}, {3, 1}}, {{1, 0}, {1, 0}});
  const auto x = bp({1, 0, 1, 1});
  const auto c = min_certificate(g.instance, x);
  expect_valid(g.instance, c, x);
  for (int r : c.support_rows) EXPECT_GE(r, 2);
  for (int r : c.original_rows) EXPECT_EQ(r, 1);
  for (const auto& e : c.a) EXPECT_GE(e.index, 2);
}

TEST(MinCertificate, PureBinaryHasSingleRow) {
  Rng rng(1);
  int seen = 0;
  for (int it = 0; it < 300; ++it) {
    const auto inst = testutil::random_instance(rng, 5, 0, 4);
    const auto x = testutil::random_point(rng, 5);
    if (check_feasible_binary(inst, x)) continue;
    const auto c = min_certificate(inst, x);
    EXPECT_EQ(c.support_rows.size(), 1u);
    expect_valid(inst, c, x);
    ++seen;
  }
  EXPECT_GT(seen, 100);
}

TEST(MinCertificate, RandomMixedInstancesAreMinimal) {
  Rng rng(2);
  int seen = 0;
  for (int it = 0; it < 400; ++it) {
    const auto inst = testutil::random_instance(rng, 4, 1 + static_cast<int>(rng.below(2)), 4);
    const auto x = testutil::random_point(rng, 4);
    if (solve_lp(relaxation(inst)).status != LpStatus::Optimal) continue;
    if (lift(inst, x).has_value()) continue;
    if (normalize(inst).num_rows() > 12) continue;
    const auto c = min_certificate(inst, x);
    expect_valid(inst, c, x);
    EXPECT_TRUE(verify_minimal(inst, c, x));
    ++seen;
  }
  EXPECT_GT(seen, 50);
}

TEST(VerifyMinimal, PaddedCertificateIsNotMinimal) {
  const auto inst = remark_instance();
  const auto x = bp({1, 1});
  auto c = min_certificate(inst, x);
  // Row 1 of the normalized instance is  -3 x1 - x2 <= -3.  Mixing it in
  // keeps a valid certificate (violation 0.6*1 + 0.4*(-1) > 0).
  c.lambda = {{0, 0.6}, {1, 0.4}};
  c.support_rows = {0, 1};
  c.original_rows = {0, 0};
  c.a = {{0, 0.6}, {1, 0.2}};
  c.beta = 0.6;
  c.violation = 0.2;
  EXPECT_FALSE(verify_minimal(inst, c, x));
}

TEST(VerifyMinimal, SingleRowIsMinimal) {
  const auto g = subset_sum_from({{2, 3, 4}}, {{1, 0, 1}});
  const auto x = bp({1, 1, 1});
  const auto c = min_certificate(g.instance, x);
  ASSERT_EQ(c.support_rows.size(), 1u);
  EXPECT_TRUE(verify_minimal(g.instance, c, x));
}

TEST(VerifyMinimal, ScaleGuard) {
  MixedBinaryInstance inst;
  inst.n = 1;
  for (int i = 0; i < 13; ++i) {
    LinearRow r;
    r.bin_coeffs = {{0, 1.0}};
    r.rhs = 0.0;
    inst.rows.push_back(r);
  }
  ProjectedCertificate c;
  c.lambda = {{0, 1.0}};
  c.support_rows = {0};
  EXPECT_THROW(verify_minimal(inst, c, bp({1})), InvalidArgument);
}

TEST(CertSuppBound, SubsetSumBlock) {
  const auto g = subset_sum_from({{1, 2, 3, 4}}, {{1, 0, 0, 1}});
  EXPECT_EQ(cert_supp_bound(g.instance), (std::vector<int>{4}));
}

TEST(CertSuppBound, SupportTimesContinuousPlusOne) {
  // One block: 20 binary columns, 2 continuous, rows with 3 binary entries.
  MixedBinaryInstance inst;
  inst.n = 20;
  inst.d = 2;
  for (int i = 0; i < 7; ++i) {
    LinearRow r;
    r.bin_coeffs = make_sparse({{3 * i % 20, 1.0}, {(3 * i + 1) % 20, 1.0}, {(3 * i + 2) % 20, 1.0}});
    r.cont_coeffs = {{i % 2, 1.0}};
    inst.rows.push_back(r);
  }
  LinearRow link;
  link.cont_coeffs = {{0, 1.0}, {1, 1.0}};
  inst.rows.push_back(link);
  EXPECT_EQ(cert_supp_bound(inst), (std::vector<int>{9}));
}

TEST(CertSuppBound, TwoStageMatchesDirectComputation) {
  Rng rng(3);
  TwoStageSpec spec;
  spec.k = 3;
  spec.p = 5;
  spec.q = 4;
  const auto g = gen_two_stage(spec, rng);
  std::size_t s = 0;
  for (const auto& r : g.instance.rows) s = std::max(s, r.bin_coeffs.size());
  const int expect = std::min(static_cast<int>(s) * 1, g.instance.n);
  EXPECT_EQ(cert_supp_bound(g.instance), (std::vector<int>{expect}));
}

TEST(CertSuppBound, BoundsObservedSupport) {
  Rng rng(4);
  int seen = 0;
  for (int it = 0; it < 300; ++it) {
    std::vector<BlockSpec> specs(2);
    for (auto& s : specs) {
      s.n = 5;
      s.d = 1 + static_cast<int>(rng.below(2));
      s.rows = 2;
      s.s = 2 + static_cast<int>(rng.below(3));
    }
    const auto g = gen_decomposable(specs, rng);
    const auto x = testutil::random_point(rng, g.instance.n);
    if (lift(g.instance, x).has_value()) continue;
    const auto c = min_certificate(g.instance, x);
    const auto bound = cert_supp_bound(g.instance);
    const auto& blocks = *g.instance.blocks;
    // The block holding the first support row holds every support row.
    const int orig = c.original_rows.front();
    std::size_t which = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (std::find(blocks[b].rows.begin(), blocks[b].rows.end(), orig) != blocks[b].rows.end()) which = b;
    }
    for (int r : c.original_rows) {
      EXPECT_NE(std::find(blocks[which].rows.begin(), blocks[which].rows.end(), r), blocks[which].rows.end());
    }
    EXPECT_LE(static_cast<int>(c.a.size()), bound[which]);
    ++seen;
  }
  EXPECT_GT(seen, 100);
}
