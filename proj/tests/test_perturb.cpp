#include <gtest/gtest.h>

#include <vector>

#include "fpump/errors.hpp"
#include "fpump/gen.hpp"
#include "fpump/perturb.hpp"
#include "fpump/projection.hpp"

using namespace fpump;

namespace {

BinaryPoint bp(std::vector<int> v) { return BinaryPoint(v); }

ProjectedCertificate cert_on(std::vector<int> support) {
  ProjectedCertificate c;
  for (int j : support) c.a.push_back({j, 1.0});
  c.lambda = {{0, 1.0}};
  c.support_rows = {0};
  c.original_rows = {0};
  c.violation = 1.0;
  return c;
}

void expect_consistent(const BinaryPoint& x, const PerturbOutcome& out) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    const bool flipped = std::binary_search(out.flipped.begin(), out.flipped.end(), static_cast<int>(j));
    EXPECT_EQ(out.new_x[j] != x[j], flipped);
  }
}

}  // namespace

TEST(PerturbL, SingleDrawFlipsOneSupportIndex) {
  Rng rng(1);
  const auto x = bp({0, 0, 0, 0, 0, 0});
  const auto cert = cert_on({1, 3, 4});
  for (int it = 0; it < 200; ++it) {
    const auto out = perturb_l(x, cert, 1, rng);
    ASSERT_EQ(out.flipped.size(), 1u);
    const int j = out.flipped[0];
    EXPECT_TRUE(j == 1 || j == 3 || j == 4);
    EXPECT_EQ(out.kind, PerturbKind::WalkSat);
    ASSERT_TRUE(out.certificate.has_value());
    expect_consistent(x, out);
  }
}

TEST(PerturbL, TwoDrawsGiveSingletonsAtRateOneOverSupport) {
  // With |supp| = 4, 4 of the 16 ordered draw pairs repeat an index.
  Rng rng(2);
  const auto x = bp({1, 1, 1, 1});
  const auto cert = cert_on({0, 1, 2, 3});
  int singles = 0;
  const int trials = 40000;
  for (int it = 0; it < trials; ++it) {
    const auto out = perturb_l(x, cert, 2, rng);
    ASSERT_GE(out.flipped.size(), 1u);
    ASSERT_LE(out.flipped.size(), 2u);
    if (out.flipped.size() == 1) ++singles;
    expect_consistent(x, out);
  }
  EXPECT_NEAR(static_cast<double>(singles) / trials, 0.25, 0.01);
}

TEST(PerturbL, UniformOverSupportChiSquare) {
  Rng rng(3);
  const auto x = bp({0, 1, 0, 1, 0, 1, 0});
  const auto cert = cert_on({0, 2, 3, 5, 6});
  std::vector<int> count(7, 0);
  const int trials = 20000;
  for (int it = 0; it < trials; ++it) {
    const auto out = perturb_l(x, cert, 1, rng);
    ++count[static_cast<std::size_t>(out.flipped[0])];
  }
  EXPECT_EQ(count[1] + count[4], 0);
  const double expected = trials / 5.0;
  double chi2 = 0.0;
  for (int j : {0, 2, 3, 5, 6}) {
    const double d = count[static_cast<std::size_t>(j)] - expected;
    chi2 += d * d / expected;
  }
  // 4 degrees of freedom, upper 0.001 quantile.
  EXPECT_LT(chi2, 18.467);
}

TEST(PerturbL, SubsetSumCertificateHasFullSupport) {
  const auto g = subset_sum_from({{4, 7, 2, 9, 5}}, {{1, 0, 1, 0, 0}});
  const auto x = bp({1, 1, 1, 1, 1});
  const auto c = min_certificate(g.instance, x);
  EXPECT_EQ(c.a.size(), 5u);
}

TEST(PerturbL, RejectsBadArguments) {
  Rng rng(4);
  EXPECT_THROW(perturb_l(bp({0}), ProjectedCertificate{}, 1, rng), InvalidArgument);
  EXPECT_THROW(perturb_l(bp({0}), cert_on({0}), 0, rng), InvalidArgument);
}

TEST(OriginalPerturb, RemarkFlipsTheFractionalCoordinate) {
  Rng rng(5);
  const std::vector<double> xbar{2.0 / 3.0, 1.0};
  for (int it = 0; it < 50; ++it) {
    const auto out = original_perturb(bp({1, 1}), xbar, rng);
    EXPECT_EQ(out.flipped, (std::vector<int>{0}));
    EXPECT_EQ(out.new_x, bp({0, 1}));
    EXPECT_GE(out.tt, 10);
    EXPECT_LE(out.tt, 30);
  }
}

TEST(OriginalPerturb, NoFractionalityNoFlips) {
  Rng rng(6);
  const std::vector<double> xbar{1, 0, 1};
  const auto out = original_perturb(bp({1, 0, 1}), xbar, rng);
  EXPECT_TRUE(out.flipped.empty());
  EXPECT_EQ(out.new_x, bp({1, 0, 1}));
}

TEST(OriginalPerturb, LargestFractionalityThenIndex) {
  Rng rng(7);
  const std::vector<double> xbar{0.4, 0.3, 0.3, 0, 0};
  const auto out = original_perturb(bp({0, 0, 0, 0, 0}), xbar, rng, {2, 2});
  EXPECT_EQ(out.flipped, (std::vector<int>{0, 1}));
}

TEST(OriginalPerturb, NeverFlipsZeroFractionality) {
  Rng rng(8);
  for (int it = 0; it < 500; ++it) {
    std::vector<double> xbar(8);
    BinaryPoint x(8);
    for (std::size_t j = 0; j < 8; ++j) {
      x.set(j, static_cast<int>(rng.below(2)));
      xbar[j] = rng.below(2) ? x[j] : static_cast<double>(rng.below(5)) / 4.0;
    }
    const auto out = original_perturb(x, xbar, rng, {0, 10});
    for (int j : out.flipped) EXPECT_GT(std::abs(xbar[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)]), 0.0);
    expect_consistent(x, out);
  }
}

TEST(OriginalPerturbZeroFrac, AppendixBFlipsFractionalPlusLowestIndex) {
  const auto inst = appendix_b_instance(3);
  const auto x = bp({1, 1, 1, 1, 1});
  const auto proj = l1_proj(inst, x);
  int frac = -1;
  for (int j = 0; j < 5; ++j) {
    const double f = std::abs(proj.projected.x[static_cast<std::size_t>(j)] - 1.0);
    if (f > 1e-9) {
      EXPECT_EQ(frac, -1);
      frac = j;
      EXPECT_NEAR(proj.projected.x[static_cast<std::size_t>(j)], 0.6, 1e-9);
    }
  }
  ASSERT_GE(frac, 0);
  Rng rng(9);
  const auto out = original_perturb_zero_frac(x, proj.projected.x, rng, {2, 2});
  const int lowest_other = frac == 0 ? 1 : 0;
  std::vector<int> expect{frac, lowest_other};
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(out.flipped, expect);
}

TEST(OriginalPerturbZeroFrac, ZeroFlipCount) {
  Rng rng(10);
  const std::vector<double> xbar{0.5, 0.2};
  const auto out = original_perturb_zero_frac(bp({0, 0}), xbar, rng, {0, 0});
  EXPECT_TRUE(out.flipped.empty());
}

TEST(OriginalPerturbZeroFrac, EqualFractionalityUsesIndexOrder) {
  Rng rng(11);
  const std::vector<double> xbar(6, 0.0);
  const auto out = original_perturb_zero_frac(bp({0, 0, 0, 0, 0, 0}), xbar, rng, {3, 3});
  EXPECT_EQ(out.flipped, (std::vector<int>{0, 1, 2}));
}

TEST(OriginalPerturbZeroFrac, MoreFlipsThanColumnsFlipsAll) {
  Rng rng(12);
  const std::vector<double> xbar{0.0, 0.5, 1.0};
  const auto out = original_perturb_zero_frac(bp({0, 0, 1}), xbar, rng, {9, 9});
  EXPECT_EQ(out.flipped, (std::vector<int>{0, 1, 2}));
}

TEST(WfpBasePerturb, SmallFlipCountMatchesOriginal) {
  const auto inst = appendix_b_instance(4);
  const auto x = bp({0, 0, 0, 0, 0, 0});
  const std::vector<double> xbar{0.3, 0.9, 0.1, 0.5, 0.25, 0.0};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng r1(seed), r2(seed);
    const auto a = original_perturb(x, xbar, r1, {1, 5});
    const auto b = wfpbase_perturb(x, xbar, inst, MixedPoint{x.as_doubles(), {}}, r2, {1, 5});
    EXPECT_EQ(a.flipped, b.flipped);
    EXPECT_EQ(a.tt, b.tt);
    EXPECT_EQ(r1.next(), r2.next());
  }
}

TEST(WfpBasePerturb, DrawsFromViolatedRowSupport) {
  MixedBinaryInstance inst;
  inst.n = 6;
  LinearRow violated;
  violated.bin_coeffs = {{2, 1.0}, {5, 1.0}};
  violated.sense = Sense::GE;
  violated.rhs = 2;
  LinearRow fine;
  fine.bin_coeffs = {{0, 1.0}, {1, 1.0}};
  fine.rhs = 2;
  inst.rows = {violated, fine};
  const auto x = bp({0, 0, 0, 0, 0, 0});
  const auto xbar = x.as_doubles();
  Rng rng(13);
  for (int it = 0; it < 100; ++it) {
    const auto out = wfpbase_perturb(x, xbar, inst, MixedPoint{xbar, {}}, rng, {2, 5});
    EXPECT_EQ(out.flipped, (std::vector<int>{2, 5}));
    EXPECT_EQ(out.kind, PerturbKind::WfpBaseHybrid);
  }
  for (int it = 0; it < 100; ++it) {
    const auto out = wfpbase_perturb(x, xbar, inst, MixedPoint{xbar, {}}, rng, {1, 1});
    ASSERT_EQ(out.flipped.size(), 1u);
    EXPECT_TRUE(out.flipped[0] == 2 || out.flipped[0] == 5);
  }
}

TEST(WfpBasePerturb, FractionalPlusSampleWithoutRepeats) {
  MixedBinaryInstance inst;
  inst.n = 5;
  LinearRow violated;
  violated.bin_coeffs = {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};
  violated.sense = Sense::GE;
  violated.rhs = 4;
  inst.rows = {violated};
  const auto x = bp({0, 0, 0, 0, 1});
  const std::vector<double> xbar{0.4, 0, 0, 0, 1};
  Rng rng(14);
  for (int it = 0; it < 100; ++it) {
    const auto out = wfpbase_perturb(x, xbar, inst, MixedPoint{x.as_doubles(), {}}, rng, {3, 3});
    EXPECT_EQ(out.flipped.size(), 3u);
    EXPECT_TRUE(std::binary_search(out.flipped.begin(), out.flipped.end(), 0));
    EXPECT_FALSE(std::binary_search(out.flipped.begin(), out.flipped.end(), 4));
  }
}

TEST(RestartPerturb, RuleArithmetic) {
  EXPECT_FALSE(restart_flip(0.0, 0.79));
  EXPECT_TRUE(restart_flip(0.45, 0.40));
  EXPECT_FALSE(restart_flip(0.5, 0.3));
  EXPECT_TRUE(restart_flip(0.51, 0.0));
}

TEST(RestartPerturb, FlipRateOnIntegralPoint) {
  Rng rng(15);
  const int n = 1000;
  BinaryPoint x(n);
  const auto xbar = x.as_doubles();
  long flips = 0;
  for (int it = 0; it < 100; ++it) {
    const auto out = restart_perturb(x, xbar, rng);
    flips += static_cast<long>(out.flipped.size());
    EXPECT_EQ(out.kind, PerturbKind::Restart);
  }
  EXPECT_NEAR(static_cast<double>(flips) / (100.0 * n), 0.2, 0.01);
}

TEST(Perturb, DeterministicGivenSeed) {
  const auto x = bp({1, 0, 1, 0, 1, 0, 1, 0});
  const std::vector<double> xbar{0.5, 0.2, 0.9, 0.0, 0.1, 0.7, 1.0, 0.3};
  Rng a(99), b(99);
  EXPECT_EQ(original_perturb(x, xbar, a, {1, 6}).flipped, original_perturb(x, xbar, b, {1, 6}).flipped);
  EXPECT_EQ(restart_perturb(x, xbar, a).flipped, restart_perturb(x, xbar, b).flipped);
  EXPECT_EQ(perturb_l(x, cert_on({0, 1, 2, 3, 4}), 3, a).flipped,
            perturb_l(x, cert_on({0, 1, 2, 3, 4}), 3, b).flipped);
}

TEST(Rng, KnownStream) {
  // mt19937_64 with the default seed 5489 yields 14514284786278117030 first.
  Rng r(5489);
  EXPECT_EQ(r.next(), 14514284786278117030ull);
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
    const auto k = u.between(-2, 2);
    EXPECT_GE(k, -2);
    EXPECT_LE(k, 2);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}
