#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fpump/certificate.hpp"
#include "fpump/errors.hpp"
#include "fpump/formats.hpp"
#include "fpump/gen.hpp"
#include "fpump/lp.hpp"
#include "support/oracles.hpp"

using namespace fpump;

TEST(SubsetSum, ForcedCoefficientsGiveRemarkRow) {
  const auto g = subset_sum_from({{3, 1}}, {{1, 0}});
  ASSERT_EQ(g.instance.num_rows(), 1);
  const auto& r = g.instance.rows[0];
  EXPECT_EQ(r.bin_coeffs, (SparseVector{{0, 3.0}, {1, 1.0}}));
  EXPECT_EQ(r.sense, Sense::EQ);
  EXPECT_DOUBLE_EQ(r.rhs, 3.0);
  EXPECT_EQ(r.bin_coeffs, remark_instance().rows[0].bin_coeffs);
}

TEST(SubsetSum, WitnessFeasibleAndBlocksRecovered) {
  Rng rng(1);
  for (int it = 0; it < 100; ++it) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const int n = 1 + static_cast<int>(rng.below(6));
    const auto g = gen_subset_sum(k, n, 20, rng);
    EXPECT_EQ(g.instance.n, k * n);
    EXPECT_EQ(g.instance.d, 0);
    EXPECT_TRUE(check_feasible(g.instance, g.witness));
    EXPECT_EQ(static_cast<int>(detect_blocks(g.instance).size()), k);
    for (const auto& r : g.instance.rows) {
      for (const auto& e : r.bin_coeffs) {
        EXPECT_GE(e.value, 1.0);
        EXPECT_LE(e.value, 20.0);
      }
    }
  }
}

TEST(SubsetSum, PerBlockSizes) {
  Rng rng(2);
  const auto g = gen_subset_sum(std::vector<int>{2, 5, 3}, 9, rng);
  EXPECT_EQ(g.instance.n, 10);
  const auto blocks = detect_blocks(g.instance);
  ASSERT_EQ(blocks.size(), 3u);
  EXPECT_EQ(blocks[1].bin_cols.size(), 5u);
}

TEST(TwoStage, WitnessFeasibleAndShape) {
  Rng rng(3);
  TwoStageSpec spec;
  spec.k = 4;
  spec.p = 6;
  spec.q = 3;
  const auto g = gen_two_stage(spec, rng);
  EXPECT_EQ(g.instance.n, 6 + 4 * 3);
  EXPECT_EQ(g.instance.num_rows(), 4 * spec.rows_per_scenario);
  EXPECT_TRUE(check_feasible(g.instance, g.witness));
  // Rows of scenario i touch only first-stage columns and scenario i's block.
  for (int r = 0; r < g.instance.num_rows(); ++r) {
    const int scenario = r / spec.rows_per_scenario;
    for (const auto& e : g.instance.rows[static_cast<std::size_t>(r)].bin_coeffs) {
      const bool first_stage = e.index < spec.p;
      const bool own = e.index >= spec.p + scenario * spec.q && e.index < spec.p + (scenario + 1) * spec.q;
      EXPECT_TRUE(first_stage || own);
    }
  }
}

TEST(TwoStage, PaperGrid) {
  const auto grid = two_stage_grid(2024);
  ASSERT_EQ(grid.size(), 50u);
  int count[5][2] = {};
  for (const auto& g : grid) {
    EXPECT_TRUE(check_feasible(g.instance, g.witness));
    const int n = g.instance.n;
    const int rows = g.instance.num_rows();
    const int k = rows / 5;
    const int p = n - 10 * k;
    const int ki = (k - 5) / 10;
    ASSERT_TRUE(k == 5 + 10 * ki && ki >= 0 && ki < 5) << g.instance.name;
    ASSERT_TRUE(p == 10 || p == 20) << g.instance.name;
    ++count[ki][p == 20];
  }
  for (auto& c : count) {
    EXPECT_EQ(c[0], 5);
    EXPECT_EQ(c[1], 5);
  }
  EXPECT_EQ(grid.front().instance.name, "two-stage-k5-p10-q10-1");
  const auto again = two_stage_grid(2024);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(grid[i].instance, again[i].instance);
}

TEST(Remark, Structure) {
  const auto inst = remark_instance();
  EXPECT_EQ(inst.n, 2);
  EXPECT_EQ(inst.d, 0);
  ASSERT_EQ(inst.num_rows(), 1);
  EXPECT_EQ(inst.rows[0].sense, Sense::EQ);
  const auto feasible = oracle::enumerate_feasible(inst);
  ASSERT_EQ(feasible.size(), 1u);
  EXPECT_EQ(feasible[0], BinaryPoint(std::vector<int>{1, 0}));
  EXPECT_NEAR(solve_lp(relaxation(inst)).objective, 1.0, 1e-12);
}

TEST(AppendixB, Structure) {
  const auto inst = appendix_b_instance(3);
  ASSERT_EQ(inst.num_rows(), 1);
  EXPECT_EQ(inst.rows[0].bin_coeffs,
            (SparseVector{{0, 5.0}, {1, 5.0}, {2, 5.0}, {3, 5.0}, {4, 2.0}}));
  EXPECT_DOUBLE_EQ(inst.rows[0].rhs, 20.0);
  EXPECT_EQ(inst.rows[0].sense, Sense::EQ);
  for (int T = 2; T <= 6; ++T) {
    const auto b = appendix_b_instance(T);
    std::vector<int> ones(static_cast<std::size_t>(T + 2), 1);
    ones.back() = 0;
    EXPECT_TRUE(check_feasible_binary(b, BinaryPoint(ones)));
    const auto lp = solve_lp(relaxation(b));
    ASSERT_EQ(lp.status, LpStatus::Optimal);
    EXPECT_NEAR(lp.x.back(), 1.0, 1e-12);
    int at_three_fifths = 0, at_one = 0;
    for (int j = 0; j <= T; ++j) {
      const double v = lp.x[static_cast<std::size_t>(j)];
      if (std::abs(v - 0.6) < 1e-9) ++at_three_fifths;
      if (std::abs(v - 1.0) < 1e-9) ++at_one;
    }
    EXPECT_EQ(at_three_fifths, 1);
    EXPECT_EQ(at_one, T);
  }
}

TEST(Decomposable, BlocksAndSupportBound) {
  Rng rng(4);
  for (int it = 0; it < 100; ++it) {
    const int k = 1 + static_cast<int>(rng.below(3));
    std::vector<BlockSpec> specs(static_cast<std::size_t>(k));
    for (auto& s : specs) {
      s.n = 2 + static_cast<int>(rng.below(6));
      s.d = static_cast<int>(rng.below(3));
      s.rows = 1 + static_cast<int>(rng.below(3));
      s.s = 1 + static_cast<int>(rng.below(5));
    }
    const auto g = gen_decomposable(specs, rng);
    EXPECT_TRUE(check_feasible(g.instance, g.witness));
    const auto blocks = detect_blocks(g.instance);
    EXPECT_EQ(static_cast<int>(blocks.size()), k);
    const auto c = cert_supp_bound(g.instance);
    ASSERT_EQ(static_cast<int>(c.size()), k);
    for (int b = 0; b < k; ++b) {
      const auto& s = specs[static_cast<std::size_t>(b)];
      std::size_t widest = 0;
      for (int r : blocks[static_cast<std::size_t>(b)].rows) {
        widest = std::max(widest, g.instance.rows[static_cast<std::size_t>(r)].bin_coeffs.size());
      }
      EXPECT_GE(static_cast<int>(widest), std::min(s.s, s.n));
      EXPECT_EQ(c[static_cast<std::size_t>(b)],
                std::min(static_cast<int>(widest) * (s.d + 1), s.n));
    }
    // The relaxation is bounded: every LP over it has a finite optimum.
    auto lp = relaxation(g.instance);
    for (auto& c2 : lp.cost) c2 = 1.0;
    EXPECT_EQ(solve_lp(lp).status, LpStatus::Optimal);
  }
}

TEST(Generate, PureFunctionOfSpec) {
  for (Family f : {Family::SubsetSum, Family::Decomposable, Family::TwoStage, Family::Remark,
                   Family::AppendixB}) {
    GenSpec spec;
    spec.family = f;
    spec.k = 2;
    spec.p = 4;
    spec.q = 3;
    spec.seed = 17;
    const auto a = generate(spec);
    const auto b = generate(spec);
    EXPECT_EQ(a.instance, b.instance) << to_string(f);
    EXPECT_EQ(write_native(a.instance), write_native(b.instance));
    EXPECT_TRUE(check_feasible(a.instance, a.witness)) << to_string(f);
    EXPECT_EQ(parse_family(to_string(f)), f);
  }
  GenSpec s1, s2;
  s2.seed = 18;
  EXPECT_NE(generate(s1).instance, generate(s2).instance);
  EXPECT_THROW(parse_family("nope"), InvalidArgument);
}
