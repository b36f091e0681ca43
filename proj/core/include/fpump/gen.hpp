#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpump/model.hpp"
#include "fpump/rng.hpp"

namespace fpump {

/// An instance plus the point its right-hand sides were built from.
/// The witness is for tests; solvers never see it.
struct GeneratedInstance {
  MixedBinaryInstance instance;
  MixedPoint witness;
};

/// k disjoint rows  a^i x^i = b_i  with a^i_j uniform in [1, coeff_max]
/// and b_i = a^i x*_i for a uniform 0/1 point x*.
GeneratedInstance gen_subset_sum(int k, int n_per_block, int coeff_max,
                                 Rng& rng);
/// Same with per-block sizes.
GeneratedInstance gen_subset_sum(const std::vector<int>& block_sizes,
                                 int coeff_max, Rng& rng);
/// Subset-sum with given coefficients and witness, one block per entry.
GeneratedInstance subset_sum_from(const std::vector<std::vector<int>>& a,
                                  const std::vector<std::vector<int>>& x_star,
                                  const std::string& name = "subset-sum");

struct TwoStageSpec {
  int k = 5;
  int p = 10;
  int q = 10;
  int rows_per_scenario = 5;
  int coeff_lo = -10;
  int coeff_hi = 10;
};

/// Pure-binary  A x + D^i y^i <= b^i,  i = 1..k, with A shared between
/// scenarios and b^i the row values at a uniform 0/1 witness.
GeneratedInstance gen_two_stage(const TwoStageSpec& spec, Rng& rng);

/// The 50-instance grid: k in {5,15,25,35,45}, p in {10,20}, q = 10,
/// `per_setting` instances each. Instance i uses derive_seed(seed, i).
std::vector<GeneratedInstance> two_stage_grid(std::uint64_t seed,
                                              int per_setting = 5);

struct BlockSpec {
  int n = 4;
  int d = 1;
  /// Rows mixing binary and continuous columns.
  int rows = 2;
  /// Binary support drawn for each row (capped at n). Rows can end up
  /// with more entries: uncovered columns are added to a random row and
  /// rows are linked until the block is connected.
  int s = 3;
  int coeff_max = 10;
};

/// Independent blocks of  A x + B y <= b.  Each continuous column gets
/// the bound rows its coefficient signs need (-y <= u and/or y <= u), so
/// the relaxation stays bounded in y. Right-hand sides are tight at a
/// uniform 0/1 witness with y = 0. Blocks are recorded on the instance.
GeneratedInstance gen_decomposable(const std::vector<BlockSpec>& blocks,
                                   Rng& rng);

/// max x_2  s.t.  3 x_1 + x_2 = 3.
MixedBinaryInstance remark_instance();

/// max x_{T+2}  s.t.  5 x_1 + ... + 5 x_{T+1} + 2 x_{T+2} = 5T + 5.
MixedBinaryInstance appendix_b_instance(int T);

enum class Family { SubsetSum, Decomposable, TwoStage, Remark, AppendixB };
const char* to_string(Family family);
Family parse_family(const std::string& name);

struct GenSpec {
  Family family = Family::SubsetSum;
  int k = 1;
  /// Block size (subset-sum, decomposable).
  int n = 4;
  int d = 1;
  int rows = 2;
  int s = 3;
  int p = 10;
  int q = 10;
  int rows_per_scenario = 5;
  int T = 3;
  int coeff_max = 20;
  std::uint64_t seed = 1;
};

/// Same GenSpec, same instance.
GeneratedInstance generate(const GenSpec& spec);

}  // namespace fpump
