#include "fpump/gen.hpp"

#include <algorithm>
#include <numeric>

#include "fpump/errors.hpp"

namespace fpump {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

int draw_int(Rng& rng, int lo, int hi) {
  return static_cast<int>(rng.between(lo, hi));
}

std::vector<int> draw_binary(Rng& rng, int n) {
  std::vector<int> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = static_cast<int>(rng.below(2));
  return x;
}

// `count` distinct indices from [0, n), sorted.
std::vector<int> draw_subset(Rng& rng, int n, int count) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
    std::swap(all[static_cast<std::size_t>(i)], all[j]);
  }
  all.resize(static_cast<std::size_t>(count));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

GeneratedInstance subset_sum_from(const std::vector<std::vector<int>>& a,
                                  const std::vector<std::vector<int>>& x_star,
                                  const std::string& name) {
  require(a.size() == x_star.size(), "subset-sum: block count mismatch");
  GeneratedInstance out;
  auto& inst = out.instance;
  inst.name = name;
  std::vector<Block> blocks;
  int offset = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(!a[i].empty() && a[i].size() == x_star[i].size(),
            "subset-sum: block size mismatch");
    LinearRow row;
    row.sense = Sense::EQ;
    Block blk;
    std::vector<SparseEntry> coeffs;
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      const int col = offset + static_cast<int>(j);
      coeffs.push_back({col, static_cast<double>(a[i][j])});
      row.rhs += a[i][j] * x_star[i][j];
      out.witness.x.push_back(x_star[i][j]);
      blk.bin_cols.push_back(col);
    }
    row.bin_coeffs = make_sparse(std::move(coeffs));
    blk.rows.push_back(static_cast<int>(i));
    inst.rows.push_back(std::move(row));
    blocks.push_back(std::move(blk));
    offset += static_cast<int>(a[i].size());
  }
  inst.n = offset;
  inst.d = 0;
  inst.blocks = std::move(blocks);
  validate(inst);
  return out;
}

GeneratedInstance gen_subset_sum(const std::vector<int>& block_sizes,
                                 int coeff_max, Rng& rng) {
  require(!block_sizes.empty(), "subset-sum: need at least one block");
  require(coeff_max >= 1, "subset-sum: coeff_max must be positive");
  std::vector<std::vector<int>> a;
  std::vector<std::vector<int>> x;
  std::string name = "subset-sum";
  for (int n : block_sizes) {
    require(n >= 1, "subset-sum: block size must be positive");
    std::vector<int> coeffs(static_cast<std::size_t>(n));
    for (auto& c : coeffs) c = draw_int(rng, 1, coeff_max);
    a.push_back(std::move(coeffs));
    x.push_back(draw_binary(rng, n));
    name += "-" + std::to_string(n);
  }
  return subset_sum_from(a, x, name);
}

GeneratedInstance gen_subset_sum(int k, int n_per_block, int coeff_max,
                                 Rng& rng) {
  require(k >= 1, "subset-sum: k must be positive");
  return gen_subset_sum(std::vector<int>(static_cast<std::size_t>(k), n_per_block),
                        coeff_max, rng);
}

GeneratedInstance gen_two_stage(const TwoStageSpec& spec, Rng& rng) {
  require(spec.k >= 1 && spec.p >= 1 && spec.q >= 1 && spec.rows_per_scenario >= 1,
          "two-stage: k, p, q and rows must be positive");
  require(spec.coeff_lo <= spec.coeff_hi, "two-stage: empty coefficient range");
  const int rows = spec.rows_per_scenario;
  GeneratedInstance out;
  auto& inst = out.instance;
  inst.name = "two-stage-k" + std::to_string(spec.k) + "-p" +
              std::to_string(spec.p) + "-q" + std::to_string(spec.q);
  inst.n = spec.p + spec.k * spec.q;
  inst.d = 0;

  std::vector<std::vector<int>> shared(static_cast<std::size_t>(rows));
  for (auto& r : shared) {
    r.resize(static_cast<std::size_t>(spec.p));
    for (auto& c : r) c = draw_int(rng, spec.coeff_lo, spec.coeff_hi);
  }
  const std::vector<int> z = draw_binary(rng, inst.n);
  out.witness.x.assign(z.begin(), z.end());

  for (int i = 0; i < spec.k; ++i) {
    const int base = spec.p + i * spec.q;
    for (int r = 0; r < rows; ++r) {
      std::vector<SparseEntry> coeffs;
      double value = 0.0;
      for (int j = 0; j < spec.p; ++j) {
        const int c = shared[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        coeffs.push_back({j, static_cast<double>(c)});
        value += c * z[static_cast<std::size_t>(j)];
      }
      for (int j = 0; j < spec.q; ++j) {
        const int c = draw_int(rng, spec.coeff_lo, spec.coeff_hi);
        coeffs.push_back({base + j, static_cast<double>(c)});
        value += c * z[static_cast<std::size_t>(base + j)];
      }
      LinearRow row;
      row.bin_coeffs = make_sparse(std::move(coeffs));
      row.sense = Sense::LE;
      row.rhs = value;
      inst.rows.push_back(std::move(row));
    }
  }
  validate(inst);
  return out;
}

std::vector<GeneratedInstance> two_stage_grid(std::uint64_t seed,
                                              int per_setting) {
  std::vector<GeneratedInstance> out;
  std::uint64_t index = 0;
  for (int k : {5, 15, 25, 35, 45}) {
    for (int p : {10, 20}) {
      for (int rep = 0; rep < per_setting; ++rep) {
        Rng rng(derive_seed(seed, index));
        TwoStageSpec spec;
        spec.k = k;
        spec.p = p;
        spec.q = 10;
        GeneratedInstance g = gen_two_stage(spec, rng);
        g.instance.name += "-" + std::to_string(rep + 1);
        out.push_back(std::move(g));
        ++index;
      }
    }
  }
  return out;
}

GeneratedInstance gen_decomposable(const std::vector<BlockSpec>& specs,
                                   Rng& rng) {
  require(!specs.empty(), "decomposable: need at least one block");
  GeneratedInstance out;
  auto& inst = out.instance;
  inst.name = "decomposable-k" + std::to_string(specs.size());
  std::vector<Block> blocks;
  int n_off = 0;
  int d_off = 0;
  for (const auto& spec : specs) {
    require(spec.n >= 1 && spec.d >= 0 && spec.rows >= 1 && spec.s >= 1 &&
                spec.coeff_max >= 1,
            "decomposable: bad block spec");
    Block blk;
    for (int j = 0; j < spec.n; ++j) blk.bin_cols.push_back(n_off + j);
    for (int j = 0; j < spec.d; ++j) blk.cont_cols.push_back(d_off + j);
    const std::vector<int> x = draw_binary(rng, spec.n);
    out.witness.x.insert(out.witness.x.end(), x.begin(), x.end());

    const int support = std::min(spec.s, spec.n);
    auto nonzero = [&] {
      int c = 0;
      while (c == 0) c = draw_int(rng, -spec.coeff_max, spec.coeff_max);
      return static_cast<double>(c);
    };
    // Dense local rows first; sparse form once the block is connected.
    std::vector<std::vector<double>> bin(static_cast<std::size_t>(spec.rows),
                                         std::vector<double>(static_cast<std::size_t>(spec.n), 0.0));
    std::vector<std::vector<double>> cont(static_cast<std::size_t>(spec.rows),
                                          std::vector<double>(static_cast<std::size_t>(spec.d), 0.0));
    for (int r = 0; r < spec.rows; ++r) {
      for (int j : draw_subset(rng, spec.n, support)) {
        bin[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = nonzero();
      }
      for (int j = 0; j < spec.d; ++j) {
        if (rng.below(2) == 0) continue;
        cont[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = nonzero();
      }
    }
    // Every column must appear in some row, otherwise it forms its own
    // component (and a free continuous column makes the relaxation
    // unbounded).
    for (int j = 0; j < spec.n; ++j) {
      bool used = false;
      for (const auto& row : bin) used = used || row[static_cast<std::size_t>(j)] != 0.0;
      if (!used) bin[rng.below(bin.size())][static_cast<std::size_t>(j)] = nonzero();
    }
    for (int j = 0; j < spec.d; ++j) {
      bool used = false;
      for (const auto& row : cont) used = used || row[static_cast<std::size_t>(j)] != 0.0;
      if (!used) cont[rng.below(cont.size())][static_cast<std::size_t>(j)] = nonzero();
    }
    // Join row components: a row not reachable from row 0 gets binary
    // column 0 of the first row's support.
    for (;;) {
      std::vector<char> reached(static_cast<std::size_t>(spec.rows), 0);
      reached[0] = 1;
      for (bool grew = true; grew;) {
        grew = false;
        for (int a = 0; a < spec.rows; ++a) {
          if (!reached[static_cast<std::size_t>(a)]) continue;
          for (int b = 0; b < spec.rows; ++b) {
            if (reached[static_cast<std::size_t>(b)]) continue;
            bool share = false;
            for (int j = 0; j < spec.n && !share; ++j) {
              share = bin[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] != 0.0 &&
                      bin[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] != 0.0;
            }
            for (int j = 0; j < spec.d && !share; ++j) {
              share = cont[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] != 0.0 &&
                      cont[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] != 0.0;
            }
            if (share) {
              reached[static_cast<std::size_t>(b)] = 1;
              grew = true;
            }
          }
        }
      }
      const auto lone = std::find(reached.begin(), reached.end(), 0);
      if (lone == reached.end()) break;
      int link = 0;
      while (bin[0][static_cast<std::size_t>(link)] == 0.0) ++link;
      bin[static_cast<std::size_t>(lone - reached.begin())][static_cast<std::size_t>(link)] = nonzero();
    }

    std::vector<char> has_pos(static_cast<std::size_t>(spec.d), 0);
    std::vector<char> has_neg(static_cast<std::size_t>(spec.d), 0);
    for (int r = 0; r < spec.rows; ++r) {
      LinearRow row;
      row.sense = Sense::LE;
      std::vector<SparseEntry> bx;
      for (int j = 0; j < spec.n; ++j) {
        const double c = bin[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        if (c == 0.0) continue;
        bx.push_back({n_off + j, c});
        row.rhs += c * x[static_cast<std::size_t>(j)];
      }
      std::vector<SparseEntry> cy;
      for (int j = 0; j < spec.d; ++j) {
        const double c = cont[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        if (c == 0.0) continue;
        (c > 0 ? has_pos : has_neg)[static_cast<std::size_t>(j)] = 1;
        cy.push_back({d_off + j, c});
      }
      row.bin_coeffs = make_sparse(std::move(bx));
      row.cont_coeffs = make_sparse(std::move(cy));
      blk.rows.push_back(inst.num_rows());
      inst.rows.push_back(std::move(row));
    }
    // A positive coefficient lets y run to -inf, a negative one to +inf.
    for (int j = 0; j < spec.d; ++j) {
      const double u = static_cast<double>(draw_int(rng, 1, spec.coeff_max));
      if (has_pos[static_cast<std::size_t>(j)]) {
        blk.rows.push_back(inst.num_rows());
        inst.rows.push_back({{}, {{d_off + j, -1.0}}, Sense::LE, u});
      }
      if (has_neg[static_cast<std::size_t>(j)]) {
        blk.rows.push_back(inst.num_rows());
        inst.rows.push_back({{}, {{d_off + j, 1.0}}, Sense::LE, u});
      }
    }
    blocks.push_back(std::move(blk));
    n_off += spec.n;
    d_off += spec.d;
  }
  inst.n = n_off;
  inst.d = d_off;
  out.witness.y.assign(static_cast<std::size_t>(d_off), 0.0);
  inst.blocks = std::move(blocks);
  validate(inst);
  return out;
}

MixedBinaryInstance remark_instance() {
  MixedBinaryInstance inst;
  inst.name = "remark";
  inst.n = 2;
  inst.d = 0;
  inst.rows.push_back({{{0, 3.0}, {1, 1.0}}, {}, Sense::EQ, 3.0});
  inst.objective = std::vector<double>{0.0, 1.0};
  return inst;
}

MixedBinaryInstance appendix_b_instance(int T) {
  require(T >= 1, "appendix-b: T must be at least 1");
  MixedBinaryInstance inst;
  inst.name = "appendix-b-" + std::to_string(T);
  inst.n = T + 2;
  inst.d = 0;
  LinearRow row;
  for (int j = 0; j <= T; ++j) row.bin_coeffs.push_back({j, 5.0});
  row.bin_coeffs.push_back({T + 1, 2.0});
  row.sense = Sense::EQ;
  row.rhs = 5.0 * T + 5.0;
  inst.rows.push_back(std::move(row));
  std::vector<double> obj(static_cast<std::size_t>(T + 2), 0.0);
  obj.back() = 1.0;
  inst.objective = std::move(obj);
  return inst;
}

const char* to_string(Family family) {
  switch (family) {
    case Family::SubsetSum:
      return "subset-sum";
    case Family::Decomposable:
      return "decomposable";
    case Family::TwoStage:
      return "two-stage";
    case Family::Remark:
      return "remark";
    case Family::AppendixB:
      return "appendix-b";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::SubsetSum, Family::Decomposable, Family::TwoStage,
                   Family::Remark, Family::AppendixB}) {
    if (name == to_string(f)) return f;
  }
  throw InvalidArgument("unknown family '" + name + "'");
}

GeneratedInstance generate(const GenSpec& spec) {
  Rng rng(spec.seed);
  switch (spec.family) {
    case Family::SubsetSum:
      return gen_subset_sum(spec.k, spec.n, spec.coeff_max, rng);
    case Family::Decomposable: {
      BlockSpec blk{spec.n, spec.d, spec.rows, spec.s, spec.coeff_max};
      return gen_decomposable(
          std::vector<BlockSpec>(static_cast<std::size_t>(spec.k), blk), rng);
    }
    case Family::TwoStage: {
      TwoStageSpec ts;
      ts.k = spec.k;
      ts.p = spec.p;
      ts.q = spec.q;
      ts.rows_per_scenario = spec.rows_per_scenario;
      return gen_two_stage(ts, rng);
    }
    case Family::Remark:
      return {remark_instance(), MixedPoint{{1.0, 0.0}, {}}};
    case Family::AppendixB: {
      GeneratedInstance g{appendix_b_instance(spec.T), {}};
      g.witness.x.assign(static_cast<std::size_t>(spec.T + 2), 1.0);
      g.witness.x.back() = 0.0;
      return g;
    }
  }
  throw InvalidArgument("unknown family");
}

}  // namespace fpump
