#include "fpump/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpump/errors.hpp"

namespace fpump {

const char* to_string(Sense sense) {
  switch (sense) {
    case Sense::LE:
      return "LE";
    case Sense::GE:
      return "GE";
    case Sense::EQ:
      return "EQ";
  }
  return "?";
}

SparseVector make_sparse(std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) {
              return a.index < b.index;
            });
  SparseVector out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    if (!out.empty() && out.back().index == e.index) {
      out.back().value += e.value;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const SparseEntry& e) { return e.value == 0.0; });
  return out;
}

double dot(const SparseVector& row, std::span<const double> dense) {
  double s = 0.0;
  for (const auto& e : row) s += e.value * dense[static_cast<std::size_t>(e.index)];
  return s;
}

BinaryPoint::BinaryPoint(const std::vector<int>& values)
    : bits_(values.size(), 0) {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] != 0 && values[j] != 1) {
      throw InvalidArgument("binary point entry " + std::to_string(j) +
                            " is not 0/1");
    }
    bits_[j] = static_cast<std::uint8_t>(values[j]);
  }
}

BinaryPoint BinaryPoint::from_doubles(std::span<const double> values) {
  BinaryPoint p(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] == 1.0) {
      p.bits_[j] = 1;
    } else if (values[j] != 0.0) {
      throw InvalidArgument("binary point entry " + std::to_string(j) +
                            " is not 0/1");
    }
  }
  return p;
}

std::vector<double> BinaryPoint::as_doubles() const {
  return {bits_.begin(), bits_.end()};
}

std::string BinaryPoint::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t j = 0; j < bits_.size(); ++j) {
    if (bits_[j]) s[j] = '1';
  }
  return s;
}

std::uint64_t BinaryPoint::hash() const {
  // FNV-1a over the bits packed into bytes.
  std::uint64_t h = 1469598103934665603ULL;
  std::uint8_t acc = 0;
  for (std::size_t j = 0; j < bits_.size(); ++j) {
    acc = static_cast<std::uint8_t>(acc | (bits_[j] << (j % 8)));
    if (j % 8 == 7 || j + 1 == bits_.size()) {
      h ^= acc;
      h *= 1099511628211ULL;
      acc = 0;
    }
  }
  h ^= bits_.size();
  h *= 1099511628211ULL;
  return h;
}

bool MixedBinaryInstance::is_normalized() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const LinearRow& r) { return r.sense == Sense::LE; });
}

namespace {

void check_sparse(const SparseVector& v, int limit, const char* what, int r) {
  int prev = -1;
  for (const auto& e : v) {
    if (e.index < 0 || e.index >= limit) {
      throw InvalidArgument("row " + std::to_string(r) + ": " + what +
                            " index " + std::to_string(e.index) +
                            " out of range");
    }
    if (e.index <= prev) {
      throw InvalidArgument("row " + std::to_string(r) + ": " + what +
                            " support not strictly sorted");
    }
    if (e.value == 0.0 || !std::isfinite(e.value)) {
      throw InvalidArgument("row " + std::to_string(r) + ": " + what +
                            " coefficient is zero or not finite");
    }
    prev = e.index;
  }
}

}  // namespace

void validate(const MixedBinaryInstance& instance) {
  if (instance.n < 0 || instance.d < 0) {
    throw InvalidArgument("negative column count");
  }
  for (int r = 0; r < instance.num_rows(); ++r) {
    const auto& row = instance.rows[static_cast<std::size_t>(r)];
    check_sparse(row.bin_coeffs, instance.n, "binary", r);
    check_sparse(row.cont_coeffs, instance.d, "continuous", r);
    if (!std::isfinite(row.rhs)) {
      throw InvalidArgument("row " + std::to_string(r) + ": rhs not finite");
    }
  }
  if (instance.objective &&
      instance.objective->size() !=
          static_cast<std::size_t>(instance.n + instance.d)) {
    throw InvalidArgument("objective length differs from n + d");
  }
  if (instance.objective) {
    for (double c : *instance.objective) {
      if (!std::isfinite(c)) throw InvalidArgument("objective not finite");
    }
  }
  if (!instance.row_origin.empty() &&
      instance.row_origin.size() != instance.rows.size()) {
    throw InvalidArgument("row origin map has the wrong length");
  }
  if (instance.blocks) {
    std::vector<int> bin_owner(static_cast<std::size_t>(instance.n), -1);
    std::vector<int> cont_owner(static_cast<std::size_t>(instance.d), -1);
    std::vector<int> row_owner(instance.rows.size(), -1);
    auto claim = [](std::vector<int>& owner, int idx, int b, const char* what) {
      if (idx < 0 || idx >= static_cast<int>(owner.size())) {
        throw InvalidArgument(std::string("block ") + what +
                              " index out of range");
      }
      if (owner[static_cast<std::size_t>(idx)] != -1) {
        throw InvalidArgument(std::string("blocks overlap on a ") + what);
      }
      owner[static_cast<std::size_t>(idx)] = b;
    };
    const auto& blocks = *instance.blocks;
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
      const auto& blk = blocks[static_cast<std::size_t>(b)];
      for (int j : blk.bin_cols) claim(bin_owner, j, b, "binary column");
      for (int j : blk.cont_cols) claim(cont_owner, j, b, "continuous column");
      for (int r : blk.rows) claim(row_owner, r, b, "row");
    }
    auto all_claimed = [](const std::vector<int>& owner) {
      return std::none_of(owner.begin(), owner.end(),
                          [](int o) { return o == -1; });
    };
    if (!all_claimed(bin_owner) || !all_claimed(cont_owner) ||
        !all_claimed(row_owner)) {
      throw InvalidArgument("blocks do not cover all columns and rows");
    }
    for (std::size_t r = 0; r < instance.rows.size(); ++r) {
      const int b = row_owner[r];
      for (const auto& e : instance.rows[r].bin_coeffs) {
        if (bin_owner[static_cast<std::size_t>(e.index)] != b) {
          throw InvalidArgument("row " + std::to_string(r) +
                                " references another block");
        }
      }
      for (const auto& e : instance.rows[r].cont_coeffs) {
        if (cont_owner[static_cast<std::size_t>(e.index)] != b) {
          throw InvalidArgument("row " + std::to_string(r) +
                                " references another block");
        }
      }
    }
  }
}

namespace {

LinearRow negated(const LinearRow& row) {
  LinearRow out = row;
  for (auto& e : out.bin_coeffs) e.value = -e.value;
  for (auto& e : out.cont_coeffs) e.value = -e.value;
  out.rhs = -row.rhs;
  out.sense = Sense::LE;
  return out;
}

}  // namespace

MixedBinaryInstance normalize(const MixedBinaryInstance& instance) {
  MixedBinaryInstance out;
  out.name = instance.name;
  out.n = instance.n;
  out.d = instance.d;
  out.objective = instance.objective;
  // new_rows[r] lists the normalized rows produced from row r.
  std::vector<std::vector<int>> new_rows(instance.rows.size());
  for (int r = 0; r < instance.num_rows(); ++r) {
    const auto& row = instance.rows[static_cast<std::size_t>(r)];
    const int origin = instance.origin_of(r);
    auto emit = [&](LinearRow le) {
      new_rows[static_cast<std::size_t>(r)].push_back(out.num_rows());
      out.rows.push_back(std::move(le));
      out.row_origin.push_back(origin);
    };
    switch (row.sense) {
      case Sense::LE:
        emit(row);
        break;
      case Sense::GE:
        emit(negated(row));
        break;
      case Sense::EQ: {
        LinearRow le = row;
        le.sense = Sense::LE;
        emit(std::move(le));
        emit(negated(row));
        break;
      }
    }
  }
  if (instance.blocks) {
    std::vector<Block> blocks = *instance.blocks;
    for (auto& blk : blocks) {
      std::vector<int> rows;
      for (int r : blk.rows) {
        for (int nr : new_rows[static_cast<std::size_t>(r)]) rows.push_back(nr);
      }
      std::sort(rows.begin(), rows.end());
      blk.rows = std::move(rows);
    }
    out.blocks = std::move(blocks);
  }
  return out;
}

double row_activity(const LinearRow& row, std::span<const double> x,
                    std::span<const double> y) {
  return dot(row.bin_coeffs, x) + dot(row.cont_coeffs, y);
}

double row_violation(const LinearRow& row, std::span<const double> x,
                     std::span<const double> y) {
  const double lhs = row_activity(row, x, y);
  switch (row.sense) {
    case Sense::LE:
      return std::max(0.0, lhs - row.rhs);
    case Sense::GE:
      return std::max(0.0, row.rhs - lhs);
    case Sense::EQ:
      return std::abs(lhs - row.rhs);
  }
  return 0.0;
}

bool check_feasible(const MixedBinaryInstance& instance,
                    const MixedPoint& point, double tol) {
  if (point.x.size() != static_cast<std::size_t>(instance.n) ||
      point.y.size() != static_cast<std::size_t>(instance.d)) {
    throw InvalidArgument("point dimension does not match the instance");
  }
  for (double v : point.x) {
    if (!(v >= -tol && v <= 1.0 + tol)) return false;
  }
  for (double v : point.y) {
    if (!std::isfinite(v)) return false;
  }
  for (const auto& row : instance.rows) {
    if (row_violation(row, point.x, point.y) > tol) return false;
  }
  return true;
}

bool check_feasible_binary(const MixedBinaryInstance& instance,
                           const BinaryPoint& x, double tol) {
  if (instance.d != 0) {
    throw InvalidArgument("binary feasibility check needs d = 0; use lift()");
  }
  if (x.size() != static_cast<std::size_t>(instance.n)) {
    throw InvalidArgument("point dimension does not match the instance");
  }
  const auto xs = x.as_doubles();
  for (const auto& row : instance.rows) {
    if (row_violation(row, xs, {}) > tol) return false;
  }
  return true;
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

std::vector<Block> detect_blocks(const MixedBinaryInstance& instance) {
  const auto n = static_cast<std::size_t>(instance.n);
  const auto d = static_cast<std::size_t>(instance.d);
  const auto m = instance.rows.size();
  // Nodes: binary columns, then continuous columns, then rows.
  DisjointSets sets(n + d + m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t node = n + d + r;
    for (const auto& e : instance.rows[r].bin_coeffs) {
      sets.unite(node, static_cast<std::size_t>(e.index));
    }
    for (const auto& e : instance.rows[r].cont_coeffs) {
      sets.unite(node, n + static_cast<std::size_t>(e.index));
    }
  }
  std::vector<int> block_of(n + d + m, -1);
  std::vector<Block> blocks;
  for (std::size_t v = 0; v < n + d + m; ++v) {
    const std::size_t root = sets.find(v);
    if (block_of[root] == -1) {
      block_of[root] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    auto& blk = blocks[static_cast<std::size_t>(block_of[root])];
    if (v < n) {
      blk.bin_cols.push_back(static_cast<int>(v));
    } else if (v < n + d) {
      blk.cont_cols.push_back(static_cast<int>(v - n));
    } else {
      blk.rows.push_back(static_cast<int>(v - n - d));
    }
  }
  return blocks;
}

std::vector<int> supp(std::span<const double> v, double tol) {
  std::vector<int> out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (std::abs(v[j]) > tol) out.push_back(static_cast<int>(j));
  }
  return out;
}

int norm0(std::span<const double> v, double tol) {
  return static_cast<int>(supp(v, tol).size());
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += std::abs(e);
  return s;
}

int hamming(std::span<const double> u, std::span<const double> w) {
  return hamming(BinaryPoint::from_doubles(u), BinaryPoint::from_doubles(w));
}

int hamming(const BinaryPoint& u, const BinaryPoint& w) {
  if (u.size() != w.size()) throw InvalidArgument("hamming: size mismatch");
  int count = 0;
  for (std::size_t j = 0; j < u.size(); ++j) count += u[j] != w[j] ? 1 : 0;
  return count;
}

}  // namespace fpump
