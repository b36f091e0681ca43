#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fpump {

inline constexpr double kRowTolerance = 1e-9;
inline constexpr double kIntegralityTolerance = 1e-6;

enum class Sense { LE, GE, EQ };

const char* to_string(Sense sense);

struct SparseEntry {
  int index = 0;
  double value = 0.0;

  bool operator==(const SparseEntry&) const = default;
};

/// Sorted by index, no explicit zeros, no duplicate indices.
using SparseVector = std::vector<SparseEntry>;

/// Sorts, merges duplicates and drops zeros.
SparseVector make_sparse(std::vector<SparseEntry> entries);

double dot(const SparseVector& row, std::span<const double> dense);

/// One row of  A x + B y (sense) b.
struct LinearRow {
  SparseVector bin_coeffs;
  SparseVector cont_coeffs;
  Sense sense = Sense::LE;
  double rhs = 0.0;

  bool operator==(const LinearRow&) const = default;
};

struct Block {
  std::vector<int> bin_cols;
  std::vector<int> cont_cols;
  std::vector<int> rows;

  bool operator==(const Block&) const = default;
};

/// A 0/1 vector. Entries are exactly 0 or 1 by construction.
class BinaryPoint {
 public:
  BinaryPoint() = default;
  explicit BinaryPoint(std::size_t n) : bits_(n, 0) {}
  /// Throws InvalidArgument on any entry outside {0,1}.
  explicit BinaryPoint(const std::vector<int>& values);

  static BinaryPoint from_doubles(std::span<const double> values);

  std::size_t size() const { return bits_.size(); }
  int operator[](std::size_t j) const { return bits_[j]; }
  void set(std::size_t j, int value) { bits_[j] = value != 0 ? 1 : 0; }
  void flip(std::size_t j) { bits_[j] ^= 1; }

  std::vector<double> as_doubles() const;
  std::string to_string() const;
  std::uint64_t hash() const;

  bool operator==(const BinaryPoint&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct BinaryPointHash {
  std::size_t operator()(const BinaryPoint& p) const {
    return static_cast<std::size_t>(p.hash());
  }
};

struct MixedPoint {
  std::vector<double> x;
  std::vector<double> y;
};

/// The set  { (x, y) in [0,1]^n x R^d : A x + B y (sense) b }.
///
/// Continuous columns are free; finite bounds on them must be written as
/// rows. The objective, when present, has length n + d (binary columns
/// first) and is maximized.
struct MixedBinaryInstance {
  std::string name;
  int n = 0;
  int d = 0;
  std::vector<LinearRow> rows;
  std::optional<std::vector<double>> objective;
  std::optional<std::vector<Block>> blocks;
  /// Filled by normalize(): original row index of every row. Empty means
  /// the rows are the original ones.
  std::vector<int> row_origin;

  int num_rows() const { return static_cast<int>(rows.size()); }
  bool is_normalized() const;
  /// Original row index of row r.
  int origin_of(int r) const {
    return row_origin.empty() ? r : row_origin[static_cast<std::size_t>(r)];
  }

  bool operator==(const MixedBinaryInstance&) const = default;
};

/// Throws InvalidArgument when an invariant of the instance is violated.
void validate(const MixedBinaryInstance& instance);

/// Rewrites every row in <= form: GE rows are negated and EQ rows are
/// split into a <= and a >= copy (the latter negated). Keeps the origin map.
MixedBinaryInstance normalize(const MixedBinaryInstance& instance);

/// Left-hand side value of a row at (x, y).
double row_activity(const LinearRow& row, std::span<const double> x,
                    std::span<const double> y);

/// Amount by which (x, y) violates the row; 0 when satisfied.
double row_violation(const LinearRow& row, std::span<const double> x,
                     std::span<const double> y);

bool check_feasible(const MixedBinaryInstance& instance,
                    const MixedPoint& point, double tol = kRowTolerance);

/// Row feasibility of a binary point, for instances without continuous
/// columns. Throws InvalidArgument when d > 0.
bool check_feasible_binary(const MixedBinaryInstance& instance,
                           const BinaryPoint& x, double tol = kRowTolerance);

/// Connected components of the column/row incidence graph. Blocks are
/// ordered by their smallest member (binary columns, then continuous
/// columns, then rows); index lists inside a block are sorted.
std::vector<Block> detect_blocks(const MixedBinaryInstance& instance);

// Vector utilities.
std::vector<int> supp(std::span<const double> v, double tol = 0.0);
int norm0(std::span<const double> v, double tol = 0.0);
double norm1(std::span<const double> v);
/// Throws InvalidArgument if an entry is not exactly 0 or 1.
int hamming(std::span<const double> u, std::span<const double> w);
int hamming(const BinaryPoint& u, const BinaryPoint& w);

}  // namespace fpump
