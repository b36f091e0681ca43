#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "fpump/model.hpp"

namespace fpump {

/// Free-format MPS subset: NAME, OBJSENSE, ROWS, COLUMNS, RHS, BOUNDS,
/// ENDATA. Integer columns must be binary; finite bounds on continuous
/// columns become rows (lower bounds first). Minimization objectives are
/// negated so the instance always maximizes.
///
/// Throws ParseError with the offending line, UnsupportedSection for
/// RANGES and other sections outside the subset.
MixedBinaryInstance parse_mps(std::string_view text);
std::string write_mps(const MixedBinaryInstance& instance);

/// Line-oriented native format:
///
///   fpump 1 "<name>" <n> <d>
///   obj x0:<v> y1:<v> ...
///   row <LE|GE|EQ> <rhs> x<j>:<v> ... y<j>:<v> ...
///   block x:<cols> y:<cols> r:<rows>
///   origin <r0> <r1> ...
///
/// Numbers use %.17g, so reading back reproduces every double. Lines
/// starting with '#' are comments.
std::string write_native(const MixedBinaryInstance& instance);
MixedBinaryInstance read_native(std::string_view text);

/// Reads a file, choosing the parser by extension (.mps or native).
MixedBinaryInstance load_instance(const std::string& path);
void save_instance(const MixedBinaryInstance& instance, const std::string& path);

std::string read_file(const std::string& path);

}  // namespace fpump
