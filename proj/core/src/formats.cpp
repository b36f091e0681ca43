#include "fpump/formats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "fpump/errors.hpp"

namespace fpump {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

double parse_number(std::string_view tok, int line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError("bad number '" + std::string(tok) + "'", line);
  }
  return v;
}

int parse_int(std::string_view tok, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("bad integer '" + std::string(tok) + "'", line);
  }
  return v;
}

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- MPS

enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Bounds, End };

struct MpsColumn {
  bool integer = false;
  int index = -1;  // within its kind
  std::vector<std::pair<int, double>> entries;  // (row, value)
  double lower = 0.0;
  double upper = HUGE_VAL;
  bool upper_set = false;
};

}  // namespace

MixedBinaryInstance parse_mps(std::string_view text) {
  MixedBinaryInstance inst;
  Section section = Section::None;
  bool maximize = false;
  bool saw_columns = false;
  bool in_marker = false;
  std::string objective_row;
  std::vector<std::string> row_names;
  std::vector<Sense> row_senses;
  std::unordered_map<std::string, int> row_index;
  std::vector<double> rhs;
  std::vector<std::string> col_order;
  std::unordered_map<std::string, MpsColumn> cols;
  std::unordered_map<std::string, double> obj;

  const auto lines = split_lines(text);
  int lineno = 0;
  for (std::string_view raw : lines) {
    ++lineno;
    if (raw.empty() || raw[0] == '*') continue;
    const auto tok = split_ws(raw);
    if (tok.empty()) continue;
    const bool header = raw[0] != ' ' && raw[0] != '\t';
    if (header) {
      const std::string_view key = tok[0];
      if (key == "NAME") {
        section = Section::Name;
        if (tok.size() > 1) inst.name = std::string(tok[1]);
      } else if (key == "OBJSENSE") {
        section = Section::ObjSense;
        if (tok.size() > 1) {
          if (tok[1] == "MAX" || tok[1] == "MAXIMIZE") maximize = true;
          else if (tok[1] != "MIN" && tok[1] != "MINIMIZE")
            throw ParseError("bad OBJSENSE '" + std::string(tok[1]) + "'", lineno);
        }
      } else if (key == "ROWS") {
        section = Section::Rows;
      } else if (key == "COLUMNS") {
        section = Section::Columns;
        saw_columns = true;
      } else if (key == "RHS") {
        section = Section::Rhs;
      } else if (key == "BOUNDS") {
        section = Section::Bounds;
      } else if (key == "ENDATA") {
        section = Section::End;
        break;
      } else if (key == "RANGES" || key == "SOS" || key == "QUADOBJ" ||
                 key == "QMATRIX" || key == "QSECTION" || key == "QCMATRIX" ||
                 key == "INDICATORS" || key == "LAZYCONS" || key == "USERCUTS") {
        throw UnsupportedSection("unsupported section " + std::string(key), lineno);
      } else {
        throw ParseError("unknown section '" + std::string(key) + "'", lineno);
      }
      continue;
    }

    switch (section) {
      case Section::ObjSense:
        if (tok[0] == "MAX" || tok[0] == "MAXIMIZE") maximize = true;
        else if (tok[0] != "MIN" && tok[0] != "MINIMIZE")
          throw ParseError("bad OBJSENSE '" + std::string(tok[0]) + "'", lineno);
        break;
      case Section::Rows: {
        if (tok.size() != 2) throw ParseError("ROWS entry needs 2 fields", lineno);
        const std::string name(tok[1]);
        if (tok[0] == "N") {
          if (objective_row.empty()) objective_row = name;
          break;
        }
        Sense s;
        if (tok[0] == "L") s = Sense::LE;
        else if (tok[0] == "G") s = Sense::GE;
        else if (tok[0] == "E") s = Sense::EQ;
        else throw ParseError("bad row type '" + std::string(tok[0]) + "'", lineno);
        if (row_index.count(name) || name == objective_row) {
          throw ParseError("duplicate row '" + name + "'", lineno);
        }
        row_index[name] = static_cast<int>(row_names.size());
        row_names.push_back(name);
        row_senses.push_back(s);
        rhs.push_back(0.0);
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") in_marker = true;
          else if (tok[2] == "'INTEND'") in_marker = false;
          else throw ParseError("bad marker", lineno);
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) {
          throw ParseError("COLUMNS entry needs 3 or 5 fields", lineno);
        }
        const std::string name(tok[0]);
        auto [it, fresh] = cols.try_emplace(name);
        MpsColumn& col = it->second;
        if (fresh) {
          col.integer = in_marker;
          col_order.push_back(name);
        } else if (col.integer != in_marker) {
          throw ParseError("column '" + name + "' split across markers", lineno);
        }
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          const std::string row(tok[f]);
          const double v = parse_number(tok[f + 1], lineno);
          if (row == objective_row) {
            obj[name] += v;
            continue;
          }
          auto r = row_index.find(row);
          if (r == row_index.end()) throw ParseError("unknown row '" + row + "'", lineno);
          col.entries.push_back({r->second, v});
        }
        break;
      }
      case Section::Rhs: {
        const std::size_t first = tok.size() % 2 == 0 ? 0 : 1;
        if (tok.size() < 2 || tok.size() > 5) throw ParseError("bad RHS entry", lineno);
        for (std::size_t f = first; f + 1 < tok.size(); f += 2) {
          const std::string row(tok[f]);
          const double v = parse_number(tok[f + 1], lineno);
          if (row == objective_row) continue;
          auto r = row_index.find(row);
          if (r == row_index.end()) throw ParseError("unknown row '" + row + "'", lineno);
          rhs[static_cast<std::size_t>(r->second)] = v;
        }
        break;
      }
      case Section::Bounds: {
        if (tok.size() < 2 || tok.size() > 4) throw ParseError("bad BOUNDS entry", lineno);
        const std::string type(tok[0]);
        const bool valueless = type == "FR" || type == "MI" || type == "PL" || type == "BV";
        // The bound-set name is optional.
        std::string colname;
        std::string_view value_tok;
        if (valueless) {
          colname = std::string(tok.size() == 2 ? tok[1] : tok[2]);
        } else {
          if (tok.size() == 2) throw ParseError("bound needs a value", lineno);
          colname = std::string(tok.size() == 4 ? tok[2] : tok[1]);
          value_tok = tok.size() == 4 ? tok[3] : tok[2];
        }
        auto it = cols.find(colname);
        if (it == cols.end()) throw ParseError("unknown column '" + colname + "'", lineno);
        MpsColumn& col = it->second;
        const double v = valueless ? 0.0 : parse_number(value_tok, lineno);
        if (type == "UP") {
          col.upper = v;
          col.upper_set = true;
        } else if (type == "LO") {
          col.lower = v;
        } else if (type == "FX") {
          col.lower = col.upper = v;
          col.upper_set = true;
        } else if (type == "FR") {
          col.lower = -HUGE_VAL;
          col.upper = HUGE_VAL;
          col.upper_set = true;
        } else if (type == "MI") {
          col.lower = -HUGE_VAL;
        } else if (type == "PL") {
          col.upper = HUGE_VAL;
          col.upper_set = true;
        } else if (type == "BV") {
          col.integer = true;
          col.lower = 0.0;
          col.upper = 1.0;
          col.upper_set = true;
        } else if (type == "LI" || type == "UI") {
          col.integer = true;
          (type == "LI" ? col.lower : col.upper) = v;
          if (type == "UI") col.upper_set = true;
        } else {
          throw ParseError("unsupported bound type '" + type + "'", lineno);
        }
        if (col.integer && (col.lower != 0.0 || (col.upper_set && col.upper != 1.0))) {
          throw ParseError("general-integer column '" + colname +
                               "': only binary integer columns are supported",
                           lineno);
        }
        break;
      }
      case Section::Name:
      case Section::None:
      case Section::End:
        throw ParseError("data outside a section", lineno);
    }
  }
  if (!saw_columns || col_order.empty()) {
    throw ParseError("COLUMNS section is missing or empty", lineno);
  }
  if (section != Section::End) throw ParseError("missing ENDATA", lineno);

  // Binary columns keep their order of appearance, as do continuous ones.
  for (const auto& name : col_order) {
    MpsColumn& col = cols[name];
    if (col.integer) {
      col.index = inst.n++;
    } else {
      col.index = inst.d++;
    }
  }
  std::vector<std::vector<SparseEntry>> bin(row_names.size());
  std::vector<std::vector<SparseEntry>> cont(row_names.size());
  for (const auto& name : col_order) {
    const MpsColumn& col = cols[name];
    for (const auto& [r, v] : col.entries) {
      (col.integer ? bin : cont)[static_cast<std::size_t>(r)].push_back({col.index, v});
    }
  }
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    inst.rows.push_back({make_sparse(std::move(bin[r])), make_sparse(std::move(cont[r])),
                         row_senses[r], rhs[r]});
  }
  for (const auto& name : col_order) {
    const MpsColumn& col = cols[name];
    if (col.integer) continue;
    const bool lo = std::isfinite(col.lower);
    const bool up = std::isfinite(col.upper);
    if (lo && up && col.lower == col.upper) {
      inst.rows.push_back({{}, {{col.index, 1.0}}, Sense::EQ, col.lower});
      continue;
    }
    if (lo) inst.rows.push_back({{}, {{col.index, 1.0}}, Sense::GE, col.lower});
    if (up) inst.rows.push_back({{}, {{col.index, 1.0}}, Sense::LE, col.upper});
  }
  bool any_obj = false;
  for (const auto& [name, v] : obj) any_obj = any_obj || v != 0.0;
  if (any_obj) {
    std::vector<double> c(static_cast<std::size_t>(inst.n + inst.d), 0.0);
    for (const auto& [name, v] : obj) {
      const MpsColumn& col = cols[name];
      const int at = col.integer ? col.index : inst.n + col.index;
      c[static_cast<std::size_t>(at)] = maximize ? v : -v;
    }
    for (auto& v : c) {
      if (v == 0.0) v = 0.0;
    }
    inst.objective = std::move(c);
  }
  try {
    validate(inst);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 0);
  }
  return inst;
}

std::string write_mps(const MixedBinaryInstance& instance) {
  validate(instance);
  std::ostringstream out;
  out << "NAME " << (instance.name.empty() ? "unnamed" : instance.name) << "\n";
  out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N obj\n";
  for (int r = 0; r < instance.num_rows(); ++r) {
    const char* t = "L";
    switch (instance.rows[static_cast<std::size_t>(r)].sense) {
      case Sense::LE:
        t = "L";
        break;
      case Sense::GE:
        t = "G";
        break;
      case Sense::EQ:
        t = "E";
        break;
    }
    out << " " << t << " r" << r << "\n";
  }
  // Column-major entries.
  std::vector<std::vector<std::pair<int, double>>> bin(static_cast<std::size_t>(instance.n));
  std::vector<std::vector<std::pair<int, double>>> cont(static_cast<std::size_t>(instance.d));
  for (int r = 0; r < instance.num_rows(); ++r) {
    const auto& row = instance.rows[static_cast<std::size_t>(r)];
    for (const auto& e : row.bin_coeffs) bin[static_cast<std::size_t>(e.index)].push_back({r, e.value});
    for (const auto& e : row.cont_coeffs) cont[static_cast<std::size_t>(e.index)].push_back({r, e.value});
  }
  out << "COLUMNS\n";
  auto write_col = [&](const std::string& name, int at,
                       const std::vector<std::pair<int, double>>& entries) {
    if (instance.objective) {
      const double c = (*instance.objective)[static_cast<std::size_t>(at)];
      if (c != 0.0) out << "    " << name << " obj " << fmt(c) << "\n";
    }
    for (const auto& [r, v] : entries) {
      out << "    " << name << " r" << r << " " << fmt(v) << "\n";
    }
    if (entries.empty() && !(instance.objective &&
                             (*instance.objective)[static_cast<std::size_t>(at)] != 0.0)) {
      out << "    " << name << " obj 0\n";
    }
  };
  if (instance.n > 0) {
    out << "    MARKER 'MARKER' 'INTORG'\n";
    for (int j = 0; j < instance.n; ++j) write_col("x" + std::to_string(j), j, bin[static_cast<std::size_t>(j)]);
    out << "    MARKER 'MARKER' 'INTEND'\n";
  }
  for (int j = 0; j < instance.d; ++j) {
    write_col("y" + std::to_string(j), instance.n + j, cont[static_cast<std::size_t>(j)]);
  }
  out << "RHS\n";
  for (int r = 0; r < instance.num_rows(); ++r) {
    const double b = instance.rows[static_cast<std::size_t>(r)].rhs;
    if (b != 0.0) out << "    rhs r" << r << " " << fmt(b) << "\n";
  }
  out << "BOUNDS\n";
  for (int j = 0; j < instance.n; ++j) out << " BV bnd x" << j << "\n";
  for (int j = 0; j < instance.d; ++j) out << " FR bnd y" << j << "\n";
  out << "ENDATA\n";
  return out.str();
}

// ------------------------------------------------------------- native

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

// Parses a quoted string starting at line[pos]; advances pos past it.
std::string unquote(std::string_view line, std::size_t& pos, int lineno) {
  if (pos >= line.size() || line[pos] != '"') throw ParseError("expected quoted name", lineno);
  std::string out;
  ++pos;
  while (pos < line.size() && line[pos] != '"') {
    char c = line[pos++];
    if (c == '\\') {
      if (pos >= line.size()) break;
      c = line[pos++];
      if (c == 'n') c = '\n';
    }
    out += c;
  }
  if (pos >= line.size()) throw ParseError("unterminated name", lineno);
  ++pos;
  return out;
}

void write_terms(std::ostream& out, const SparseVector& v, char prefix) {
  for (const auto& e : v) out << ' ' << prefix << e.index << ':' << fmt(e.value);
}

void write_list(std::ostream& out, const std::vector<int>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
}

std::vector<int> parse_list(std::string_view s, int lineno) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t end = s.find(',', start);
    if (end == std::string_view::npos) end = s.size();
    out.push_back(parse_int(s.substr(start, end - start), lineno));
    start = end + 1;
  }
  return out;
}

}  // namespace

std::string write_native(const MixedBinaryInstance& instance) {
  validate(instance);
  std::ostringstream out;
  out << "fpump 1 " << quote(instance.name) << ' ' << instance.n << ' ' << instance.d << '\n';
  if (instance.objective) {
    out << "obj";
    for (int j = 0; j < instance.n + instance.d; ++j) {
      const double c = (*instance.objective)[static_cast<std::size_t>(j)];
      if (c == 0.0) continue;
      if (j < instance.n) out << " x" << j << ':' << fmt(c);
      else out << " y" << (j - instance.n) << ':' << fmt(c);
    }
    out << '\n';
  }
  for (const auto& row : instance.rows) {
    out << "row " << to_string(row.sense) << ' ' << fmt(row.rhs);
    write_terms(out, row.bin_coeffs, 'x');
    write_terms(out, row.cont_coeffs, 'y');
    out << '\n';
  }
  if (instance.blocks) {
    for (const auto& blk : *instance.blocks) {
      out << "block x:";
      write_list(out, blk.bin_cols);
      out << " y:";
      write_list(out, blk.cont_cols);
      out << " r:";
      write_list(out, blk.rows);
      out << '\n';
    }
  }
  if (!instance.row_origin.empty()) {
    out << "origin";
    for (int r : instance.row_origin) out << ' ' << r;
    out << '\n';
  }
  return out.str();
}

MixedBinaryInstance read_native(std::string_view text) {
  MixedBinaryInstance inst;
  bool header = false;
  int lineno = 0;
  for (std::string_view line : split_lines(text)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (!header) {
      if (tok[0] != "fpump" || tok.size() < 2 || tok[1] != "1") {
        throw ParseError("expected header 'fpump 1'", lineno);
      }
      std::size_t pos = line.find('"');
      if (pos == std::string_view::npos) throw ParseError("header needs a quoted name", lineno);
      inst.name = unquote(line, pos, lineno);
      const auto rest = split_ws(line.substr(pos));
      if (rest.size() != 2) throw ParseError("header needs n and d", lineno);
      inst.n = parse_int(rest[0], lineno);
      inst.d = parse_int(rest[1], lineno);
      if (inst.n < 0 || inst.d < 0) throw ParseError("negative dimension", lineno);
      header = true;
      continue;
    }
    auto term = [&](std::string_view t) {
      const auto colon = t.find(':');
      if (colon == std::string_view::npos || colon < 2 || (t[0] != 'x' && t[0] != 'y')) {
        throw ParseError("bad term '" + std::string(t) + "'", lineno);
      }
      const int idx = parse_int(t.substr(1, colon - 1), lineno);
      const int limit = t[0] == 'x' ? inst.n : inst.d;
      if (idx < 0 || idx >= limit) throw ParseError("index out of range in '" + std::string(t) + "'", lineno);
      return std::tuple<char, int, double>{t[0], idx, parse_number(t.substr(colon + 1), lineno)};
    };
    if (tok[0] == "obj") {
      std::vector<double> c(static_cast<std::size_t>(inst.n + inst.d), 0.0);
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto [kind, idx, v] = term(tok[i]);
        c[static_cast<std::size_t>(kind == 'x' ? idx : inst.n + idx)] = v;
      }
      inst.objective = std::move(c);
    } else if (tok[0] == "row") {
      if (tok.size() < 3) throw ParseError("row needs a sense and a rhs", lineno);
      LinearRow row;
      if (tok[1] == "LE") row.sense = Sense::LE;
      else if (tok[1] == "GE") row.sense = Sense::GE;
      else if (tok[1] == "EQ") row.sense = Sense::EQ;
      else throw ParseError("bad sense '" + std::string(tok[1]) + "'", lineno);
      row.rhs = parse_number(tok[2], lineno);
      std::vector<SparseEntry> bin;
      std::vector<SparseEntry> cont;
      for (std::size_t i = 3; i < tok.size(); ++i) {
        auto [kind, idx, v] = term(tok[i]);
        (kind == 'x' ? bin : cont).push_back({idx, v});
      }
      row.bin_coeffs = make_sparse(std::move(bin));
      row.cont_coeffs = make_sparse(std::move(cont));
      inst.rows.push_back(std::move(row));
    } else if (tok[0] == "block") {
      Block blk;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto t = tok[i];
        if (t.size() < 2 || t[1] != ':') throw ParseError("bad block field", lineno);
        auto list = parse_list(t.substr(2), lineno);
        if (t[0] == 'x') blk.bin_cols = std::move(list);
        else if (t[0] == 'y') blk.cont_cols = std::move(list);
        else if (t[0] == 'r') blk.rows = std::move(list);
        else throw ParseError("bad block field", lineno);
      }
      if (!inst.blocks) inst.blocks.emplace();
      inst.blocks->push_back(std::move(blk));
    } else if (tok[0] == "origin") {
      for (std::size_t i = 1; i < tok.size(); ++i) inst.row_origin.push_back(parse_int(tok[i], lineno));
    } else {
      throw ParseError("unknown record '" + std::string(tok[0]) + "'", lineno);
    }
  }
  if (!header) throw ParseError("empty input", lineno);
  try {
    validate(inst);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 0);
  }
  return inst;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {
bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

MixedBinaryInstance load_instance(const std::string& path) {
  const std::string text = read_file(path);
  if (has_suffix(path, ".mps") || has_suffix(path, ".MPS")) return parse_mps(text);
  return read_native(text);
}

void save_instance(const MixedBinaryInstance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << (has_suffix(path, ".mps") ? write_mps(instance) : write_native(instance));
}

}  // namespace fpump
