#include "propgate/mps.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace propgate {
namespace {

enum class Section {
  None,
  Name,
  ObjSense,
  Rows,
  Columns,
  Rhs,
  Ranges,
  Bounds,
  EndData
};

enum class RowType { Objective, LessEqual, GreaterEqual, Equal };

struct RowInfo {
  RowType type;
  int index;  // constraint index; -1 for the objective
};

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

// locale-independent; accepts an optional leading '+'
double parse_value(std::string_view token, int line) {
  std::string_view digits = token;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double v = 0.0;
  const auto res =
      std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size())
    throw MpsError(line, "cannot parse numeric value '" + std::string(token) + "'");
  return v;
}

struct Parser {
  double inf_threshold;
  int line_no = 0;

  std::string name;
  std::vector<RowType> row_types;       // in ROWS order, objective included
  std::vector<std::string> row_names;   // parallel to row_types
  std::unordered_map<std::string, int> row_lookup;  // name -> ROWS position
  int objective_row = -1;

  std::unordered_map<std::string, int> col_lookup;
  std::vector<std::string> col_names;
  std::vector<std::uint8_t> integral;

  std::vector<std::tuple<int, int, double>> triplets;  // (constraint, col, v)
  std::vector<double> rhs_value;
  std::vector<std::uint8_t> rhs_given;
  std::vector<double> range_value;
  std::vector<std::uint8_t> range_given;

  struct BoundEntry {
    std::string type;
    int col;
    double value;
    bool has_value;
    int line;
  };
  std::vector<BoundEntry> bound_entries;

  bool in_integer_block = false;
  bool saw_endata = false;
  int num_constraints = 0;
  bool row_arrays_ready = false;

  double norm(double v) const { return normalize_infinite(v, inf_threshold); }

  // Sizes the per-constraint side arrays once ROWS is complete; safe to call
  // from any later section.
  void ensure_row_arrays() {
    if (row_arrays_ready) return;
    num_constraints = static_cast<int>(row_types.size()) -
                      (objective_row >= 0 ? 1 : 0);
    rhs_value.assign(static_cast<size_t>(num_constraints), 0.0);
    rhs_given.assign(static_cast<size_t>(num_constraints), 0);
    range_value.assign(static_cast<size_t>(num_constraints), 0.0);
    range_given.assign(static_cast<size_t>(num_constraints), 0);
    row_arrays_ready = true;
  }

  void handle_rows(const std::vector<std::string_view>& tokens) {
    if (tokens.size() != 2)
      throw MpsError(line_no, "ROWS line must be '<type> <name>'");
    char t = static_cast<char>(
        std::toupper(static_cast<unsigned char>(tokens[0][0])));
    if (tokens[0].size() != 1)
      throw MpsError(line_no, "unknown row type '" + std::string(tokens[0]) + "'");
    RowType type;
    switch (t) {
      case 'N':
        type = RowType::Objective;
        break;
      case 'L':
        type = RowType::LessEqual;
        break;
      case 'G':
        type = RowType::GreaterEqual;
        break;
      case 'E':
        type = RowType::Equal;
        break;
      default:
        throw MpsError(line_no,
                       "unknown row type '" + std::string(tokens[0]) + "'");
    }
    const std::string rname(tokens[1]);
    if (row_lookup.count(rname))
      throw MpsError(line_no, "duplicate row name '" + rname + "'");
    if (type == RowType::Objective) {
      if (objective_row >= 0)
        throw MpsError(line_no, "more than one objective (N) row");
      objective_row = static_cast<int>(row_types.size());
    }
    row_lookup.emplace(rname, static_cast<int>(row_types.size()));
    row_types.push_back(type);
    row_names.push_back(rname);
  }

  int column_index(std::string_view name) {
    const std::string cname(name);
    auto it = col_lookup.find(cname);
    if (it != col_lookup.end()) return it->second;
    const int idx = static_cast<int>(col_names.size());
    col_lookup.emplace(cname, idx);
    col_names.push_back(cname);
    integral.push_back(in_integer_block ? 1 : 0);
    return idx;
  }

  int constraint_of(std::string_view row_name, bool* is_objective) {
    auto it = row_lookup.find(std::string(row_name));
    if (it == row_lookup.end())
      throw MpsError(line_no, "unknown row '" + std::string(row_name) + "'");
    const int pos = it->second;
    if (row_types[pos] == RowType::Objective) {
      *is_objective = true;
      return -1;
    }
    *is_objective = false;
    // Constraint index = ROWS position minus preceding objective row.
    return pos - (objective_row >= 0 && pos > objective_row ? 1 : 0);
  }

  void handle_columns(const std::vector<std::string_view>& tokens) {
    const bool is_marker =
        std::find(tokens.begin(), tokens.end(), "'MARKER'") != tokens.end();
    if (is_marker) {
      if (std::find(tokens.begin(), tokens.end(), "'INTORG'") != tokens.end())
        in_integer_block = true;
      else if (std::find(tokens.begin(), tokens.end(), "'INTEND'") !=
               tokens.end())
        in_integer_block = false;
      else
        throw MpsError(line_no, "marker line without INTORG/INTEND");
      return;
    }
    if (tokens.size() < 3 || tokens.size() % 2 == 0)
      throw MpsError(line_no, "COLUMNS line must be '<col> (<row> <value>)+'");
    const int col = column_index(tokens[0]);
    for (size_t i = 1; i + 1 < tokens.size(); i += 2) {
      bool is_objective = false;
      const int cons = constraint_of(tokens[i], &is_objective);
      const double v = parse_value(tokens[i + 1], line_no);
      if (is_objective) continue;  // objective coefficients are dropped
      triplets.emplace_back(cons, col, v);
    }
  }

  void handle_rhs(const std::vector<std::string_view>& tokens,
                  std::vector<double>& values, std::vector<std::uint8_t>& given,
                  const char* what) {
    if (tokens.size() < 3 || tokens.size() % 2 == 0)
      throw MpsError(line_no, std::string(what) +
                                  " line must be '<set> (<row> <value>)+'");
    for (size_t i = 1; i + 1 < tokens.size(); i += 2) {
      bool is_objective = false;
      const int cons = constraint_of(tokens[i], &is_objective);
      const double v = parse_value(tokens[i + 1], line_no);
      if (is_objective) continue;  // objective constant is dropped
      values[cons] = v;
      given[cons] = 1;
    }
  }

  void handle_bounds(const std::vector<std::string_view>& tokens) {
    if (tokens.size() < 3)
      throw MpsError(line_no, "BOUNDS line must be '<type> <set> <col> [value]'");
    std::string type(tokens[0]);
    std::transform(type.begin(), type.end(), type.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    static const char* kNoValue[] = {"FR", "MI", "PL", "BV"};
    const bool needs_value = std::find(std::begin(kNoValue), std::end(kNoValue),
                                       type) == std::end(kNoValue);
    if (needs_value && tokens.size() < 4)
      throw MpsError(line_no, "bound type " + type + " requires a value");
    const int col = column_index(tokens[2]);
    BoundEntry e;
    e.type = type;
    e.col = col;
    e.has_value = tokens.size() >= 4;
    e.value = e.has_value ? parse_value(tokens[3], line_no) : 0.0;
    e.line = line_no;
    bound_entries.push_back(e);
  }

  ProblemInstance finish() {
    if (!saw_endata) throw MpsError(line_no, "missing ENDATA");
    ensure_row_arrays();

    const int m = num_constraints;
    const int n = static_cast<int>(col_names.size());

    ProblemInstance inst;
    inst.name = name;
    inst.matrix = csr_from_triplets(triplets, m, n);
    inst.lhs.assign(static_cast<size_t>(m), -kInf);
    inst.rhs.assign(static_cast<size_t>(m), kInf);

    int cons = 0;
    for (size_t pos = 0; pos < row_types.size(); ++pos) {
      if (row_types[pos] == RowType::Objective) continue;
      const double side = rhs_given[cons] ? norm(rhs_value[cons]) : 0.0;
      switch (row_types[pos]) {
        case RowType::LessEqual:
          inst.rhs[cons] = side;
          break;
        case RowType::GreaterEqual:
          inst.lhs[cons] = side;
          break;
        case RowType::Equal:
          inst.lhs[cons] = side;
          inst.rhs[cons] = side;
          break;
        case RowType::Objective:
          break;
      }
      if (range_given[cons]) {
        const double r = range_value[cons];
        switch (row_types[pos]) {
          case RowType::LessEqual:
            inst.lhs[cons] = inst.rhs[cons] - std::fabs(r);
            break;
          case RowType::GreaterEqual:
            inst.rhs[cons] = inst.lhs[cons] + std::fabs(r);
            break;
          case RowType::Equal:
            if (r >= 0)
              inst.rhs[cons] = inst.lhs[cons] + r;
            else
              inst.lhs[cons] = inst.rhs[cons] + r;
            break;
          case RowType::Objective:
            break;
        }
        inst.lhs[cons] = norm(inst.lhs[cons]);
        inst.rhs[cons] = norm(inst.rhs[cons]);
      }
      ++cons;
    }

    inst.bounds.lower.assign(static_cast<size_t>(n), 0.0);
    inst.bounds.upper.assign(static_cast<size_t>(n), kInf);
    inst.integral = integral;

    for (const BoundEntry& e : bound_entries) {
      double& lo = inst.bounds.lower[e.col];
      double& up = inst.bounds.upper[e.col];
      const double v = norm(e.value);
      if (e.type == "LO")
        lo = v;
      else if (e.type == "UP")
        up = v;
      else if (e.type == "FX")
        lo = up = v;
      else if (e.type == "FR") {
        lo = -kInf;
        up = kInf;
      } else if (e.type == "MI")
        lo = -kInf;
      else if (e.type == "PL")
        up = kInf;
      else if (e.type == "BV") {
        inst.integral[e.col] = 1;
        lo = 0;
        up = 1;
      } else if (e.type == "UI") {
        inst.integral[e.col] = 1;
        up = v;
      } else if (e.type == "LI") {
        inst.integral[e.col] = 1;
        lo = v;
      } else {
        throw MpsError(e.line, "unknown bound type '" + e.type + "'");
      }
    }
    return inst;
  }
};

}  // namespace

ProblemInstance parse_mps(std::istream& in, double infinity_threshold) {
  Parser p;
  p.inf_threshold = infinity_threshold;

  Section section = Section::None;
  std::string line;
  while (std::getline(in, line)) {
    ++p.line_no;
    if (line.empty() || line[0] == '*') continue;
    const bool is_header =
        !std::isspace(static_cast<unsigned char>(line[0]));
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (is_header) {
      const std::string_view keyword = tokens[0];
      if (keyword == "NAME") {
        section = Section::Name;
        if (tokens.size() > 1) p.name = std::string(tokens[1]);
      } else if (keyword == "OBJSENSE") {
        section = Section::ObjSense;  // value line (if any) is ignored
      } else if (keyword == "ROWS") {
        section = Section::Rows;
      } else if (keyword == "COLUMNS") {
        section = Section::Columns;
        p.ensure_row_arrays();
      } else if (keyword == "RHS") {
        section = Section::Rhs;
        p.ensure_row_arrays();
      } else if (keyword == "RANGES") {
        section = Section::Ranges;
        p.ensure_row_arrays();
      } else if (keyword == "BOUNDS") {
        section = Section::Bounds;
        p.ensure_row_arrays();
      } else if (keyword == "ENDATA") {
        p.saw_endata = true;
        break;
      } else {
        throw MpsError(p.line_no,
                       "unknown section '" + std::string(keyword) + "'");
      }
      continue;
    }

    switch (section) {
      case Section::Rows:
        p.handle_rows(tokens);
        break;
      case Section::Columns:
        p.handle_columns(tokens);
        break;
      case Section::Rhs:
        p.handle_rhs(tokens, p.rhs_value, p.rhs_given, "RHS");
        break;
      case Section::Ranges:
        p.handle_rhs(tokens, p.range_value, p.range_given, "RANGES");
        break;
      case Section::Bounds:
        p.handle_bounds(tokens);
        break;
      case Section::ObjSense:
      case Section::Name:
        break;  // free-standing values, ignored
      case Section::None:
        throw MpsError(p.line_no, "data before any section header");
      case Section::EndData:
        break;
    }
  }
  return p.finish();
}

ProblemInstance parse_mps_file(const std::string& path,
                               double infinity_threshold) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  ProblemInstance inst = parse_mps(in, infinity_threshold);
  if (inst.name.empty()) {
    const size_t slash = path.find_last_of('/');
    inst.name = slash == std::string::npos ? path : path.substr(slash + 1);
  }
  return inst;
}

namespace {

std::string format_value(double v) {
  if (v >= 1e20) return "1e+20";
  if (v <= -1e20) return "-1e+20";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_mps(const ProblemInstance& instance, std::ostream& out) {
  const int m = instance.num_rows();
  const int n = instance.num_cols();

  out << "NAME          "
      << (instance.name.empty() ? std::string("instance") : instance.name)
      << "\n";
  out << "ROWS\n N  OBJ\n";
  // Row encoding: E for equalities, G when only lhs is finite, L when only
  // rhs is finite. A two-sided row becomes L or G plus a RANGES entry. The
  // re-parse reconstructs the non-anchored side as rhs - |r| resp. lhs + |r|,
  // so search both anchors for a range value whose reconstruction is
  // bit-exact; when the range lies in a higher binade than both sides no
  // such value exists, and the closest one (off by one ulp) is used.
  std::vector<char> row_kind(static_cast<size_t>(m));
  std::vector<double> row_range(static_cast<size_t>(m), 0.0);
  std::vector<char> row_has_range(static_cast<size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    const double lhs = instance.lhs[i];
    const double rhs = instance.rhs[i];
    char kind;
    if (std::isfinite(lhs) && std::isfinite(rhs) && lhs == rhs) {
      kind = 'E';
    } else if (std::isfinite(lhs) && !std::isfinite(rhs)) {
      kind = 'G';
    } else if (std::isfinite(lhs) && std::isfinite(rhs)) {
      row_has_range[i] = 1;
      // reconstruction error measured in ulps of the reconstructed side
      const auto ulps_off = [](double got, double want) {
        const double ulp =
            std::nextafter(std::fabs(want), kInf) - std::fabs(want);
        return std::fabs(got - want) / ulp;
      };
      const double r0 = rhs - lhs;
      double best_r = r0;
      double best_score = ulps_off(rhs - r0, lhs);
      char best_kind = 'L';
      for (int step = -4; step <= 4 && best_score != 0.0; ++step) {
        double rc = r0;
        for (int s = 0; s < std::abs(step); ++s)
          rc = std::nextafter(rc, step > 0 ? kInf : -kInf);
        const double score_l = ulps_off(rhs - rc, lhs);
        if (score_l < best_score) {
          best_score = score_l;
          best_r = rc;
          best_kind = 'L';
        }
        const double score_g = ulps_off(lhs + rc, rhs);
        if (score_g < best_score) {
          best_score = score_g;
          best_r = rc;
          best_kind = 'G';
        }
      }
      kind = best_kind;
      row_range[i] = best_r;
    } else {
      kind = 'L';
    }
    row_kind[i] = kind;
    out << " " << kind << "  r" << i << "\n";
  }

  out << "COLUMNS\n";
  const ColumnMajorMatrix csc = csr_to_csc(instance.matrix);
  bool in_integer_block = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    const bool integer = instance.integral[j] != 0;
    if (integer != in_integer_block) {
      out << "    M" << marker++ << "  'MARKER'  "
          << (integer ? "'INTORG'" : "'INTEND'") << "\n";
      in_integer_block = integer;
    }
    if (csc.col_ptr[j] == csc.col_ptr[j + 1] && m > 0) {
      // anchor entry so a column without non-zeros keeps its index on
      // re-parse; the explicit zero is dropped at canonicalization
      out << "    x" << j << "  r0  0\n";
      continue;
    }
    for (int k = csc.col_ptr[j]; k < csc.col_ptr[j + 1]; ++k) {
      out << "    x" << j << "  r" << csc.row_idx[k] << "  "
          << format_value(csc.values[k]) << "\n";
    }
  }
  if (in_integer_block)
    out << "    M" << marker++ << "  'MARKER'  'INTEND'\n";

  out << "RHS\n";
  for (int i = 0; i < m; ++i) {
    const double side = row_kind[i] == 'G' ? instance.lhs[i] : instance.rhs[i];
    if (side != 0.0 || row_kind[i] == 'E')
      out << "    RHS  r" << i << "  " << format_value(side) << "\n";
  }

  bool any_range = false;
  for (int i = 0; i < m; ++i) {
    if (!row_has_range[i]) continue;
    if (!any_range) {
      out << "RANGES\n";
      any_range = true;
    }
    out << "    RNG  r" << i << "  " << format_value(row_range[i]) << "\n";
  }

  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const double lo = instance.bounds.lower[j];
    const double up = instance.bounds.upper[j];
    if (lo == 0.0 && up == kInf) continue;
    if (std::isfinite(lo) && lo == up) {
      out << " FX BND  x" << j << "  " << format_value(lo) << "\n";
      continue;
    }
    if (lo == -kInf && up == kInf) {
      out << " FR BND  x" << j << "\n";
      continue;
    }
    if (lo == -kInf)
      out << " MI BND  x" << j << "\n";
    else if (lo != 0.0)
      out << " LO BND  x" << j << "  " << format_value(lo) << "\n";
    if (std::isfinite(up)) out << " UP BND  x" << j << "  " << format_value(up) << "\n";
  }
  out << "ENDATA\n";
}

void write_mps_file(const ProblemInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_mps(instance, out);
}

}  // namespace propgate
