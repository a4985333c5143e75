// Copyright 2026 The CLCR Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clcr/mps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace clcr {
namespace {

constexpr double kMpsInfinity = 1e30;

enum class Section { kNone, kName, kObjSense, kRows, kColumns, kRhs, kRanges, kBounds, kEnd };

enum class Format { kFree, kFixed };

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> Tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Fixed-format field columns (0-based, half open).
constexpr std::pair<std::size_t, std::size_t> kFixedFields[] = {
    {1, 3}, {4, 12}, {14, 22}, {24, 36}, {39, 47}, {49, 61}};

std::string FixedField(std::string_view line, int f) {
  auto [b, e] = kFixedFields[f];
  if (b >= line.size()) return {};
  if (f == 5) e = line.size();  // last numeric field may run past column 61
  return Trim(line.substr(b, std::min(e, line.size()) - b));
}

std::optional<double> ParseNumber(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  if (v >= kMpsInfinity) return kInf;
  if (v <= -kMpsInfinity) return -kInf;
  return v;
}

struct RowDecl {
  std::string name;
  char type;  // N, L, G, E
  std::vector<Entry> entries;
  double rhs = 0.0;
  std::optional<double> range;
};

class MpsReader {
 public:
  MpsReader(std::string_view text, Format format) : text_(text), format_(format) {}

  MilpInstance Read();

 private:
  [[noreturn]] void Fail(const std::string& what) const { throw ParseError(what, line_no_); }

  double Number(const std::string& s) const {
    auto v = ParseNumber(s);
    if (!v) Fail("invalid number '" + s + "'");
    return *v;
  }

  std::size_t RowIndex(const std::string& name) const {
    auto it = row_index_.find(name);
    if (it == row_index_.end()) Fail("unknown row '" + name + "'");
    return it->second;
  }

  std::size_t ColumnIndex(const std::string& name) const {
    auto it = col_index_.find(name);
    if (it == col_index_.end()) Fail("unknown column '" + name + "'");
    return it->second;
  }

  std::vector<std::string> Fields(std::string_view line) const;
  void HandleHeader(std::string_view line);
  void HandleRows(const std::vector<std::string>& f);
  void HandleColumns(const std::vector<std::string>& f);
  void HandleRhsOrRange(const std::vector<std::string>& f, bool range);
  void HandleBounds(const std::vector<std::string>& f);
  void AddCoefficient(std::size_t col, const std::string& row, const std::string& value);
  MilpInstance Build();

  std::string_view text_;
  Format format_;
  std::size_t line_no_ = 0;
  Section section_ = Section::kNone;

  std::string name_;
  bool maximize_ = false;
  std::optional<std::size_t> objective_row_;
  std::vector<RowDecl> rows_;
  std::unordered_map<std::string, std::size_t> row_index_;
  std::unordered_set<std::string> ignored_rows_;  // extra N rows
  std::vector<std::string> col_names_;
  std::unordered_map<std::string, std::size_t> col_index_;
  std::vector<double> objective_;
  double objective_rhs_ = 0.0;
  std::vector<VarBounds> bounds_;
  std::vector<bool> integer_;
  std::vector<bool> upper_set_;
  std::unordered_set<std::uint64_t> seen_pairs_;
  bool in_marker_ = false;
};

std::vector<std::string> MpsReader::Fields(std::string_view line) const {
  if (format_ == Format::kFree || line.find("'MARKER'") != std::string_view::npos) {
    return Tokenize(line);
  }
  std::vector<std::string> f;
  for (int i = 0; i < 6; ++i) f.push_back(FixedField(line, i));
  while (!f.empty() && f.back().empty()) f.pop_back();
  // Only ROWS and BOUNDS use the type field.
  if (section_ != Section::kRows && section_ != Section::kBounds && !f.empty()) {
    f.erase(f.begin());
  }
  return f;
}

void MpsReader::HandleHeader(std::string_view line) {
  auto tok = Tokenize(line);
  const std::string& kw = tok[0];
  if (kw == "NAME") {
    section_ = Section::kName;
    name_ = Trim(line.substr(4));
  } else if (kw == "OBJSENSE") {
    section_ = Section::kObjSense;
    if (tok.size() >= 2) {
      if (tok[1] == "MAX" || tok[1] == "MAXIMIZE") maximize_ = true;
      else if (tok[1] != "MIN" && tok[1] != "MINIMIZE") Fail("unknown OBJSENSE '" + tok[1] + "'");
    }
  } else if (kw == "ROWS") {
    section_ = Section::kRows;
  } else if (kw == "COLUMNS") {
    section_ = Section::kColumns;
  } else if (kw == "RHS") {
    section_ = Section::kRhs;
  } else if (kw == "RANGES") {
    section_ = Section::kRanges;
  } else if (kw == "BOUNDS") {
    section_ = Section::kBounds;
  } else if (kw == "ENDATA") {
    section_ = Section::kEnd;
  } else {
    Fail("malformed section header '" + Trim(line) + "'");
  }
  if (tok.size() > 1 && section_ != Section::kName && section_ != Section::kObjSense) {
    Fail("malformed section header '" + Trim(line) + "'");
  }
}

void MpsReader::HandleRows(const std::vector<std::string>& f) {
  if (f.size() != 2) Fail("ROWS entry needs a type and a name");
  if (f[0].size() != 1 || std::string("NLGE").find(f[0][0]) == std::string::npos) {
    Fail("unknown row type '" + f[0] + "'");
  }
  if (row_index_.count(f[1]) || ignored_rows_.count(f[1])) Fail("duplicate row '" + f[1] + "'");
  const char type = f[0][0];
  if (type == 'N' && objective_row_) {
    ignored_rows_.insert(f[1]);
    return;
  }
  row_index_[f[1]] = rows_.size();
  if (type == 'N') objective_row_ = rows_.size();
  rows_.push_back(RowDecl{f[1], type, {}, 0.0, std::nullopt});
}

void MpsReader::AddCoefficient(std::size_t col, const std::string& row, const std::string& value) {
  if (ignored_rows_.count(row)) return;
  const std::size_t r = RowIndex(row);
  const double v = Number(value);
  if (!std::isfinite(v)) Fail("infinite coefficient");
  const std::uint64_t key = (static_cast<std::uint64_t>(r) << 32) ^ col;
  if (!seen_pairs_.insert(key).second) {
    Fail("duplicate entry for column '" + col_names_[col] + "' in row '" + row + "'");
  }
  if (objective_row_ && r == *objective_row_) {
    objective_[col] = v;
  } else if (v != 0.0) {
    rows_[r].entries.push_back(Entry{col, v});
  }
}

void MpsReader::HandleColumns(const std::vector<std::string>& f) {
  if (f.size() >= 3 && f[1] == "'MARKER'") {
    if (f[2] == "'INTORG'") in_marker_ = true;
    else if (f[2] == "'INTEND'") in_marker_ = false;
    else Fail("unknown marker '" + f[2] + "'");
    return;
  }
  if (f.size() != 3 && f.size() != 5) Fail("COLUMNS entry needs 3 or 5 fields");
  std::size_t col;
  auto it = col_index_.find(f[0]);
  if (it == col_index_.end()) {
    col = col_names_.size();
    col_index_[f[0]] = col;
    col_names_.push_back(f[0]);
    objective_.push_back(0.0);
    bounds_.push_back(VarBounds{});
    integer_.push_back(in_marker_);
    upper_set_.push_back(false);
  } else {
    col = it->second;
  }
  AddCoefficient(col, f[1], f[2]);
  if (f.size() == 5) AddCoefficient(col, f[3], f[4]);
}

void MpsReader::HandleRhsOrRange(const std::vector<std::string>& raw, bool range) {
  // Normalize to [set, row, value, (row, value)].
  std::vector<std::string> f = raw;
  if (f.size() == 2 || f.size() == 4) f.insert(f.begin(), std::string());
  if (f.size() != 3 && f.size() != 5) Fail(std::string(range ? "RANGES" : "RHS") + " entry has wrong field count");
  for (std::size_t p = 1; p + 1 < f.size(); p += 2) {
    if (ignored_rows_.count(f[p])) continue;
    const std::size_t r = RowIndex(f[p]);
    const double v = Number(f[p + 1]);
    if (range) {
      if (objective_row_ && r == *objective_row_) Fail("RANGES entry on objective row");
      rows_[r].range = v;
    } else if (objective_row_ && r == *objective_row_) {
      objective_rhs_ = v;
    } else {
      rows_[r].rhs = v;
    }
  }
}

void MpsReader::HandleBounds(const std::vector<std::string>& raw) {
  if (raw.empty()) Fail("empty BOUNDS entry");
  const std::string& type = raw[0];
  static const std::unordered_set<std::string> kValued = {"UP", "LO", "FX", "LI", "UI"};
  static const std::unordered_set<std::string> kUnvalued = {"FR", "MI", "PL", "BV"};
  const bool valued = kValued.count(type) > 0;
  if (!valued && !kUnvalued.count(type)) Fail("unsupported bound type '" + type + "'");
  // Normalize to [type, set, col, (value)].
  std::vector<std::string> f = raw;
  if (valued && f.size() == 3) f.insert(f.begin() + 1, std::string());
  if (!valued && f.size() == 2) f.insert(f.begin() + 1, std::string());
  if (valued ? f.size() != 4 : (f.size() != 3 && f.size() != 4)) Fail("BOUNDS entry has wrong field count");
  const std::size_t col = ColumnIndex(f[2]);
  auto& b = bounds_[col];
  const double v = valued ? Number(f[3]) : 0.0;
  if (type == "UP" || type == "UI") {
    if (v < 0.0 && b.lower == 0.0) b.lower = -kInf;
    b.upper = v;
    upper_set_[col] = true;
    if (type == "UI") integer_[col] = true;
  } else if (type == "LO" || type == "LI") {
    b.lower = v;
    if (type == "LI") integer_[col] = true;
  } else if (type == "FX") {
    b.lower = b.upper = v;
  } else if (type == "FR") {
    b.lower = -kInf;
    b.upper = kInf;
  } else if (type == "MI") {
    b.lower = -kInf;
  } else if (type == "PL") {
    b.upper = kInf;
  } else if (type == "BV") {
    b.lower = 0.0;
    b.upper = 1.0;
    integer_[col] = true;
  }
}

MilpInstance MpsReader::Read() {
  std::size_t pos = 0;
  bool saw_rows = false;
  while (pos <= text_.size()) {
    std::size_t nl = text_.find('\n', pos);
    if (nl == std::string_view::npos) nl = text_.size();
    std::string_view line = text_.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == '*' || Trim(line).empty()) continue;
    if (section_ == Section::kEnd) Fail("data after ENDATA");
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      HandleHeader(line);
      if (section_ == Section::kRows) saw_rows = true;
      continue;
    }
    auto f = Fields(line);
    if (f.empty()) continue;
    switch (section_) {
      case Section::kObjSense:
        if (f[0] == "MAX" || f[0] == "MAXIMIZE") maximize_ = true;
        else if (f[0] != "MIN" && f[0] != "MINIMIZE") Fail("unknown OBJSENSE '" + f[0] + "'");
        break;
      case Section::kRows:
        HandleRows(f);
        break;
      case Section::kColumns:
        HandleColumns(f);
        break;
      case Section::kRhs:
        HandleRhsOrRange(f, false);
        break;
      case Section::kRanges:
        HandleRhsOrRange(f, true);
        break;
      case Section::kBounds:
        HandleBounds(f);
        break;
      default:
        Fail("data line outside of a section");
    }
  }
  if (!saw_rows) throw ParseError("missing ROWS section", 0);
  if (section_ != Section::kEnd) throw ParseError("missing ENDATA", 0);
  return Build();
}

MilpInstance MpsReader::Build() {
  MilpInstance inst;
  inst.name = name_;
  inst.num_vars = col_names_.size();
  inst.objective = objective_;
  inst.objective_offset = -objective_rhs_;
  inst.bounds = bounds_;
  inst.is_integer = integer_;
  inst.maximize_input = maximize_;
  if (maximize_) {
    for (double& c : inst.objective) c = -c;
    inst.objective_offset = -inst.objective_offset;
  }
  for (double& c : inst.objective) {
    if (c == 0.0) c = 0.0;  // drop negative zero
  }
  if (inst.objective_offset == 0.0) inst.objective_offset = 0.0;

  bool any_range = false;
  std::vector<std::string> names;
  for (auto& decl : rows_) {
    if (decl.type == 'N') continue;
    std::sort(decl.entries.begin(), decl.entries.end(),
              [](const Entry& a, const Entry& b) { return a.col < b.col; });
    Constraint row;
    row.entries = decl.entries;
    row.rhs = decl.rhs;
    row.sense = decl.type == 'L' ? Sense::kLE : decl.type == 'G' ? Sense::kGE : Sense::kEQ;
    if (!decl.range || (*decl.range == 0.0 && decl.type != 'E')) {
      row.original_index = inst.rows.size();
      inst.rows.push_back(std::move(row));
      names.push_back(decl.name);
      continue;
    }
    any_range = true;
    const double r = *decl.range;
    Constraint first = row, second = row;
    switch (decl.type) {
      case 'L':  // b - |r| <= a x <= b
        second.sense = Sense::kGE;
        second.rhs = decl.rhs - std::abs(r);
        break;
      case 'G':  // b <= a x <= b + |r|
        second.sense = Sense::kLE;
        second.rhs = decl.rhs + std::abs(r);
        break;
      default:  // E: [b, b + r] or [b + r, b]
        first.sense = Sense::kGE;
        second.sense = Sense::kLE;
        first.rhs = r >= 0 ? decl.rhs : decl.rhs + r;
        second.rhs = r >= 0 ? decl.rhs + r : decl.rhs;
        break;
    }
    first.original_index = inst.rows.size();
    inst.rows.push_back(std::move(first));
    second.original_index = inst.rows.size();
    inst.rows.push_back(std::move(second));
  }

  // Rows named c<k> by WriteMps carry their provenance in the name.
  if (!any_range && !names.empty()) {
    std::vector<std::size_t> tags;
    for (const auto& nm : names) {
      if (nm.size() < 2 || nm[0] != 'c') break;
      std::size_t k = 0;
      auto [ptr, ec] = std::from_chars(nm.data() + 1, nm.data() + nm.size(), k);
      if (ec != std::errc() || ptr != nm.data() + nm.size()) break;
      if (nm.size() > 2 && nm[1] == '0') break;
      tags.push_back(k);
    }
    if (tags.size() == names.size() && Permutation::IsBijection(tags)) {
      for (std::size_t i = 0; i < tags.size(); ++i) inst.rows[i].original_index = tags[i];
    }
  }

  for (std::size_t j = 0; j < inst.num_vars; ++j) {
    if (inst.bounds[j].lower > inst.bounds[j].upper) {
      throw ParseError("column '" + col_names_[j] + "' has lower bound above upper bound", 0);
    }
  }
  return inst;
}

void AppendNumber(std::string& out, double v) {
  if (std::isinf(v)) {
    out += v > 0 ? "1e30" : "-1e30";
    return;
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

MilpInstance ParseMps(std::string_view text) {
  try {
    return MpsReader(text, Format::kFree).Read();
  } catch (const ParseError& free_error) {
    try {
      return MpsReader(text, Format::kFixed).Read();
    } catch (const ParseError&) {
      throw free_error;
    }
  }
}

std::string WriteMps(const MilpInstance& inst) {
  Validate(inst);
  const std::size_t n = inst.num_vars;
  const double sign = inst.maximize_input ? -1.0 : 1.0;
  std::string out;
  out += "NAME " + inst.name + "\n";
  if (inst.maximize_input) out += "OBJSENSE\n    MAX\n";
  out += "ROWS\n N  obj\n";
  for (const auto& row : inst.rows) {
    const char* t = row.sense == Sense::kLE ? "L" : row.sense == Sense::kGE ? "G" : "E";
    out += " ";
    out += t;
    out += "  c" + std::to_string(row.original_index) + "\n";
  }

  std::vector<std::vector<std::pair<std::size_t, double>>> cols(n);
  for (std::size_t i = 0; i < inst.rows.size(); ++i) {
    for (const auto& e : inst.rows[i].entries) cols[e.col].push_back({i, e.coeff});
  }
  out += "COLUMNS\n";
  bool marker = false;
  int marker_id = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (inst.is_integer[j] != marker) {
      out += "    MARKER" + std::to_string(marker_id++) + "  'MARKER'  " +
             (inst.is_integer[j] ? "'INTORG'" : "'INTEND'") + "\n";
      marker = inst.is_integer[j];
    }
    const std::string col = "x" + std::to_string(j);
    out += "    " + col + "  obj  ";
    AppendNumber(out, sign * inst.objective[j] + 0.0);
    out += "\n";
    for (const auto& [i, v] : cols[j]) {
      out += "    " + col + "  c" + std::to_string(inst.rows[i].original_index) + "  ";
      AppendNumber(out, v);
      out += "\n";
    }
  }
  if (marker) out += "    MARKER" + std::to_string(marker_id) + "  'MARKER'  'INTEND'\n";

  out += "RHS\n";
  const double offset = sign * inst.objective_offset;
  if (offset != 0.0) {
    out += "    RHS  obj  ";
    AppendNumber(out, -offset);
    out += "\n";
  }
  for (const auto& row : inst.rows) {
    if (row.rhs == 0.0) continue;
    out += "    RHS  c" + std::to_string(row.original_index) + "  ";
    AppendNumber(out, row.rhs);
    out += "\n";
  }

  out += "BOUNDS\n";
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = inst.bounds[j];
    const std::string col = "x" + std::to_string(j);
    auto emit = [&](const char* type, std::optional<double> v) {
      out += std::string(" ") + type + " BND  " + col;
      if (v) {
        out += "  ";
        AppendNumber(out, *v);
      }
      out += "\n";
    };
    if (b.lower == b.upper) {
      emit("FX", b.lower);
      continue;
    }
    if (std::isinf(b.lower) && std::isinf(b.upper)) {
      emit("FR", std::nullopt);
      continue;
    }
    if (std::isinf(b.lower)) emit("MI", std::nullopt);
    else if (b.lower != 0.0) emit("LO", b.lower);
    if (!std::isinf(b.upper)) emit("UP", b.upper);
    // integer markers default to [0, inf), nothing to add otherwise
  }
  out += "ENDATA\n";
  return out;
}

MilpInstance ReadMpsFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  MilpInstance inst = ParseMps(ss.str());
  return inst;
}

void WriteMpsFile(const MilpInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << WriteMps(inst);
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace clcr
