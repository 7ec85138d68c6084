// Copyright 2026 The vecopt Authors
//
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

#include "lp_reader.hpp"

#include <charconv>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vecopt::testing {
namespace {

enum class Section { kNone, kObjective, kRows, kBounds, kBinaries, kEnd };

double parse_number(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::runtime_error("bad number '" + token + "'");
  }
  return v;
}

Sense parse_sense(const std::string& token) {
  if (token == "<=") return Sense::kLessEqual;
  if (token == ">=") return Sense::kGreaterEqual;
  if (token == "=") return Sense::kEqual;
  throw std::runtime_error("bad sense '" + token + "'");
}

struct RawTerm {
  std::string var;
  double coef;
};

struct RawRow {
  std::string name;
  std::vector<RawTerm> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

struct RawBound {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

// Reads "+ c name" terms until a sense token or the end of the stream.
std::vector<RawTerm> read_terms(const std::vector<std::string>& tokens, std::size_t& k) {
  std::vector<RawTerm> terms;
  while (k < tokens.size() && (tokens[k] == "+" || tokens[k] == "-")) {
    if (k + 2 >= tokens.size()) throw std::runtime_error("truncated term");
    const double sign = tokens[k] == "-" ? -1.0 : 1.0;
    terms.push_back({tokens[k + 2], sign * parse_number(tokens[k + 1])});
    k += 3;
  }
  return terms;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

}  // namespace

MilpModel read_lp(std::string_view text) {
  std::map<Section, std::vector<std::string>> tokens;
  std::vector<std::vector<std::string>> bound_lines;
  Section section = Section::kNone;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '\\') continue;
    if (line == "Minimize") {
      section = Section::kObjective;
    } else if (line == "Subject To") {
      section = Section::kRows;
    } else if (line == "Bounds") {
      section = Section::kBounds;
    } else if (line == "Binaries") {
      section = Section::kBinaries;
    } else if (line == "End") {
      section = Section::kEnd;
    } else if (section == Section::kNone || section == Section::kEnd) {
      throw std::runtime_error("text outside a section: " + line);
    } else if (section == Section::kBounds) {
      bound_lines.push_back(split(line));
    } else {
      for (std::string& t : split(line)) tokens[section].push_back(std::move(t));
    }
  }
  if (section != Section::kEnd) throw std::runtime_error("missing End");

  // Variables in order of first appearance.
  std::vector<std::string> order;
  std::map<std::string, bool> seen;
  auto note = [&](const std::string& name) {
    if (!seen[name]) {
      seen[name] = true;
      order.push_back(name);
    }
  };

  const auto& obj_tokens = tokens[Section::kObjective];
  if (obj_tokens.empty() || obj_tokens[0] != "obj:") throw std::runtime_error("missing obj:");
  std::size_t k = 1;
  const std::vector<RawTerm> objective = read_terms(obj_tokens, k);
  if (k != obj_tokens.size()) throw std::runtime_error("trailing objective tokens");
  for (const RawTerm& t : objective) note(t.var);

  std::vector<RawRow> rows;
  const auto& row_tokens = tokens[Section::kRows];
  for (k = 0; k < row_tokens.size();) {
    const std::string& label = row_tokens[k];
    if (label.size() < 2 || label.back() != ':') throw std::runtime_error("bad row " + label);
    RawRow row;
    row.name = label.substr(0, label.size() - 1);
    ++k;
    row.terms = read_terms(row_tokens, k);
    if (k + 1 >= row_tokens.size()) throw std::runtime_error("truncated row " + row.name);
    row.sense = parse_sense(row_tokens[k]);
    row.rhs = parse_number(row_tokens[k + 1]);
    k += 2;
    for (const RawTerm& t : row.terms) note(t.var);
    rows.push_back(std::move(row));
  }

  std::map<std::string, RawBound> bounds;
  for (const auto& b : bound_lines) {
    if (b.size() == 3 && b[1] == "=") {
      bounds[b[0]] = {parse_number(b[2]), parse_number(b[2])};
      note(b[0]);
    } else if (b.size() == 3 && b[1] == ">=") {
      bounds[b[0]].lower = parse_number(b[2]);
      note(b[0]);
    } else if (b.size() == 5 && b[1] == "<=" && b[3] == "<=") {
      bounds[b[2]] = {parse_number(b[0]), parse_number(b[4])};
      note(b[2]);
    } else {
      throw std::runtime_error("bad bound line");
    }
  }
  std::map<std::string, bool> binary;
  for (const std::string& name : tokens[Section::kBinaries]) {
    binary[name] = true;
    note(name);
  }

  MilpModel model;
  for (const std::string& name : order) {
    if (binary.contains(name)) {
      model.add_variable(name, VarKind::kBinary, 0.0, 1.0);
    } else {
      const RawBound b = bounds.contains(name) ? bounds[name] : RawBound{};
      model.add_variable(name, VarKind::kContinuous, b.lower, b.upper);
    }
  }
  auto resolve = [&](const std::vector<RawTerm>& raw) {
    std::vector<Term> terms;
    for (const RawTerm& t : raw) terms.push_back({model.variable(t.var), t.coef});
    return terms;
  };
  model.set_objective(resolve(objective));
  for (const RawRow& row : rows) {
    model.add_constraint(row.name, resolve(row.terms), row.sense, row.rhs);
  }
  return model;
}

}  // namespace vecopt::testing
