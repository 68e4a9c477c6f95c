// Copyright 2026 The khm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "khm/proofs.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "khm/errors.hpp"

namespace khm {

const std::vector<AxiomSchema>& axiom_schemas() {
  static const std::vector<AxiomSchema> schemas = [] {
    auto mk = [](const char* name, const char* text) {
      return AxiomSchema{name, parse_formula(text)};
    };
    return std::vector<AxiomSchema>{
        mk("DISTU", "U(p) & U(p -> q) -> U(q)"),
        mk("TU", "U(p) -> p"),
        mk("4KhmU", "Khm(p, o, q) -> U(Khm(p, o, q))"),
        mk("5KhmU", "!Khm(p, o, q) -> U(!Khm(p, o, q))"),
        mk("EMPKhm", "U(p -> q) -> Khm(p, false, q)"),
        mk("COMPKhm", "Khm(p, o, r) & Khm(r, o, q) & U(r -> o) -> Khm(p, o, q)"),
        mk("ONEKhm", "Khm(p, o, q) & !Khm(p, false, q) -> Khm(p, false, o)"),
        mk("UKhm",
           "U(p' -> p) & U(o -> o') & U(q -> q') & Khm(p, o, q) -> "
           "Khm(p', o', q')"),
    };
  }();
  return schemas;
}

const AxiomSchema* find_axiom_schema(std::string_view name) {
  for (const auto& s : axiom_schemas())
    if (s.name == name) return &s;
  return nullptr;
}

Formula instantiate(const AxiomSchema& schema,
                    const std::map<std::string, Formula>& map) {
  auto templ_letters = letters(schema.templ);
  for (const auto& [letter, f] : map) {
    (void)f;
    if (!templ_letters.count(letter))
      throw Error("letter \"" + letter + "\" does not occur in schema " +
                  schema.name);
  }
  // One recursive pass replaces all letters at once, which is exactly
  // simultaneous substitution; map entries cannot capture each other.
  struct Subst {
    const std::map<std::string, Formula>& map;
    Formula run(const Formula& f) {
      switch (f.kind()) {
        case Kind::Atom: {
          auto it = map.find(f.name());
          return it == map.end() ? f : it->second;
        }
        case Kind::Top:
        case Kind::Bot:
          return f;
        case Kind::Neg:
          return Formula::neg(run(f.operand()));
        case Kind::Univ:
          return Formula::univ(run(f.operand()));
        case Kind::And:
          return Formula::conj(run(f.lhs()), run(f.rhs()));
        case Kind::Khm:
          return Formula::khm(run(f.pre()), run(f.mid()), run(f.goal()));
      }
      return f;
    }
  };
  return Subst{map}.run(schema.templ);
}

// ---------------------------------------------------------------------------
// Tautology checking
// ---------------------------------------------------------------------------

namespace {

void collect_vars(const Formula& f, std::vector<Formula>& vars,
                  std::unordered_map<Formula, int, FormulaHash>& index) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
      return;
    case Kind::Neg:
      collect_vars(f.operand(), vars, index);
      return;
    case Kind::And:
      collect_vars(f.lhs(), vars, index);
      collect_vars(f.rhs(), vars, index);
      return;
    case Kind::Atom:
    case Kind::Khm:
    case Kind::Univ:
      if (index.emplace(f, static_cast<int>(vars.size())).second)
        vars.push_back(f);
      return;
  }
}

bool eval_bool(const Formula& f, std::uint64_t assignment,
               const std::unordered_map<Formula, int, FormulaHash>& index) {
  switch (f.kind()) {
    case Kind::Top:
      return true;
    case Kind::Bot:
      return false;
    case Kind::Neg:
      return !eval_bool(f.operand(), assignment, index);
    case Kind::And:
      return eval_bool(f.lhs(), assignment, index) &&
             eval_bool(f.rhs(), assignment, index);
    default:
      return (assignment >> index.at(f)) & 1;
  }
}

}  // namespace

bool is_tautology(const Formula& f) {
  std::vector<Formula> vars;
  std::unordered_map<Formula, int, FormulaHash> index;
  collect_vars(f, vars, index);
  if (vars.size() > 28)
    throw Error("tautology check over " + std::to_string(vars.size()) +
                " variables is too large");
  const std::uint64_t rows = std::uint64_t{1} << vars.size();
  for (std::uint64_t a = 0; a < rows; ++a)
    if (!eval_bool(f, a, index)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Derivation checking
// ---------------------------------------------------------------------------

bool TheoremDB::contains(std::string_view name) const {
  return find(name) != nullptr;
}

const Formula* TheoremDB::find(std::string_view name) const {
  for (const auto& [n, f] : entries_)
    if (n == name) return &f;
  return nullptr;
}

void TheoremDB::add(std::string name, Formula f) {
  if (contains(name))
    throw Error("theorem \"" + name + "\" is already registered");
  entries_.emplace_back(std::move(name), std::move(f));
}

std::optional<ProofFailure> check_derivation(const Derivation& d,
                                             const TheoremDB& db) {
  auto fail = [](int line, const char* reason, std::string detail) {
    return ProofFailure{line, reason, std::move(detail)};
  };

  for (std::size_t k = 0; k < d.lines.size(); ++k) {
    const int lineno = static_cast<int>(k) + 1;
    const auto& [formula, just] = d.lines[k];

    auto check_index = [&](int idx) -> std::optional<ProofFailure> {
      if (idx < 1)
        return fail(lineno, "bad-index",
                    "line index " + std::to_string(idx) + " is not positive");
      if (idx >= lineno)
        return fail(lineno, "forward-reference",
                    "line index " + std::to_string(idx) +
                        " does not point at an earlier line");
      return std::nullopt;
    };

    switch (just.kind) {
      case Just::Kind::Taut:
        if (!is_tautology(formula))
          return fail(lineno, "not-a-tautology", render(formula));
        break;
      case Just::Kind::Axiom: {
        const AxiomSchema* s = find_axiom_schema(just.name);
        if (!s) return fail(lineno, "unknown-schema", just.name);
        if (formula != s->templ)
          return fail(lineno, "schema-mismatch",
                      "expected " + render(s->templ));
        break;
      }
      case Just::Kind::AxiomInst: {
        const AxiomSchema* s = find_axiom_schema(just.name);
        if (!s) return fail(lineno, "unknown-schema", just.name);
        Formula expected;
        try {
          expected = instantiate(*s, just.map);
        } catch (const Error& e) {
          return fail(lineno, "schema-mismatch", e.what());
        }
        if (formula != expected)
          return fail(lineno, "schema-mismatch", "expected " + render(expected));
        break;
      }
      case Just::Kind::Mp: {
        if (auto f = check_index(just.i)) return f;
        if (auto f = check_index(just.j)) return f;
        Formula expected_imp =
            Formula::imp(d.lines[just.i - 1].formula, formula);
        if (d.lines[just.j - 1].formula != expected_imp)
          return fail(lineno, "bad-mp-shape",
                      "line " + std::to_string(just.j) + " is not (line " +
                          std::to_string(just.i) + " -> this line)");
        break;
      }
      case Just::Kind::NecU: {
        if (auto f = check_index(just.i)) return f;
        if (formula != Formula::univ(d.lines[just.i - 1].formula))
          return fail(lineno, "necu-mismatch",
                      "expected U of line " + std::to_string(just.i));
        break;
      }
      case Just::Kind::Sub: {
        if (auto f = check_index(just.i)) return f;
        Formula expected =
            substitute(d.lines[just.i - 1].formula, just.letter, just.with);
        if (formula != expected)
          return fail(lineno, "sub-mismatch", "expected " + render(expected));
        break;
      }
      case Just::Kind::Theorem: {
        const Formula* t = db.find(just.name);
        if (!t) return fail(lineno, "unknown-theorem", just.name);
        if (formula != *t)
          return fail(lineno, "theorem-mismatch", "expected " + render(*t));
        break;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Derivation files
// ---------------------------------------------------------------------------

namespace {

Formula parse_embedded_formula(const std::string& text,
                               const std::string& where) {
  try {
    return parse_formula(text);
  } catch (const SyntaxError& e) {
    throw FormatError("bad formula in " + where + ": " + e.what());
  }
}

}  // namespace

Derivation parse_derivation(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("derivation file is not valid JSON: ") +
                      e.what());
  }
  if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string() ||
      !doc.contains("lines") || !doc["lines"].is_array())
    throw FormatError(
        "derivation file must be an object with \"name\" and \"lines\"");

  Derivation d;
  d.name = doc["name"].get<std::string>();
  int lineno = 0;
  for (const auto& entry : doc["lines"]) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno);
    if (!entry.is_object() || !entry.contains("formula") ||
        !entry["formula"].is_string() || !entry.contains("just") ||
        !entry["just"].is_object())
      throw FormatError(where + " must have \"formula\" and \"just\"");

    DerivationLine line;
    line.formula =
        parse_embedded_formula(entry["formula"].get<std::string>(), where);

    const auto& j = entry["just"];
    if (!j.contains("kind") || !j["kind"].is_string())
      throw FormatError(where + ": justification needs a \"kind\"");
    const std::string kind = j["kind"].get<std::string>();

    auto need_int = [&](const char* field) {
      if (!j.contains(field) || !j[field].is_number_integer())
        throw FormatError(where + ": \"" + kind + "\" needs integer \"" +
                          field + "\"");
      return j[field].get<int>();
    };
    auto need_str = [&](const char* field) {
      if (!j.contains(field) || !j[field].is_string())
        throw FormatError(where + ": \"" + kind + "\" needs string \"" +
                          field + "\"");
      return j[field].get<std::string>();
    };

    if (kind == "taut") {
      line.just.kind = Just::Kind::Taut;
    } else if (kind == "axiom") {
      line.just.kind = Just::Kind::Axiom;
      line.just.name = need_str("name");
    } else if (kind == "axiom_inst") {
      line.just.kind = Just::Kind::AxiomInst;
      line.just.name = need_str("name");
      if (!j.contains("map") || !j["map"].is_object())
        throw FormatError(where + ": \"axiom_inst\" needs a \"map\" object");
      for (auto it = j["map"].begin(); it != j["map"].end(); ++it) {
        if (!it.value().is_string())
          throw FormatError(where + ": map values must be formula strings");
        line.just.map.emplace(
            it.key(), parse_embedded_formula(it.value().get<std::string>(),
                                             where + " map"));
      }
    } else if (kind == "mp") {
      line.just.kind = Just::Kind::Mp;
      line.just.i = need_int("i");
      line.just.j = need_int("j");
    } else if (kind == "necu") {
      line.just.kind = Just::Kind::NecU;
      line.just.i = need_int("i");
    } else if (kind == "sub") {
      line.just.kind = Just::Kind::Sub;
      line.just.i = need_int("i");
      line.just.letter = need_str("letter");
      line.just.with =
          parse_embedded_formula(need_str("with"), where + " \"with\"");
    } else if (kind == "theorem") {
      line.just.kind = Just::Kind::Theorem;
      line.just.name = need_str("name");
    } else {
      throw FormatError(where + ": unknown justification kind \"" + kind +
                        "\"");
    }
    d.lines.push_back(std::move(line));
  }
  return d;
}

Derivation load_derivation_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open derivation file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_derivation(buf.str());
}

std::vector<std::string> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open manifest \"" + path + "\"");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    std::size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace khm
