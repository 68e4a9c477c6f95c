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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "khm/formula.hpp"

namespace khm {

// One axiom schema of the deductive system, stored as the literal template
// formula over its schema letters (p, q, r, o, p', o', q').
struct AxiomSchema {
  std::string name;
  Formula templ;
};

// The eight non-tautology axiom schemas:
//   DISTU    U(p) & U(p -> q) -> U(q)
//   TU       U(p) -> p
//   4KhmU    Khm(p, o, q) -> U(Khm(p, o, q))
//   5KhmU    !Khm(p, o, q) -> U(!Khm(p, o, q))
//   EMPKhm   U(p -> q) -> Khm(p, false, q)
//   COMPKhm  Khm(p, o, r) & Khm(r, o, q) & U(r -> o) -> Khm(p, o, q)
//   ONEKhm   Khm(p, o, q) & !Khm(p, false, q) -> Khm(p, false, o)
//   UKhm     U(p' -> p) & U(o -> o') & U(q -> q') & Khm(p, o, q)
//              -> Khm(p', o', q')
const std::vector<AxiomSchema>& axiom_schemas();

// nullptr when the name is not a schema.
const AxiomSchema* find_axiom_schema(std::string_view name);

// Simultaneous substitution of the map into the schema template. The map's
// domain must be a subset of the template's letters; throws UnknownSchema
// style errors via khm::Error otherwise.
Formula instantiate(const AxiomSchema& schema,
                    const std::map<std::string, Formula>& map);

// Decides propositional tautology by truth table, treating every maximal
// non-Boolean subformula (atom, Khm, U) as a propositional variable and
// true/false as constants. Refuses more than 28 distinct variables.
bool is_tautology(const Formula& f);

// Line justifications of a derivation. Indices are 1-based and must point at
// earlier lines.
struct Just {
  enum class Kind { Taut, Axiom, AxiomInst, Mp, NecU, Sub, Theorem };
  Kind kind = Kind::Taut;
  std::string name;                      // axiom / axiom_inst / theorem
  std::map<std::string, Formula> map;    // axiom_inst
  int i = 0;  // mp: the antecedent line; necu/sub: the source line
  int j = 0;  // mp: the implication line
  std::string letter;  // sub
  Formula with;        // sub
};

struct DerivationLine {
  Formula formula;
  Just just;
};

struct Derivation {
  std::string name;
  std::vector<DerivationLine> lines;
};

// Formulas registered by previously checked derivations.
class TheoremDB {
 public:
  bool contains(std::string_view name) const;
  const Formula* find(std::string_view name) const;
  // Throws Error when the name is already registered.
  void add(std::string name, Formula f);
  const std::vector<std::pair<std::string, Formula>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, Formula>> entries_;
};

struct ProofFailure {
  int line = 0;  // 1-based
  std::string reason;  // machine readable: bad-mp-shape, not-a-tautology, ...
  std::string detail;
};

// Validates a derivation line by line:
//   taut        the formula is a propositional tautology
//   axiom       the formula equals the raw schema template
//   axiom_inst  the formula equals instantiate(name, map)
//   mp i j      line j is (line i -> this formula)
//   necu i      this formula is U(line i)
//   sub i x f   this formula is line i with atom x replaced by f
//   theorem     the formula equals the named database entry
// Returns nullopt on success, otherwise the first failing line with a
// machine-readable reason (bad-mp-shape, not-a-tautology, schema-mismatch,
// unknown-schema, unknown-theorem, theorem-mismatch, necu-mismatch,
// sub-mismatch, forward-reference, bad-index). Equality is structural, on
// the desugared formulas.
std::optional<ProofFailure> check_derivation(const Derivation& d,
                                             const TheoremDB& db);

// Reads the derivation JSON format:
//   { "name": "...",
//     "lines": [ { "formula": "<surface syntax>",
//                  "just": { "kind": "taut" | "axiom" | "axiom_inst" | "mp"
//                                  | "necu" | "sub" | "theorem",
//                            ... kind-specific fields ... } }, ... ] }
// Kind-specific fields: axiom/theorem take "name"; axiom_inst takes "name"
// and "map" (letter -> formula text); mp takes "i" and "j"; necu takes "i";
// sub takes "i", "letter" and "with". Throws FormatError.
Derivation parse_derivation(std::string_view json_text);
Derivation load_derivation_file(const std::string& path);

// Reads a corpus manifest: one file name per line (relative to the manifest's
// directory), blank lines and lines starting with '#' skipped.
std::vector<std::string> read_manifest(const std::string& path);

}  // namespace khm
