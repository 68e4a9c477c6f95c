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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace khm {

enum class Kind : std::uint8_t { Atom, Top, Bot, Neg, And, Khm, Univ };

// Immutable formula over atoms, constants true/false, negation, conjunction,
// the ternary know-how modality Khm(pre, mid, goal) and the universal
// modality U. Or, implies, iff and the binary Kh are surface sugar only:
//   a | b    becomes  !(!a & !b)
//   a -> b   becomes  !(a & !b)
//   a <-> b  becomes  !(a & !b) & !(b & !a)
//   Kh(a, b) becomes  Khm(a, true, b)
// U stays a primitive node. Copies share structure and are cheap.
class Formula {
 public:
  // Default-constructed formula is `true`.
  Formula();

  static Formula atom(std::string name);
  static Formula top();
  static Formula bot();
  static Formula neg(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula khm(Formula pre, Formula mid, Formula goal);
  static Formula univ(Formula f);

  // Sugared constructors; they build the desugared shape directly.
  static Formula disj(Formula lhs, Formula rhs);
  static Formula imp(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula kh(Formula pre, Formula goal);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  const std::string& name() const;  // Atom only
  std::size_t arity() const;
  const Formula& child(std::size_t i) const;

  const Formula& operand() const { return child(0); }  // Neg, Univ
  const Formula& lhs() const { return child(0); }      // And
  const Formula& rhs() const { return child(1); }      // And
  const Formula& pre() const { return child(0); }      // Khm
  const Formula& mid() const { return child(1); }      // Khm
  const Formula& goal() const { return child(2); }     // Khm

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }
  std::size_t hash() const;

  // True when both handles point at the same node (stronger than ==).
  bool identical(const Formula& other) const { return node_ == other.node_; }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, std::initializer_list<Formula> children);
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Parses the ASCII surface syntax:
//   formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)? ;
//   or := and ("|" and)* ; and := unary ("&" unary)* ;
//   unary := "!" unary | "U" "(" formula ")" | primary ;
//   primary := "true" | "false" | IDENT
//            | "Khm" "(" formula "," formula "," formula ")"
//            | "Kh" "(" formula "," formula ")" | "(" formula ")" ;
//   IDENT := [a-z][A-Za-z0-9_']*   (true/false/U/Kh/Khm reserved)
// "->" is right-associative, "<->" and the list operators fold left.
// Throws SyntaxError on malformed input.
Formula parse_formula(std::string_view text);

// Prints f with minimal parentheses such that parse_formula(render(f)) == f.
// Khm(a, true, b) is printed back as Kh(a, b); destroyed sugar (|, ->, <->)
// is not reconstructed.
std::string render(const Formula& f);

// Replaces every occurrence of the atom `letter` by `with`.
Formula substitute(const Formula& f, std::string_view letter,
                   const Formula& with);

// Set of atom names occurring in f.
std::set<std::string> letters(const Formula& f);

}  // namespace khm
