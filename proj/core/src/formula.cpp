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

#include "khm/formula.hpp"

#include <array>
#include <cassert>
#include <sstream>
#include <utility>
#include <vector>

#include "khm/errors.hpp"

namespace khm {

struct Formula::Node {
  Kind kind;
  std::string name;  // Atom
  std::vector<Formula> children;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t node_hash(Kind kind, const std::string& name,
                      const Formula* children, std::size_t arity) {
  std::size_t h = static_cast<std::size_t>(kind) * 0x100000001b3ULL + 1469598103u;
  h = mix(h, std::hash<std::string>{}(name));
  for (std::size_t i = 0; i < arity; ++i) h = mix(h, children[i].hash());
  return h;
}

const Formula& top_singleton() {
  static const Formula f = Formula::top();
  return f;
}

}  // namespace

Formula::Formula() : node_(top_singleton().node_) {}

Formula Formula::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->name = std::move(name);
  n->hash = node_hash(Kind::Atom, n->name, nullptr, 0);
  return Formula(std::move(n));
}

Formula Formula::top() { return make(Kind::Top, {}); }
Formula Formula::bot() { return make(Kind::Bot, {}); }
Formula Formula::neg(Formula f) { return make(Kind::Neg, {std::move(f)}); }
Formula Formula::conj(Formula lhs, Formula rhs) {
  return make(Kind::And, {std::move(lhs), std::move(rhs)});
}
Formula Formula::khm(Formula pre, Formula mid, Formula goal) {
  return make(Kind::Khm, {std::move(pre), std::move(mid), std::move(goal)});
}
Formula Formula::univ(Formula f) { return make(Kind::Univ, {std::move(f)}); }

Formula Formula::disj(Formula lhs, Formula rhs) {
  return neg(conj(neg(std::move(lhs)), neg(std::move(rhs))));
}
Formula Formula::imp(Formula lhs, Formula rhs) {
  return neg(conj(std::move(lhs), neg(std::move(rhs))));
}
Formula Formula::iff(Formula lhs, Formula rhs) {
  return conj(imp(lhs, rhs), imp(rhs, lhs));
}
Formula Formula::kh(Formula pre, Formula goal) {
  return khm(std::move(pre), top(), std::move(goal));
}

Formula Formula::make(Kind kind, std::initializer_list<Formula> children) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children.assign(children.begin(), children.end());
  n->hash = node_hash(kind, n->name, n->children.data(), n->children.size());
  return Formula(std::move(n));
}

Kind Formula::kind() const { return node_->kind; }

const std::string& Formula::name() const {
  assert(node_->kind == Kind::Atom);
  return node_->name;
}

std::size_t Formula::arity() const { return node_->children.size(); }

const Formula& Formula::child(std::size_t i) const {
  assert(i < node_->children.size());
  return node_->children[i];
}

std::size_t Formula::hash() const { return node_->hash; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash) return false;
  if (node_->kind != other.node_->kind) return false;
  if (node_->kind == Kind::Atom) return node_->name == other.node_->name;
  for (std::size_t i = 0; i < node_->children.size(); ++i) {
    if (!(node_->children[i] == other.node_->children[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lexer and parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  LParen, RParen, Comma, Bang, Amp, Pipe, Arrow, Iff,
  True, False, U, Kh, Khm, Ident, End
};

struct Token {
  Tok type;
  std::string text;
  std::size_t offset;
};

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_ident_cont(char c) {
  return is_lower(c) || is_upper(c) || (c >= '0' && c <= '9') || c == '_' ||
         c == '\'';
}

[[noreturn]] void fail(std::size_t offset, const std::string& found,
                       std::vector<std::string> expected) {
  std::ostringstream os;
  os << "syntax error at byte " << offset << ": unexpected " << found;
  if (!expected.empty()) {
    os << ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) os << (i + 1 == expected.size() ? " or " : ", ");
      os << expected[i];
    }
  }
  throw SyntaxError(os.str(), offset, std::move(expected));
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; continue;
      case ',': out.push_back({Tok::Comma, ",", start}); ++i; continue;
      case '!': out.push_back({Tok::Bang, "!", start}); ++i; continue;
      case '&': out.push_back({Tok::Amp, "&", start}); ++i; continue;
      case '|': out.push_back({Tok::Pipe, "|", start}); ++i; continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", start});
          i += 2;
          continue;
        }
        fail(start, std::string("'") + c + "'", {"'->'"});
      case '<':
        if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
          out.push_back({Tok::Iff, "<->", start});
          i += 3;
          continue;
        }
        fail(start, std::string("'") + c + "'", {"'<->'"});
      default: break;
    }
    if (is_lower(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && is_ident_cont(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      i = j;
      if (word == "true") out.push_back({Tok::True, word, start});
      else if (word == "false") out.push_back({Tok::False, word, start});
      else out.push_back({Tok::Ident, word, start});
      continue;
    }
    if (is_upper(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && is_ident_cont(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      if (word == "U") out.push_back({Tok::U, word, start});
      else if (word == "Kh") out.push_back({Tok::Kh, word, start});
      else if (word == "Khm") out.push_back({Tok::Khm, word, start});
      else fail(start, "'" + word + "'", {"'U'", "'Kh'", "'Khm'"});
      i = j;
      continue;
    }
    fail(start, std::string("character '") + c + "'",
         {"'('", "'!'", "identifier", "'true'", "'false'", "'U'", "'Kh'",
          "'Khm'"});
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula run() {
    Formula f = parse_iff();
    if (peek().type != Tok::End) {
      fail(peek().offset, describe(peek()), {"end of input"});
    }
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  bool accept(Tok t) {
    if (peek().type == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(Tok t, const char* what) {
    if (!accept(t)) fail(peek().offset, describe(peek()), {what});
  }
  static std::string describe(const Token& t) {
    if (t.type == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept(Tok::Iff)) f = Formula::iff(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept(Tok::Arrow)) return Formula::imp(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Pipe)) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept(Tok::Amp)) f = Formula::conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    if (accept(Tok::Bang)) return Formula::neg(parse_unary());
    if (accept(Tok::U)) {
      expect(Tok::LParen, "'('");
      Formula f = parse_iff();
      expect(Tok::RParen, "')'");
      return Formula::univ(f);
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::True: advance(); return Formula::top();
      case Tok::False: advance(); return Formula::bot();
      case Tok::Ident: advance(); return Formula::atom(t.text);
      case Tok::Khm: {
        advance();
        expect(Tok::LParen, "'('");
        Formula a = parse_iff();
        expect(Tok::Comma, "','");
        Formula b = parse_iff();
        expect(Tok::Comma, "','");
        Formula c = parse_iff();
        expect(Tok::RParen, "')'");
        return Formula::khm(a, b, c);
      }
      case Tok::Kh: {
        advance();
        expect(Tok::LParen, "'('");
        Formula a = parse_iff();
        expect(Tok::Comma, "','");
        Formula b = parse_iff();
        expect(Tok::RParen, "')'");
        return Formula::kh(a, b);
      }
      case Tok::LParen: {
        advance();
        Formula f = parse_iff();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        fail(t.offset, describe(t),
             {"'('", "'!'", "identifier", "'true'", "'false'", "'U'", "'Kh'",
              "'Khm'"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  return Parser(lex(text)).run();
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// paren_and: the surrounding context cannot hold a bare conjunction
// (negation operand, right-hand side of "&").
void render_rec(const Formula& f, std::string& out, bool paren_and) {
  switch (f.kind()) {
    case Kind::Atom:
      out += f.name();
      return;
    case Kind::Top:
      out += "true";
      return;
    case Kind::Bot:
      out += "false";
      return;
    case Kind::Neg:
      out += '!';
      render_rec(f.operand(), out, true);
      return;
    case Kind::Univ:
      out += "U(";
      render_rec(f.operand(), out, false);
      out += ')';
      return;
    case Kind::Khm:
      if (f.mid().is(Kind::Top)) {
        out += "Kh(";
        render_rec(f.pre(), out, false);
        out += ", ";
        render_rec(f.goal(), out, false);
        out += ')';
      } else {
        out += "Khm(";
        render_rec(f.pre(), out, false);
        out += ", ";
        render_rec(f.mid(), out, false);
        out += ", ";
        render_rec(f.goal(), out, false);
        out += ')';
      }
      return;
    case Kind::And: {
      if (paren_and) out += '(';
      render_rec(f.lhs(), out, false);
      out += " & ";
      render_rec(f.rhs(), out, true);
      if (paren_and) out += ')';
      return;
    }
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_rec(f, out, false);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution and letters
// ---------------------------------------------------------------------------

Formula substitute(const Formula& f, std::string_view letter,
                   const Formula& with) {
  switch (f.kind()) {
    case Kind::Atom:
      return f.name() == letter ? with : f;
    case Kind::Top:
    case Kind::Bot:
      return f;
    case Kind::Neg: {
      Formula c = substitute(f.operand(), letter, with);
      return c.identical(f.operand()) ? f : Formula::neg(std::move(c));
    }
    case Kind::Univ: {
      Formula c = substitute(f.operand(), letter, with);
      return c.identical(f.operand()) ? f : Formula::univ(std::move(c));
    }
    case Kind::And: {
      Formula l = substitute(f.lhs(), letter, with);
      Formula r = substitute(f.rhs(), letter, with);
      if (l.identical(f.lhs()) && r.identical(f.rhs())) return f;
      return Formula::conj(std::move(l), std::move(r));
    }
    case Kind::Khm: {
      Formula a = substitute(f.pre(), letter, with);
      Formula b = substitute(f.mid(), letter, with);
      Formula c = substitute(f.goal(), letter, with);
      if (a.identical(f.pre()) && b.identical(f.mid()) &&
          c.identical(f.goal()))
        return f;
      return Formula::khm(std::move(a), std::move(b), std::move(c));
    }
  }
  return f;  // unreachable
}

namespace {
void collect_letters(const Formula& f, std::set<std::string>& out) {
  if (f.is(Kind::Atom)) {
    out.insert(f.name());
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) collect_letters(f.child(i), out);
}
}  // namespace

std::set<std::string> letters(const Formula& f) {
  std::set<std::string> out;
  collect_letters(f, out);
  return out;
}

}  // namespace khm
