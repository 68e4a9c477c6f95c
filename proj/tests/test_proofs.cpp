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

#include <random>

#include "doctest.h"
#include "khm/checker.hpp"
#include "khm/errors.hpp"
#include "khm/proofs.hpp"
#include "support.hpp"

using namespace khm;
using namespace khm::test;

namespace {

Derivation corpus_derivation(const std::string& file) {
  return load_derivation_file(corpus_path(file));
}

TheoremDB checked_corpus() {
  TheoremDB db;
  for (const auto& file : read_manifest(corpus_path("manifest.txt"))) {
    Derivation d = corpus_derivation(file);
    auto failure = check_derivation(d, db);
    if (failure)
      FAIL(("corpus derivation " + d.name + " failed at line " +
            std::to_string(failure->line) + ": " + failure->reason));
    db.add(d.name, d.lines.back().formula);
  }
  return db;
}

}  // namespace

TEST_CASE("schema templates survive a print/parse round trip") {
  CHECK(axiom_schemas().size() == 8);
  for (const auto& schema : axiom_schemas()) {
    CHECK(parse_formula(render(schema.templ)) == schema.templ);
  }
  CHECK(find_axiom_schema("UKhm") != nullptr);
  CHECK(find_axiom_schema("TAUT") == nullptr);  // handled by taut lines
  CHECK(find_axiom_schema("nope") == nullptr);
}

TEST_CASE("every schema is valid on random models") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 60; ++i) {
    Model m = random_small_model(rng, 5, 3);
    for (const auto& schema : axiom_schemas()) {
      CAPTURE(schema.name);
      CHECK(valid_on(m, schema.templ));
    }
  }
}

TEST_CASE("instantiate performs simultaneous substitution") {
  const AxiomSchema* emp = find_axiom_schema("EMPKhm");
  REQUIRE(emp);
  CHECK(instantiate(*emp, {{"p", Formula::top()}, {"q", Formula::top()}}) ==
        parse_formula("U(true -> true) -> Khm(true, false, true)"));

  const AxiomSchema* tu = find_axiom_schema("TU");
  REQUIRE(tu);
  CHECK(instantiate(*tu, {{"p", parse_formula("Khm(p,o,q)")}}) ==
        parse_formula("U(Khm(p,o,q)) -> Khm(p,o,q)"));

  const AxiomSchema* ukhm = find_axiom_schema("UKhm");
  REQUIRE(ukhm);
  CHECK(instantiate(*ukhm, {}) == ukhm->templ);
  std::map<std::string, Formula> identity;
  for (const auto& l : letters(ukhm->templ)) identity[l] = Formula::atom(l);
  CHECK(instantiate(*ukhm, identity) == ukhm->templ);

  CHECK_THROWS_AS(instantiate(*tu, {{"z", Formula::top()}}), Error);

  // overlapping maps stay simultaneous: swapping p and q
  const AxiomSchema* distu = find_axiom_schema("DISTU");
  REQUIRE(distu);
  CHECK(instantiate(*distu,
                    {{"p", Formula::atom("q")}, {"q", Formula::atom("p")}}) ==
        parse_formula("U(q) & U(q -> p) -> U(p)"));
}

TEST_CASE("instantiate equals a fresh-letter chain of single substitutions") {
  std::mt19937_64 rng(4321);
  for (int round = 0; round < 25; ++round) {
    for (const auto& schema : axiom_schemas()) {
      std::map<std::string, Formula> map;
      for (const auto& l : letters(schema.templ))
        map[l] = random_formula(rng, 2, {"p", "q", "o"});

      // route the map through fresh letters so the sequential chain cannot
      // capture anything
      Formula staged = schema.templ;
      int fresh = 0;
      std::vector<std::pair<std::string, Formula>> second;
      for (const auto& [letter, target] : map) {
        std::string tmp = "fresh" + std::to_string(fresh++);
        staged = substitute(staged, letter, Formula::atom(tmp));
        second.emplace_back(tmp, target);
      }
      for (const auto& [tmp, target] : second)
        staged = substitute(staged, tmp, target);

      CHECK(staged == instantiate(schema, map));
    }
  }
}

TEST_CASE("is_tautology on the propositional skeleton") {
  CHECK(is_tautology(parse_formula("Khm(p,o,q) -> !!Khm(p,o,q)")));
  CHECK(!is_tautology(parse_formula("p -> q")));
  CHECK(is_tautology(parse_formula("p & q -> p")));
  CHECK(is_tautology(parse_formula("p | !p")));
  CHECK(is_tautology(parse_formula("U(p) | !U(p)")));
  CHECK(!is_tautology(parse_formula("p -> U(p)")));
  CHECK(is_tautology(parse_formula("true")));
  CHECK(!is_tautology(parse_formula("false")));
  CHECK(is_tautology(parse_formula("!p <-> (p -> false)")));
  // distinct Khm instances abstract to distinct variables
  CHECK(!is_tautology(parse_formula("Khm(p,o,q) -> Khm(p,o,r)")));
}

TEST_CASE("check_derivation validates every justification kind") {
  TheoremDB db;
  db.add("given", parse_formula("p -> p"));

  Derivation d;
  d.name = "demo";
  d.lines.push_back({parse_formula("U(p) -> p"), {Just::Kind::Axiom, "TU"}});
  d.lines.push_back(
      {parse_formula("U(q & q) -> q & q"),
       [] {
         Just j;
         j.kind = Just::Kind::Sub;
         j.i = 1;
         j.letter = "p";
         j.with = parse_formula("q & q");
         return j;
       }()});
  d.lines.push_back({parse_formula("(U(p) -> p) -> ((U(q & q) -> q & q) -> (U(p) -> p))"),
                     {Just::Kind::Taut}});
  Just mp;
  mp.kind = Just::Kind::Mp;
  mp.i = 1;
  mp.j = 3;
  d.lines.push_back(
      {parse_formula("(U(q & q) -> q & q) -> (U(p) -> p)"), mp});
  Just necu;
  necu.kind = Just::Kind::NecU;
  necu.i = 4;
  d.lines.push_back(
      {Formula::univ(d.lines[3].formula), necu});
  d.lines.push_back({parse_formula("p -> p"), {Just::Kind::Theorem, "given"}});

  CHECK(!check_derivation(d, db).has_value());
}

TEST_CASE("check_derivation reports the first failing line and reason") {
  TheoremDB db;
  auto expect_fail = [&](Derivation d, int line, const std::string& reason) {
    auto failure = check_derivation(d, db);
    REQUIRE(failure.has_value());
    CHECK(failure->line == line);
    CHECK(failure->reason == reason);
  };

  {
    Derivation d{"bad", {{parse_formula("p -> q"), {Just::Kind::Taut}}}};
    expect_fail(d, 1, "not-a-tautology");
  }
  {
    Derivation d{"bad", {{parse_formula("U(p) -> q"), {Just::Kind::Axiom, "TU"}}}};
    expect_fail(d, 1, "schema-mismatch");
  }
  {
    Derivation d{"bad", {{parse_formula("p"), {Just::Kind::Axiom, "XYZ"}}}};
    expect_fail(d, 1, "unknown-schema");
  }
  {
    Derivation d{"bad", {{parse_formula("p"), {Just::Kind::Theorem, "ghost"}}}};
    expect_fail(d, 1, "unknown-theorem");
  }
  {
    db.add("known", parse_formula("p -> p"));
    Derivation d{"bad", {{parse_formula("q -> q"), {Just::Kind::Theorem, "known"}}}};
    expect_fail(d, 1, "theorem-mismatch");
  }
  {
    Derivation d{"bad", {}};
    d.lines.push_back({parse_formula("p -> p"), {Just::Kind::Taut}});
    Just mp;
    mp.kind = Just::Kind::Mp;
    mp.i = 1;
    mp.j = 2;  // self reference
    d.lines.push_back({parse_formula("p"), mp});
    expect_fail(d, 2, "forward-reference");
  }
  {
    Derivation d{"bad", {}};
    d.lines.push_back({parse_formula("p -> p"), {Just::Kind::Taut}});
    Just necu;
    necu.kind = Just::Kind::NecU;
    necu.i = 0;
    d.lines.push_back({parse_formula("U(p -> p)"), necu});
    expect_fail(d, 2, "bad-index");
  }
  {
    Derivation d{"bad", {}};
    d.lines.push_back({parse_formula("p -> p"), {Just::Kind::Taut}});
    d.lines.push_back({parse_formula("q -> q"), {Just::Kind::Taut}});
    Just mp;
    mp.kind = Just::Kind::Mp;
    mp.i = 1;
    mp.j = 2;
    d.lines.push_back({parse_formula("p"), mp});
    expect_fail(d, 3, "bad-mp-shape");
  }
}

TEST_CASE("the shipped corpus checks in manifest order") {
  TheoremDB db = checked_corpus();
  for (const char* name :
       {"REU_instance", "UNIV", "4U", "5U", "ULKhm", "UMKhm", "URKhm"})
    CHECK(db.contains(name));

  CHECK(*db.find("UNIV") == parse_formula("U(!p) -> Khm(p, false, false)"));
  CHECK(*db.find("4U") ==
        parse_formula("Khm(!p, true, false) -> U(Khm(!p, true, false))"));
  CHECK(*db.find("5U") ==
        parse_formula("!Khm(!p, true, false) -> U(!Khm(!p, true, false))"));
  CHECK(*db.find("ULKhm") ==
        parse_formula("U(p' -> p) & Khm(p, o, q) -> Khm(p', o, q)"));
  CHECK(*db.find("UMKhm") ==
        parse_formula("U(o -> o') & Khm(p, o, q) -> Khm(p, o', q)"));
  CHECK(*db.find("URKhm") ==
        parse_formula("U(q -> q') & Khm(p, o, q) -> Khm(p, o, q')"));
  CHECK(*db.find("REU_instance") ==
        parse_formula("U(!p) <-> U(p -> false)"));
}

TEST_CASE("corpus derivations reject every index mutation") {
  TheoremDB db;
  for (const auto& file : read_manifest(corpus_path("manifest.txt"))) {
    Derivation d = corpus_derivation(file);
    int mutants = mutate_indices(d, db, [&](int line, int value) {
      FAIL(("mutant survived in " + d.name + " line " + std::to_string(line) +
            " -> " + std::to_string(value)));
    });
    CHECK(mutants > 0);
    REQUIRE(!check_derivation(d, db).has_value());
    db.add(d.name, d.lines.back().formula);
  }
}

TEST_CASE("registered theorems are semantically valid") {
  TheoremDB db = checked_corpus();
  std::mt19937_64 rng(20260101);
  for (int i = 0; i < 200; ++i) {
    Model m = random_small_model(rng, 5, 3);
    for (const auto& [name, formula] : db.entries()) {
      CAPTURE(name);
      CHECK(valid_on(m, formula));
    }
  }
}

TEST_CASE("derivation file parsing errors are format errors") {
  CHECK_THROWS_AS(parse_derivation("{"), FormatError);
  CHECK_THROWS_AS(parse_derivation(R"({"name": "x"})"), FormatError);
  CHECK_THROWS_AS(
      parse_derivation(
          R"({"name":"x","lines":[{"formula":"p &","just":{"kind":"taut"}}]})"),
      FormatError);
  CHECK_THROWS_AS(
      parse_derivation(
          R"({"name":"x","lines":[{"formula":"p","just":{"kind":"wat"}}]})"),
      FormatError);
  CHECK_THROWS_AS(
      parse_derivation(
          R"({"name":"x","lines":[{"formula":"p","just":{"kind":"mp","i":1}}]})"),
      FormatError);
  CHECK_THROWS_AS(load_derivation_file("/nonexistent.khd.json"), FormatError);

  TheoremDB db;
  db.add("t", Formula::top());
  CHECK_THROWS_AS(db.add("t", Formula::top()), Error);
}
