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

// End-to-end acceptance run. Each criterion prints one PASS/FAIL line; the
// process exits nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "khm/checker.hpp"
#include "khm/errors.hpp"
#include "khm/model.hpp"
#include "khm/proofs.hpp"
#include "support.hpp"

using namespace khm;
using namespace khm::test;
using Clock = std::chrono::steady_clock;

namespace {

struct Harness {
  int failed = 0;
  int index = 0;

  void criterion(const std::string& what, const std::function<void()>& body) {
    ++index;
    try {
      body();
      std::cout << "PASS  " << index << "  " << what << "\n";
    } catch (const std::exception& e) {
      ++failed;
      std::cout << "FAIL  " << index << "  " << what << " -- " << e.what()
                << "\n";
    }
  }
};

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string out_path = "acceptance_stdout.txt";
  std::string cmd = std::string(KHM_CLI) + " " + args + " >" + out_path +
                    " 2>acceptance_stderr.txt";
  int status = std::system(cmd.c_str());
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, buf.str()};
}

}  // namespace

int main() {
  Harness h;

  h.criterion(
      "m1: Kh(p,q) holds with witness ru, minimal length 2, under 0.1 s",
      [] {
        Model m1 = load_fixture("m1.json");
        auto start = Clock::now();
        Evaluator ev(m1);
        Formula f = parse_formula("Kh(p,q)");
        const StateSet& ext = ev.extension(f);
        double elapsed = seconds_since(start);
        require(ext == m1.full_set(), "Kh(p,q) must hold at every state");
        auto w = ev.witness(f);
        require(w.has_value() && w->str() == "ru", "witness must be ru");
        require(w->size() == 2, "witness must have length 2");
        StateSet pre = ev.extension(parse_formula("p"));
        StateSet goal = ev.extension(parse_formula("q"));
        require(!brute_force(m1, pre, m1.full_set(), goal, 1),
                "no length-1 plan may exist");
        require(elapsed < 0.1, "check took " + std::to_string(elapsed) + " s");

        auto cli = run_cli("check " + fixture_path("m1.json") +
                           " \"Kh(p,q)\" --json");
        require(cli.code == 0, "cli check must exit 0");
        auto doc = nlohmann::json::parse(cli.out);
        require(doc["valid"] == true, "cli must report valid");
        require(doc["witnesses"]["Kh(p, q)"] == "ru",
                "cli witness must be ru");
      });

  h.criterion(
      "m2: ab runs to {s4} at s1 but is not strongly executable there", [] {
        Model m2 = load_fixture("m2.json");
        require(strongly_executable(m2, "s1", plan_of({"a", "b"})) == false,
                "ab must not be strongly executable at s1");
        require(run_plan(m2, "s1", plan_of({"a", "b"})) ==
                    std::set<std::string>{"s4"},
                "run of ab from s1 must be exactly {s4}");
      });

  h.criterion(
      "m3: Khm(p,false,o) via a, Khm(p,o,q) via ab, Khm(p,false,q) false",
      [] {
        Model m3 = load_fixture("m3.json");
        Evaluator ev(m3);
        StateSet p = ev.extension(parse_formula("p"));
        StateSet o = ev.extension(parse_formula("o"));
        StateSet q = ev.extension(parse_formula("q"));

        require(ev.extension(parse_formula("Khm(p, false, o)")) ==
                    m3.full_set(),
                "Khm(p,false,o) must hold");
        auto plan_a = synthesize(m3, p, m3.empty_set(), o);
        require(plan_a && plan_a->str() == "a", "witness must be a");

        require(ev.extension(parse_formula("Khm(p, o, q)")) == m3.full_set(),
                "Khm(p,o,q) must hold");
        auto plan_ab = synthesize(m3, p, o, q);
        require(plan_ab && plan_ab->str() == "ab", "witness must be ab");

        require(ev.extension(parse_formula("Khm(p, false, q)")).empty(),
                "Khm(p,false,q) must fail everywhere");
        require(!brute_force(m3, p, m3.empty_set(), q, 1),
                "no one-step plan may reach q from p");
      });

  h.criterion(
      "soundness fuzz: 1000 trials, seed 42, every axiom instance valid, "
      "under 60 s",
      [] {
        auto start = Clock::now();
        FuzzParams params;  // up to 6 states, 3 actions
        FuzzReport report = fuzz_soundness(1000, params, 42);
        double elapsed = seconds_since(start);
        require(report.trials == 1000, "must run 1000 trials");
        require(report.failures.empty(),
                std::to_string(report.failures.size()) + " axiom failures");
        require(elapsed < 60.0,
                "fuzz took " + std::to_string(elapsed) + " s");
      });

  h.criterion(
      "planner/oracle agreement on 300 random models (existence, length, "
      "tie-break)",
      [] {
        std::mt19937_64 rng(0xACCE97);
        int agreements = 0;
        for (int i = 0; i < 300; ++i) {
          Model m = random_small_model(rng, 5, 2);
          Evaluator ev(m);
          StateSet pre = ev.extension(random_formula(rng, 2, {"p", "q", "r"}));
          StateSet mid = ev.extension(random_formula(rng, 2, {"p", "q", "r"}));
          StateSet goal = ev.extension(random_formula(rng, 2, {"p", "q", "r"}));

          auto fast = synthesize(m, pre, mid, goal);
          if (fast) {
            // enumerating every shorter plan verifies minimality and the
            // lex tie-break in one stroke
            auto slow =
                brute_force(m, pre, mid, goal, static_cast<int>(fast->size()));
            require(slow.has_value(), "oracle must find the witness");
            require(*slow == *fast, "plans must agree exactly");
          } else {
            // exhaustive up to the 2^|S| belief-state bound where the
            // |alphabet|^len enumeration stays feasible; above 3 states the
            // oracle sweeps every plan up to length 12 instead
            int bound = m.num_states() <= 3 ? (1 << m.num_states()) : 12;
            require(!brute_force(m, pre, mid, goal, bound),
                    "oracle found a plan the planner missed");
          }
          ++agreements;
        }
        require(agreements == 300, "all 300 cases must agree");
      });

  h.criterion(
      "remark formula: countermodel within bounds (4,3) in under 10 s, "
      "emitted model re-falsifies",
      [] {
        const std::string formula =
            "Khm(p',false,p) & Khm(p,o,q) -> Khm(p',o,q)";
        auto start = Clock::now();
        auto cli = run_cli("countermodel \"" + formula +
                           "\" --max-states 4 --max-actions 3 --json");
        double elapsed = seconds_since(start);
        require(cli.code == 0, "cli countermodel must exit 0");
        require(elapsed < 10.0,
                "search took " + std::to_string(elapsed) + " s");
        auto doc = nlohmann::json::parse(cli.out);
        require(doc["found"] == true, "must find a countermodel");
        Model m = load_model(doc["model"].dump());
        Formula f = parse_formula(formula);
        require(!valid_on(m, f), "emitted model must falsify the formula");
        require(!eval(m, doc["state"].get<std::string>(), f),
                "reported state must falsify the formula");
      });

  h.criterion(
      "derivation corpus: 4U, 5U, ULKhm, UMKhm, URKhm, UNIV and an REU "
      "instance check; all index mutants rejected",
      [] {
        TheoremDB db;
        int total_mutants = 0;
        for (const auto& file :
             read_manifest(corpus_path("manifest.txt"))) {
          Derivation d = load_derivation_file(corpus_path(file));
          auto failure = check_derivation(d, db);
          require(!failure, d.name + " failed at line " +
                                (failure ? std::to_string(failure->line)
                                         : std::string()) +
                                ": " + (failure ? failure->reason : ""));
          total_mutants += mutate_indices(d, db, [&](int line, int value) {
            throw std::runtime_error(d.name + ": mutant at line " +
                                     std::to_string(line) + " -> " +
                                     std::to_string(value) + " survived");
          });
          db.add(d.name, d.lines.back().formula);
        }
        for (const char* name : {"4U", "5U", "ULKhm", "UMKhm", "URKhm",
                                 "UNIV", "REU_instance"})
          require(db.contains(name), std::string(name) + " missing");
        require(total_mutants > 50, "mutation sweep looks too small");
      });

  h.criterion(
      "invariants: global truth, U definition, epsilon law, composition, "
      "weakening; 200+ cases each",
      [] {
        std::mt19937_64 rng(0x1417);
        int global_cases = 0, udef_cases = 0, eps_cases = 0;
        for (int i = 0; i < 220; ++i) {
          Model m = random_small_model(rng, 5, 2);
          Formula f = random_formula(rng, 2, {"p", "q", "r"});
          Evaluator ev(m);

          StateSet khm_ext = ev.extension(
              Formula::khm(f, Formula::top(), random_formula(rng, 2, {"p"})));
          require(khm_ext.empty() || khm_ext == m.full_set(),
                  "Khm truth must be state-independent");
          StateSet univ_ext = ev.extension(Formula::univ(f));
          require(univ_ext.empty() || univ_ext == m.full_set(),
                  "U truth must be state-independent");
          ++global_cases;

          require(univ_ext ==
                      ev.extension(Formula::khm(Formula::neg(f),
                                                Formula::top(),
                                                Formula::bot())),
                  "U must equal its Khm definition");
          ++udef_cases;

          StateSet chi = random_subset(rng, m.num_states());
          for (std::size_t s = 0; s < m.num_states(); ++s)
            require(strongly_chi_executable(m, m.states()[s], Plan{}, chi),
                    "epsilon must be strongly chi-executable");
          ++eps_cases;
        }
        require(global_cases >= 200 && udef_cases >= 200 && eps_cases >= 200,
                "not enough invariant cases");

        int composed = 0;
        for (int i = 0; i < 5000 && composed < 200; ++i) {
          Model m = random_small_model(rng, 5, 2);
          StateSet pre = random_subset(rng, m.num_states());
          StateSet mid = random_subset(rng, m.num_states());
          StateSet via = random_subset(rng, m.num_states());
          StateSet goal = random_subset(rng, m.num_states());
          if (!via.subset_of(mid)) continue;
          auto p1 = synthesize(m, pre, mid, via);
          auto p2 = synthesize(m, via, mid, goal);
          if (!p1 || !p2) continue;
          Plan glued;
          glued.actions = p1->actions;
          glued.actions.insert(glued.actions.end(), p2->actions.begin(),
                               p2->actions.end());
          require(verify_witness(m, pre, mid, goal, glued),
                  "concatenated witness rejected");
          ++composed;
        }
        require(composed >= 200, "composition: only " +
                                     std::to_string(composed) + " cases");

        int weakened = 0;
        for (int i = 0; i < 5000 && weakened < 200; ++i) {
          Model m = random_small_model(rng, 5, 2);
          StateSet pre = random_subset(rng, m.num_states());
          StateSet mid = random_subset(rng, m.num_states());
          StateSet goal = random_subset(rng, m.num_states());
          auto plan = synthesize(m, pre, mid, goal);
          if (!plan) continue;
          StateSet pre2 = pre;
          pre2 &= random_subset(rng, m.num_states());
          StateSet mid2 = mid;
          mid2 |= random_subset(rng, m.num_states());
          StateSet goal2 = goal;
          goal2 |= random_subset(rng, m.num_states());
          require(verify_witness(m, pre2, mid2, goal2, *plan),
                  "weakened witness rejected");
          ++weakened;
        }
        require(weakened >= 200,
                "weakening: only " + std::to_string(weakened) + " cases");
      });

  std::cout << "acceptance: " << (h.index - h.failed) << "/" << h.index
            << " criteria passed\n";
  return h.failed == 0 ? 0 : 1;
}
