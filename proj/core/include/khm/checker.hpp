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

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "khm/formula.hpp"
#include "khm/model.hpp"

namespace khm {

// Evaluates formulas against one model, memoizing the extension of every
// subformula. A Khm subformula is true (at every state or none: the modality
// is global) iff a uniform plan exists; the plan found is kept and can be
// queried afterwards. Instances are not thread safe; use one per thread.
class Evaluator {
 public:
  explicit Evaluator(const Model& m) : m_(&m) {}

  const Model& model() const { return *m_; }

  const StateSet& extension(const Formula& f);
  bool eval(std::size_t state, const Formula& f);
  bool eval(const std::string& state, const Formula& f);

  // Witness plan of a Khm subformula seen by a previous extension() call;
  // nullopt when the subformula is false (or was never evaluated).
  std::optional<Plan> witness(const Formula& khm_subformula) const;

  // All Khm subformulas evaluated so far, keyed by their rendering, each with
  // its witness plan when true.
  std::map<std::string, std::optional<Plan>> witnesses() const;

 private:
  const Model* m_;
  std::unordered_map<Formula, StateSet, FormulaHash> ext_;
  std::unordered_map<Formula, std::optional<Plan>, FormulaHash> wit_;
};

bool eval(const Model& m, const std::string& state, const Formula& f);
StateSet extension(const Model& m, const Formula& f);

// True iff f holds at every state of m.
bool valid_on(const Model& m, const Formula& f);

// Searches for a uniform plan: some p such that from every pre-state, p is
// strongly executable, every state reached after a nonempty proper prefix
// lies in mid, and every final state lies in goal. Breadth-first over belief
// states; the start node is exempt from the mid constraint, final belief
// states are accepted before the mid test, and a belief state is expanded at
// most once (the start counts separately: re-reaching it at depth >= 1 makes
// an ordinary node subject to mid). Returns the shortest plan, breaking ties
// toward the lexicographically least sequence under the alphabet order.
// Empty pre yields epsilon. At most 2^|S| nodes are ever expanded.
std::optional<Plan> synthesize(const Model& m, const BeliefState& pre,
                               const BeliefState& mid, const BeliefState& goal);

// Literal transcription of the Khm satisfaction clause: checks p start state
// by start state, with no belief-state machinery. Independent checker for
// synthesize.
bool verify_witness(const Model& m, const BeliefState& pre,
                    const BeliefState& mid, const BeliefState& goal,
                    const Plan& p);

// Enumerates every plan over the alphabet in length-then-lex order up to
// max_len and returns the first one verify_witness accepts.
std::optional<Plan> brute_force(const Model& m, const BeliefState& pre,
                                const BeliefState& mid, const BeliefState& goal,
                                int max_len);

// Bounds bundle for exhaustive searches.
struct SearchBounds {
  int max_states = 3;
  int max_actions = 2;
  int max_plan_len = 8;                   // used by plan-enumeration oracles
  std::uint64_t budget = 50'000'000;      // models examined before giving up
};

struct Countermodel {
  Model model;
  std::string state;             // first state falsifying the formula
  std::uint64_t models_checked;  // position in the enumeration, 1-based
};

// Enumerates models in a fixed order and returns the first one that
// falsifies f, together with the first falsifying state. The order: state
// count n = 1..max_states, then action count a = 1..max_actions, then the
// valuation index v = 0..2^(n*L)-1 over the L letters of f in sorted order
// (bit i*L+k of v makes letter k true at state i), then the relation index
// r = 0..2^(a*n*n)-1 (bit (c*n+i)*n+j of r adds an edge i ->_c j). States
// are named s1..sn and actions a, b, c, ... Returns nullopt when the bounds
// are exhausted; throws BudgetExceeded when the model budget runs out first.
std::optional<Countermodel> find_countermodel(const Formula& f,
                                              const SearchBounds& b);

// Deterministic function of all parameters: every directed (s, a, t) edge is
// present independently with probability edge_prob, every (state, prop) pair
// holds independently with probability prop_prob.
Model random_model(int num_states, int num_actions, double edge_prob,
                   const std::vector<std::string>& props, double prop_prob,
                   std::uint64_t seed);

// Random formula of depth <= max_depth over the given letters.
Formula random_formula(std::mt19937_64& rng, int max_depth,
                       const std::vector<std::string>& letters);

struct FuzzParams {
  int max_states = 6;
  int max_actions = 3;
  int formula_depth = 3;
  std::vector<std::string> letters = {"p", "q", "r"};
};

struct FuzzFailure {
  std::string axiom;
  Model model;
  std::vector<std::pair<std::string, Formula>> substitution;
  std::string state;  // first state where the instance fails
};

struct FuzzReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<FuzzFailure> failures;
};

// For each trial: draw a random model and a random substitution for the
// schema letters, instantiate every axiom schema, and check validity on the
// model. Failures carry full reproduction data. Deterministic in (trials,
// params, seed).
FuzzReport fuzz_soundness(int trials, const FuzzParams& params,
                          std::uint64_t seed);

}  // namespace khm
