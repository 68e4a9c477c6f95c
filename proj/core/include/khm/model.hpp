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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace khm {

// Set of state indices over a fixed universe size, packed into words so that
// subset and image tests cost O(|S|/64) word operations.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe)
      : n_(universe), w_((universe + 63) / 64, 0) {}

  static StateSet all(std::size_t universe) {
    StateSet s(universe);
    for (std::size_t i = 0; i < universe; ++i) s.set(i);
    return s;
  }

  std::size_t universe() const { return n_; }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  bool empty() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  bool subset_of(const StateSet& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  StateSet& operator|=(const StateSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  StateSet& operator&=(const StateSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  StateSet complement() const {
    StateSet r(n_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
    if (n_ & 63) r.w_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
    return r;
  }

  bool operator==(const StateSet& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const StateSet& o) const { return !(*this == o); }

  std::size_t hash() const {
    std::size_t h = n_ * 0x9e3779b97f4a7c15ULL;
    for (auto w : w_) h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      std::uint64_t w = w_[wi];
      while (w) {
        std::size_t b = static_cast<std::size_t>(__builtin_ctzll(w));
        f(wi * 64 + b);
        w &= w - 1;
      }
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

// The search node of uniform planning: the set of states possibly reached.
using BeliefState = StateSet;

// Finite action sequence; the empty plan is epsilon.
struct Plan {
  std::vector<std::string> actions;

  Plan() = default;
  explicit Plan(std::vector<std::string> a) : actions(std::move(a)) {}

  bool empty() const { return actions.empty(); }
  std::size_t size() const { return actions.size(); }

  // Concatenation of the labels; "" for epsilon. This is the JSON encoding.
  std::string str() const;
  // Human form: str(), or the literal two-byte string for epsilon.
  std::string display() const;

  bool operator==(const Plan&) const = default;
};

// Finite labeled transition system with a propositional valuation. States and
// alphabet keep their file order; that order is what plan tie-breaking and
// all iteration use. Immutable after construction.
class Model {
 public:
  // alphabet may be empty, in which case it defaults to the labels appearing
  // in transitions, in order of first appearance. Throws ValidationError on
  // duplicate state ids, duplicate labels, dangling endpoints, an empty state
  // set, an empty alphabet, or a transition label outside the alphabet.
  Model(std::vector<std::string> states,
        std::vector<std::vector<std::string>> valuation,
        std::vector<std::tuple<std::string, std::string, std::string>>
            transitions,
        std::vector<std::string> alphabet);

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_actions() const { return alphabet_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<std::tuple<std::string, std::string, std::string>>&
  transitions() const {
    return transitions_;
  }

  std::size_t state_index(std::string_view id) const;     // UnknownState
  std::size_t action_index(std::string_view label) const;  // UnknownAction

  const std::vector<std::string>& props(std::size_t state) const {
    return valuation_[state];
  }
  bool has_prop(std::size_t state, std::string_view prop) const;

  // a-successors of one state, as a mask.
  const StateSet& succ(std::size_t state, std::size_t action) const {
    return succ_[action * states_.size() + state];
  }

  StateSet empty_set() const { return StateSet(states_.size()); }
  StateSet full_set() const { return StateSet::all(states_.size()); }
  StateSet set_of(std::span<const std::string> ids) const;
  StateSet set_of(std::initializer_list<std::string> ids) const;
  std::set<std::string> names(const StateSet& s) const;

 private:
  std::vector<std::string> states_;
  std::vector<std::vector<std::string>> valuation_;  // sorted, deduped
  std::vector<std::string> alphabet_;
  std::vector<std::tuple<std::string, std::string, std::string>> transitions_;
  std::vector<StateSet> succ_;  // action-major
};

// Reads the model JSON format:
//   { "states": { "<id>": ["<prop>", ...], ... },
//     "transitions": [ ["<from>", "<action>", "<to>"], ... ],
//     "alphabet": ["<action>", ...] }        // optional
// Throws FormatError for shape problems and ValidationError for
// inconsistent content.
Model load_model(std::string_view json_text);
Model load_model_file(const std::string& path);

// Stable serialization: states in order with sorted prop lists, transitions
// in stored order, alphabet always explicit.
std::string model_to_json(const Model& m);

// Set of a-successors of s.
std::set<std::string> successors(const Model& m, const std::string& s,
                                 const std::string& a);

// One uniform step: nullopt (blocked) when some member of b has no
// a-successor, otherwise the union of successors. The empty belief state
// steps to itself.
std::optional<BeliefState> progress(const Model& m, const BeliefState& b,
                                    const std::string& a);
std::optional<BeliefState> progress(const Model& m, const BeliefState& b,
                                    std::size_t action);

// All states reachable from s by executing the whole plan; epsilon yields
// {s}. Computed by forward image iteration.
std::set<std::string> run_plan(const Model& m, const std::string& s,
                               const Plan& p);
StateSet run_plan_set(const Model& m, std::size_t s,
                      std::span<const std::size_t> actions);

// True when after every proper prefix of p, every reached state can perform
// the next action. Epsilon is always strongly executable.
bool strongly_executable(const Model& m, const std::string& s, const Plan& p);

// strongly_executable plus: every state reached after a nonempty proper
// prefix lies in chi. Start and end states are exempt.
bool strongly_chi_executable(const Model& m, const std::string& s,
                             const Plan& p, const StateSet& chi);

// Index-based cores used by the planner and the oracles.
bool strongly_executable_idx(const Model& m, std::size_t s,
                             std::span<const std::size_t> actions);
bool strongly_chi_executable_idx(const Model& m, std::size_t s,
                                 std::span<const std::size_t> actions,
                                 const StateSet& chi);

// Resolves plan labels to alphabet indices. Throws UnknownAction.
std::vector<std::size_t> resolve_plan(const Model& m, const Plan& p);

}  // namespace khm
