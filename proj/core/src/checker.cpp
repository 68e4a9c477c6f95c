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

#include "khm/checker.hpp"

#include <algorithm>
#include <unordered_set>

#include "khm/errors.hpp"

namespace khm {

const StateSet& Evaluator::extension(const Formula& f) {
  auto it = ext_.find(f);
  if (it != ext_.end()) return it->second;

  StateSet result(m_->num_states());
  switch (f.kind()) {
    case Kind::Top:
      result = m_->full_set();
      break;
    case Kind::Bot:
      break;
    case Kind::Atom:
      for (std::size_t s = 0; s < m_->num_states(); ++s)
        if (m_->has_prop(s, f.name())) result.set(s);
      break;
    case Kind::Neg:
      result = extension(f.operand()).complement();
      break;
    case Kind::And: {
      result = extension(f.lhs());
      result &= extension(f.rhs());
      break;
    }
    case Kind::Univ:
      if (extension(f.operand()).count() == m_->num_states())
        result = m_->full_set();
      break;
    case Kind::Khm: {
      StateSet pre = extension(f.pre());
      StateSet mid = extension(f.mid());
      StateSet goal = extension(f.goal());
      auto plan = synthesize(*m_, pre, mid, goal);
      if (plan) result = m_->full_set();
      wit_.emplace(f, std::move(plan));
      break;
    }
  }
  return ext_.emplace(f, std::move(result)).first->second;
}

bool Evaluator::eval(std::size_t state, const Formula& f) {
  return extension(f).test(state);
}

bool Evaluator::eval(const std::string& state, const Formula& f) {
  return eval(m_->state_index(state), f);
}

std::optional<Plan> Evaluator::witness(const Formula& khm_subformula) const {
  auto it = wit_.find(khm_subformula);
  if (it == wit_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, std::optional<Plan>> Evaluator::witnesses() const {
  std::map<std::string, std::optional<Plan>> out;
  for (const auto& [f, plan] : wit_) out[render(f)] = plan;
  return out;
}

bool eval(const Model& m, const std::string& state, const Formula& f) {
  Evaluator ev(m);
  return ev.eval(state, f);
}

StateSet extension(const Model& m, const Formula& f) {
  Evaluator ev(m);
  return ev.extension(f);
}

bool valid_on(const Model& m, const Formula& f) {
  Evaluator ev(m);
  return ev.extension(f).count() == m.num_states();
}

// ---------------------------------------------------------------------------
// Uniform plan synthesis
// ---------------------------------------------------------------------------

std::optional<Plan> synthesize(const Model& m, const BeliefState& pre,
                               const BeliefState& mid,
                               const BeliefState& goal) {
  if (pre.subset_of(goal)) return Plan{};  // includes empty pre

  struct NodeRec {
    BeliefState belief;
    std::int64_t parent;
    std::size_t action;
  };
  std::vector<NodeRec> nodes;
  nodes.push_back({pre, -1, 0});
  std::unordered_set<StateSet, StateSetHash> visited;  // depth >= 1 only

  auto plan_of = [&](std::int64_t leaf_parent, std::size_t leaf_action) {
    std::vector<std::string> acts{m.alphabet()[leaf_action]};
    for (std::int64_t i = leaf_parent; i > 0; i = nodes[i].parent)
      acts.push_back(m.alphabet()[nodes[i].action]);
    std::reverse(acts.begin(), acts.end());
    return Plan(std::move(acts));
  };

  for (std::size_t qi = 0; qi < nodes.size(); ++qi) {
    BeliefState b = nodes[qi].belief;  // copy: nodes may reallocate
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
      auto next = progress(m, b, a);
      if (!next) continue;
      if (next->subset_of(goal))
        return plan_of(static_cast<std::int64_t>(qi), a);
      if (!next->subset_of(mid)) continue;
      if (!visited.insert(*next).second) continue;
      nodes.push_back({std::move(*next), static_cast<std::int64_t>(qi), a});
    }
  }
  return std::nullopt;
}

namespace {

bool verify_witness_idx(const Model& m, const BeliefState& pre,
                        const BeliefState& mid, const BeliefState& goal,
                        std::span<const std::size_t> acts) {
  bool ok = true;
  pre.for_each([&](std::size_t s) {
    if (!ok) return;
    if (!strongly_chi_executable_idx(m, s, acts, mid)) {
      ok = false;
      return;
    }
    if (!run_plan_set(m, s, acts).subset_of(goal)) ok = false;
  });
  return ok;
}

}  // namespace

bool verify_witness(const Model& m, const BeliefState& pre,
                    const BeliefState& mid, const BeliefState& goal,
                    const Plan& p) {
  auto acts = resolve_plan(m, p);
  return verify_witness_idx(m, pre, mid, goal, acts);
}

std::optional<Plan> brute_force(const Model& m, const BeliefState& pre,
                                const BeliefState& mid,
                                const BeliefState& goal, int max_len) {
  const std::size_t num_actions = m.num_actions();
  std::vector<std::size_t> acts;
  for (int len = 0; len <= max_len; ++len) {
    acts.assign(static_cast<std::size_t>(len), 0);
    for (;;) {
      if (verify_witness_idx(m, pre, mid, goal, acts)) {
        std::vector<std::string> labels;
        labels.reserve(acts.size());
        for (std::size_t a : acts) labels.push_back(m.alphabet()[a]);
        return Plan(std::move(labels));
      }
      // Odometer step in lex order; done when the length is exhausted.
      int pos = len - 1;
      while (pos >= 0 && acts[pos] + 1 == num_actions) {
        acts[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++acts[pos];
    }
  }
  return std::nullopt;
}

}  // namespace khm
