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

#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "khm/checker.hpp"
#include "khm/model.hpp"
#include "khm/proofs.hpp"

namespace khm::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(KHM_FIXTURE_DIR) + "/" + name;
}

inline std::string corpus_path(const std::string& name) {
  return std::string(KHM_CORPUS_DIR) + "/" + name;
}

inline Model load_fixture(const std::string& name) {
  return load_model_file(fixture_path(name));
}

inline Plan plan_of(std::initializer_list<std::string> actions) {
  return Plan(std::vector<std::string>(actions));
}

// ---------------------------------------------------------------------------
// Definition-following oracles. These walk transition chains recursively,
// with none of the frontier iteration the library uses, so the two routes
// can check each other.
// ---------------------------------------------------------------------------

inline void oracle_reach_rec(const Model& m, std::size_t s,
                             std::span<const std::size_t> acts,
                             std::set<std::size_t>& out) {
  if (acts.empty()) {
    out.insert(s);
    return;
  }
  m.succ(s, acts[0]).for_each([&](std::size_t t) {
    oracle_reach_rec(m, t, acts.subspan(1), out);
  });
}

inline std::set<std::size_t> oracle_reach(const Model& m, std::size_t s,
                                          std::span<const std::size_t> acts) {
  std::set<std::size_t> out;
  oracle_reach_rec(m, s, acts, out);
  return out;
}

inline bool oracle_strongly_executable(const Model& m, std::size_t s,
                                       std::span<const std::size_t> acts) {
  for (std::size_t k = 0; k < acts.size(); ++k) {
    for (std::size_t t : oracle_reach(m, s, acts.subspan(0, k)))
      if (m.succ(t, acts[k]).empty()) return false;
  }
  return true;
}

inline bool oracle_strongly_chi_executable(const Model& m, std::size_t s,
                                           std::span<const std::size_t> acts,
                                           const StateSet& chi) {
  if (!oracle_strongly_executable(m, s, acts)) return false;
  for (std::size_t k = 1; k < acts.size(); ++k) {
    for (std::size_t t : oracle_reach(m, s, acts.subspan(0, k)))
      if (!chi.test(t)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random data for property tests.
// ---------------------------------------------------------------------------

inline StateSet random_subset(std::mt19937_64& rng, std::size_t universe) {
  StateSet s(universe);
  for (std::size_t i = 0; i < universe; ++i)
    if (rng() & 1) s.set(i);
  return s;
}

inline Model random_small_model(std::mt19937_64& rng, int max_states,
                                int max_actions) {
  int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_states));
  int a = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_actions));
  double edge = 0.1 + 0.8 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  double prop = 0.2 + 0.6 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  return random_model(n, a, edge, {"p", "q", "r"}, prop, rng());
}

inline std::vector<std::size_t> random_action_seq(std::mt19937_64& rng,
                                                  const Model& m,
                                                  std::size_t max_len) {
  std::vector<std::size_t> acts(rng() % (max_len + 1));
  for (auto& a : acts) a = rng() % m.num_actions();
  return acts;
}

inline Plan to_plan(const Model& m, std::span<const std::size_t> acts) {
  std::vector<std::string> labels;
  for (std::size_t a : acts) labels.push_back(m.alphabet()[a]);
  return Plan(std::move(labels));
}

// Every in-range perturbation of every line-index field of every line must
// make the derivation fail. Returns the number of mutants tried; fails the
// surrounding test via the callback on any surviving mutant.
template <class OnSurvivor>
inline int mutate_indices(const Derivation& d, const TheoremDB& db,
                          OnSurvivor&& on_survivor) {
  int mutants = 0;
  for (std::size_t k = 0; k < d.lines.size(); ++k) {
    const int lineno = static_cast<int>(k) + 1;
    auto try_mutant = [&](auto field) {
      for (int v = 1; v < lineno; ++v) {
        Derivation copy = d;
        int& slot = field(copy.lines[k].just);
        if (v == slot) continue;
        slot = v;
        ++mutants;
        if (!check_derivation(copy, db))
          on_survivor(lineno, v);
      }
    };
    switch (d.lines[k].just.kind) {
      case Just::Kind::Mp:
        try_mutant([](Just& j) -> int& { return j.i; });
        try_mutant([](Just& j) -> int& { return j.j; });
        break;
      case Just::Kind::NecU:
      case Just::Kind::Sub:
        try_mutant([](Just& j) -> int& { return j.i; });
        break;
      default:
        break;
    }
  }
  return mutants;
}

}  // namespace khm::test
