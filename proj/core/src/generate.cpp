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

#include <string>

#include "khm/checker.hpp"
#include "khm/errors.hpp"
#include "khm/proofs.hpp"

namespace khm {

namespace {

// 53-bit uniform draw in [0, 1); identical on every platform, unlike the
// standard distributions.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string action_label(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "a" + std::to_string(i + 1);
}

}  // namespace

Model random_model(int num_states, int num_actions, double edge_prob,
                   const std::vector<std::string>& props, double prop_prob,
                   std::uint64_t seed) {
  if (num_states < 1 || num_actions < 1)
    throw Error("random_model needs at least one state and one action");
  std::mt19937_64 rng(seed);

  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  for (int i = 0; i < num_states; ++i)
    states.push_back("s" + std::to_string(i + 1));
  for (int a = 0; a < num_actions; ++a) alphabet.push_back(action_label(a));

  // Draw order is part of the contract: all edges action-major, then props.
  std::vector<std::tuple<std::string, std::string, std::string>> transitions;
  for (int a = 0; a < num_actions; ++a)
    for (int i = 0; i < num_states; ++i)
      for (int j = 0; j < num_states; ++j)
        if (uniform01(rng) < edge_prob)
          transitions.emplace_back(states[i], alphabet[a], states[j]);

  std::vector<std::vector<std::string>> valuation(num_states);
  for (int i = 0; i < num_states; ++i)
    for (const auto& p : props)
      if (uniform01(rng) < prop_prob) valuation[i].push_back(p);

  return Model(std::move(states), std::move(valuation), std::move(transitions),
               std::move(alphabet));
}

Formula random_formula(std::mt19937_64& rng, int max_depth,
                       const std::vector<std::string>& letters) {
  auto leaf = [&]() -> Formula {
    std::uint64_t pick = rng() % 10;
    if (pick < 7 && !letters.empty())
      return Formula::atom(letters[rng() % letters.size()]);
    return (pick % 2) ? Formula::top() : Formula::bot();
  };
  if (max_depth <= 0) return leaf();
  switch (rng() % 12) {
    case 0:
    case 1:
    case 2:
      return leaf();
    case 3:
    case 4:
      return Formula::neg(random_formula(rng, max_depth - 1, letters));
    case 5:
    case 6:
    case 7:
      return Formula::conj(random_formula(rng, max_depth - 1, letters),
                           random_formula(rng, max_depth - 1, letters));
    case 8:
    case 9:
      return Formula::khm(random_formula(rng, max_depth - 1, letters),
                          random_formula(rng, max_depth - 1, letters),
                          random_formula(rng, max_depth - 1, letters));
    default:
      return Formula::univ(random_formula(rng, max_depth - 1, letters));
  }
}

FuzzReport fuzz_soundness(int trials, const FuzzParams& params,
                          std::uint64_t seed) {
  if (trials < 1) throw Error("fuzz_soundness needs at least one trial");

  static const std::vector<std::string> schema_letters = {
      "p", "q", "r", "o", "p'", "o'", "q'"};

  FuzzReport report;
  report.seed = seed;
  report.trials = trials;

  for (int trial = 0; trial < trials; ++trial) {
    // Per-trial stream, so trials are independent of each other.
    std::mt19937_64 rng(seed ^
                        (0x9e3779b97f4a7c15ULL * (std::uint64_t(trial) + 1)));
    int n = 1 + static_cast<int>(rng() % std::uint64_t(params.max_states));
    int a = 1 + static_cast<int>(rng() % std::uint64_t(params.max_actions));
    double edge_prob = 0.1 + 0.8 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    double prop_prob = 0.2 + 0.6 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    Model model = random_model(n, a, edge_prob, params.letters, prop_prob,
                               rng());

    std::map<std::string, Formula> subst;
    for (const auto& letter : schema_letters)
      subst[letter] = random_formula(rng, params.formula_depth, params.letters);

    Evaluator ev(model);
    for (const auto& schema : axiom_schemas()) {
      std::map<std::string, Formula> restricted;
      for (const auto& l : letters(schema.templ)) restricted[l] = subst[l];
      Formula instance = instantiate(schema, restricted);
      const StateSet& holds = ev.extension(instance);
      if (holds.count() == model.num_states()) continue;

      FuzzFailure failure{schema.name, model, {}, ""};
      for (const auto& [l, f] : restricted)
        failure.substitution.emplace_back(l, f);
      for (std::size_t s = 0; s < model.num_states(); ++s)
        if (!holds.test(s)) {
          failure.state = model.states()[s];
          break;
        }
      report.failures.push_back(std::move(failure));
    }
  }
  return report;
}

}  // namespace khm
