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

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "khm/checker.hpp"
#include "khm/errors.hpp"
#include "khm/formula.hpp"
#include "khm/model.hpp"
#include "khm/proofs.hpp"

namespace {

using nlohmann::ordered_json;

// Exit code contract: 0 = positive answer, 1 = negative answer (formula
// false, no plan, derivation rejected, no countermodel), 2 = usage or input
// error.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct Palette {
  const char* green = "";
  const char* red = "";
  const char* reset = "";
};

Palette palette() {
  const char* env = std::getenv("KHM_COLOR");
  std::string mode = env ? env : "auto";
  if (mode != "never" && isatty(STDOUT_FILENO))
    return {"\x1b[32m", "\x1b[31m", "\x1b[0m"};
  return {};
}

std::string colored_bool(bool v) {
  Palette p = palette();
  return v ? std::string(p.green) + "true" + p.reset
           : std::string(p.red) + "false" + p.reset;
}

// Formula arguments may be given inline or as @path indirection.
std::string formula_arg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1), std::ios::binary);
  if (!in) throw khm::FormatError("cannot open formula file \"" +
                                  arg.substr(1) + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
    text.pop_back();
  return text;
}

ordered_json witnesses_json(const khm::Evaluator& ev) {
  ordered_json out = ordered_json::object();
  for (const auto& [key, plan] : ev.witnesses()) {
    if (plan)
      out[key] = plan->str();
    else
      out[key] = nullptr;
  }
  return out;
}

void print_witnesses(const khm::Evaluator& ev) {
  for (const auto& [key, plan] : ev.witnesses()) {
    if (plan) std::cout << "witness " << key << ": " << plan->display() << "\n";
  }
}

int cmd_parse(const std::string& text, bool json) {
  khm::Formula f = khm::parse_formula(text);
  if (json) {
    ordered_json out;
    out["formula"] = khm::render(f);
    out["letters"] = khm::letters(f);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << khm::render(f) << "\n";
  }
  return kOk;
}

int cmd_check(const std::string& model_path, const std::string& formula_text,
              const std::optional<std::string>& state, bool json) {
  khm::Model m = khm::load_model_file(model_path);
  khm::Formula f = khm::parse_formula(formula_text);
  khm::Evaluator ev(m);
  const khm::StateSet& ext = ev.extension(f);

  if (state) {
    bool value = ext.test(m.state_index(*state));
    if (json) {
      ordered_json out;
      out["formula"] = khm::render(f);
      out["state"] = *state;
      out["value"] = value;
      out["witnesses"] = witnesses_json(ev);
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << colored_bool(value) << "\n";
      print_witnesses(ev);
    }
    return value ? kOk : kNegative;
  }

  bool all = ext.count() == m.num_states();
  if (json) {
    ordered_json out;
    out["formula"] = khm::render(f);
    ordered_json states = ordered_json::object();
    for (std::size_t i = 0; i < m.num_states(); ++i)
      states[m.states()[i]] = ext.test(i);
    out["states"] = std::move(states);
    out["valid"] = all;
    out["witnesses"] = witnesses_json(ev);
    std::cout << out.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < m.num_states(); ++i)
      std::cout << m.states()[i] << ": " << colored_bool(ext.test(i)) << "\n";
    print_witnesses(ev);
    std::cout << "result: " << colored_bool(all) << " at " << ext.count()
              << "/" << m.num_states() << " states\n";
  }
  return all ? kOk : kNegative;
}

int cmd_plan(const std::string& model_path, const std::string& pre_text,
             const std::string& mid_text, const std::string& post_text,
             bool json) {
  khm::Model m = khm::load_model_file(model_path);
  khm::Evaluator ev(m);
  khm::StateSet pre = ev.extension(khm::parse_formula(pre_text));
  khm::StateSet mid = ev.extension(khm::parse_formula(mid_text));
  khm::StateSet goal = ev.extension(khm::parse_formula(post_text));
  auto plan = khm::synthesize(m, pre, mid, goal);

  if (json) {
    ordered_json out;
    if (plan)
      out["plan"] = plan->str();
    else
      out["plan"] = nullptr;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (plan ? plan->display() : "no plan") << "\n";
  }
  return plan ? kOk : kNegative;
}

int cmd_prove(const std::string& path,
              const std::optional<std::string>& manifest_path, bool json) {
  khm::TheoremDB db;

  auto report = [&](const std::string& file, const khm::Derivation& d,
                    const std::optional<khm::ProofFailure>& failure) {
    if (json) {
      ordered_json out;
      out["file"] = file;
      out["name"] = d.name;
      out["ok"] = !failure.has_value();
      if (failure) {
        out["line"] = failure->line;
        out["reason"] = failure->reason;
        out["detail"] = failure->detail;
      } else {
        out["theorem"] = khm::render(d.lines.back().formula);
      }
      std::cout << out.dump(2) << "\n";
    } else if (failure) {
      std::cout << file << ": " << d.name << ": error at line "
                << failure->line << ": " << failure->reason << " ("
                << failure->detail << ")\n";
    } else {
      std::cout << file << ": ok: " << d.name << ": "
                << khm::render(d.lines.back().formula) << "\n";
    }
  };

  if (manifest_path) {
    std::string dir = ".";
    if (auto slash = manifest_path->find_last_of('/');
        slash != std::string::npos)
      dir = manifest_path->substr(0, slash);
    for (const auto& file : khm::read_manifest(*manifest_path)) {
      khm::Derivation d = khm::load_derivation_file(dir + "/" + file);
      auto failure = khm::check_derivation(d, db);
      if (failure) {
        report(file, d, failure);
        return kNegative;
      }
      db.add(d.name, d.lines.back().formula);
    }
  }

  khm::Derivation d = khm::load_derivation_file(path);
  if (d.lines.empty()) throw khm::FormatError("derivation has no lines");
  auto failure = khm::check_derivation(d, db);
  report(path, d, failure);
  return failure ? kNegative : kOk;
}

int cmd_countermodel(const std::string& formula_text, int max_states,
                     int max_actions, std::uint64_t budget, bool json) {
  khm::Formula f = khm::parse_formula(formula_text);
  khm::SearchBounds bounds;
  bounds.max_states = max_states;
  bounds.max_actions = max_actions;
  bounds.budget = budget;

  std::optional<khm::Countermodel> found;
  bool budget_exhausted = false;
  std::uint64_t checked = 0;
  try {
    found = khm::find_countermodel(f, bounds);
  } catch (const khm::BudgetExceeded& e) {
    budget_exhausted = true;
    checked = e.models_checked();
  }

  if (json) {
    ordered_json out;
    out["formula"] = khm::render(f);
    out["found"] = found.has_value();
    if (found) {
      out["state"] = found->state;
      out["models_checked"] = found->models_checked;
      out["model"] = ordered_json::parse(khm::model_to_json(found->model));
    } else {
      out["budget_exhausted"] = budget_exhausted;
      if (budget_exhausted) out["models_checked"] = checked;
    }
    std::cout << out.dump(2) << "\n";
  } else if (found) {
    std::cout << "countermodel after " << found->models_checked
              << " models, falsified at state " << found->state << ":\n"
              << khm::model_to_json(found->model) << "\n";
  } else if (budget_exhausted) {
    std::cout << "budget exhausted after " << checked
              << " models, no countermodel found\n";
  } else {
    std::cout << "no countermodel within bounds (" << max_states << " states, "
              << max_actions << " actions)\n";
  }
  return found ? kOk : kNegative;
}

int cmd_fuzz(int trials, std::uint64_t seed, int max_states, int max_actions,
             int depth, bool json) {
  khm::FuzzParams params;
  params.max_states = max_states;
  params.max_actions = max_actions;
  params.formula_depth = depth;
  khm::FuzzReport report = khm::fuzz_soundness(trials, params, seed);

  if (json) {
    ordered_json out;
    out["seed"] = report.seed;
    out["trials"] = report.trials;
    ordered_json failures = ordered_json::array();
    for (const auto& failure : report.failures) {
      ordered_json item;
      item["axiom"] = failure.axiom;
      item["state"] = failure.state;
      ordered_json subst = ordered_json::object();
      for (const auto& [letter, formula] : failure.substitution)
        subst[letter] = khm::render(formula);
      item["substitution"] = std::move(subst);
      item["model"] = ordered_json::parse(khm::model_to_json(failure.model));
      failures.push_back(std::move(item));
    }
    out["failures"] = std::move(failures);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "trials: " << report.trials << "\nseed: " << report.seed
              << "\nfailures: " << report.failures.size() << "\n";
    for (const auto& failure : report.failures) {
      std::cout << "FAIL " << failure.axiom << " at " << failure.state
                << " with";
      for (const auto& [letter, formula] : failure.substitution)
        std::cout << " " << letter << " := " << khm::render(formula) << ";";
      std::cout << "\n" << khm::model_to_json(failure.model) << "\n";
    }
  }
  return report.failures.empty() ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "toolkit for the ternary knowing-how modality Khm(pre, mid, goal): "
      "model checking, uniform plan synthesis, countermodel search, "
      "derivation checking and soundness fuzzing"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "emit JSON instead of human output");

  std::string formula_text, model_path, pre_text, mid_text, post_text;
  std::string derivation_path;
  std::optional<std::string> state, manifest;
  int cm_states = 3, cm_actions = 2;
  int fz_states = 6, fz_actions = 3, trials = 0, depth = 3;
  std::uint64_t budget = 50'000'000, seed = 0;

  auto* parse_cmd = app.add_subcommand("parse", "parse and reprint a formula");
  parse_cmd->add_option("formula", formula_text, "formula text or @file")
      ->required();

  auto* check_cmd =
      app.add_subcommand("check", "evaluate a formula on a model");
  check_cmd->add_option("model", model_path, "model JSON file")->required();
  check_cmd->add_option("formula", formula_text, "formula text or @file")
      ->required();
  check_cmd->add_option("--state", state, "evaluate at this state only");

  auto* plan_cmd =
      app.add_subcommand("plan", "synthesize a uniform witness plan");
  plan_cmd->add_option("model", model_path, "model JSON file")->required();
  plan_cmd->add_option("--pre", pre_text, "precondition formula")->required();
  plan_cmd->add_option("--mid", mid_text, "intermediate constraint formula")
      ->required();
  plan_cmd->add_option("--post", post_text, "goal formula")->required();

  auto* prove_cmd =
      app.add_subcommand("prove", "check a derivation file");
  prove_cmd->add_option("derivation", derivation_path, "derivation JSON file")
      ->required();
  prove_cmd->add_option("--corpus", manifest,
                        "manifest of derivations to load first");

  auto* cm_cmd = app.add_subcommand("countermodel",
                                    "search for a falsifying model");
  cm_cmd->add_option("formula", formula_text, "formula text or @file")
      ->required();
  cm_cmd->add_option("--max-states", cm_states, "state bound (default 3)")
      ->check(CLI::PositiveNumber);
  cm_cmd->add_option("--max-actions", cm_actions, "action bound (default 2)")
      ->check(CLI::PositiveNumber);
  cm_cmd->add_option("--budget", budget, "model budget (default 50000000)")
      ->check(CLI::PositiveNumber);

  auto* fuzz_cmd = app.add_subcommand(
      "fuzz", "test axiom validity on random models");
  fuzz_cmd->add_option("--trials", trials, "number of trials")->required();
  fuzz_cmd->add_option("--seed", seed, "random seed (default 0)");
  fuzz_cmd->add_option("--max-states", fz_states, "model size bound");
  fuzz_cmd->add_option("--max-actions", fz_actions, "alphabet size bound");
  fuzz_cmd->add_option("--depth", depth, "substituted formula depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(formula_arg(formula_text), json);
    if (check_cmd->parsed())
      return cmd_check(model_path, formula_arg(formula_text), state, json);
    if (plan_cmd->parsed())
      return cmd_plan(model_path, formula_arg(pre_text),
                      formula_arg(mid_text), formula_arg(post_text), json);
    if (prove_cmd->parsed()) return cmd_prove(derivation_path, manifest, json);
    if (cm_cmd->parsed())
      return cmd_countermodel(formula_arg(formula_text), cm_states,
                              cm_actions, budget, json);
    if (fuzz_cmd->parsed()) {
      if (trials < 1) {
        std::cerr << "error: --trials must be at least 1\n";
        return kUsage;
      }
      return cmd_fuzz(trials, seed, fz_states, fz_actions, depth, json);
    }
  } catch (const khm::SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const khm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
