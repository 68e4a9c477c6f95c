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

#include "khm/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "khm/errors.hpp"

namespace khm {

using ordered_json = nlohmann::ordered_json;

std::string Plan::str() const {
  std::string out;
  for (const auto& a : actions) out += a;
  return out;
}

std::string Plan::display() const { return actions.empty() ? "ε" : str(); }

Model::Model(
    std::vector<std::string> states,
    std::vector<std::vector<std::string>> valuation,
    std::vector<std::tuple<std::string, std::string, std::string>> transitions,
    std::vector<std::string> alphabet)
    : states_(std::move(states)),
      valuation_(std::move(valuation)),
      alphabet_(std::move(alphabet)),
      transitions_(std::move(transitions)) {
  if (states_.empty()) throw ValidationError("model has an empty state set");
  if (valuation_.size() != states_.size())
    throw ValidationError("valuation size does not match state count");

  std::unordered_map<std::string, std::size_t> sidx;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!sidx.emplace(states_[i], i).second)
      throw ValidationError("duplicate state id \"" + states_[i] + "\"");
  }
  for (auto& props : valuation_) {
    std::sort(props.begin(), props.end());
    props.erase(std::unique(props.begin(), props.end()), props.end());
  }

  if (alphabet_.empty()) {
    for (const auto& [from, act, to] : transitions_) {
      (void)from;
      (void)to;
      if (std::find(alphabet_.begin(), alphabet_.end(), act) == alphabet_.end())
        alphabet_.push_back(act);
    }
  }
  if (alphabet_.empty())
    throw ValidationError(
        "model has an empty alphabet (no transitions and no \"alphabet\" "
        "key)");
  std::unordered_map<std::string, std::size_t> aidx;
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (!aidx.emplace(alphabet_[i], i).second)
      throw ValidationError("duplicate action label \"" + alphabet_[i] + "\"");
  }

  // Drop exact duplicate transitions, keep first occurrences.
  std::unordered_set<std::string> seen;
  std::vector<std::tuple<std::string, std::string, std::string>> kept;
  succ_.assign(alphabet_.size() * states_.size(), StateSet(states_.size()));
  for (const auto& t : transitions_) {
    const auto& [from, act, to] = t;
    auto fi = sidx.find(from);
    if (fi == sidx.end())
      throw ValidationError("transition from undeclared state \"" + from +
                            "\"");
    auto ti = sidx.find(to);
    if (ti == sidx.end())
      throw ValidationError("transition to undeclared state \"" + to + "\"");
    auto ai = aidx.find(act);
    if (ai == aidx.end())
      throw ValidationError("transition label \"" + act +
                            "\" is not in the alphabet");
    std::string key = from + '\x1f' + act + '\x1f' + to;
    if (!seen.insert(key).second) continue;
    kept.push_back(t);
    succ_[ai->second * states_.size() + fi->second].set(ti->second);
  }
  transitions_ = std::move(kept);
}

std::size_t Model::state_index(std::string_view id) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == id) return i;
  throw UnknownState("unknown state \"" + std::string(id) + "\"");
}

std::size_t Model::action_index(std::string_view label) const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == label) return i;
  throw UnknownAction("unknown action \"" + std::string(label) + "\"");
}

bool Model::has_prop(std::size_t state, std::string_view prop) const {
  const auto& props = valuation_[state];
  return std::binary_search(props.begin(), props.end(), prop,
                            [](std::string_view a, std::string_view b) {
                              return a < b;
                            });
}

StateSet Model::set_of(std::span<const std::string> ids) const {
  StateSet s(states_.size());
  for (const auto& id : ids) s.set(state_index(id));
  return s;
}

StateSet Model::set_of(std::initializer_list<std::string> ids) const {
  return set_of(std::span<const std::string>(ids.begin(), ids.size()));
}

std::set<std::string> Model::names(const StateSet& s) const {
  std::set<std::string> out;
  s.for_each([&](std::size_t i) { out.insert(states_[i]); });
  return out;
}

// ---------------------------------------------------------------------------
// JSON load / store
// ---------------------------------------------------------------------------

namespace {

// nlohmann silently merges duplicate object keys, so duplicate state ids are
// caught by a SAX pass that watches the keys of the root-level "states"
// object.
class DuplicateStateScanner : public nlohmann::json_sax<ordered_json> {
 public:
  std::optional<std::string> duplicate;

  bool key(string_t& val) override {
    if (path_.size() == 2 && path_[1] == "states") {
      if (!seen_.insert(val).second && !duplicate) duplicate = val;
    }
    pending_ = val;
    return true;
  }
  bool start_object(std::size_t) override {
    path_.push_back(pending_);
    pending_.clear();
    return true;
  }
  bool end_object() override {
    path_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    path_.push_back("[]");
    pending_.clear();
    return true;
  }
  bool end_array() override {
    path_.pop_back();
    return true;
  }
  bool null() override { return true; }
  bool boolean(bool) override { return true; }
  bool number_integer(number_integer_t) override { return true; }
  bool number_unsigned(number_unsigned_t) override { return true; }
  bool number_float(number_float_t, const string_t&) override { return true; }
  bool string(string_t&) override { return true; }
  bool binary(binary_t&) override { return true; }
  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  std::vector<std::string> path_;
  std::string pending_;
  std::unordered_set<std::string> seen_;
};

}  // namespace

Model load_model(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model file is not valid JSON: ") +
                      e.what());
  }
  if (!doc.is_object()) throw FormatError("model file must be a JSON object");
  if (!doc.contains("states") || !doc["states"].is_object())
    throw FormatError("model file needs a \"states\" object");

  DuplicateStateScanner scanner;
  ordered_json::sax_parse(json_text, &scanner);
  if (scanner.duplicate)
    throw ValidationError("duplicate state id \"" + *scanner.duplicate + "\"");

  std::vector<std::string> states;
  std::vector<std::vector<std::string>> valuation;
  for (auto it = doc["states"].begin(); it != doc["states"].end(); ++it) {
    if (!it.value().is_array())
      throw FormatError("state \"" + it.key() +
                        "\" must map to an array of proposition names");
    std::vector<std::string> props;
    for (const auto& p : it.value()) {
      if (!p.is_string())
        throw FormatError("proposition names must be strings (state \"" +
                          it.key() + "\")");
      props.push_back(p.get<std::string>());
    }
    states.push_back(it.key());
    valuation.push_back(std::move(props));
  }

  std::vector<std::tuple<std::string, std::string, std::string>> transitions;
  if (doc.contains("transitions")) {
    if (!doc["transitions"].is_array())
      throw FormatError("\"transitions\" must be an array");
    for (const auto& t : doc["transitions"]) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_string() ||
          !t[1].is_string() || !t[2].is_string())
        throw FormatError(
            "each transition must be a [from, action, to] string triple");
      transitions.emplace_back(t[0].get<std::string>(),
                               t[1].get<std::string>(),
                               t[2].get<std::string>());
    }
  }

  std::vector<std::string> alphabet;
  if (doc.contains("alphabet")) {
    if (!doc["alphabet"].is_array())
      throw FormatError("\"alphabet\" must be an array of strings");
    for (const auto& a : doc["alphabet"]) {
      if (!a.is_string())
        throw FormatError("\"alphabet\" must be an array of strings");
      alphabet.push_back(a.get<std::string>());
    }
    if (alphabet.empty())
      throw ValidationError("explicit \"alphabet\" must not be empty");
  }

  return Model(std::move(states), std::move(valuation), std::move(transitions),
               std::move(alphabet));
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

std::string model_to_json(const Model& m) {
  ordered_json doc;
  ordered_json states = ordered_json::object();
  for (std::size_t i = 0; i < m.num_states(); ++i)
    states[m.states()[i]] = m.props(i);
  doc["states"] = std::move(states);
  ordered_json trans = ordered_json::array();
  for (const auto& [from, act, to] : m.transitions())
    trans.push_back(ordered_json::array({from, act, to}));
  doc["transitions"] = std::move(trans);
  doc["alphabet"] = m.alphabet();
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Plan execution
// ---------------------------------------------------------------------------

std::vector<std::size_t> resolve_plan(const Model& m, const Plan& p) {
  std::vector<std::size_t> out;
  out.reserve(p.actions.size());
  for (const auto& a : p.actions) out.push_back(m.action_index(a));
  return out;
}

std::set<std::string> successors(const Model& m, const std::string& s,
                                 const std::string& a) {
  return m.names(m.succ(m.state_index(s), m.action_index(a)));
}

std::optional<BeliefState> progress(const Model& m, const BeliefState& b,
                                    std::size_t action) {
  StateSet next(m.num_states());
  bool blocked = false;
  b.for_each([&](std::size_t s) {
    const StateSet& succ = m.succ(s, action);
    if (succ.empty()) blocked = true;
    next |= succ;
  });
  if (blocked) return std::nullopt;
  return next;
}

std::optional<BeliefState> progress(const Model& m, const BeliefState& b,
                                    const std::string& a) {
  return progress(m, b, m.action_index(a));
}

StateSet run_plan_set(const Model& m, std::size_t s,
                      std::span<const std::size_t> actions) {
  StateSet cur(m.num_states());
  cur.set(s);
  for (std::size_t a : actions) {
    StateSet next(m.num_states());
    cur.for_each([&](std::size_t t) { next |= m.succ(t, a); });
    cur = std::move(next);
  }
  return cur;
}

std::set<std::string> run_plan(const Model& m, const std::string& s,
                               const Plan& p) {
  auto acts = resolve_plan(m, p);
  return m.names(run_plan_set(m, m.state_index(s), acts));
}

bool strongly_executable_idx(const Model& m, std::size_t s,
                             std::span<const std::size_t> actions) {
  StateSet cur(m.num_states());
  cur.set(s);
  for (std::size_t a : actions) {
    StateSet next(m.num_states());
    bool blocked = false;
    cur.for_each([&](std::size_t t) {
      const StateSet& succ = m.succ(t, a);
      if (succ.empty()) blocked = true;
      next |= succ;
    });
    if (blocked) return false;
    cur = std::move(next);
  }
  return true;
}

bool strongly_chi_executable_idx(const Model& m, std::size_t s,
                                 std::span<const std::size_t> actions,
                                 const StateSet& chi) {
  StateSet cur(m.num_states());
  cur.set(s);
  for (std::size_t k = 0; k < actions.size(); ++k) {
    StateSet next(m.num_states());
    bool blocked = false;
    cur.for_each([&](std::size_t t) {
      const StateSet& succ = m.succ(t, actions[k]);
      if (succ.empty()) blocked = true;
      next |= succ;
    });
    if (blocked) return false;
    // next holds the states after prefix k+1; only proper nonempty prefixes
    // are constrained by chi.
    if (k + 1 < actions.size() && !next.subset_of(chi)) return false;
    cur = std::move(next);
  }
  return true;
}

bool strongly_executable(const Model& m, const std::string& s, const Plan& p) {
  auto acts = resolve_plan(m, p);
  return strongly_executable_idx(m, m.state_index(s), acts);
}

bool strongly_chi_executable(const Model& m, const std::string& s,
                             const Plan& p, const StateSet& chi) {
  auto acts = resolve_plan(m, p);
  return strongly_chi_executable_idx(m, m.state_index(s), acts, chi);
}

}  // namespace khm
