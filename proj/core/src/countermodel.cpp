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

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "khm/checker.hpp"
#include "khm/errors.hpp"

namespace khm {

namespace {

// The enumeration only ever reaches tiny models (the per-block model counts
// grow doubly exponentially), so candidates are evaluated on a packed
// representation: one word per successor set, one word per letter extension,
// and a flat postorder program for the formula. This keeps the inner loop
// allocation-free.
constexpr int kMaxMaskStates = 16;

struct CompiledFormula {
  struct Node {
    Kind kind;
    int a = -1, b = -1, c = -1;  // child node indices
    int letter = -1;             // Atom: index into letters
  };
  std::vector<Node> nodes;  // postorder, root last
  std::vector<std::string> letters;
};

int compile_rec(const Formula& f, CompiledFormula& out,
                std::unordered_map<Formula, int, FormulaHash>& memo) {
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  CompiledFormula::Node n;
  n.kind = f.kind();
  switch (f.kind()) {
    case Kind::Atom: {
      auto pos = std::find(out.letters.begin(), out.letters.end(), f.name());
      n.letter = static_cast<int>(pos - out.letters.begin());
      break;
    }
    case Kind::Top:
    case Kind::Bot:
      break;
    case Kind::Neg:
    case Kind::Univ:
      n.a = compile_rec(f.operand(), out, memo);
      break;
    case Kind::And:
      n.a = compile_rec(f.lhs(), out, memo);
      n.b = compile_rec(f.rhs(), out, memo);
      break;
    case Kind::Khm:
      n.a = compile_rec(f.pre(), out, memo);
      n.b = compile_rec(f.mid(), out, memo);
      n.c = compile_rec(f.goal(), out, memo);
      break;
  }
  out.nodes.push_back(n);
  int idx = static_cast<int>(out.nodes.size()) - 1;
  memo.emplace(f, idx);
  return idx;
}

CompiledFormula compile(const Formula& f) {
  CompiledFormula out;
  for (const auto& l : letters(f)) out.letters.push_back(l);
  std::unordered_map<Formula, int, FormulaHash> memo;
  compile_rec(f, out, memo);
  return out;
}

// Scratch space for one enumeration run.
struct MaskSearcher {
  int n = 0;                       // states
  int a = 0;                       // actions
  std::uint32_t full = 0;          // (1 << n) - 1
  std::vector<std::uint32_t> succ;  // a*n entries, action-major
  std::vector<std::uint32_t> val;   // per letter
  std::vector<std::uint32_t> ext;   // per compiled node
  std::vector<std::uint64_t> visited;  // 2^n bits
  std::vector<std::uint32_t> queue;

  void resize(int states, int actions, std::size_t num_letters,
              std::size_t num_nodes) {
    n = states;
    a = actions;
    full = (states >= 32) ? 0xffffffffu
                          : ((std::uint32_t{1} << states) - 1);
    succ.assign(static_cast<std::size_t>(actions) * states, 0);
    val.assign(num_letters, 0);
    ext.assign(num_nodes, 0);
    visited.assign(((std::size_t{1} << states) + 63) / 64, 0);
    queue.clear();
    queue.reserve(std::size_t{1} << states);
  }

  bool plan_exists(std::uint32_t pre, std::uint32_t mid, std::uint32_t goal) {
    if ((pre & ~goal) == 0) return true;
    std::fill(visited.begin(), visited.end(), 0);
    queue.clear();
    queue.push_back(pre);  // start node, exempt from mid
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::uint32_t b = queue[qi];
      for (int act = 0; act < a; ++act) {
        std::uint32_t next = 0;
        bool blocked = false;
        for (std::uint32_t rest = b; rest;) {
          int s = __builtin_ctz(rest);
          rest &= rest - 1;
          std::uint32_t t = succ[static_cast<std::size_t>(act) * n + s];
          if (!t) {
            blocked = true;
            break;
          }
          next |= t;
        }
        if (blocked) continue;
        if ((next & ~goal) == 0) return true;
        if (next & ~mid) continue;
        std::uint64_t& word = visited[next >> 6];
        std::uint64_t bit = std::uint64_t{1} << (next & 63);
        if (word & bit) continue;
        word |= bit;
        queue.push_back(next);
      }
    }
    return false;
  }

  // Evaluates the compiled program; returns the mask of states where the
  // root holds.
  std::uint32_t eval(const CompiledFormula& cf) {
    for (std::size_t i = 0; i < cf.nodes.size(); ++i) {
      const auto& node = cf.nodes[i];
      switch (node.kind) {
        case Kind::Atom: ext[i] = val[node.letter]; break;
        case Kind::Top: ext[i] = full; break;
        case Kind::Bot: ext[i] = 0; break;
        case Kind::Neg: ext[i] = ~ext[node.a] & full; break;
        case Kind::And: ext[i] = ext[node.a] & ext[node.b]; break;
        case Kind::Univ: ext[i] = (ext[node.a] == full) ? full : 0; break;
        case Kind::Khm:
          ext[i] = plan_exists(ext[node.a], ext[node.b], ext[node.c]) ? full : 0;
          break;
      }
    }
    return ext.back();
  }
};

std::string action_name(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "a" + std::to_string(i + 1);
}

Model build_model(const MaskSearcher& ms,
                  const std::vector<std::string>& letters) {
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> valuation(ms.n);
  for (int i = 0; i < ms.n; ++i) {
    states.push_back("s" + std::to_string(i + 1));
    for (std::size_t k = 0; k < letters.size(); ++k)
      if (ms.val[k] & (std::uint32_t{1} << i)) valuation[i].push_back(letters[k]);
  }
  std::vector<std::tuple<std::string, std::string, std::string>> transitions;
  std::vector<std::string> alphabet;
  for (int c = 0; c < ms.a; ++c) {
    alphabet.push_back(action_name(c));
    for (int i = 0; i < ms.n; ++i) {
      std::uint32_t t = ms.succ[static_cast<std::size_t>(c) * ms.n + i];
      while (t) {
        int j = __builtin_ctz(t);
        t &= t - 1;
        transitions.emplace_back(states[i], alphabet.back(), states[j]);
      }
    }
  }
  return Model(std::move(states), std::move(valuation), std::move(transitions),
               std::move(alphabet));
}

}  // namespace

std::optional<Countermodel> find_countermodel(const Formula& f,
                                              const SearchBounds& bounds) {
  if (bounds.max_states < 1 || bounds.max_actions < 1)
    throw Error("countermodel bounds must be at least 1");

  CompiledFormula cf = compile(f);
  const std::size_t num_letters = cf.letters.size();
  MaskSearcher ms;
  std::uint64_t checked = 0;

  for (int n = 1; n <= std::min(bounds.max_states, kMaxMaskStates); ++n) {
    for (int a = 1; a <= bounds.max_actions; ++a) {
      ms.resize(n, a, num_letters, cf.nodes.size());
      const std::size_t vbits = static_cast<std::size_t>(n) * num_letters;
      const std::size_t rbits = static_cast<std::size_t>(a) * n * n;
      const std::uint64_t vmax =
          vbits < 63 ? (std::uint64_t{1} << vbits) : UINT64_MAX;
      const std::uint64_t rmax =
          rbits < 63 ? (std::uint64_t{1} << rbits) : UINT64_MAX;
      for (std::uint64_t v = 0; v < vmax; ++v) {
        for (std::size_t k = 0; k < num_letters; ++k) {
          std::uint32_t mask = 0;
          for (int i = 0; i < n; ++i)
            if (v & (std::uint64_t{1} << (static_cast<std::size_t>(i) *
                                              num_letters +
                                          k)))
              mask |= std::uint32_t{1} << i;
          ms.val[k] = mask;
        }
        for (std::uint64_t r = 0; r < rmax; ++r) {
          if (++checked > bounds.budget)
            throw BudgetExceeded(
                "countermodel search budget exhausted after " +
                    std::to_string(bounds.budget) + " models",
                bounds.budget);
          for (int c = 0; c < a; ++c)
            for (int i = 0; i < n; ++i) {
              std::uint32_t mask = 0;
              for (int j = 0; j < n; ++j) {
                std::size_t bit =
                    (static_cast<std::size_t>(c) * n + i) * n + j;
                if (r & (std::uint64_t{1} << bit)) mask |= std::uint32_t{1} << j;
              }
              ms.succ[static_cast<std::size_t>(c) * n + i] = mask;
            }
          std::uint32_t holds = ms.eval(cf);
          if (holds == ms.full) continue;

          int state = __builtin_ctz(~holds & ms.full);
          Model model = build_model(ms, cf.letters);
          // Cross-check with the reference evaluator before reporting.
          if (valid_on(model, f))
            throw Error("countermodel self-check failed");
          return Countermodel{std::move(model),
                              "s" + std::to_string(state + 1), checked};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace khm
