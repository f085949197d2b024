#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tracekit/trace/alphabet.hpp"

namespace tracekit {

// A global state of an automaton with depth d over n processes is stored as a
// flat vector of d * n values; entry [c * n + i] is component c of the local
// state at process i. Products of automata concatenate components.
using StateVector = std::vector<std::uint64_t>;
using Decoration = std::vector<std::uint64_t>;
using DecorationView = std::span<const std::uint64_t>;
using StateView = std::span<const std::uint64_t>;
using StateRef = std::span<std::uint64_t>;

// Updates the loc(a) entries of the global state in place. Implementations
// read and write only the components of processes in loc(a); `deco` is the
// decoration of the input letter (empty for plain letters).
using StepFn = std::function<void(Letter, DecorationView deco, StateRef state)>;
using StateNamer = std::function<std::string(std::size_t component, ProcessId, std::uint64_t value)>;
using StatePredicate = std::function<bool(StateView)>;

class AcceptingSet {
 public:
  AcceptingSet() = default;
  AcceptingSet(StatePredicate pred, std::string description)
      : pred_(std::move(pred)), description_(std::move(description)) {}

  static AcceptingSet states(std::vector<StateVector> finals) {
    auto set = std::make_shared<std::set<StateVector>>(finals.begin(), finals.end());
    return AcceptingSet([set](StateView s) { return set->count(StateVector(s.begin(), s.end())) != 0; },
                        std::to_string(set->size()) + " explicit states");
  }
  // allowed[k] lists admissible values of entry k; an empty list admits anything.
  static AcceptingSet conjunctive(std::vector<std::vector<std::uint64_t>> allowed) {
    auto a = std::make_shared<std::vector<std::vector<std::uint64_t>>>(std::move(allowed));
    return AcceptingSet(
        [a](StateView s) {
          for (std::size_t k = 0; k < a->size(); ++k)
            if (!(*a)[k].empty() && std::find((*a)[k].begin(), (*a)[k].end(), s[k]) == (*a)[k].end()) return false;
          return true;
        },
        "conjunctive");
  }
  static AcceptingSet all() {
    return AcceptingSet([](StateView) { return true; }, "all");
  }

  bool contains(StateView s) const { return pred_(s); }
  const std::string& description() const { return description_; }

  AcceptingSet operator||(const AcceptingSet& o) const {
    auto l = pred_, r = o.pred_;
    return AcceptingSet([l, r](StateView s) { return l(s) || r(s); }, description_ + " or " + o.description_);
  }

 private:
  StatePredicate pred_;
  std::string description_;
};

// Asynchronous automaton over a base alphabet whose letters may carry
// decorations. Local state sets are products of `depth` components; radix
// (c, i) is the size of component c at process i, or 0 when the component is
// materialized lazily and unbounded in advance.
class AsyncAutomaton {
 public:
  AsyncAutomaton() = default;
  AsyncAutomaton(AlphabetPtr alphabet, std::size_t depth, StateVector initial, std::vector<std::uint64_t> radix,
                 StepFn step, StateNamer namer = {})
      : alphabet_(std::move(alphabet)),
        depth_(depth),
        initial_(std::move(initial)),
        radix_(std::move(radix)),
        step_(std::move(step)),
        namer_(std::move(namer)) {
    const std::size_t width = depth_ * alphabet_->num_processes();
    if (initial_.size() != width || radix_.size() != width)
      fail(ErrorCode::InvalidArgument, "initial state or radix has the wrong width");
  }

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t num_processes() const { return alphabet_->num_processes(); }
  std::size_t depth() const { return depth_; }
  std::size_t width() const { return initial_.size(); }
  const StateVector& initial() const { return initial_; }
  const std::vector<std::uint64_t>& radix() const { return radix_; }
  std::uint64_t radix(std::size_t component, ProcessId i) const { return radix_.at(component * num_processes() + i); }
  bool is_finite() const {
    return std::all_of(radix_.begin(), radix_.end(), [](std::uint64_t r) { return r > 0; });
  }

  void step(Letter a, DecorationView deco, StateRef state) const { step_(a, deco, state); }
  const StepFn& step_function() const { return step_; }

  const std::optional<AcceptingSet>& accepting() const { return accepting_; }
  AsyncAutomaton with_accepting(AcceptingSet f) const {
    AsyncAutomaton copy = *this;
    copy.accepting_ = std::move(f);
    return copy;
  }
  AsyncAutomaton without_accepting() const {
    AsyncAutomaton copy = *this;
    copy.accepting_.reset();
    return copy;
  }

  // loc(a)-part of a global state, component-major: for c, for i in loc(a).
  Decoration local_part(Letter a, StateView state) const {
    const auto& locs = alphabet_->loc_list(a);
    Decoration out;
    out.reserve(depth_ * locs.size());
    for (std::size_t c = 0; c < depth_; ++c)
      for (ProcessId i : locs) out.push_back(state[c * num_processes() + i]);
    return out;
  }

  std::string value_name(std::size_t component, ProcessId i, std::uint64_t v) const {
    if (namer_) return namer_(component, i, v);
    return std::to_string(v);
  }
  std::string local_state_name(ProcessId i, StateView state) const {
    if (depth_ == 1) return value_name(0, i, state[i]);
    std::string s = "(";
    for (std::size_t c = 0; c < depth_; ++c) {
      if (c) s += ",";
      s += value_name(c, i, state[c * num_processes() + i]);
    }
    return s + ")";
  }
  std::string state_name(StateView state) const {
    std::string s = "(";
    for (ProcessId i = 0; i < num_processes(); ++i) {
      if (i) s += ", ";
      s += local_state_name(i, state);
    }
    return s + ")";
  }
  const StateNamer& namer() const { return namer_; }

 private:
  AlphabetPtr alphabet_;
  std::size_t depth_ = 0;
  StateVector initial_;
  std::vector<std::uint64_t> radix_;
  StepFn step_;
  StateNamer namer_;
  std::optional<AcceptingSet> accepting_;
};

// One table for letter a on S_loc(a), used when the decoration matches
// `pattern` (nullopt entries match anything; an empty pattern matches every
// decoration). S_loc(a) is indexed in mixed radix over loc(a) ascending with the
// first process least significant.
struct TransitionRule {
  std::vector<std::optional<std::uint64_t>> pattern;
  std::vector<std::uint32_t> table;

  bool matches(DecorationView deco) const {
    if (pattern.empty()) return true;
    if (pattern.size() != deco.size()) return false;
    for (std::size_t k = 0; k < pattern.size(); ++k)
      if (pattern[k] && *pattern[k] != deco[k]) return false;
    return true;
  }
};

// Explicit automaton with one component per process. The first matching rule
// of a letter applies; without one the letter leaves the state unchanged.
struct ExplicitAutomatonData {
  AlphabetPtr alphabet;
  std::vector<std::vector<std::string>> state_names;  // per process
  std::vector<std::uint32_t> initial;
  std::vector<std::vector<TransitionRule>> rules;  // per letter
};

inline std::uint32_t local_index(const ExplicitAutomatonData& d, Letter a, StateView state) {
  std::uint32_t idx = 0, mul = 1;
  for (ProcessId i : d.alphabet->loc_list(a)) {
    idx += static_cast<std::uint32_t>(state[i]) * mul;
    mul *= static_cast<std::uint32_t>(d.state_names[i].size());
  }
  return idx;
}

inline std::uint32_t local_space_size(const ExplicitAutomatonData& d, Letter a) {
  std::uint32_t n = 1;
  for (ProcessId i : d.alphabet->loc_list(a)) n *= static_cast<std::uint32_t>(d.state_names[i].size());
  return n;
}

inline AsyncAutomaton make_explicit(ExplicitAutomatonData data) {
  const auto& sigma = *data.alphabet;
  const std::size_t n = sigma.num_processes();
  if (data.state_names.size() != n || data.initial.size() != n)
    fail(ErrorCode::InvalidArgument, "one state list and one initial state per process required");
  for (ProcessId i = 0; i < n; ++i)
    if (data.state_names[i].empty() || data.initial[i] >= data.state_names[i].size())
      fail(ErrorCode::InvalidArgument, "bad state set at process " + sigma.process_name(i));
  data.rules.resize(sigma.num_letters());
  for (Letter a = 0; a < sigma.num_letters(); ++a)
    for (auto& r : data.rules[a]) {
      const std::uint32_t size = local_space_size(data, a);
      if (r.table.size() != size) fail(ErrorCode::InvalidArgument, "transition table of wrong size for " + sigma.letter_name(a));
      for (auto v : r.table)
        if (v >= size) fail(ErrorCode::InvalidArgument, "transition target out of range for " + sigma.letter_name(a));
    }
  auto shared = std::make_shared<const ExplicitAutomatonData>(std::move(data));
  StateVector init(shared->initial.begin(), shared->initial.end());
  std::vector<std::uint64_t> radix;
  for (const auto& names : shared->state_names) radix.push_back(names.size());
  StepFn step = [shared](Letter a, DecorationView deco, StateRef state) {
    for (const auto& rule : shared->rules[a]) {
      if (!rule.matches(deco)) continue;
      std::uint32_t target = rule.table[local_index(*shared, a, state)];
      for (ProcessId i : shared->alphabet->loc_list(a)) {
        const auto size = static_cast<std::uint32_t>(shared->state_names[i].size());
        state[i] = target % size;
        target /= size;
      }
      return;
    }
  };
  StateNamer namer = [shared](std::size_t, ProcessId i, std::uint64_t v) { return shared->state_names.at(i).at(v); };
  return AsyncAutomaton(shared->alphabet, 1, std::move(init), std::move(radix), std::move(step), std::move(namer));
}

// Table of a local map given as a function on the loc(a) local states.
inline std::vector<std::uint32_t> local_table(
    const ExplicitAutomatonData& d, Letter a,
    const std::function<std::vector<std::uint32_t>(const std::vector<std::uint32_t>&)>& f) {
  const auto& locs = d.alphabet->loc_list(a);
  const std::uint32_t size = local_space_size(d, a);
  std::vector<std::uint32_t> table(size);
  for (std::uint32_t idx = 0; idx < size; ++idx) {
    std::vector<std::uint32_t> in;
    std::uint32_t rest = idx;
    for (ProcessId i : locs) {
      const auto s = static_cast<std::uint32_t>(d.state_names[i].size());
      in.push_back(rest % s);
      rest /= s;
    }
    auto out = f(in);
    std::uint32_t t = 0, mul = 1;
    for (std::size_t k = 0; k < locs.size(); ++k) {
      t += out.at(k) * mul;
      mul *= static_cast<std::uint32_t>(d.state_names[locs[k]].size());
    }
    table[idx] = t;
  }
  return table;
}

}  // namespace tracekit
