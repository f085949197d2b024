#pragma once

#include <deque>
#include <map>
#include <sstream>
#include <string>

#include "tracekit/automaton/automaton.hpp"
#include "tracekit/trace/poset.hpp"

namespace tracekit::io {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Global states reachable from the initial state under plain letters.
// Parallel edges share one label.
inline std::string automaton_dot(const AsyncAutomaton& a, std::size_t max_states = 10000) {
  const DistributedAlphabet& sigma = *a.alphabet();
  std::map<StateVector, std::size_t> id;
  std::deque<StateVector> todo;
  std::map<std::pair<std::size_t, std::size_t>, std::string> edges;
  id.emplace(a.initial(), 0);
  todo.push_back(a.initial());
  while (!todo.empty()) {
    StateVector s = todo.front();
    todo.pop_front();
    const std::size_t from = id.at(s);
    for (Letter l = 0; l < sigma.num_letters(); ++l) {
      StateVector t = s;
      a.step(l, {}, t);
      auto [it, fresh] = id.emplace(t, id.size());
      if (fresh) {
        if (id.size() > max_states) fail(ErrorCode::SearchBudgetExceeded, "too many reachable states to draw");
        todo.push_back(t);
      }
      auto& label = edges[{from, it->second}];
      label += (label.empty() ? "" : ",") + sigma.letter_name(l);
    }
  }
  std::ostringstream os;
  os << "digraph automaton {\n  rankdir=LR;\n  start [shape=point];\n";
  for (const auto& [s, k] : id) {
    const bool acc = a.accepting() && a.accepting()->contains(s);
    os << "  s" << k << " [label=\"" << dot_escape(a.state_name(s)) << "\", shape=" << (acc ? "doublecircle" : "circle")
       << "];\n";
  }
  os << "  start -> s0;\n";
  for (const auto& [e, label] : edges) os << "  s" << e.first << " -> s" << e.second << " [label=\"" << dot_escape(label) << "\"];\n";
  os << "}\n";
  return os.str();
}

// Hasse diagram of a trace; events are labelled "<index>:<letter>".
inline std::string poset_dot(const TracePoset& p) {
  const DistributedAlphabet& sigma = *p.alphabet();
  std::ostringstream os;
  os << "digraph trace {\n  rankdir=LR;\n";
  for (EventId e = 0; e < p.size(); ++e)
    os << "  e" << e << " [label=\"" << e << ":" << dot_escape(sigma.letter_name(p.label(e))) << "\"];\n";
  for (EventId f = 0; f < p.size(); ++f)
    for (EventId e = 0; e < f; ++e) {
      if (!p.less(e, f)) continue;
      bool covered = false;
      for (EventId g = e + 1; g < f && !covered; ++g) covered = p.less(e, g) && p.less(g, f);
      if (!covered) os << "  e" << e << " -> e" << f << ";\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace tracekit::io
