#pragma once

#include <unordered_map>
#include <vector>

#include "tracekit/automaton/run.hpp"
#include "tracekit/loctl/formula.hpp"
#include "tracekit/trace/poset.hpp"

namespace tracekit {

// Direct evaluation of formulas on one trace. Values of event formulas are
// computed for all events at once and memoized per DAG node. Decorated atoms
// read gamma from slot `gamma_slot` of the event decoration.
class Evaluator {
 public:
  explicit Evaluator(const LabelledTrace& t, std::size_t gamma_slot = 0)
      : trace_(t), po_(t.base), gamma_slot_(gamma_slot) {}

  const TracePoset& poset() const { return po_; }

  const std::vector<char>& values(const NodePtr& n) {
    if (auto it = memo_.find(n.get()); it != memo_.end()) return it->second;
    std::vector<char> v = compute(n);
    return memo_.emplace(n.get(), std::move(v)).first->second;
  }

  bool at(const EventFormula& f, EventId e) {
    if (e >= trace_.size()) fail(ErrorCode::UnknownEvent, "event " + std::to_string(e));
    return values(f.node())[e];
  }

  bool holds(const NodePtr& n) {
    switch (n->kind) {
      case NodeKind::Exists: {
        auto last = po_.last_event(n->i);
        return last && values(n->left)[*last];
      }
      case NodeKind::TNot: return !holds(n->left);
      case NodeKind::TOr: return holds(n->left) || holds(n->right);
      case NodeKind::TAnd: return holds(n->left) && holds(n->right);
      case NodeKind::TImplies: return !holds(n->left) || holds(n->right);
      default: fail(ErrorCode::InvalidArgument, "not a trace formula");
    }
  }

 private:
  std::vector<char> compute(const NodePtr& n) {
    const std::size_t size = trace_.size();
    std::vector<char> v(size, 0);
    switch (n->kind) {
      case NodeKind::Atom:
        for (EventId e = 0; e < size; ++e) {
          Gamma g = 0;
          if (n->atom.decorated) g = trace_.decoration(e).at(gamma_slot_);
          v[e] = n->atom.matches(trace_.letter(e), g);
        }
        break;
      case NodeKind::True: std::fill(v.begin(), v.end(), 1); break;
      case NodeKind::False: break;
      case NodeKind::Not: {
        const auto& a = values(n->left);
        for (EventId e = 0; e < size; ++e) v[e] = !a[e];
        break;
      }
      case NodeKind::Or:
      case NodeKind::And:
      case NodeKind::Implies: {
        const auto a = values(n->left);
        const auto& b = values(n->right);
        for (EventId e = 0; e < size; ++e)
          v[e] = n->kind == NodeKind::Or ? (a[e] || b[e]) : n->kind == NodeKind::And ? (a[e] && b[e]) : (!a[e] || b[e]);
        break;
      }
      case NodeKind::Yleq:
        for (EventId e = 0; e < size; ++e) {
          auto ei = po_.primary_event(e, n->i), ej = po_.primary_event(e, n->j);
          v[e] = ei && ej && po_.leq(*ei, *ej);
        }
        break;
      case NodeKind::Prev: {
        const auto& a = values(n->left);
        for (EventId e = 0; e < size; ++e) {
          auto ei = po_.primary_event(e, n->i);
          v[e] = ei && a[*ei];
        }
        break;
      }
      case NodeKind::Since: {
        // e is an i-event and some earlier i-event f satisfies the right
        // operand while every i-event strictly between f and e satisfies the left.
        const auto l = values(n->left);
        const auto& r = values(n->right);
        const auto& chain = po_.chain(n->i);
        for (std::size_t k = 0; k < chain.size(); ++k) {
          bool ok = false;
          for (std::size_t f = 0; f < k && !ok; ++f) {
            if (!r[chain[f]]) continue;
            bool between = true;
            for (std::size_t g = f + 1; g < k && between; ++g) between = l[chain[g]];
            ok = between;
          }
          v[chain[k]] = ok;
        }
        break;
      }
      default: fail(ErrorCode::InvalidArgument, "not an event formula");
    }
    return v;
  }

  const LabelledTrace& trace_;
  TracePoset po_;
  std::size_t gamma_slot_;
  std::unordered_map<const Node*, std::vector<char>> memo_;
};

inline bool eval(const TraceFormula& f, const LabelledTrace& t, std::size_t gamma_slot = 0) {
  Evaluator ev(t, gamma_slot);
  return ev.holds(f.node());
}
inline bool eval(const TraceFormula& f, const Trace& t) { return eval(f, LabelledTrace::plain(t)); }

inline bool eval(const EventFormula& f, const LabelledTrace& t, EventId e, std::size_t gamma_slot = 0) {
  Evaluator ev(t, gamma_slot);
  return ev.at(f, e);
}
inline bool eval(const EventFormula& f, const Trace& t, EventId e) { return eval(f, LabelledTrace::plain(t), e); }

}  // namespace tracekit
