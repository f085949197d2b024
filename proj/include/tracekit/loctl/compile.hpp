#pragma once

#include <map>
#include <memory>
#include <set>
#include <unordered_map>
#include <utility>

#include "tracekit/cascade/cascade.hpp"
#include "tracekit/gossip/gossip.hpp"
#include "tracekit/loctl/reset_chain.hpp"
#include "tracekit/loctl/transforms.hpp"

namespace tracekit {

// Truth of an event formula at the current event, computed from the letter,
// its input decoration and the bits of earlier stages before the event.
struct EventReader {
  std::function<bool(Letter, DecorationView input, const StageView&)> eval;
  std::set<std::size_t> deps;
  bool global = false;  // reads stages outside loc(a)
};

namespace detail {

// Builds a reset chain bottom-up over a normalized formula. Every stage is
// created after the stages its rule reads, so the stage order is a post-order
// of the formula DAG.
class ChainCompiler {
 public:
  ChainCompiler(AlphabetPtr sigma, std::size_t input_width, bool allow_prev)
      : sigma_(std::move(sigma)), chain_(sigma_, input_width), allow_prev_(allow_prev) {}

  CompiledChain compile(const NodePtr& root) {
    BitPredicate acc = trace_predicate(root);
    return {chain_, acc};
  }

 private:
  static EventReader constant(bool v) {
    return {[v](Letter, DecorationView, const StageView&) { return v; }, {}, false};
  }

  EventReader reader(const NodePtr& n) {
    if (auto it = readers_.find(n.get()); it != readers_.end()) return it->second;
    EventReader r = build(n);
    readers_.emplace(n.get(), r);
    return r;
  }

  EventReader build(const NodePtr& n) {
    switch (n->kind) {
      case NodeKind::Atom: {
        const LetterClass c = n->atom;
        if (c.empty()) return constant(false);
        if (c.full()) return constant(true);
        return {[c](Letter a, DecorationView in, const StageView&) { return c.matches(a, in.empty() ? 0 : in[0]); },
                {},
                false};
      }
      case NodeKind::True: return constant(true);
      case NodeKind::False: return constant(false);
      case NodeKind::Not: {
        EventReader x = reader(n->left);
        return {[f = x.eval](Letter a, DecorationView in, const StageView& v) { return !f(a, in, v); }, x.deps, x.global};
      }
      case NodeKind::Or: {
        EventReader x = reader(n->left), y = reader(n->right);
        std::set<std::size_t> deps = x.deps;
        deps.insert(y.deps.begin(), y.deps.end());
        return {[f = x.eval, g = y.eval](Letter a, DecorationView in, const StageView& v) {
                  return f(a, in, v) || g(a, in, v);
                },
                deps, x.global || y.global};
      }
      case NodeKind::Since: {
        // The stage at j holds, after each j-event, whether the formula would
        // hold at the next j-event.
        const std::size_t stage = since_stage(n);
        const ProcessId j = n->i;
        auto sigma = sigma_;
        return {[stage, j, sigma](Letter a, DecorationView, const StageView& v) {
                  return sigma->loc(a).contains(j) && v.bit(stage);
                },
                {stage},
                chain_.stages()[stage].global_reads};
      }
      case NodeKind::Prev: {
        if (!allow_prev_) fail(ErrorCode::WrongFragment, "Y[i] needs a global cascade sequence");
        // Bit of the last-value stage at j on the strict past: the value of
        // the operand at the primary j-event, low when there is none.
        const std::size_t stage = last_value_stage(n->left, n->i);
        return {[stage](Letter, DecorationView, const StageView& v) { return v.bit(stage); }, {stage}, true};
      }
      case NodeKind::Yleq: fail(ErrorCode::WrongFragment, "Yleq constants need the gamma decoration");
      default: fail(ErrorCode::InvalidArgument, "not a normalized event formula");
    }
  }

  std::size_t since_stage(const NodePtr& n) {
    if (auto it = since_.find(n.get()); it != since_.end()) return it->second;
    EventReader l = reader(n->left), r = reader(n->right);
    ResetStage s;
    s.process = n->i;
    s.reads.assign(l.deps.begin(), l.deps.end());
    s.reads.insert(s.reads.end(), r.deps.begin(), r.deps.end());
    s.global_reads = l.global || r.global;
    s.rule = [lf = l.eval, rf = r.eval](Letter a, DecorationView in, const StageView& v) {
      if (rf(a, in, v)) return ResetAction::ToHigh;
      if (lf(a, in, v)) return ResetAction::Keep;
      return ResetAction::ToLow;
    };
    s.label = "since@" + sigma_->process_name(n->i);
    const std::size_t k = chain_.add(std::move(s));
    since_.emplace(n.get(), k);
    return k;
  }

  // Stage at process i holding the value of `inner` at the last i-event.
  std::size_t last_value_stage(const NodePtr& inner, ProcessId i) {
    const auto key = std::make_pair(inner.get(), i);
    if (auto it = last_.find(key); it != last_.end()) return it->second;
    EventReader x = reader(inner);
    ResetStage s;
    s.process = i;
    s.reads.assign(x.deps.begin(), x.deps.end());
    s.global_reads = x.global;
    s.rule = [f = x.eval](Letter a, DecorationView in, const StageView& v) {
      return f(a, in, v) ? ResetAction::ToHigh : ResetAction::ToLow;
    };
    s.label = "last@" + sigma_->process_name(i);
    const std::size_t k = chain_.add(std::move(s));
    last_.emplace(key, k);
    return k;
  }

  BitPredicate trace_predicate(const NodePtr& n) {
    switch (n->kind) {
      case NodeKind::Exists: {
        const std::size_t k = last_value_stage(n->left, n->i);
        return {{k}, [k](const std::function<bool(std::size_t)>& bit) { return bit(k); }};
      }
      case NodeKind::TNot: {
        BitPredicate x = trace_predicate(n->left);
        return {x.reads, [f = x.eval](const std::function<bool(std::size_t)>& bit) { return !f(bit); }};
      }
      case NodeKind::TOr: {
        BitPredicate x = trace_predicate(n->left), y = trace_predicate(n->right);
        std::vector<std::size_t> reads = x.reads;
        for (auto r : y.reads)
          if (std::find(reads.begin(), reads.end(), r) == reads.end()) reads.push_back(r);
        std::sort(reads.begin(), reads.end());
        return {reads, [f = x.eval, g = y.eval](const std::function<bool(std::size_t)>& bit) { return f(bit) || g(bit); }};
      }
      default: fail(ErrorCode::InvalidArgument, "not a normalized trace formula");
    }
  }

  AlphabetPtr sigma_;
  ResetChain chain_;
  bool allow_prev_;
  std::unordered_map<const Node*, EventReader> readers_;
  std::unordered_map<const Node*, std::size_t> since_;
  std::map<std::pair<const Node*, ProcessId>, std::size_t> last_;
};

inline CompiledChain compile_chain(const TraceFormula& f, const AlphabetPtr& sigma, std::size_t input_width,
                                   bool decorated, bool allow_prev) {
  NodePtr root = normalize(f.node(), sigma->num_letters(), decorated);
  ChainCompiler cc(sigma, input_width, allow_prev);
  return cc.compile(root);
}

}  // namespace detail

// Chain of localized resets for a formula built from letters, boolean
// connectives and S_i. The flattened chain accepts exactly the models.
inline CompiledChain compile_sprtl(const TraceFormula& f, const AlphabetPtr& sigma) {
  if (fragment_of(f.node()) != Fragment::SinceOnly)
    fail(ErrorCode::WrongFragment, "expected a formula with S_i only, got fragment " + std::string(fragment_name(fragment_of(f.node()))));
  return detail::compile_chain(f, sigma, 0, false, false);
}

struct RestrictedCompilation {
  CompiledChain chain;  // over Sigma x Gamma, gamma in decoration slot 0
  GossipTransducer gossip;
  AsyncAutomaton automaton;  // gossip o_r flattened chain, with acceptance
};

// Formulas with Yleq constants: the constants become gamma constraints and
// the chain reads gamma from the gossip transducer.
inline RestrictedCompilation compile_restricted(const TraceFormula& f, const AlphabetPtr& sigma) {
  const Fragment frag = fragment_of(f.node());
  if (frag != Fragment::SinceOnly && frag != Fragment::WithYleq)
    fail(ErrorCode::WrongFragment, "Y[i] is not allowed here, got fragment " + std::string(fragment_name(frag)));
  require_gamma_capacity(*sigma);
  TraceFormula lifted = lift_tilde(f, *sigma);
  CompiledChain chain = detail::compile_chain(lifted, sigma, 1, true, false);
  GossipTransducer g = vector_clock_gossip(sigma);
  AsyncAutomaton aut = restricted_cascade(g.transducer, chain.automaton());
  return {std::move(chain), std::move(g), std::move(aut)};
}

struct GcsCompilation {
  CompiledChain chain;
  GlobalCascadeSequence sequence;
  AcceptingSet accepting;  // over the concatenated final states of the stages

  bool accepts(const Trace& t) const { return gcs_accepts(sequence, accepting, t); }
};

// Formulas with Y_i: stages read the global states of earlier stages on the
// strict past of each event.
inline GcsCompilation compile_gcs(const TraceFormula& f, const AlphabetPtr& sigma) {
  const Fragment frag = fragment_of(f.node());
  if (frag != Fragment::SinceOnly && frag != Fragment::WithPrev)
    fail(ErrorCode::WrongFragment, "Yleq is not allowed here, got fragment " + std::string(fragment_name(frag)));
  CompiledChain chain = detail::compile_chain(f, sigma, 0, false, true);
  GlobalCascadeSequence seq = chain.chain.as_gcs();
  AcceptingSet acc = chain.accepting_set();
  return {std::move(chain), std::move(seq), std::move(acc)};
}

}  // namespace tracekit
