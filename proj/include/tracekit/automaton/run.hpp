#pragma once

#include <vector>

#include "tracekit/automaton/automaton.hpp"
#include "tracekit/monoid/morphism.hpp"
#include "tracekit/trace/poset.hpp"

namespace tracekit {

// A trace whose events carry decorations, indexed by canonical event id.
// Decorated letters with the same base letter are dependent, so the canonical
// order of the base trace is also a linearization of the decorated trace.
struct LabelledTrace {
  Trace base;
  std::vector<Decoration> decorations;

  static LabelledTrace plain(const Trace& t) { return {t, std::vector<Decoration>(t.size())}; }

  static LabelledTrace from_linearization(const AlphabetPtr& alphabet, const std::vector<Letter>& letters,
                                          const std::vector<Decoration>& decos) {
    if (letters.size() != decos.size()) fail(ErrorCode::InvalidArgument, "one decoration per letter required");
    std::vector<std::size_t> order;
    auto nf = Trace::normal_form(*alphabet, letters, &order);
    LabelledTrace out{Trace::from_word(alphabet, nf), {}};
    for (auto k : order) out.decorations.push_back(decos[k]);
    return out;
  }

  std::size_t size() const { return base.size(); }
  Letter letter(EventId e) const { return base[e]; }
  const Decoration& decoration(EventId e) const { return decorations.at(e); }

  // Events of `keep` in canonical order, with their decorations.
  LabelledTrace restrict(const EventSet& keep) const {
    std::vector<Letter> w;
    std::vector<Decoration> d;
    for (EventId e = 0; e < size(); ++e)
      if (keep.test(e)) {
        w.push_back(base[e]);
        d.push_back(decorations[e]);
      }
    return from_linearization(base.alphabet(), w, d);
  }

  friend bool operator==(const LabelledTrace&, const LabelledTrace&) = default;
};

inline StateVector run_from(const AsyncAutomaton& a, StateVector state, const LabelledTrace& t) {
  require_same_alphabet(a.alphabet(), t.base.alphabet(), "automaton and trace over different alphabets");
  for (EventId e = 0; e < t.size(); ++e) a.step(t.letter(e), t.decoration(e), state);
  return state;
}

inline StateVector run(const AsyncAutomaton& a, const LabelledTrace& t) { return run_from(a, a.initial(), t); }
inline StateVector run(const AsyncAutomaton& a, const Trace& t) { return run(a, LabelledTrace::plain(t)); }

// Runs along a word; any linearization of a trace reaches the same state.
inline StateVector run_word(const AsyncAutomaton& a, const std::vector<Letter>& word) {
  StateVector state = a.initial();
  for (Letter l : word) a.step(l, {}, state);
  return state;
}

inline bool accepts(const AsyncAutomaton& a, const LabelledTrace& t) {
  if (!a.accepting()) fail(ErrorCode::NoAcceptingSet, "automaton has no accepting set");
  return a.accepting()->contains(run(a, t));
}
inline bool accepts(const AsyncAutomaton& a, const Trace& t) { return accepts(a, LabelledTrace::plain(t)); }

// Output map of a transducer: reads the letter, its decoration and the state
// before the event (only the loc(a) entries).
using OutputFn = std::function<Decoration(Letter, DecorationView deco, StateView pre_state)>;

struct Transducer {
  AsyncAutomaton automaton;
  OutputFn output;
};

// Appends the output of the transducer at each event to its decoration.
inline LabelledTrace apply_transducer(const Transducer& tr, const LabelledTrace& t) {
  require_same_alphabet(tr.automaton.alphabet(), t.base.alphabet(), "transducer and trace over different alphabets");
  LabelledTrace out = t;
  StateVector state = tr.automaton.initial();
  for (EventId e = 0; e < t.size(); ++e) {
    Decoration extra = tr.output(t.letter(e), t.decoration(e), state);
    out.decorations[e].insert(out.decorations[e].end(), extra.begin(), extra.end());
    tr.automaton.step(t.letter(e), t.decoration(e), state);
  }
  return out;
}

// chi decoration: each event additionally carries the loc(a)-part of the
// state reached on its strict past.
inline LabelledTrace chi(const AsyncAutomaton& a, const LabelledTrace& t) {
  Transducer tr{a, [&a](Letter l, DecorationView, StateView pre) { return a.local_part(l, pre); }};
  return apply_transducer(tr, t);
}
inline LabelledTrace chi(const AsyncAutomaton& a, const Trace& t) { return chi(a, LabelledTrace::plain(t)); }

// zeta decoration computed from the definition: each event additionally
// carries the full global state reached on its strict past.
inline LabelledTrace zeta_oracle(const AsyncAutomaton& a, const LabelledTrace& t) {
  TracePoset po(t.base);
  LabelledTrace out = t;
  for (EventId e = 0; e < t.size(); ++e) {
    StateVector s = run(a, t.restrict(po.strict_past(e)));
    out.decorations[e].insert(out.decorations[e].end(), s.begin(), s.end());
  }
  return out;
}
inline LabelledTrace zeta_oracle(const AsyncAutomaton& a, const Trace& t) { return zeta_oracle(a, LabelledTrace::plain(t)); }

// Enumerable global state space of a finite automaton. The local index at a
// process is mixed radix over components, component 0 least significant.
class StateSpace {
 public:
  explicit StateSpace(const AsyncAutomaton& a) : n_(a.num_processes()), depth_(a.depth()), radix_(a.radix()) {
    if (!a.is_finite()) fail(ErrorCode::InvalidArgument, "automaton has unbounded local state sets");
    std::vector<std::uint32_t> sizes;
    for (ProcessId i = 0; i < n_; ++i) {
      std::uint64_t s = 1;
      for (std::size_t c = 0; c < depth_; ++c) s *= radix_[c * n_ + i];
      if (s > (1U << 31)) fail(ErrorCode::SearchBudgetExceeded, "local state set too large");
      sizes.push_back(static_cast<std::uint32_t>(s));
    }
    shape_ = AtmShape(sizes);
  }

  const AtmShape& shape() const { return shape_; }
  std::uint32_t size() const { return shape_.carrier(); }

  std::uint32_t local_encode(ProcessId i, StateView s) const {
    std::uint64_t idx = 0, mul = 1;
    for (std::size_t c = 0; c < depth_; ++c) {
      idx += s[c * n_ + i] * mul;
      mul *= radix_[c * n_ + i];
    }
    return static_cast<std::uint32_t>(idx);
  }
  void local_decode(ProcessId i, std::uint32_t idx, StateRef out) const {
    for (std::size_t c = 0; c < depth_; ++c) {
      out[c * n_ + i] = idx % radix_[c * n_ + i];
      idx = static_cast<std::uint32_t>(idx / radix_[c * n_ + i]);
    }
  }
  std::uint32_t encode(StateView s) const {
    std::vector<std::uint32_t> local(n_);
    for (ProcessId i = 0; i < n_; ++i) local[i] = local_encode(i, s);
    return shape_.encode(local);
  }
  StateVector decode(std::uint32_t g) const {
    StateVector s(depth_ * n_);
    for (ProcessId i = 0; i < n_; ++i) local_decode(i, shape_.component(g, i), s);
    return s;
  }

 private:
  std::size_t n_, depth_;
  std::vector<std::uint64_t> radix_;
  AtmShape shape_;
};

// Global transition of a decorated letter as a transformation of the state space.
inline Transformation global_transition(const AsyncAutomaton& a, const StateSpace& space, Letter l,
                                        DecorationView deco) {
  return Transformation::from_function(space.size(), [&](std::uint32_t g) {
    StateVector s = space.decode(g);
    a.step(l, deco, s);
    return space.encode(s);
  });
}

struct TransitionStructure {
  StateSpace space;
  TraceMorphism morphism;  // into the atm on the global states
  Atm atm() const { return {space.shape(), morphism.image_monoid()}; }
};

// Letter a -> Delta_a over the plain alphabet.
inline TransitionStructure transition_atm(const AsyncAutomaton& a) {
  StateSpace space(a);
  TraceMorphism m{a.alphabet(), space.size(), {}, space.shape()};
  for (Letter l = 0; l < a.alphabet()->num_letters(); ++l) m.images.push_back(global_transition(a, space, l, {}));
  return {space, m};
}

// Decoration of letter (a, s_a) of Sigma x_loc S, where S is the state space
// of `upstream`, in the component-major layout used by cascades.
inline Decoration local_decoration(const AsyncAutomaton& upstream, const StateSpace& space, Letter a,
                                   std::uint32_t sa) {
  const ProcessSet la = upstream.alphabet()->loc(a);
  auto locals = space.shape().decode_part(sa, la);
  StateVector s(upstream.width(), 0);
  auto members = la.members();
  for (std::size_t k = 0; k < members.size(); ++k) space.local_decode(members[k], locals[k], s);
  return upstream.local_part(a, s);
}

// Transition morphism of `a`, an automaton over Sigma x_loc S with S the state
// space of `upstream`.
inline TransitionStructure transition_atm_over(const AsyncAutomaton& a, const AsyncAutomaton& upstream,
                                               const LocalProductAlphabet& letters) {
  StateSpace space(a), up(upstream);
  TraceMorphism m{letters.alphabet, space.size(), {}, space.shape()};
  for (const auto& [base, sa] : letters.parts)
    m.images.push_back(global_transition(a, space, base, local_decoration(upstream, up, base, sa)));
  return {space, m};
}

// Asynchronous automaton from an asynchronous morphism and an initial global state.
inline AsyncAutomaton from_morphism(const TraceMorphism& phi, std::uint32_t initial,
                                    std::vector<std::vector<std::string>> names = {}) {
  if (!phi.shape) fail(ErrorCode::InvalidArgument, "morphism target has no product structure");
  if (auto bad = phi.first_non_local_letter()) fail(ErrorCode::NotAMap, phi.alphabet->letter_name(*bad));
  const AtmShape& shape = *phi.shape;
  ExplicitAutomatonData d;
  d.alphabet = phi.alphabet;
  if (names.empty()) {
    for (ProcessId i = 0; i < shape.num_processes(); ++i) {
      std::vector<std::string> ns;
      for (std::uint32_t v = 0; v < shape.local_size(i); ++v) ns.push_back(std::to_string(v));
      names.push_back(ns);
    }
  }
  d.state_names = std::move(names);
  d.initial = shape.decode(initial);
  for (Letter a = 0; a < phi.alphabet->num_letters(); ++a) {
    const ProcessSet la = phi.alphabet->loc(a);
    TransitionRule r;
    for (std::uint32_t sa = 0; sa < shape.size_of(la); ++sa)
      r.table.push_back(shape.restrict(phi.images[a](shape.replace(0, la, sa)), la));
    d.rules.push_back({std::move(r)});
  }
  return make_explicit(std::move(d));
}

}  // namespace tracekit
