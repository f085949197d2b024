#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "tracekit/automaton/run.hpp"

namespace tracekit {

inline StateNamer concat_namer(const AsyncAutomaton& first, const AsyncAutomaton& second) {
  const std::size_t d1 = first.depth();
  return [first, second, d1](std::size_t c, ProcessId i, std::uint64_t v) {
    return c < d1 ? first.value_name(c, i, v) : second.value_name(c - d1, i, v);
  };
}

// Local cascade product: `second` reads each letter decorated with the
// loc(a)-part of the state of `first` before the event.
inline AsyncAutomaton local_cascade(const AsyncAutomaton& first, const AsyncAutomaton& second) {
  require_same_alphabet(first.alphabet(), second.alphabet(), "cascade factors over different alphabets");
  const std::size_t w1 = first.width();
  StateVector init = first.initial();
  init.insert(init.end(), second.initial().begin(), second.initial().end());
  std::vector<std::uint64_t> radix = first.radix();
  radix.insert(radix.end(), second.radix().begin(), second.radix().end());
  StepFn step = [first, second, w1](Letter a, DecorationView deco, StateRef state) {
    Decoration inner(deco.begin(), deco.end());
    Decoration part = first.local_part(a, state.subspan(0, w1));
    inner.insert(inner.end(), part.begin(), part.end());
    first.step(a, deco, state.subspan(0, w1));
    second.step(a, inner, state.subspan(w1));
  };
  return AsyncAutomaton(first.alphabet(), first.depth() + second.depth(), std::move(init), std::move(radix),
                        std::move(step), concat_namer(first, second));
}

// Stage k + 1 reads letters decorated by the local states of stages 1..k.
class CascadeChain {
 public:
  CascadeChain() = default;
  explicit CascadeChain(std::vector<AsyncAutomaton> stages) : stages_(std::move(stages)) {
    if (stages_.empty()) fail(ErrorCode::InvalidArgument, "empty cascade chain");
    for (const auto& s : stages_) require_same_alphabet(s.alphabet(), stages_[0].alphabet(), "chain stage alphabet");
  }

  const std::vector<AsyncAutomaton>& stages() const { return stages_; }
  std::size_t size() const { return stages_.size(); }

  // Left-nested product, computed once.
  const AsyncAutomaton& flattened() const {
    std::call_once(cache_->once, [this] {
      AsyncAutomaton acc = stages_[0];
      for (std::size_t k = 1; k < stages_.size(); ++k) acc = local_cascade(acc, stages_[k]);
      cache_->product = std::move(acc);
    });
    return cache_->product;
  }

 private:
  struct Cache {
    std::once_flag once;
    AsyncAutomaton product;
  };
  std::vector<AsyncAutomaton> stages_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// B over Sigma x_loc S becomes an automaton over Sigma x S: it reads the full
// global states of the upstream stages and keeps only their loc(a)-parts.
// `upstream_depths` lists the depth of each upstream stage; `input_width` is
// the width of the decoration preceding them.
inline AsyncAutomaton lift_hat(const AsyncAutomaton& b, std::vector<std::size_t> upstream_depths,
                               std::size_t input_width = 0) {
  const std::size_t n = b.num_processes();
  auto alphabet = b.alphabet();
  StepFn step = [b, upstream_depths, input_width, n, alphabet](Letter a, DecorationView deco, StateRef state) {
    Decoration local(deco.begin(), deco.begin() + static_cast<std::ptrdiff_t>(input_width));
    std::size_t offset = input_width;
    const auto& locs = alphabet->loc_list(a);
    for (std::size_t d : upstream_depths) {
      for (std::size_t c = 0; c < d; ++c)
        for (ProcessId i : locs) local.push_back(deco[offset + c * n + i]);
      offset += d * n;
    }
    b.step(a, local, state);
  };
  AsyncAutomaton out(b.alphabet(), b.depth(), b.initial(), b.radix(), std::move(step), b.namer());
  if (b.accepting()) out = out.with_accepting(*b.accepting());
  return out;
}

// Restricted cascade G o_r A: A reads each letter decorated by the output of
// the transducer G at that event.
inline AsyncAutomaton restricted_cascade(const Transducer& g, const AsyncAutomaton& a) {
  require_same_alphabet(g.automaton.alphabet(), a.alphabet(), "restricted cascade over different alphabets");
  const AsyncAutomaton& ga = g.automaton;
  const std::size_t wg = ga.width();
  StateVector init = ga.initial();
  init.insert(init.end(), a.initial().begin(), a.initial().end());
  std::vector<std::uint64_t> radix = ga.radix();
  radix.insert(radix.end(), a.radix().begin(), a.radix().end());
  OutputFn out = g.output;
  StepFn step = [ga, a, out, wg](Letter l, DecorationView deco, StateRef state) {
    Decoration inner(deco.begin(), deco.end());
    Decoration extra = out(l, deco, state.subspan(0, wg));
    inner.insert(inner.end(), extra.begin(), extra.end());
    ga.step(l, deco, state.subspan(0, wg));
    a.step(l, inner, state.subspan(wg));
  };
  AsyncAutomaton result(a.alphabet(), ga.depth() + a.depth(), std::move(init), std::move(radix), std::move(step),
                        concat_namer(ga, a));
  if (a.accepting()) {
    AcceptingSet inner = *a.accepting();
    result = result.with_accepting(AcceptingSet([inner, wg](StateView s) { return inner.contains(s.subspan(wg)); },
                                                inner.description()));
  }
  return result;
}

// Every global state of a finite automaton accepted by its accepting set.
inline std::vector<StateVector> explicit_finals(const AsyncAutomaton& a) {
  if (!a.accepting()) fail(ErrorCode::NoAcceptingSet, "automaton has no accepting set");
  StateSpace space(a);
  std::vector<StateVector> out;
  for (std::uint32_t g = 0; g < space.size(); ++g) {
    StateVector s = space.decode(g);
    if (a.accepting()->contains(s)) out.push_back(std::move(s));
  }
  return out;
}

struct WppTerm {
  AsyncAutomaton first;   // over the input alphabet, accepting one state
  AsyncAutomaton second;  // over the chi-decorated alphabet, accepting one state
};

// L(A o_l B, F) is the union over (s, q) in F of
// L(A, {s}) intersected with the chi_A-preimage of L(B, {q}).
inline std::vector<WppTerm> wpp_decompose(const AsyncAutomaton& first, const AsyncAutomaton& second,
                                          const std::vector<StateVector>& finals) {
  const std::size_t w1 = first.width();
  std::vector<WppTerm> terms;
  for (const auto& f : finals) {
    if (f.size() != w1 + second.width()) fail(ErrorCode::InvalidArgument, "final state of wrong width");
    StateVector s(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(w1));
    StateVector q(f.begin() + static_cast<std::ptrdiff_t>(w1), f.end());
    terms.push_back({first.with_accepting(AcceptingSet::states({s})), second.with_accepting(AcceptingSet::states({q}))});
  }
  return terms;
}

inline bool wpp_accepts(const std::vector<WppTerm>& terms, const LabelledTrace& t) {
  for (const auto& term : terms)
    if (accepts(term.first, t) && accepts(term.second, chi(term.first, t))) return true;
  return false;
}

}  // namespace tracekit
