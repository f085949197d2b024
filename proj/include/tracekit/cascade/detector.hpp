#pragma once

#include <memory>
#include <vector>

#include "tracekit/cascade/gcs.hpp"
#include "tracekit/gossip/gossip.hpp"

namespace tracekit {

using GlobalStateStore = Interner<StateVector, VectorHash>;

// Detector A^g of an automaton A. Each process holds (the id of) a global
// state of A; at a letter (a, gamma) the global state on the strict past is
// assembled from the loc(a) local states as directed by gamma.
struct GlobalStateDetector {
  AsyncAutomaton automaton;
  AsyncAutomaton target;
  std::shared_ptr<GlobalStateStore> store;

  StateVector decode(std::uint64_t id) const { return store->value(id); }

  // globalstate_(a, gamma)(q_a): process i copies its part from some j in
  // loc(a) with gamma(i, j) = 1, and keeps the initial part otherwise.
  StateVector assemble(Letter a, Gamma gamma, DecorationView ids) const {
    const std::size_t n = target.num_processes();
    const auto& locs = target.alphabet()->loc_list(a);
    StateVector s = target.initial();
    std::vector<StateVector> views;
    views.reserve(locs.size());
    for (std::size_t k = 0; k < locs.size(); ++k) views.push_back(decode(ids[k]));
    for (ProcessId i = 0; i < n; ++i)
      for (std::size_t k = 0; k < locs.size(); ++k)
        if (gamma_at(gamma, i, locs[k], n)) {
          for (std::size_t c = 0; c < target.depth(); ++c) s[c * n + i] = views[k][c * n + i];
          break;
        }
    return s;
  }
};

// Detectors for a whole sequence. Detector m reads [gamma, ids of detectors
// 1..m-1 on loc(a)], which is the decoration it receives as stage m of a
// local cascade over Sigma x Gamma.
inline std::vector<GlobalStateDetector> detector_chain(const GlobalCascadeSequence& seq) {
  std::vector<GlobalStateDetector> out;
  for (std::size_t m = 0; m < seq.stages.size(); ++m) {
    const AsyncAutomaton& target = seq.stages[m];
    const std::size_t n = target.num_processes();
    require_gamma_capacity(*target.alphabet());
    auto store = std::make_shared<GlobalStateStore>();
    const std::uint64_t init_id = store->intern(target.initial());
    std::vector<GlobalStateDetector> upstream = out;
    GlobalStateDetector self{AsyncAutomaton{}, target, store};
    auto alphabet = target.alphabet();
    StepFn step = [upstream, self, alphabet](Letter a, DecorationView deco, StateRef state) {
      const std::size_t len = alphabet->loc_list(a).size();
      const Gamma gamma = deco[0];
      Decoration inner;
      for (std::size_t r = 0; r < upstream.size(); ++r) {
        StateVector g = upstream[r].assemble(a, gamma, deco.subspan(1 + r * len, len));
        inner.insert(inner.end(), g.begin(), g.end());
      }
      Decoration own;
      for (ProcessId i : alphabet->loc_list(a)) own.push_back(state[i]);
      StateVector s = self.assemble(a, gamma, own);
      self.target.step(a, inner, s);
      const std::uint64_t id = self.store->intern(s);
      for (ProcessId i : alphabet->loc_list(a)) state[i] = id;
    };
    StateNamer namer = [self](std::size_t, ProcessId, std::uint64_t v) { return self.target.state_name(self.decode(v)); };
    self.automaton = AsyncAutomaton(alphabet, 1, StateVector(n, init_id), std::vector<std::uint64_t>(n, 0),
                                    std::move(step), std::move(namer));
    out.push_back(self);
  }
  return out;
}

inline GlobalStateDetector global_state_detector(const AsyncAutomaton& a) {
  return detector_chain(GlobalCascadeSequence{{a}})[0];
}

// Realization of a sequence by a restricted cascade of the gossip transducer
// with the detector chain. `simulation` maps a global state of the
// realization to the concatenated global states of the stages; `xi` outputs
// the same concatenation on the strict past of each event.
struct GossipRealization {
  AsyncAutomaton automaton;
  std::vector<GlobalStateDetector> detectors;
  GossipTransducer gossip;
  std::function<StateVector(StateView)> simulation;
  OutputFn xi;
};

inline GossipRealization gcs_compose(const GlobalCascadeSequence& seq) {
  if (seq.stages.empty()) fail(ErrorCode::InvalidArgument, "empty sequence");
  const AlphabetPtr& alphabet = seq.stages[0].alphabet();
  const std::size_t n = alphabet->num_processes();
  GossipRealization r;
  r.gossip = vector_clock_gossip(alphabet);
  r.detectors = detector_chain(seq);
  AsyncAutomaton chain = r.detectors[0].automaton;
  for (std::size_t m = 1; m < r.detectors.size(); ++m) chain = local_cascade(chain, r.detectors[m].automaton);
  r.automaton = restricted_cascade(r.gossip.transducer, chain);

  auto detectors = r.detectors;
  r.simulation = [detectors, n](StateView state) {
    StateVector out;
    for (std::size_t m = 0; m < detectors.size(); ++m) {
      const auto& target = detectors[m].target;
      StateVector s(target.width());
      for (ProcessId i = 0; i < n; ++i) {
        StateVector q = detectors[m].decode(state[(1 + m) * n + i]);
        for (std::size_t c = 0; c < target.depth(); ++c) s[c * n + i] = q[c * n + i];
      }
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  };
  OutputFn gamma_of = r.gossip.transducer.output;
  r.xi = [detectors, gamma_of, alphabet, n](Letter a, DecorationView deco, StateView pre) {
    const Gamma gamma = gamma_of(a, deco, pre.subspan(0, n))[0];
    Decoration out;
    for (std::size_t m = 0; m < detectors.size(); ++m) {
      Decoration ids;
      for (ProcessId i : alphabet->loc_list(a)) ids.push_back(pre[(1 + m) * n + i]);
      StateVector g = detectors[m].assemble(a, gamma, ids);
      out.insert(out.end(), g.begin(), g.end());
    }
    return out;
  };
  return r;
}

inline GossipRealization gossip_compose(const AsyncAutomaton& a) { return gcs_compose(GlobalCascadeSequence{{a}}); }

}  // namespace tracekit
