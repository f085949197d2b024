#pragma once

#include <vector>

#include "tracekit/cascade/cascade.hpp"

namespace tracekit {

// Global cascade sequence (A_1, ..., A_n): A_k reads each letter decorated by
// the global states of A_1, ..., A_{k-1} on the strict past of the event.
// Decorations of stage k are [input, g_1, ..., g_{k-1}].
struct GlobalCascadeSequence {
  std::vector<AsyncAutomaton> stages;
};

// Final global state of each stage; also returns the zeta_seq decoration
// of the input (input decoration followed by every stage's global state).
struct GcsRun {
  std::vector<StateVector> finals;
  LabelledTrace decorated;
};

inline GcsRun gcs_execute(const GlobalCascadeSequence& seq, const LabelledTrace& t) {
  GcsRun r;
  LabelledTrace cur = t;
  for (const auto& stage : seq.stages) {
    r.finals.push_back(run(stage, cur));
    cur = zeta_oracle(stage, cur);
  }
  r.decorated = std::move(cur);
  return r;
}

inline std::vector<StateVector> gcs_run(const GlobalCascadeSequence& seq, const LabelledTrace& t) {
  return gcs_execute(seq, t).finals;
}
inline std::vector<StateVector> gcs_run(const GlobalCascadeSequence& seq, const Trace& t) {
  return gcs_run(seq, LabelledTrace::plain(t));
}

inline StateVector concat_states(const std::vector<StateVector>& parts) {
  StateVector out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Accepting set of a sequence, over the concatenated final global states.
inline bool gcs_accepts(const GlobalCascadeSequence& seq, const AcceptingSet& finals, const LabelledTrace& t) {
  return finals.contains(concat_states(gcs_run(seq, t)));
}
inline bool gcs_accepts(const GlobalCascadeSequence& seq, const AcceptingSet& finals, const Trace& t) {
  return gcs_accepts(seq, finals, LabelledTrace::plain(t));
}

// Chain (A_1, ..., A_n) as the sequence (A_1, hat A_2, ..., hat A_n).
inline GlobalCascadeSequence lift_chain(const CascadeChain& chain, std::size_t input_width = 0) {
  GlobalCascadeSequence seq;
  std::vector<std::size_t> depths;
  for (const auto& stage : chain.stages()) {
    seq.stages.push_back(lift_hat(stage, depths, input_width));
    depths.push_back(stage.depth());
  }
  return seq;
}

}  // namespace tracekit
