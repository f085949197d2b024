#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "tracekit/cascade/gcs.hpp"

namespace tracekit {

// U_2 has states 1 and 2, stored as bits 0 and 1, and the resets r_1, r_2.
enum class ResetAction : std::uint8_t { Keep, ToLow, ToHigh };

// Read access to the bits of earlier stages, as seen by a stage when it
// processes an event. Which stages are visible depends on how the chain is
// realized: in a local cascade only stages located in loc(a), in a global
// cascade sequence all of them.
class StageView {
 public:
  enum class Mode { Flat, LocalDeco, GlobalDeco, Assigned };

  StageView(Mode mode, StateView data, const std::vector<ProcessId>& stage_process, std::size_t n,
            std::size_t input_width, const std::vector<ProcessId>* loc)
      : mode_(mode), data_(data), stage_process_(stage_process), n_(n), input_width_(input_width), loc_(loc) {}

  bool bit(std::size_t stage) const {
    const ProcessId p = stage_process_[stage];
    switch (mode_) {
      case Mode::Flat: return data_[stage * n_ + p] != 0;
      case Mode::GlobalDeco: return data_[input_width_ + stage * n_ + p] != 0;
      case Mode::Assigned: return data_[stage] != 0;
      case Mode::LocalDeco: {
        auto it = std::find(loc_->begin(), loc_->end(), p);
        if (it == loc_->end()) fail(ErrorCode::InvalidArgument, "stage reads a process outside loc(a)");
        return data_[input_width_ + stage * loc_->size() + static_cast<std::size_t>(it - loc_->begin())] != 0;
      }
    }
    return false;
  }

 private:
  Mode mode_;
  StateView data_;
  const std::vector<ProcessId>& stage_process_;
  std::size_t n_, input_width_;
  const std::vector<ProcessId>* loc_;
};

// Rule of a localized reset stage, called for letters a with process in
// loc(a). `input` is the input decoration of the letter.
using ResetRule = std::function<ResetAction(Letter, DecorationView input, const StageView&)>;

struct ResetStage {
  ProcessId process = 0;
  bool initial_high = false;
  std::vector<std::size_t> reads;  // earlier stages the rule may consult
  bool global_reads = false;       // reads stages outside loc(a)
  ResetRule rule;
  std::string label;
};

// Sequence of U_2 stages, each localized at one process. Stage k reads the
// bits of the stages before it.
class ResetChain {
 public:
  ResetChain(AlphabetPtr alphabet, std::size_t input_width = 0)
      : alphabet_(std::move(alphabet)), input_width_(input_width) {}

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t input_width() const { return input_width_; }
  const std::vector<ResetStage>& stages() const { return stages_; }
  std::size_t size() const { return stages_.size(); }
  const std::vector<ProcessId>& stage_processes() const { return processes_; }
  bool has_global_reads() const {
    return std::any_of(stages_.begin(), stages_.end(), [](const ResetStage& s) { return s.global_reads; });
  }

  std::size_t add(ResetStage s) {
    for (auto r : s.reads)
      if (r >= stages_.size()) fail(ErrorCode::InvalidArgument, "stage reads a later stage");
    processes_.push_back(s.process);
    stages_.push_back(std::move(s));
    return stages_.size() - 1;
  }

  // Product of all stages as one automaton; component k holds stage k.
  AsyncAutomaton flatten() const {
    if (has_global_reads()) fail(ErrorCode::WrongFragment, "chain needs global decorations; realize it as a sequence");
    const std::size_t n = alphabet_->num_processes(), k = stages_.size();
    StateVector init(k * n, 0);
    std::vector<std::uint64_t> radix(k * n, 1);
    for (std::size_t m = 0; m < k; ++m) {
      init[m * n + processes_[m]] = stages_[m].initial_high;
      radix[m * n + processes_[m]] = 2;
    }
    auto self = *this;
    StepFn step = [self, n](Letter a, DecorationView deco, StateRef state) {
      const StateVector pre(state.begin(), state.end());
      const ProcessSet la = self.alphabet_->loc(a);
      const StageView view(StageView::Mode::Flat, pre, self.processes_, n, 0, nullptr);
      for (std::size_t m = 0; m < self.stages_.size(); ++m) {
        if (!la.contains(self.processes_[m])) continue;
        apply(self.stages_[m].rule(a, deco, view), state[m * n + self.processes_[m]]);
      }
    };
    return AsyncAutomaton(alphabet_, k, init, radix, std::move(step), namer());
  }

  // Each stage as its own automaton over Sigma x_loc (states of earlier stages).
  CascadeChain as_cascade_chain() const {
    if (has_global_reads()) fail(ErrorCode::WrongFragment, "chain needs global decorations");
    std::vector<AsyncAutomaton> out;
    for (std::size_t m = 0; m < stages_.size(); ++m) out.push_back(stage_automaton(m, StageView::Mode::LocalDeco));
    return CascadeChain(std::move(out));
  }

  // Each stage as its own automaton over Sigma x (global states of earlier stages).
  GlobalCascadeSequence as_gcs() const {
    GlobalCascadeSequence seq;
    for (std::size_t m = 0; m < stages_.size(); ++m) seq.stages.push_back(stage_automaton(m, StageView::Mode::GlobalDeco));
    return seq;
  }

  // Bit of stage m in a flattened global state, or in concatenated sequence
  // states (both place stage m at offset m * n).
  bool bit(StateView state, std::size_t m) const { return state[m * alphabet_->num_processes() + processes_[m]] != 0; }

 private:
  static void apply(ResetAction act, std::uint64_t& cell) {
    if (act == ResetAction::ToLow) cell = 0;
    if (act == ResetAction::ToHigh) cell = 1;
  }

  StateNamer namer() const {
    auto procs = processes_;
    return [procs](std::size_t c, ProcessId i, std::uint64_t v) -> std::string {
      if (c < procs.size() && procs[c] != i) return "-";
      return v ? "2" : "1";
    };
  }

  AsyncAutomaton stage_automaton(std::size_t m, StageView::Mode mode) const {
    const std::size_t n = alphabet_->num_processes();
    const ProcessId p = processes_[m];
    StateVector init(n, 0);
    init[p] = stages_[m].initial_high;
    std::vector<std::uint64_t> radix(n, 1);
    radix[p] = 2;
    auto alphabet = alphabet_;
    auto procs = processes_;
    const std::size_t in_w = input_width_;
    ResetRule rule = stages_[m].rule;
    StepFn step = [alphabet, procs, rule, p, n, in_w, mode](Letter a, DecorationView deco, StateRef state) {
      if (!alphabet->loc(a).contains(p)) return;
      const StageView view(mode, deco, procs, n, in_w, &alphabet->loc_list(a));
      apply(rule(a, deco.subspan(0, in_w), view), state[p]);
    };
    StateNamer namer = [p](std::size_t, ProcessId i, std::uint64_t v) -> std::string {
      if (i != p) return "-";
      return v ? "2" : "1";
    };
    return AsyncAutomaton(alphabet_, 1, init, radix, std::move(step), std::move(namer));
  }

  AlphabetPtr alphabet_;
  std::size_t input_width_;
  std::vector<ResetStage> stages_;
  std::vector<ProcessId> processes_;
};

// Acceptance condition of a chain as a predicate over stage bits.
struct BitPredicate {
  std::vector<std::size_t> reads;
  std::function<bool(const std::function<bool(std::size_t)>& bit)> eval;
};

struct CompiledChain {
  ResetChain chain;
  BitPredicate accept;

  AcceptingSet accepting_set() const {
    auto c = chain;
    auto acc = accept;
    return AcceptingSet([c, acc](StateView s) { return acc.eval([&](std::size_t m) { return c.bit(s, m); }); },
                        "chain acceptance");
  }
  AsyncAutomaton automaton() const { return chain.flatten().with_accepting(accepting_set()); }
};

// Reads a general chain of explicit automata as a chain of localized resets.
// Every stage must have depth 1, two states at one process, singletons
// elsewhere, and act on that process by the identity or a constant.
inline ResetChain reset_chain_from(const CascadeChain& chain) {
  const auto& stages = chain.stages();
  const AlphabetPtr& sigma = stages.at(0).alphabet();
  const std::size_t n = sigma->num_processes();
  ResetChain out(sigma);
  std::vector<ProcessId> procs;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const AsyncAutomaton& st = stages[k];
    if (st.depth() != 1 || !st.is_finite()) fail(ErrorCode::NotResetChain, "stage " + std::to_string(k) + " is not a U_2 stage");
    std::vector<ProcessId> nontrivial;
    for (ProcessId i = 0; i < n; ++i)
      if (st.radix(0, i) > 1) nontrivial.push_back(i);
    if (nontrivial.size() != 1 || st.radix(0, nontrivial[0]) != 2)
      fail(ErrorCode::NotResetChain, "stage " + std::to_string(k) + " is not localized at one process with two states");
    const ProcessId p = nontrivial[0];
    procs.push_back(p);

    // Decoration of the stage as a function of the upstream bits on loc(a).
    auto deco_of = [procs, k](Letter, const std::vector<ProcessId>& locs, const std::function<bool(std::size_t)>& bit) {
      Decoration d;
      for (std::size_t m = 0; m < k; ++m)
        for (ProcessId i : locs) d.push_back(i == procs[m] && bit(m) ? 1 : 0);
      return d;
    };
    auto classify = [st, p, n](Letter a, const Decoration& d) {
      StateVector lo(n, 0), hi(n, 0);
      hi[p] = 1;
      st.step(a, d, lo);
      st.step(a, d, hi);
      if (lo[p] == 0 && hi[p] == 1) return ResetAction::Keep;
      if (lo[p] == 0 && hi[p] == 0) return ResetAction::ToLow;
      if (lo[p] == 1 && hi[p] == 1) return ResetAction::ToHigh;
      fail(ErrorCode::NotResetChain, "stage permutes its two states");
    };

    ResetStage rs;
    rs.process = p;
    rs.initial_high = st.initial()[p] != 0;
    for (std::size_t m = 0; m < k; ++m) rs.reads.push_back(m);
    for (Letter a : sigma->letters_of(p)) {
      const auto& locs = sigma->loc_list(a);
      std::vector<std::size_t> visible;
      for (std::size_t m = 0; m < k; ++m)
        if (sigma->loc(a).contains(procs[m])) visible.push_back(m);
      if (visible.size() > 20) fail(ErrorCode::SearchBudgetExceeded, "too many upstream stages to inspect");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << visible.size()); ++mask) {
        std::vector<char> bits(k, 0);
        for (std::size_t v = 0; v < visible.size(); ++v) bits[visible[v]] = (mask >> v) & 1U;
        classify(a, deco_of(a, locs, [&](std::size_t m) { return bits[m] != 0; }));
      }
    }
    rs.rule = [deco_of, classify, sigma](Letter a, DecorationView, const StageView& view) {
      const auto& locs = sigma->loc_list(a);
      return classify(a, deco_of(a, locs, [&](std::size_t m) { return view.bit(m); }));
    };
    rs.label = "stage " + std::to_string(k);
    out.add(std::move(rs));
  }
  return out;
}

}  // namespace tracekit
