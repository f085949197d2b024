#pragma once

#include <vector>

#include "tracekit/loctl/compile.hpp"

namespace tracekit {

namespace detail {

// Event formula builders that fold boolean constants.
struct FormulaBuilder {
  NodePtr top = make_node(NodeKind::True);
  NodePtr bottom = make_node(NodeKind::False);

  static bool is(const NodePtr& n, NodeKind k) { return n->kind == k; }

  NodePtr neg(const NodePtr& x) const {
    if (is(x, NodeKind::True)) return bottom;
    if (is(x, NodeKind::False)) return top;
    if (is(x, NodeKind::Not)) return x->left;
    return make_node(NodeKind::Not, x);
  }
  NodePtr disj(const NodePtr& x, const NodePtr& y) const {
    if (is(x, NodeKind::True) || is(y, NodeKind::True)) return top;
    if (is(x, NodeKind::False)) return y;
    if (is(y, NodeKind::False)) return x;
    return make_node(NodeKind::Or, x, y);
  }
  NodePtr conj(const NodePtr& x, const NodePtr& y) const {
    if (is(x, NodeKind::False) || is(y, NodeKind::False)) return bottom;
    if (is(x, NodeKind::True)) return y;
    if (is(y, NodeKind::True)) return x;
    return make_node(NodeKind::And, x, y);
  }
  NodePtr since(const NodePtr& l, ProcessId p, const NodePtr& r) const {
    if (is(r, NodeKind::False)) return bottom;
    return make_node(NodeKind::Since, l, r, p);
  }
  NodePtr ite(const NodePtr& c, const NodePtr& x, const NodePtr& y) const {
    if (same_structure(x, y)) return x;
    if (is(x, NodeKind::True) && is(y, NodeKind::False)) return c;
    if (is(x, NodeKind::False) && is(y, NodeKind::True)) return neg(c);
    return disj(conj(c, x), conj(neg(c), y));
  }
};

// Trace formula with folded constants (node is null for a constant).
struct TraceTerm {
  NodePtr node;
  bool value = false;

  static TraceTerm constant(bool v) { return {nullptr, v}; }
};

inline TraceTerm tneg(const TraceTerm& x) {
  if (!x.node) return TraceTerm::constant(!x.value);
  if (x.node->kind == NodeKind::TNot) return {x.node->left};
  return {make_node(NodeKind::TNot, x.node)};
}
inline TraceTerm tdisj(const TraceTerm& x, const TraceTerm& y) {
  if (!x.node) return x.value ? x : y;
  if (!y.node) return y.value ? y : x;
  return {make_node(NodeKind::TOr, x.node, y.node)};
}
inline TraceTerm tconj(const TraceTerm& x, const TraceTerm& y) { return tneg(tdisj(tneg(x), tneg(y))); }
inline TraceTerm tite(const TraceTerm& c, const TraceTerm& x, const TraceTerm& y) {
  if (!x.node && !y.node && x.value == y.value) return x;
  if (x.node && y.node && same_structure(x.node, y.node)) return x;
  return tdisj(tconj(c, x), tconj(tneg(c), y));
}

inline TraceFormula close_term(const TraceTerm& t) {
  if (t.node) return TraceFormula(t.node);
  // E[p1](false) never holds.
  NodePtr never = make_node(NodeKind::Exists, make_node(NodeKind::False), nullptr, 0);
  return TraceFormula(t.value ? make_node(NodeKind::TNot, never) : never);
}

}  // namespace detail

// Formula defining the language of a reset chain over a plain alphabet.
// Stage k at process p is described by event formulas R1, R2 for its reset
// events; its bit before an event on p is
//   Pre = ((!R1) S_p R2) | (init & !(true S_p (R1 | R2)))
// and the acceptance condition is a decision tree over the final bits.
inline TraceFormula decompile_sprtl(const CompiledChain& compiled, std::size_t budget = std::size_t{1} << 20) {
  using namespace detail;
  const ResetChain& chain = compiled.chain;
  if (chain.has_global_reads()) fail(ErrorCode::NotResetChain, "stage reads global states");
  if (chain.input_width() != 0) fail(ErrorCode::NotResetChain, "chain over a decorated alphabet");
  const DistributedAlphabet& sigma = *chain.alphabet();
  const auto& procs = chain.stage_processes();
  FormulaBuilder fb;
  std::size_t spent = 0;
  auto charge = [&](std::size_t amount) {
    spent += amount;
    if (spent > budget) fail(ErrorCode::SearchBudgetExceeded, "decision trees exceed the budget");
  };

  std::vector<NodePtr> pre(chain.size());
  std::vector<detail::TraceTerm> fin(chain.size());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const ResetStage& st = chain.stages()[k];
    const ProcessId p = st.process;
    NodePtr r1 = fb.bottom, r2 = fb.bottom;
    std::vector<std::pair<NodePtr, std::vector<Letter>>> groups1, groups2;
    auto add_group = [](std::vector<std::pair<NodePtr, std::vector<Letter>>>& groups, const NodePtr& tree, Letter a) {
      if (tree->kind == NodeKind::False) return;
      for (auto& g : groups)
        if (same_structure(g.first, tree)) {
          g.second.push_back(a);
          return;
        }
      groups.push_back({tree, {a}});
    };
    for (Letter a : sigma.letters_of(p)) {
      std::vector<std::size_t> visible;
      for (auto m : st.reads)
        if (sigma.loc(a).contains(procs[m]) && std::find(visible.begin(), visible.end(), m) == visible.end())
          visible.push_back(m);
      if (visible.size() >= 20) fail(ErrorCode::SearchBudgetExceeded, "stage reads too many stages");
      charge(std::size_t{1} << visible.size());
      StateVector assigned(k, 0);
      const std::vector<ProcessId>& locs = sigma.loc_list(a);
      // Returns (reset-low tree, reset-high tree) for the remaining variables.
      auto trees = [&](auto&& self, std::size_t idx) -> std::pair<NodePtr, NodePtr> {
        if (idx == visible.size()) {
          const StageView view(StageView::Mode::Assigned, assigned, procs, sigma.num_processes(), 0, &locs);
          const ResetAction act = st.rule(a, {}, view);
          return {act == ResetAction::ToLow ? fb.top : fb.bottom, act == ResetAction::ToHigh ? fb.top : fb.bottom};
        }
        const std::size_t m = visible[idx];
        assigned[m] = 1;
        auto hi = self(self, idx + 1);
        assigned[m] = 0;
        auto lo = self(self, idx + 1);
        return {fb.ite(pre[m], hi.first, lo.first), fb.ite(pre[m], hi.second, lo.second)};
      };
      auto [t1, t2] = trees(trees, 0);
      add_group(groups1, t1, a);
      add_group(groups2, t2, a);
    }
    auto assemble = [&](const std::vector<std::pair<NodePtr, std::vector<Letter>>>& groups) {
      NodePtr out = fb.bottom;
      for (const auto& [tree, letters] : groups) {
        LetterClass c = LetterClass::none(sigma.num_letters());
        for (Letter a : letters) c.letters[a] = true;
        out = fb.disj(out, fb.conj(detail::atom_node(c), tree));
      }
      return out;
    };
    r1 = assemble(groups1);
    r2 = assemble(groups2);
    const NodePtr fresh = st.initial_high ? fb.neg(fb.since(fb.top, p, fb.disj(r1, r2))) : fb.bottom;
    pre[k] = fb.disj(fb.since(fb.neg(r1), p, r2), fresh);
    const NodePtr post = fb.disj(r2, fb.conj(fb.neg(r1), pre[k]));
    TraceTerm last = post->kind == NodeKind::False ? TraceTerm::constant(false)
                                                    : TraceTerm{make_node(NodeKind::Exists, post, nullptr, p)};
    TraceTerm none = st.initial_high ? tneg({make_node(NodeKind::Exists, fb.top, nullptr, p)}) : TraceTerm::constant(false);
    fin[k] = tdisj(last, none);
  }

  const auto& reads = compiled.accept.reads;
  if (reads.size() >= 20) fail(ErrorCode::SearchBudgetExceeded, "acceptance reads too many stages");
  charge(std::size_t{1} << reads.size());
  std::vector<char> bits(chain.size(), 0);
  auto tree = [&](auto&& self, std::size_t idx) -> TraceTerm {
    if (idx == reads.size())
      return TraceTerm::constant(compiled.accept.eval([&](std::size_t m) { return bits.at(m) != 0; }));
    const std::size_t m = reads[idx];
    bits[m] = 1;
    TraceTerm hi = self(self, idx + 1);
    bits[m] = 0;
    TraceTerm lo = self(self, idx + 1);
    return tite(fin[m], hi, lo);
  };
  return close_term(tree(tree, 0));
}

// General chain of explicit two-state stages with an accepting set over the
// flattened product.
inline TraceFormula decompile_sprtl(const CascadeChain& chain, const AcceptingSet& accepting,
                                    std::size_t budget = std::size_t{1} << 20) {
  ResetChain rc = reset_chain_from(chain);
  const std::size_t k = rc.size(), n = rc.alphabet()->num_processes();
  BitPredicate acc;
  for (std::size_t m = 0; m < k; ++m) acc.reads.push_back(m);
  auto procs = rc.stage_processes();
  acc.eval = [accepting, procs, k, n](const std::function<bool(std::size_t)>& bit) {
    StateVector s(k * n, 0);
    for (std::size_t m = 0; m < k; ++m) s[m * n + procs[m]] = bit(m);
    return accepting.contains(s);
  };
  return decompile_sprtl(CompiledChain{rc, acc}, budget);
}

}  // namespace tracekit
