#pragma once

#include <functional>
#include <unordered_map>

#include "tracekit/loctl/formula.hpp"

namespace tracekit {

namespace detail {

// Bottom-up rewriting that preserves sharing: each node is rewritten once.
class Rewriter {
 public:
  using Rule = std::function<NodePtr(const NodePtr& original, NodePtr left, NodePtr right)>;
  explicit Rewriter(Rule rule) : rule_(std::move(rule)) {}

  NodePtr operator()(const NodePtr& n) {
    if (!n) return nullptr;
    if (auto it = memo_.find(n.get()); it != memo_.end()) return it->second;
    NodePtr l = (*this)(n->left);
    NodePtr r = (*this)(n->right);
    NodePtr out = rule_(n, l, r);
    memo_.emplace(n.get(), out);
    return out;
  }

 private:
  Rule rule_;
  std::unordered_map<const Node*, NodePtr> memo_;
};

inline NodePtr with_children(const NodePtr& n, NodePtr l, NodePtr r) {
  if (l == n->left && r == n->right) return n;
  auto copy = std::make_shared<Node>(*n);
  copy->left = std::move(l);
  copy->right = std::move(r);
  return copy;
}

inline NodePtr atom_node(LetterClass c) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Atom;
  n->atom = std::move(c);
  return n;
}

inline NodePtr not_node(NodePtr x) { return make_node(NodeKind::Not, std::move(x)); }
inline NodePtr or_node(NodePtr x, NodePtr y) { return make_node(NodeKind::Or, std::move(x), std::move(y)); }
inline NodePtr and_node(NodePtr x, NodePtr y) { return make_node(NodeKind::And, std::move(x), std::move(y)); }

}  // namespace detail

// Rewrites true, false, and, -> into atoms, negation and disjunction.
// Atoms over an alphabet with `num_letters` letters; `decorated` marks the
// constants produced for Sigma x Gamma formulas.
inline NodePtr normalize(const NodePtr& root, std::size_t num_letters, bool decorated = false) {
  using namespace detail;
  Rewriter rw([&](const NodePtr& n, NodePtr l, NodePtr r) -> NodePtr {
    switch (n->kind) {
      case NodeKind::True: {
        auto c = LetterClass::all(num_letters);
        c.decorated = decorated;
        return atom_node(c);
      }
      case NodeKind::False: {
        auto c = LetterClass::none(num_letters);
        c.decorated = decorated;
        return atom_node(c);
      }
      case NodeKind::And: return not_node(or_node(not_node(l), not_node(r)));
      case NodeKind::Implies: return or_node(not_node(l), r);
      case NodeKind::TAnd: return make_node(NodeKind::TNot, make_node(NodeKind::TOr, make_node(NodeKind::TNot, l), make_node(NodeKind::TNot, r)));
      case NodeKind::TImplies: return make_node(NodeKind::TOr, make_node(NodeKind::TNot, l), r);
      default: return with_children(n, l, r);
    }
  });
  return rw(root);
}

inline EventFormula normalize(const EventFormula& f, std::size_t num_letters) {
  return EventFormula(normalize(f.node(), num_letters));
}
inline TraceFormula normalize(const TraceFormula& f, std::size_t num_letters) {
  return TraceFormula(normalize(f.node(), num_letters));
}

// Replaces every Y_i by a formula over Yleq and S_i:
//   Y_i^1 b     = OR_j Yeq(i,j) & (false S_j b)
//   Y_i^{m+1} b = OR_j Ylt(i,j) & (Ylt(i,j) S_j Y_i^m b)
//   Y_i b       = OR_{m <= |P|} Y_i^m b
inline NodePtr eliminate_prev(const NodePtr& root, const DistributedAlphabet& sigma) {
  using namespace detail;
  const auto np = static_cast<ProcessId>(sigma.num_processes());
  auto yleq = [](ProcessId i, ProcessId j) { return make_node(NodeKind::Yleq, nullptr, nullptr, i, j); };
  Rewriter rw([&](const NodePtr& n, NodePtr l, NodePtr r) -> NodePtr {
    if (n->kind != NodeKind::Prev) return with_children(n, l, r);
    const ProcessId i = n->i;
    const NodePtr bottom = make_node(NodeKind::False);
    std::vector<NodePtr> yeq(np), ylt(np);
    for (ProcessId j = 0; j < np; ++j) {
      yeq[j] = and_node(yleq(i, j), yleq(j, i));
      ylt[j] = and_node(yleq(i, j), not_node(yleq(j, i)));
    }
    NodePtr level;
    for (ProcessId j = 0; j < np; ++j) {
      NodePtr term = and_node(yeq[j], make_node(NodeKind::Since, bottom, l, j));
      level = level ? or_node(level, term) : term;
    }
    NodePtr total = level;
    for (ProcessId m = 1; m < np; ++m) {
      NodePtr next;
      for (ProcessId j = 0; j < np; ++j) {
        NodePtr term = and_node(ylt[j], make_node(NodeKind::Since, ylt[j], level, j));
        next = next ? or_node(next, term) : term;
      }
      level = next;
      total = or_node(total, level);
    }
    return total;
  });
  return rw(root);
}

inline EventFormula eliminate_prev(const EventFormula& f, const DistributedAlphabet& sigma) {
  return EventFormula(eliminate_prev(f.node(), sigma));
}
inline TraceFormula eliminate_prev(const TraceFormula& f, const DistributedAlphabet& sigma) {
  return TraceFormula(eliminate_prev(f.node(), sigma));
}

// Sigma formula to Sigma x Gamma formula: a letter class ignores gamma and
// Yleq(i, j) becomes the class of all letters whose gamma has (i, j) set.
inline NodePtr lift_tilde(const NodePtr& root, const DistributedAlphabet& sigma) {
  using namespace detail;
  const std::size_t np = sigma.num_processes();
  Rewriter rw([&](const NodePtr& n, NodePtr l, NodePtr r) -> NodePtr {
    switch (n->kind) {
      case NodeKind::Prev: fail(ErrorCode::WrongFragment, "Y_i must be eliminated before lifting");
      case NodeKind::Atom: {
        LetterClass c = n->atom;
        if (c.decorated) fail(ErrorCode::InvalidArgument, "formula is already over Sigma x Gamma");
        c.decorated = true;
        return atom_node(c);
      }
      case NodeKind::Yleq: {
        LetterClass c = LetterClass::all(sigma.num_letters());
        c.decorated = true;
        c.ones = gamma_bit(n->i, n->j, np);
        return atom_node(c);
      }
      default: return with_children(n, l, r);
    }
  });
  return rw(root);
}

inline TraceFormula lift_tilde(const TraceFormula& f, const DistributedAlphabet& sigma) {
  return TraceFormula(lift_tilde(f.node(), sigma));
}
inline EventFormula lift_tilde(const EventFormula& f, const DistributedAlphabet& sigma) {
  return EventFormula(lift_tilde(f.node(), sigma));
}

// Sigma x Gamma formula to Sigma formula: each gamma constraint becomes the
// matching Yleq literal; Yleq constants pass through.
inline NodePtr lower_hat(const NodePtr& root, const DistributedAlphabet& sigma) {
  using namespace detail;
  const auto np = static_cast<ProcessId>(sigma.num_processes());
  Rewriter rw([&](const NodePtr& n, NodePtr l, NodePtr r) -> NodePtr {
    if (n->kind != NodeKind::Atom || !n->atom.decorated) return with_children(n, l, r);
    LetterClass base = n->atom;
    base.decorated = false;
    base.ones = base.zeros = 0;
    NodePtr out = atom_node(base);
    for (ProcessId i = 0; i < np; ++i)
      for (ProcessId j = 0; j < np; ++j) {
        const Gamma b = gamma_bit(i, j, np);
        if (n->atom.ones & b) out = and_node(out, make_node(NodeKind::Yleq, nullptr, nullptr, i, j));
        if (n->atom.zeros & b) out = and_node(out, not_node(make_node(NodeKind::Yleq, nullptr, nullptr, i, j)));
      }
    return out;
  });
  return rw(root);
}

inline TraceFormula lower_hat(const TraceFormula& f, const DistributedAlphabet& sigma) {
  return TraceFormula(lower_hat(f.node(), sigma));
}
inline EventFormula lower_hat(const EventFormula& f, const DistributedAlphabet& sigma) {
  return EventFormula(lower_hat(f.node(), sigma));
}

}  // namespace tracekit
