#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tracekit/gossip/gossip.hpp"
#include "tracekit/trace/alphabet.hpp"

namespace tracekit {

// A set of letters, optionally constrained on the gamma label of events.
// Over Sigma x Gamma the atom (a, gamma) is the class {a} with every bit of
// gamma fixed; a plain letter of Sigma lifts to the class without constraints.
struct LetterClass {
  std::vector<bool> letters;  // indexed by base letter
  bool decorated = false;     // reads gamma from the event decoration
  Gamma ones = 0;             // bits required to be 1
  Gamma zeros = 0;            // bits required to be 0

  static LetterClass of(std::size_t num_letters, std::initializer_list<Letter> ls) {
    LetterClass c;
    c.letters.assign(num_letters, false);
    for (auto a : ls) c.letters.at(a) = true;
    return c;
  }
  static LetterClass all(std::size_t num_letters) {
    LetterClass c;
    c.letters.assign(num_letters, true);
    return c;
  }
  static LetterClass none(std::size_t num_letters) {
    LetterClass c;
    c.letters.assign(num_letters, false);
    return c;
  }

  bool contains_letter(Letter a) const { return a < letters.size() && letters[a]; }
  bool matches(Letter a, Gamma g) const {
    if (!contains_letter(a)) return false;
    if (!decorated) return true;
    return (g & ones) == ones && (g & zeros) == 0;
  }
  bool unconstrained() const { return ones == 0 && zeros == 0; }
  bool empty() const {
    if ((ones & zeros) != 0) return true;
    for (bool b : letters)
      if (b) return false;
    return true;
  }
  bool full() const {
    if (!unconstrained()) return false;
    for (bool b : letters)
      if (!b) return false;
    return true;
  }
  friend bool operator==(const LetterClass&, const LetterClass&) = default;
};

enum class NodeKind {
  // event formulas
  Atom,
  True,
  False,
  Not,
  Or,
  And,
  Implies,
  Yleq,
  Prev,
  Since,
  // trace formulas
  Exists,
  TNot,
  TOr,
  TAnd,
  TImplies,
};

inline bool is_trace_kind(NodeKind k) { return k >= NodeKind::Exists; }

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// Node of a formula DAG. Since(i, left, right) is "left S_i right".
struct Node {
  NodeKind kind;
  LetterClass atom;
  ProcessId i = 0, j = 0;
  NodePtr left, right;
};

inline NodePtr make_node(NodeKind k, NodePtr l = nullptr, NodePtr r = nullptr, ProcessId i = 0, ProcessId j = 0) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->left = std::move(l);
  n->right = std::move(r);
  n->i = i;
  n->j = j;
  return n;
}

class EventFormula {
 public:
  EventFormula() = default;
  explicit EventFormula(NodePtr n) : node_(std::move(n)) {
    if (node_ && is_trace_kind(node_->kind)) fail(ErrorCode::InvalidArgument, "trace formula used as event formula");
  }
  const NodePtr& node() const { return node_; }

  static EventFormula atom(LetterClass c) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Atom;
    n->atom = std::move(c);
    return EventFormula(n);
  }
  static EventFormula letter(const DistributedAlphabet& sigma, const std::string& name) {
    return atom(LetterClass::of(sigma.num_letters(), {sigma.letter(name)}));
  }
  static EventFormula truth() { return EventFormula(make_node(NodeKind::True)); }
  static EventFormula falsity() { return EventFormula(make_node(NodeKind::False)); }
  static EventFormula yleq(ProcessId i, ProcessId j) { return EventFormula(make_node(NodeKind::Yleq, nullptr, nullptr, i, j)); }
  static EventFormula prev(ProcessId i, const EventFormula& f) { return EventFormula(make_node(NodeKind::Prev, f.node_, nullptr, i)); }
  static EventFormula since(const EventFormula& l, ProcessId i, const EventFormula& r) {
    return EventFormula(make_node(NodeKind::Since, l.node_, r.node_, i));
  }

  friend EventFormula operator!(const EventFormula& f) { return EventFormula(make_node(NodeKind::Not, f.node_)); }
  friend EventFormula operator||(const EventFormula& l, const EventFormula& r) {
    return EventFormula(make_node(NodeKind::Or, l.node_, r.node_));
  }
  friend EventFormula operator&&(const EventFormula& l, const EventFormula& r) {
    return EventFormula(make_node(NodeKind::And, l.node_, r.node_));
  }
  EventFormula implies(const EventFormula& r) const { return EventFormula(make_node(NodeKind::Implies, node_, r.node_)); }

 private:
  NodePtr node_;
};

class TraceFormula {
 public:
  TraceFormula() = default;
  explicit TraceFormula(NodePtr n) : node_(std::move(n)) {
    if (node_ && !is_trace_kind(node_->kind)) fail(ErrorCode::InvalidArgument, "event formula used as trace formula");
  }
  const NodePtr& node() const { return node_; }

  // Holds when the maximal i-event exists and satisfies f.
  static TraceFormula exists(ProcessId i, const EventFormula& f) {
    return TraceFormula(make_node(NodeKind::Exists, f.node(), nullptr, i));
  }
  friend TraceFormula operator!(const TraceFormula& f) { return TraceFormula(make_node(NodeKind::TNot, f.node_)); }
  friend TraceFormula operator||(const TraceFormula& l, const TraceFormula& r) {
    return TraceFormula(make_node(NodeKind::TOr, l.node_, r.node_));
  }
  friend TraceFormula operator&&(const TraceFormula& l, const TraceFormula& r) {
    return TraceFormula(make_node(NodeKind::TAnd, l.node_, r.node_));
  }
  TraceFormula implies(const TraceFormula& r) const { return TraceFormula(make_node(NodeKind::TImplies, node_, r.node_)); }

 private:
  NodePtr node_;
};

// Number of distinct nodes of the DAG.
inline std::size_t formula_size(const NodePtr& root) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> todo{root.get()};
  while (!todo.empty()) {
    const Node* n = todo.back();
    todo.pop_back();
    if (!n || !seen.insert(n).second) continue;
    todo.push_back(n->left.get());
    todo.push_back(n->right.get());
  }
  return seen.size();
}

inline std::size_t formula_depth(const NodePtr& n) {
  if (!n) return 0;
  std::size_t d = std::max(formula_depth(n->left), formula_depth(n->right));
  const bool temporal = n->kind == NodeKind::Since || n->kind == NodeKind::Prev;
  return d + (temporal ? 1 : 0);
}

// Fully parenthesized rendering that the parser reads back.
inline std::string to_string(const DistributedAlphabet& sigma, const NodePtr& n) {
  auto proc = [&](ProcessId p) { return sigma.process_name(p); };
  auto rec = [&](auto&& self, const NodePtr& x) -> std::string {
    switch (x->kind) {
      case NodeKind::Atom: {
        const auto& c = x->atom;
        std::vector<std::string> names;
        for (Letter a = 0; a < c.letters.size(); ++a)
          if (c.letters[a]) names.push_back(sigma.letter_name(a));
        std::string s;
        if (names.size() == 1) {
          s = names[0];
        } else {
          s = "{";
          for (std::size_t k = 0; k < names.size(); ++k) s += (k ? "," : "") + names[k];
          s += "}";
        }
        if (c.decorated && !c.unconstrained()) {
          const std::size_t np = sigma.num_processes();
          std::string lits;
          for (ProcessId i = 0; i < np; ++i)
            for (ProcessId j = 0; j < np; ++j) {
              const Gamma b = gamma_bit(i, j, np);
              if (c.ones & b) lits += (lits.empty() ? "" : ",") + proc(i) + "<=" + proc(j);
              if (c.zeros & b) lits += (lits.empty() ? "!" : ",!") + proc(i) + "<=" + proc(j);
            }
          s += "[" + lits + "]";
        }
        return s;
      }
      case NodeKind::True: return "true";
      case NodeKind::False: return "false";
      case NodeKind::Not:
      case NodeKind::TNot: return "!(" + self(self, x->left) + ")";
      case NodeKind::Or:
      case NodeKind::TOr: return "(" + self(self, x->left) + " | " + self(self, x->right) + ")";
      case NodeKind::And:
      case NodeKind::TAnd: return "(" + self(self, x->left) + " & " + self(self, x->right) + ")";
      case NodeKind::Implies:
      case NodeKind::TImplies: return "(" + self(self, x->left) + " -> " + self(self, x->right) + ")";
      case NodeKind::Yleq: return "Yleq(" + proc(x->i) + "," + proc(x->j) + ")";
      case NodeKind::Prev: return "Y[" + proc(x->i) + "](" + self(self, x->left) + ")";
      case NodeKind::Since: return "(" + self(self, x->left) + " S[" + proc(x->i) + "] " + self(self, x->right) + ")";
      case NodeKind::Exists: return "E[" + proc(x->i) + "](" + self(self, x->left) + ")";
    }
    return "?";
  };
  return rec(rec, n);
}

inline std::string to_string(const DistributedAlphabet& sigma, const EventFormula& f) { return to_string(sigma, f.node()); }
inline std::string to_string(const DistributedAlphabet& sigma, const TraceFormula& f) { return to_string(sigma, f.node()); }

// Structural equality of formula DAGs.
inline bool same_structure(const NodePtr& x, const NodePtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind || x->i != y->i || x->j != y->j) return false;
  if (x->kind == NodeKind::Atom && !(x->atom == y->atom)) return false;
  return same_structure(x->left, y->left) && same_structure(x->right, y->right);
}

enum class Fragment { SinceOnly, WithYleq, WithPrev, Full };

inline std::string_view fragment_name(Fragment f) {
  switch (f) {
    case Fragment::SinceOnly: return "since";
    case Fragment::WithYleq: return "yleq";
    case Fragment::WithPrev: return "prev";
    case Fragment::Full: return "full";
  }
  return "?";
}

inline Fragment fragment_of(const NodePtr& root) {
  bool yleq = false, prev = false;
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> todo{root.get()};
  while (!todo.empty()) {
    const Node* n = todo.back();
    todo.pop_back();
    if (!n || !seen.insert(n).second) continue;
    yleq = yleq || n->kind == NodeKind::Yleq;
    prev = prev || n->kind == NodeKind::Prev;
    todo.push_back(n->left.get());
    todo.push_back(n->right.get());
  }
  if (yleq && prev) return Fragment::Full;
  if (yleq) return Fragment::WithYleq;
  if (prev) return Fragment::WithPrev;
  return Fragment::SinceOnly;
}

}  // namespace tracekit
