#pragma once

#include <cctype>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tracekit/loctl/formula.hpp"

namespace tracekit {

using ParsedFormula = std::variant<EventFormula, TraceFormula>;
using LetterMacros = std::map<std::string, std::vector<std::string>>;

namespace detail {

struct Token {
  enum Kind { Ident, Sym, End } kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), i});
      i = j;
    } else if (s.compare(i, 2, "->") == 0 || s.compare(i, 2, "<=") == 0) {
      out.push_back({Token::Sym, s.substr(i, 2), i});
      i += 2;
    } else if (std::string("!&|()[]{},").find(c) != std::string::npos) {
      out.push_back({Token::Sym, std::string(1, c), i});
      ++i;
    } else {
      fail(ErrorCode::SyntaxError, "unexpected character '" + std::string(1, c) + "' at " + std::to_string(i));
    }
  }
  out.push_back({Token::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const DistributedAlphabet& sigma, const LetterMacros& macros, bool decorated)
      : toks_(tokenize(text)), sigma_(sigma), macros_(macros), decorated_(decorated) {}

  NodePtr parse_all() {
    NodePtr n = implies();
    if (peek().kind != Token::End) error("trailing input");
    return n;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool is_sym(const std::string& s, std::size_t k = 0) const { return peek(k).kind == Token::Sym && peek(k).text == s; }
  bool is_ident(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Token::Ident && peek(k).text == s;
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::SyntaxError, what + " at position " + std::to_string(peek().pos));
  }
  void expect(const std::string& s) {
    if (!is_sym(s)) error("expected '" + s + "'");
    ++pos_;
  }
  std::string ident() {
    if (peek().kind != Token::Ident) error("expected a name");
    return toks_[pos_++].text;
  }
  ProcessId process() {
    std::string name = ident();
    auto p = sigma_.find_process(name);
    if (!p) fail(ErrorCode::UnknownProcess, name);
    return *p;
  }
  ProcessId bracket_process() {
    expect("[");
    ProcessId p = process();
    expect("]");
    return p;
  }

  NodePtr implies() {
    NodePtr l = disjunction();
    if (is_sym("->")) {
      ++pos_;
      return make_node(NodeKind::Implies, l, implies());
    }
    return l;
  }
  NodePtr disjunction() {
    NodePtr l = conjunction();
    while (is_sym("|")) {
      ++pos_;
      l = make_node(NodeKind::Or, l, conjunction());
    }
    return l;
  }
  NodePtr conjunction() {
    NodePtr l = since();
    while (is_sym("&")) {
      ++pos_;
      l = make_node(NodeKind::And, l, since());
    }
    return l;
  }
  NodePtr since() {
    NodePtr l = unary();
    if (is_ident("S") && is_sym("[", 1)) {
      ++pos_;
      ProcessId i = bracket_process();
      return make_node(NodeKind::Since, l, since(), i);
    }
    return l;
  }
  NodePtr unary() {
    if (is_sym("!")) {
      ++pos_;
      return make_node(NodeKind::Not, unary());
    }
    if (is_ident("Y") && is_sym("[", 1)) {
      ++pos_;
      ProcessId i = bracket_process();
      return make_node(NodeKind::Prev, unary(), nullptr, i);
    }
    if (is_ident("E") && is_sym("[", 1)) {
      ++pos_;
      ProcessId i = bracket_process();
      return make_node(NodeKind::Exists, unary(), nullptr, i);
    }
    return primary();
  }
  NodePtr primary() {
    if (is_sym("(")) {
      ++pos_;
      NodePtr n = implies();
      expect(")");
      return n;
    }
    if (is_ident("true")) {
      ++pos_;
      return make_node(NodeKind::True);
    }
    if (is_ident("false")) {
      ++pos_;
      return make_node(NodeKind::False);
    }
    if (is_ident("Yleq") && is_sym("(", 1)) {
      ++pos_;
      expect("(");
      ProcessId i = process();
      expect(",");
      ProcessId j = process();
      expect(")");
      return make_node(NodeKind::Yleq, nullptr, nullptr, i, j);
    }
    return letter_class();
  }

  void add_letter(LetterClass& c, const std::string& name) {
    if (auto m = macros_.find(name); m != macros_.end()) {
      for (const auto& l : m->second) c.letters.at(sigma_.letter(l)) = true;
      return;
    }
    auto a = sigma_.find_letter(name);
    if (!a) fail(ErrorCode::UnknownLetter, name);
    c.letters[*a] = true;
  }

  NodePtr letter_class() {
    LetterClass c = LetterClass::none(sigma_.num_letters());
    c.decorated = decorated_;
    if (is_sym("{")) {
      ++pos_;
      if (!is_sym("}")) {
        add_letter(c, ident());
        while (is_sym(",")) {
          ++pos_;
          add_letter(c, ident());
        }
      }
      expect("}");
    } else {
      if (peek().kind != Token::Ident) error("expected a formula");
      add_letter(c, ident());
    }
    if (is_sym("[")) {
      if (!decorated_) error("gamma constraints need a decorated alphabet");
      ++pos_;
      const std::size_t np = sigma_.num_processes();
      do {
        if (is_sym(",")) ++pos_;
        bool negated = false;
        if (is_sym("!")) {
          negated = true;
          ++pos_;
        }
        ProcessId i = process();
        expect("<=");
        ProcessId j = process();
        (negated ? c.zeros : c.ones) |= gamma_bit(i, j, np);
      } while (is_sym(","));
      expect("]");
    }
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Atom;
    n->atom = std::move(c);
    return n;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const DistributedAlphabet& sigma_;
  const LetterMacros& macros_;
  bool decorated_;
};

// Rewrites boolean connectives over trace formulas into their trace kinds and
// rejects mixtures. Returns true when the subtree is a trace formula.
inline bool classify(NodePtr& n) {
  switch (n->kind) {
    case NodeKind::Exists: {
      NodePtr inner = n->left;
      if (classify(inner)) fail(ErrorCode::SyntaxError, "E[i] applied to a trace formula");
      return true;
    }
    case NodeKind::Not: {
      NodePtr inner = n->left;
      bool t = classify(inner);
      auto copy = std::make_shared<Node>(*n);
      copy->left = inner;
      if (t) copy->kind = NodeKind::TNot;
      n = copy;
      return t;
    }
    case NodeKind::Or:
    case NodeKind::And:
    case NodeKind::Implies: {
      NodePtr l = n->left, r = n->right;
      bool tl = classify(l), tr = classify(r);
      if (tl != tr) fail(ErrorCode::SyntaxError, "boolean connective mixes event and trace formulas");
      auto copy = std::make_shared<Node>(*n);
      copy->left = l;
      copy->right = r;
      if (tl) copy->kind = n->kind == NodeKind::Or ? NodeKind::TOr
                           : n->kind == NodeKind::And ? NodeKind::TAnd
                                                      : NodeKind::TImplies;
      n = copy;
      return tl;
    }
    case NodeKind::Prev:
    case NodeKind::Since: {
      NodePtr l = n->left, r = n->right;
      if (classify(l) || (r && classify(r))) fail(ErrorCode::SyntaxError, "temporal operator applied to a trace formula");
      return false;
    }
    default:
      return false;
  }
}

}  // namespace detail

inline ParsedFormula parse_formula(const std::string& text, const DistributedAlphabet& sigma,
                                   const LetterMacros& macros = {}, bool decorated = false) {
  detail::Parser p(text, sigma, macros, decorated);
  NodePtr n = p.parse_all();
  if (detail::classify(n)) return TraceFormula(n);
  return EventFormula(n);
}

inline TraceFormula parse_trace_formula(const std::string& text, const DistributedAlphabet& sigma,
                                        const LetterMacros& macros = {}, bool decorated = false) {
  auto r = parse_formula(text, sigma, macros, decorated);
  if (auto* t = std::get_if<TraceFormula>(&r)) return *t;
  fail(ErrorCode::SyntaxError, "expected a trace formula (use E[i] ...)");
}

inline EventFormula parse_event_formula(const std::string& text, const DistributedAlphabet& sigma,
                                        const LetterMacros& macros = {}, bool decorated = false) {
  auto r = parse_formula(text, sigma, macros, decorated);
  if (auto* e = std::get_if<EventFormula>(&r)) return *e;
  fail(ErrorCode::SyntaxError, "expected an event formula");
}

}  // namespace tracekit
