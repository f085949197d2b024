#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "tracekit/trace/alphabet.hpp"

namespace tracekit {

// A Mazurkiewicz trace stored as its lexicographic normal form: the least
// linearization with respect to the letter order. Event ids are positions in
// that word.
class Trace {
 public:
  Trace() = default;
  explicit Trace(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}

  static Trace from_word(AlphabetPtr alphabet, std::span<const Letter> word) {
    for (Letter a : word)
      if (a >= alphabet->num_letters()) fail(ErrorCode::UnknownLetter, "letter index " + std::to_string(a));
    Trace t(std::move(alphabet));
    t.word_ = normal_form(*t.alphabet_, word, nullptr);
    return t;
  }

  static Trace from_names(AlphabetPtr alphabet, const std::vector<std::string>& names) {
    std::vector<Letter> w;
    w.reserve(names.size());
    for (const auto& n : names) w.push_back(alphabet->letter(n));
    return from_word(std::move(alphabet), w);
  }

  // Letters separated by whitespace; if there is no whitespace and every
  // letter name is a single character, the string is split per character.
  static Trace parse(AlphabetPtr alphabet, const std::string& text) {
    std::vector<std::string> names;
    std::istringstream in(text);
    for (std::string tok; in >> tok;) names.push_back(tok);
    if (names.size() == 1 && !alphabet->find_letter(names[0])) {
      bool single = std::all_of(alphabet->letter_names().begin(), alphabet->letter_names().end(),
                                [](const std::string& s) { return s.size() == 1; });
      if (single) {
        std::string w = names[0];
        names.clear();
        for (char c : w) names.emplace_back(1, c);
      }
    }
    return from_names(std::move(alphabet), names);
  }

  // When `order` is given, order[k] is the word position placed at canonical
  // position k, so per-event data can follow the normalization.
  static std::vector<Letter> normal_form(const DistributedAlphabet& alphabet, std::span<const Letter> word,
                                         std::vector<std::size_t>* order) {
    const std::size_t n = word.size();
    std::vector<std::size_t> pending(n, 0);
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (alphabet.dependent(word[i], word[j])) {
          succ[i].push_back(j);
          ++pending[j];
        }
    std::vector<Letter> out;
    out.reserve(n);
    if (order) order->clear();
    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t best = n;
      for (std::size_t i = 0; i < n; ++i)
        if (!done[i] && pending[i] == 0 && (best == n || word[i] < word[best])) best = i;
      done[best] = true;
      out.push_back(word[best]);
      if (order) order->push_back(best);
      for (std::size_t j : succ[best]) --pending[j];
    }
    return out;
  }

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const std::vector<Letter>& word() const { return word_; }
  std::size_t size() const { return word_.size(); }
  bool empty() const { return word_.empty(); }
  Letter operator[](EventId e) const { return word_.at(e); }

  Trace concat(const Trace& other) const {
    require_same_alphabet(alphabet_, other.alphabet_, "concatenating traces over different alphabets");
    std::vector<Letter> w = word_;
    w.insert(w.end(), other.word_.begin(), other.word_.end());
    return from_word(alphabet_, w);
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < word_.size(); ++i) {
      if (i) s += ' ';
      s += alphabet_->letter_name(word_[i]);
    }
    return s;
  }

  friend bool operator==(const Trace& x, const Trace& y) {
    return same_alphabet(x.alphabet_, y.alphabet_) && x.word_ == y.word_;
  }
  friend bool operator<(const Trace& x, const Trace& y) {
    if (x.word_.size() != y.word_.size()) return x.word_.size() < y.word_.size();
    return x.word_ < y.word_;
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<Letter> word_;
};

// Distinct traces of length at most max_len, by length and then normal form.
inline void for_each_trace(const AlphabetPtr& alphabet, std::size_t max_len,
                           const std::function<void(const Trace&)>& visit) {
  std::set<std::vector<Letter>> layer{{}};
  visit(Trace(alphabet));
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::set<std::vector<Letter>> next;
    for (const auto& w : layer)
      for (Letter a = 0; a < alphabet->num_letters(); ++a) {
        std::vector<Letter> ext = w;
        ext.push_back(a);
        next.insert(Trace::normal_form(*alphabet, ext, nullptr));
      }
    for (const auto& w : next) visit(Trace::from_word(alphabet, w));
    layer = std::move(next);
  }
}

inline std::vector<Trace> enumerate_traces(const AlphabetPtr& alphabet, std::size_t max_len) {
  std::vector<Trace> out;
  for_each_trace(alphabet, max_len, [&](const Trace& t) { out.push_back(t); });
  return out;
}

}  // namespace tracekit
