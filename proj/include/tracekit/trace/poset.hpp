#pragma once

#include <boost/dynamic_bitset.hpp>
#include <functional>
#include <optional>
#include <vector>

#include "tracekit/trace/trace.hpp"

namespace tracekit {

using EventSet = boost::dynamic_bitset<>;

// Labelled partial order of a trace. down[e] is the reflexive down-set of e.
class TracePoset {
 public:
  explicit TracePoset(const Trace& t) : alphabet_(t.alphabet()), labels_(t.word()) {
    const std::size_t n = labels_.size();
    const std::size_t np = alphabet_->num_processes();
    down_.assign(n, EventSet(n));
    chains_.assign(np, {});
    std::vector<std::optional<EventId>> last(np);
    for (EventId e = 0; e < n; ++e) {
      down_[e].set(e);
      for (ProcessId p : alphabet_->loc_list(labels_[e])) {
        if (last[p]) down_[e] |= down_[*last[p]];
        last[p] = e;
        chains_[p].push_back(e);
      }
    }
    primary_.assign(n, std::vector<std::optional<EventId>>(np));
    for (EventId e = 0; e < n; ++e)
      for (ProcessId p = 0; p < np; ++p)
        for (auto it = chains_[p].rbegin(); it != chains_[p].rend(); ++it)
          if (*it != e && down_[e].test(*it)) {
            primary_[e][p] = *it;
            break;
          }
  }

  std::size_t size() const { return labels_.size(); }
  const AlphabetPtr& alphabet() const { return alphabet_; }
  Letter label(EventId e) const { return labels_.at(e); }
  const std::vector<Letter>& labels() const { return labels_; }

  bool leq(EventId e, EventId f) const { return down_.at(f).test(e); }
  bool less(EventId e, EventId f) const { return e != f && leq(e, f); }
  const EventSet& down(EventId e) const { return down_.at(e); }

  EventSet strict_past(EventId e) const {
    check(e);
    EventSet s = down_[e];
    s.reset(e);
    return s;
  }

  // i-events in increasing order.
  const std::vector<EventId>& chain(ProcessId i) const { return chains_.at(i); }
  bool on_process(EventId e, ProcessId i) const { return alphabet_->loc(labels_.at(e)).contains(i); }

  // Maximal i-event strictly below e.
  std::optional<EventId> primary_event(EventId e, ProcessId i) const {
    check(e);
    return primary_[e].at(i);
  }

  std::optional<EventId> last_event(ProcessId i) const {
    if (chains_.at(i).empty()) return std::nullopt;
    return chains_[i].back();
  }

 private:
  void check(EventId e) const {
    if (e >= labels_.size()) fail(ErrorCode::UnknownEvent, "event " + std::to_string(e));
  }

  AlphabetPtr alphabet_;
  std::vector<Letter> labels_;
  std::vector<EventSet> down_;
  std::vector<std::vector<EventId>> chains_;
  std::vector<std::vector<std::optional<EventId>>> primary_;
};

inline TracePoset poset(const Trace& t) { return TracePoset(t); }

inline EventSet strict_past(const Trace& t, EventId e) { return TracePoset(t).strict_past(e); }

inline std::optional<EventId> primary_event(const Trace& t, EventId e, ProcessId i) {
  return TracePoset(t).primary_event(e, i);
}

// Letters of the events in `keep`, in canonical order, as a trace.
inline Trace restrict_trace(const Trace& t, const EventSet& keep) {
  std::vector<Letter> w;
  for (EventId e = 0; e < t.size(); ++e)
    if (keep.test(e)) w.push_back(t[e]);
  return Trace::from_word(t.alphabet(), w);
}

// The prefix of t generated by the i-events.
inline Trace i_view(const Trace& t, ProcessId i) {
  if (i >= t.alphabet()->num_processes()) fail(ErrorCode::UnknownProcess, std::to_string(i));
  TracePoset po(t);
  EventSet keep(t.size());
  if (auto last = po.last_event(i)) keep = po.down(*last);
  return restrict_trace(t, keep);
}

// Visits every linearization of t as a sequence of event ids.
inline void for_each_linearization(const Trace& t, const std::function<void(const std::vector<EventId>&)>& visit) {
  TracePoset po(t);
  const std::size_t n = t.size();
  std::vector<EventId> current;
  EventSet placed(n);
  std::function<void()> rec = [&]() {
    if (current.size() == n) {
      visit(current);
      return;
    }
    for (EventId e = 0; e < n; ++e) {
      if (placed.test(e)) continue;
      EventSet below = po.strict_past(e);
      if (!below.is_subset_of(placed)) continue;
      placed.set(e);
      current.push_back(e);
      rec();
      current.pop_back();
      placed.reset(e);
    }
  };
  rec();
}

}  // namespace tracekit
