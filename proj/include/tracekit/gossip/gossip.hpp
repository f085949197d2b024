#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracekit/automaton/run.hpp"
#include "tracekit/trace/poset.hpp"

namespace tracekit {

// Hash-consing store mapping values to dense ids. Lookups take a shared lock
// and insertions an exclusive one, so concurrent runs may share a store.
template <class T, class Hash = std::hash<T>>
class Interner {
 public:
  std::uint64_t intern(const T& v) {
    {
      std::shared_lock lock(mu_);
      auto it = ids_.find(v);
      if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, fresh] = ids_.emplace(v, values_.size());
    if (fresh) values_.push_back(v);
    return it->second;
  }
  T value(std::uint64_t id) const {
    std::shared_lock lock(mu_);
    return values_.at(id);
  }
  std::size_t size() const {
    std::shared_lock lock(mu_);
    return values_.size();
  }

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<T, std::uint64_t, Hash> ids_;
  std::deque<T> values_;
};

struct VectorHash {
  template <class V>
  std::size_t operator()(const V& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
    return h;
  }
};

// Gamma = {0,1}^{P x P}, entry (i, j) stored at bit i * n + j.
using Gamma = std::uint64_t;

inline bool gamma_at(Gamma g, ProcessId i, ProcessId j, std::size_t n) { return (g >> (i * n + j)) & 1U; }
inline Gamma gamma_bit(ProcessId i, ProcessId j, std::size_t n) { return Gamma{1} << (i * n + j); }

inline void require_gamma_capacity(const DistributedAlphabet& sigma) {
  if (sigma.num_processes() > 8) fail(ErrorCode::InvalidArgument, "gamma labels support at most 8 processes");
}

// Relation of primary events: gamma(i, j) = 1 iff e_i and e_j exist and e_i <= e_j.
inline Gamma theta_at(const TracePoset& po, EventId e) {
  const std::size_t n = po.alphabet()->num_processes();
  Gamma g = 0;
  for (ProcessId i = 0; i < n; ++i) {
    auto ei = po.primary_event(e, i);
    if (!ei) continue;
    for (ProcessId j = 0; j < n; ++j) {
      auto ej = po.primary_event(e, j);
      if (ej && po.leq(*ei, *ej)) g |= gamma_bit(i, j, n);
    }
  }
  return g;
}

// Reference labelling computed directly from the partial order.
inline LabelledTrace theta_oracle(const Trace& t) {
  require_gamma_capacity(*t.alphabet());
  TracePoset po(t);
  LabelledTrace out = LabelledTrace::plain(t);
  for (EventId e = 0; e < t.size(); ++e) out.decorations[e].push_back(theta_at(po, e));
  return out;
}

// Local state of a process: for every process k, the vector timestamp of the
// latest k-event it knows of (row k; all zero when there is none).
// Row k, entry l lives at index k * n + l.
using ClockMatrix = std::vector<std::uint32_t>;
using ClockStore = Interner<ClockMatrix, VectorHash>;

namespace detail {

inline ClockMatrix merged_view(const ClockStore& store, const DistributedAlphabet& sigma, Letter a, StateView state) {
  const std::size_t n = sigma.num_processes();
  ClockMatrix best(n * n, 0);
  for (ProcessId p : sigma.loc_list(a)) {
    ClockMatrix m = store.value(state[p]);
    for (std::size_t k = 0; k < n; ++k)
      if (m[k * n + k] > best[k * n + k]) std::copy(m.begin() + k * n, m.begin() + (k + 1) * n, best.begin() + k * n);
  }
  return best;
}

}  // namespace detail

// Finite-state surrogate for the gossip transducer theta^Y, realized with
// vector clocks. Local states are hash-consed lazily, so the state sets are
// unbounded in advance (radix 0).
struct GossipTransducer {
  Transducer transducer;
  std::shared_ptr<ClockStore> store;
};

inline GossipTransducer vector_clock_gossip(const AlphabetPtr& alphabet) {
  require_gamma_capacity(*alphabet);
  const std::size_t n = alphabet->num_processes();
  auto store = std::make_shared<ClockStore>();
  const std::uint64_t empty = store->intern(ClockMatrix(n * n, 0));
  StateVector init(n, empty);
  StepFn step = [store, alphabet, n](Letter a, DecorationView, StateRef state) {
    ClockMatrix m = detail::merged_view(*store, *alphabet, a, state);
    std::vector<std::uint32_t> clock(n);
    const ProcessSet la = alphabet->loc(a);
    for (std::size_t k = 0; k < n; ++k) clock[k] = m[k * n + k] + (la.contains(static_cast<ProcessId>(k)) ? 1 : 0);
    for (ProcessId k : alphabet->loc_list(a)) std::copy(clock.begin(), clock.end(), m.begin() + k * n);
    const std::uint64_t id = store->intern(m);
    for (ProcessId p : alphabet->loc_list(a)) state[p] = id;
  };
  OutputFn output = [store, alphabet, n](Letter a, DecorationView, StateView pre) {
    ClockMatrix m = detail::merged_view(*store, *alphabet, a, pre);
    Gamma g = 0;
    for (ProcessId i = 0; i < n; ++i)
      for (ProcessId j = 0; j < n; ++j)
        if (m[i * n + i] > 0 && m[j * n + j] > 0 && m[j * n + i] >= m[i * n + i]) g |= gamma_bit(i, j, n);
    return Decoration{g};
  };
  StateNamer namer = [store, n](std::size_t, ProcessId, std::uint64_t v) {
    ClockMatrix m = store->value(v);
    std::string s = "<";
    for (std::size_t k = 0; k < n; ++k) {
      if (k) s += "|";
      for (std::size_t l = 0; l < n; ++l) s += (l ? "," : "") + std::to_string(m[k * n + l]);
    }
    return s + ">";
  };
  AsyncAutomaton aut(alphabet, 1, init, std::vector<std::uint64_t>(n, 0), std::move(step), std::move(namer));
  return {Transducer{aut.with_accepting(AcceptingSet::all()), std::move(output)}, store};
}

inline std::string gamma_to_string(Gamma g, std::size_t n) {
  std::string s;
  for (ProcessId i = 0; i < n; ++i) {
    if (i) s += ' ';
    for (ProcessId j = 0; j < n; ++j) s += gamma_at(g, i, j, n) ? '1' : '0';
  }
  return s;
}

}  // namespace tracekit
