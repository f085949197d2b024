#pragma once

#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "tracekit/monoid/wreath.hpp"

namespace tracekit {

// Undirected graph on processes; i and j are adjacent when they share a letter.
struct CommunicationGraph {
  std::size_t num_processes = 0;
  std::vector<std::vector<bool>> adjacent;

  std::size_t degree(ProcessId i) const {
    std::size_t d = 0;
    for (ProcessId j = 0; j < num_processes; ++j) d += adjacent[i][j] ? 1 : 0;
    return d;
  }
  std::vector<ProcessId> neighbours(ProcessId i) const {
    std::vector<ProcessId> out;
    for (ProcessId j = 0; j < num_processes; ++j)
      if (adjacent[i][j]) out.push_back(j);
    return out;
  }
};

inline CommunicationGraph communication_graph(const DistributedAlphabet& sigma) {
  CommunicationGraph g;
  g.num_processes = sigma.num_processes();
  g.adjacent.assign(g.num_processes, std::vector<bool>(g.num_processes, false));
  for (Letter a = 0; a < sigma.num_letters(); ++a)
    for (ProcessId i : sigma.loc_list(a))
      for (ProcessId j : sigma.loc_list(a))
        if (i != j) g.adjacent[i][j] = true;
  return g;
}

// A forest: union-find finds no edge closing a cycle.
inline bool is_acyclic(const CommunicationGraph& g) {
  std::vector<ProcessId> parent(g.num_processes);
  std::iota(parent.begin(), parent.end(), ProcessId{0});
  std::function<ProcessId(ProcessId)> root = [&](ProcessId x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
  for (ProcessId i = 0; i < g.num_processes; ++i)
    for (ProcessId j = i + 1; j < g.num_processes; ++j) {
      if (!g.adjacent[i][j]) continue;
      const ProcessId ri = root(i), rj = root(j);
      if (ri == rj) return false;
      parent[ri] = rj;
    }
  return true;
}
inline bool is_acyclic(const DistributedAlphabet& sigma) {
  const CommunicationGraph g = communication_graph(sigma);
  if (!is_acyclic(g)) return false;
  // A letter on three processes would close a triangle.
  for (Letter a = 0; a < sigma.num_letters(); ++a)
    if (sigma.loc_list(a).size() > 2) fail(ErrorCode::InvalidArgument, "acyclic graph with a letter on three processes");
  return true;
}

// ---------------------------------------------------------------------------
// Split at a process p.

struct SplitResult {
  std::vector<Transformation> n_elements;  // N = phi(Sigma_0^*), N[0] = identity
  TraceMorphism first;                     // into (N, N-bar), acting on indices of N
  ProductAlphabet letters;                 // Sigma x N
  TraceMorphism second;                    // over Sigma x N into (X, M)
  WreathMorphism wreath;                   // first wr second over Sigma
  std::vector<std::uint32_t> map;          // (n, x) -> n(x), pair index n * |X| + x
};

inline SplitResult split(const TraceMorphism& phi, ProcessId p) {
  phi.validate();
  const DistributedAlphabet& sigma = *phi.alphabet;
  const std::size_t x_size = phi.degree;
  auto local_only = [&](Letter a) { return sigma.loc(a) == ProcessSet::of({p}); };
  auto on_p = [&](Letter a) { return sigma.loc(a).contains(p); };

  std::vector<Transformation> sigma0_images;
  for (Letter a = 0; a < sigma.num_letters(); ++a)
    if (local_only(a)) sigma0_images.push_back(phi.images[a]);
  TransformationMonoid n_monoid = close_generators(x_size, sigma0_images);

  SplitResult r;
  r.n_elements = n_monoid.elements();
  const auto n_size = static_cast<std::uint32_t>(r.n_elements.size());
  const auto id_index = static_cast<std::uint32_t>(n_monoid.index_of(Transformation::identity(x_size)));

  r.first.alphabet = phi.alphabet;
  r.first.degree = n_size;
  for (Letter a = 0; a < sigma.num_letters(); ++a) {
    if (local_only(a)) {
      // right multiplication by phi(a)
      r.first.images.push_back(Transformation::from_function(n_size, [&](std::uint32_t k) {
        return static_cast<std::uint32_t>(n_monoid.index_of(r.n_elements[k] * phi.images[a]));
      }));
    } else if (on_p(a)) {
      r.first.images.push_back(Transformation::constant(n_size, id_index));
    } else {
      r.first.images.push_back(Transformation::identity(n_size));
    }
  }

  r.letters = ProductAlphabet(phi.alphabet, n_size);
  r.second.alphabet = r.letters.alphabet;
  r.second.degree = x_size;
  for (Letter a = 0; a < sigma.num_letters(); ++a)
    for (std::uint32_t k = 0; k < n_size; ++k) {
      if (local_only(a)) r.second.images.push_back(Transformation::identity(x_size));
      else if (on_p(a)) r.second.images.push_back(r.n_elements[k] * phi.images[a]);
      else r.second.images.push_back(phi.images[a]);
    }

  r.wreath = wreath_morphism_checked(r.first, r.second, r.letters);
  for (std::uint32_t k = 0; k < n_size; ++k)
    for (std::uint32_t x = 0; x < x_size; ++x) r.map.push_back(r.n_elements[k](x));
  return r;
}

// ---------------------------------------------------------------------------
// Join.

// phi2' over Sigma x_loc S: (a, s_a) -> phi2(a, f1(s)). Checks that the choice
// of s does not matter.
inline TraceMorphism lift_second(const TraceMorphism& phi2, const ProductAlphabet& letters,
                                 const LocalProductAlphabet& local, const std::vector<std::uint32_t>& f1) {
  const AtmShape& shape = local.shape;
  if (f1.size() != shape.carrier()) fail(ErrorCode::InvalidArgument, "first simulation map has wrong domain");
  const DistributedAlphabet& sigma = *local.base;
  TraceMorphism out;
  out.alphabet = local.alphabet;
  out.degree = phi2.degree;
  out.images.resize(local.parts.size());
  std::vector<bool> set(local.parts.size(), false);
  std::vector<std::uint32_t> witness(local.parts.size(), 0);
  for (Letter a = 0; a < sigma.num_letters(); ++a)
    for (std::uint32_t s = 0; s < shape.carrier(); ++s) {
      const Letter l = local.letter_at(a, s);
      const Transformation& img = phi2.images.at(letters.letter(a, f1[s]));
      if (!set[l]) {
        out.images[l] = img;
        set[l] = true;
        witness[l] = s;
      } else if (!(out.images[l] == img)) {
        fail(ErrorCode::HypothesisViolation, "letter " + sigma.letter_name(a) + " at states " +
                                                 std::to_string(witness[l]) + " and " + std::to_string(s));
      }
    }
  return out;
}

struct JoinResult {
  WreathMorphism wreath;             // phi1 wr phi2
  TraceMorphism second_lifted;       // phi2'
  AsyncWreathMorphism asynchronous;  // psi1 wr_as psi2
  std::vector<std::uint32_t> map;    // combined state -> f1(s) * |Y| + f2(q)
};

// psi1 simulates phi1 via f1; psi2 simulates phi2' via f2.
inline JoinResult join(const TraceMorphism& phi1, const TraceMorphism& phi2, const ProductAlphabet& letters,
                       const TraceMorphism& psi1, const std::vector<std::uint32_t>& f1, const TraceMorphism& psi2,
                       const std::vector<std::uint32_t>& f2) {
  if (!psi1.shape) fail(ErrorCode::InvalidArgument, "first simulating morphism has no product structure");
  LocalProductAlphabet local(phi1.alphabet, *psi1.shape);
  JoinResult r;
  r.second_lifted = lift_second(phi2, letters, local, f1);
  r.wreath = wreath_morphism_checked(phi1, phi2, letters);
  r.asynchronous = asynchronous_wreath_morphism(psi1, psi2, local);
  if (f2.size() != psi2.degree) fail(ErrorCode::InvalidArgument, "second simulation map has wrong domain");
  for (std::uint32_t sq = 0; sq < r.asynchronous.morphism.degree; ++sq) {
    auto [s, q] = r.asynchronous.shape.split(sq);
    r.map.push_back(static_cast<std::uint32_t>(f1[s] * phi2.degree + f2[q]));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Decomposition.

enum class FactorKind { Trivial, U2, Group, Tm };

inline std::string_view factor_kind_name(FactorKind k) {
  switch (k) {
    case FactorKind::Trivial: return "trivial";
    case FactorKind::U2: return "U2";
    case FactorKind::Group: return "group";
    case FactorKind::Tm: return "tm";
  }
  return "?";
}

// Factor whose nontrivial local states all sit at one process.
struct LocalizedFactor {
  FactorKind kind = FactorKind::Tm;
  ProcessId process = 0;
  std::size_t states = 1;
  TransformationMonoid monoid;
  bool non_prime() const { return kind == FactorKind::Tm; }
};

// A reset monoid on at most two points divides U_2; a monoid of permutations is a group.
inline FactorKind classify_factor(const TransformationMonoid& m) {
  if (m.size() == 1) return FactorKind::Trivial;
  const bool resets = m.degree() <= 2 && std::all_of(m.elements().begin(), m.elements().end(), [](const Transformation& t) {
                        return t.is_identity() || t.is_constant();
                      });
  if (resets) return FactorKind::U2;
  if (std::all_of(m.elements().begin(), m.elements().end(), [](const Transformation& t) { return t.is_permutation(); }))
    return FactorKind::Group;
  return FactorKind::Tm;
}

// Simulation of a morphism acting only through the letters of one process by an
// asynchronous morphism into factors localized at that process.
struct BaseResult {
  TraceMorphism psi;               // asynchronous, with product structure
  std::vector<std::uint32_t> map;  // psi carrier -> phi carrier
  std::vector<LocalizedFactor> factors;
};
using BaseDecomposer = std::function<BaseResult(const TraceMorphism& phi, ProcessId p)>;

// Keeps the monoid as a single factor localized at p.
inline BaseResult base_passthrough(const TraceMorphism& phi, ProcessId p) {
  const DistributedAlphabet& sigma = *phi.alphabet;
  for (Letter a = 0; a < sigma.num_letters(); ++a)
    if (!sigma.loc(a).contains(p) && !phi.images[a].is_identity())
      fail(ErrorCode::InvalidArgument, "base morphism moves on letter " + sigma.letter_name(a) + " outside the process");
  BaseResult r;
  r.psi = phi;
  r.psi.shape = localized_shape(sigma.num_processes(), p, static_cast<std::uint32_t>(phi.degree));
  r.map.resize(phi.degree);
  std::iota(r.map.begin(), r.map.end(), 0U);
  LocalizedFactor f;
  f.process = p;
  f.states = phi.degree;
  f.monoid = phi.image_monoid();
  f.kind = classify_factor(f.monoid);
  r.factors.push_back(std::move(f));
  return r;
}

struct Decomposition {
  std::vector<LocalizedFactor> factors;  // in leaf-elimination order
  TraceMorphism morphism;                // asynchronous, into the iterated wreath product
  std::vector<std::uint32_t> map;        // onto the original carrier
  std::vector<ProcessId> leaf_order;
  std::vector<ProcessId> neighbour_of_leaf;  // same length as leaf_order minus one
};

namespace detail {

// Sigma' over P \ {leaf}: letters (a, s_a) with loc(a) != {leaf}, at loc(a) \ {leaf}.
struct ReducedAlphabet {
  AlphabetPtr alphabet;
  std::vector<Letter> source;       // letter of Sigma x_loc S for each letter of Sigma'
  std::vector<ProcessId> process;   // parent process of each child process
};

inline ReducedAlphabet reduce_alphabet(const LocalProductAlphabet& local, ProcessId leaf) {
  const DistributedAlphabet& full = *local.alphabet;
  ReducedAlphabet r;
  std::vector<std::string> names;
  std::vector<ProcessId> child_of(full.num_processes(), 0);
  for (ProcessId i = 0; i < full.num_processes(); ++i) {
    if (i == leaf) continue;
    child_of[i] = static_cast<ProcessId>(r.process.size());
    r.process.push_back(i);
    names.push_back(full.process_name(i));
  }
  std::vector<std::string> letters;
  std::vector<ProcessSet> locs;
  for (Letter l = 0; l < full.num_letters(); ++l) {
    const ProcessSet rest = full.loc(l).minus(ProcessSet::of({leaf}));
    if (rest.empty()) continue;
    ProcessSet mapped;
    for (ProcessId i : rest.members()) mapped.insert(child_of[i]);
    r.source.push_back(l);
    letters.push_back(full.letter_name(l));
    locs.push_back(mapped);
  }
  r.alphabet = std::make_shared<const DistributedAlphabet>(std::move(names), std::move(letters), std::move(locs));
  return r;
}

inline Decomposition decompose(const TraceMorphism& phi, const BaseDecomposer& base) {
  const DistributedAlphabet& sigma = *phi.alphabet;
  const std::size_t n = sigma.num_processes();
  if (n == 1) {
    BaseResult b = base(phi, 0);
    return {b.factors, b.psi, b.map, {0}, {}};
  }
  const CommunicationGraph g = communication_graph(sigma);
  ProcessId leaf = 0;
  while (g.degree(leaf) > 1) ++leaf;
  const auto nb = g.neighbours(leaf);
  const ProcessId neighbour = nb.empty() ? (leaf == 0 ? 1 : 0) : nb[0];

  SplitResult sp = split(phi, leaf);
  BaseResult first = base(sp.first, leaf);
  LocalProductAlphabet local(phi.alphabet, *first.psi.shape);
  TraceMorphism lifted = lift_second(sp.second, sp.letters, local, first.map);

  ReducedAlphabet red = reduce_alphabet(local, leaf);
  TraceMorphism restricted{red.alphabet, lifted.degree, {}, std::nullopt};
  for (Letter l : red.source) restricted.images.push_back(lifted.images[l]);
  Decomposition child = decompose(restricted, base);

  // Extend over P with a singleton state set at the leaf; letters outside
  // Sigma' act as the identity.
  TraceMorphism second{local.alphabet, child.morphism.degree, {}, child.morphism.shape->insert_singleton(leaf)};
  second.images.assign(local.alphabet->num_letters(), Transformation::identity(child.morphism.degree));
  for (Letter k = 0; k < red.source.size(); ++k) second.images[red.source[k]] = child.morphism.images[k];

  JoinResult j = join(sp.first, sp.second, sp.letters, first.psi, first.map, second, child.map);
  Decomposition out;
  out.factors = first.factors;
  for (auto f : child.factors) {
    f.process = red.process[f.process];
    out.factors.push_back(std::move(f));
  }
  out.morphism = j.asynchronous.morphism;
  out.map.reserve(j.map.size());
  for (auto v : j.map) out.map.push_back(sp.map[v]);
  out.leaf_order.push_back(leaf);
  for (auto p : child.leaf_order) out.leaf_order.push_back(red.process[p]);
  out.neighbour_of_leaf.push_back(neighbour);
  for (auto p : child.neighbour_of_leaf) out.neighbour_of_leaf.push_back(red.process[p]);
  return out;
}

}  // namespace detail

// Simulates a morphism into a finite transformation monoid by an asynchronous
// morphism into an asynchronous wreath product of factors localized at single
// processes, peeling off one leaf of the communication graph at a time.
inline Decomposition acyclic_decompose(const TraceMorphism& phi, const BaseDecomposer& base = base_passthrough) {
  phi.validate();
  if (!phi.respects_independence()) fail(ErrorCode::InvalidArgument, "images of independent letters do not commute");
  if (!is_acyclic(*phi.alphabet)) fail(ErrorCode::NotAcyclic, "communication graph has a cycle");
  return detail::decompose(phi, base);
}

inline bool verify(const TraceMorphism& phi, const Decomposition& d) { return check_simulation(phi, d.morphism, d.map); }

// Plain-text report: one line per factor, then the verification result.
inline std::string decomposition_report(const TraceMorphism& phi, const Decomposition& d) {
  const DistributedAlphabet& sigma = *phi.alphabet;
  std::ostringstream os;
  os << "factors: " << d.factors.size() << "\n";
  for (std::size_t k = 0; k < d.factors.size(); ++k) {
    const auto& f = d.factors[k];
    os << "factor " << k << ": kind=" << factor_kind_name(f.kind) << " process=" << sigma.process_name(f.process)
       << " states=" << f.states << " monoid=" << f.monoid.size() << (f.non_prime() ? " non_prime" : "") << "\n";
  }
  os << "leaf order:";
  for (auto p : d.leaf_order) os << " " << sigma.process_name(p);
  os << "\ncarrier: " << d.morphism.degree << " -> " << phi.degree << "\n";
  os << "simulation: " << (verify(phi, d) ? "ok" : "FAILED") << "\n";
  return os.str();
}

}  // namespace tracekit
