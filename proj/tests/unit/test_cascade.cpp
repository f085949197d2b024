#include <catch_amalgamated.hpp>

#include "support/automata.hpp"
#include "support/oracles.hpp"
#include "tracekit/cascade/detector.hpp"
#include "tracekit/monoid/wreath.hpp"

using namespace tracekit;

namespace {

AsyncAutomaton idle(const AlphabetPtr& sigma) {
  const std::size_t n = sigma->num_processes();
  return AsyncAutomaton(sigma, 1, StateVector(n, 0), std::vector<std::uint64_t>(n, 1),
                        [](Letter, DecorationView, StateRef) {});
}

StateVector slice(const StateVector& s, std::size_t from, std::size_t len) {
  return StateVector(s.begin() + static_cast<std::ptrdiff_t>(from), s.begin() + static_cast<std::ptrdiff_t>(from + len));
}

// Detects a c-event whose decoration has gamma bit (p1, p3) set; p3 keeps the
// verdict of the latest c.
AsyncAutomaton last_c_ordered(const AlphabetPtr& tri) {
  const Letter c = tri->letter("c");
  StepFn step = [c](Letter a, DecorationView deco, StateRef s) {
    if (a != c) return;
    const std::uint64_t v = gamma_at(deco[0], 0, 2, 3) ? 1 : 0;
    s[0] = s[2] = v;
  };
  return AsyncAutomaton(tri, 1, StateVector(3, 0), std::vector<std::uint64_t>(3, 2), step)
      .with_accepting(AcceptingSet::conjunctive({{}, {}, {1}}));
}

}  // namespace

TEST_CASE("local cascade realizes the asynchronous wreath product", "[cascade][wreath]") {
  auto path = fixtures::path3(), tri = fixtures::triangle();
  auto fig = fixtures::fig6();
  std::vector<std::pair<AsyncAutomaton, AsyncAutomaton>> pairs = {
      {fig.stages[0].automaton, fig.stages[1].automaton},
      {fixtures::u2_p1(path), fixtures::random_reader(path, 2, 5, 3)},
      {fixtures::triangle_mod3(tri), fixtures::random_reader(tri, 2, 7, 4)},
  };
  for (const auto& [first, second] : pairs) {
    const auto sigma = first.alphabet();
    auto phi = transition_atm(first);
    LocalProductAlphabet letters(sigma, phi.space.shape());
    auto psi = transition_atm_over(second, first, letters);
    auto eta = asynchronous_wreath_morphism(phi.morphism, psi.morphism, letters);
    auto product = local_cascade(first, second);
    auto whole = transition_atm(product);
    StateSpace second_space(second);
    // Wreath index -> state of the flattened product.
    auto to_product = [&](std::uint32_t sq) {
      auto [s, q] = eta.shape.split(sq);
      StateVector v = phi.space.decode(s);
      StateVector u = second_space.decode(q);
      v.insert(v.end(), u.begin(), u.end());
      return whole.space.encode(v);
    };
    REQUIRE(eta.morphism.degree == whole.morphism.degree);
    for (Letter a = 0; a < sigma->num_letters(); ++a)
      for (std::uint32_t sq = 0; sq < eta.morphism.degree; ++sq)
        CHECK(whole.morphism.images[a](to_product(sq)) == to_product(eta.morphism.images[a](sq)));
  }
}

TEST_CASE("an idle second stage changes nothing", "[cascade]") {
  auto path = fixtures::path3();
  auto first = fixtures::random_automaton(path, 3, 21);
  auto product = local_cascade(first, idle(path));
  for_each_trace(path, 5, [&](const Trace& t) {
    auto s = run(product, t);
    CHECK(slice(s, 0, first.width()) == run(first, t));
    CHECK(slice(s, first.width(), 3) == StateVector(3, 0));
  });
}

TEST_CASE("local cascade is associative", "[cascade]") {
  for (auto sigma : {fixtures::path3(), fixtures::triangle()}) {
    auto a = fixtures::random_automaton(sigma, 2, 1);
    auto b = fixtures::random_reader(sigma, 2, 5, 2);
    auto c = fixtures::random_reader(sigma, 2, 5, 3);
    auto left = local_cascade(local_cascade(a, b), c);
    auto right = local_cascade(a, local_cascade(b, c));
    for_each_trace(sigma, 5, [&](const Trace& t) { CHECK(run(left, t) == run(right, t)); });
  }
}

TEST_CASE("lifted stages read only their local part", "[cascade][gcs]") {
  auto path = fixtures::path3();
  auto upstream = fixtures::random_automaton(path, 2, 7);
  auto lifted_idle = lift_hat(idle(path), {1});
  for_each_trace(path, 4, [&](const Trace& t) { CHECK(run(lifted_idle, zeta_oracle(upstream, t)) == StateVector(3, 0)); });

  // One process: global and local parts coincide.
  auto solo = DistributedAlphabet::make({"p"}, {{"a", {"p"}}, {"b", {"p"}}});
  auto first = fixtures::random_automaton(solo, 3, 8);
  auto reader = fixtures::random_reader(solo, 3, 5, 9);
  CascadeChain chain({first, reader});
  auto seq = lift_chain(chain);
  for_each_trace(solo, 5, [&](const Trace& t) {
    auto z = zeta_oracle(first, t), c = chi(first, t);
    CHECK(z == c);
    CHECK(run(seq.stages[1], z) == run(reader, c));
  });
}

TEST_CASE("lifted chain agrees with the flattened cascade", "[cascade][gcs]") {
  auto fig = fixtures::fig6();
  std::vector<CascadeChain> chains = {fig.chain()};
  for (auto sigma : {fixtures::path3(), fixtures::triangle()})
    chains.push_back(CascadeChain({fixtures::random_automaton(sigma, 2, 31), fixtures::random_reader(sigma, 2, 5, 32),
                                   fixtures::random_reader(sigma, 3, 7, 33)}));
  for (const auto& chain : chains) {
    auto seq = lift_chain(chain);
    const auto& flat = chain.flattened();
    for_each_trace(flat.alphabet(), 5, [&](const Trace& t) { CHECK(concat_states(gcs_run(seq, t)) == run(flat, t)); });
  }
}

TEST_CASE("sequence runs and their labellings", "[cascade][gcs]") {
  auto tri = fixtures::triangle();
  auto a = fixtures::triangle_mod3(tri);
  auto b = fixtures::random_reader(tri, 2, 11, 5);
  GlobalCascadeSequence single{{a}}, pair{{a, b}};
  for_each_trace(tri, 4, [&](const Trace& t) {
    CHECK(gcs_run(single, t) == std::vector<StateVector>{run(a, t)});
    auto r = gcs_execute(pair, LabelledTrace::plain(t));
    CHECK(r.decorated == zeta_oracle(b, zeta_oracle(a, t)));
    CHECK(r.finals[1] == run(b, zeta_oracle(a, t)));
  });
}

TEST_CASE("sequence acceptance splits by final state", "[cascade][gcs]") {
  auto tri = fixtures::triangle();
  auto a = fixtures::random_automaton(tri, 2, 41);
  auto b = fixtures::random_reader(tri, 2, 9, 42);
  GlobalCascadeSequence seq{{a, b}};
  // Arbitrary subset of the product: first stage p1 and second stage p3 agree.
  AcceptingSet f([](StateView s) { return s[0] == s[5]; }, "p1 of stage 1 equals p3 of stage 2");
  StateSpace sa(a), sb(b);
  std::vector<std::pair<StateVector, StateVector>> finals;
  for (std::uint32_t x = 0; x < sa.size(); ++x)
    for (std::uint32_t y = 0; y < sb.size(); ++y)
      if (f.contains(concat_states({sa.decode(x), sb.decode(y)}))) finals.emplace_back(sa.decode(x), sb.decode(y));
  for_each_trace(tri, 4, [&](const Trace& t) {
    bool split = false;
    for (const auto& [u, v] : finals) {
      auto first = a.with_accepting(AcceptingSet::states({u}));
      auto second = b.with_accepting(AcceptingSet::states({v}));
      split = split || (accepts(first, t) && accepts(second, zeta_oracle(a, t)));
    }
    CHECK(gcs_accepts(seq, f, t) == split);
    CHECK(gcs_accepts(seq, AcceptingSet::all(), t));
    CHECK_FALSE(gcs_accepts(seq, AcceptingSet::states({}), t));
  });
}

TEST_CASE("detectors track the best global state of each view", "[cascade][gossip]") {
  auto path = fixtures::path3(), tri = fixtures::triangle();
  for (const auto& a : {fixtures::u2_p1(path), fixtures::random_automaton(path, 3, 51), fixtures::triangle_mod3(tri)}) {
    const auto& sigma = a.alphabet();
    const std::size_t n = sigma->num_processes();
    auto det = global_state_detector(a);
    auto gossip = vector_clock_gossip(sigma);
    auto whole = restricted_cascade(gossip.transducer, det.automaton);
    CHECK(run(whole, Trace(sigma)) == concat_states({run(gossip.transducer.automaton, Trace(sigma)), StateVector(n, 0)}));
    for_each_trace(sigma, 5, [&](const Trace& t) {
      auto s = run(whole, t);
      for (ProcessId i = 0; i < n; ++i) CHECK(det.decode(s[n + i]) == run(a, i_view(t, i)));
    });
  }
}

TEST_CASE("gossip realization simulates the automaton and labels with global states", "[cascade][gossip]") {
  auto path = fixtures::path3(), tri = fixtures::triangle();
  for (const auto& a : {fixtures::u2_p1(path), fixtures::random_automaton(path, 2, 61), fixtures::triangle_mod3(tri),
                        fixtures::random_automaton(tri, 2, 62)}) {
    auto g = gossip_compose(a);
    const auto& sigma = a.alphabet();
    for_each_trace(sigma, 5, [&](const Trace& t) {
      const StateVector s = run(g.automaton, t);
      CHECK(g.simulation(s) == run(a, t));
      CHECK(a.accepting()->contains(g.simulation(s)) == accepts(a, t));
      CHECK(apply_transducer(Transducer{g.automaton, g.xi}, LabelledTrace::plain(t)) == zeta_oracle(a, t));
    });
  }
  // c-event of abc learns the p1 state.
  auto a = fixtures::u2_p1(path);
  auto g = gossip_compose(a);
  auto d = apply_transducer(Transducer{g.automaton, g.xi}, LabelledTrace::plain(Trace::parse(path, "abc")));
  CHECK(a.value_name(0, 0, d.decoration(2)[0]) == "2");
  // The idle automaton stays put.
  auto still = gossip_compose(idle(tri));
  for_each_trace(tri, 4, [&](const Trace& t) { CHECK(still.simulation(run(still.automaton, t)) == StateVector(3, 0)); });
}

TEST_CASE("gossip realization of a two-stage sequence", "[cascade][gossip]") {
  auto tri = fixtures::triangle();
  auto a = fixtures::random_automaton(tri, 2, 71);
  GlobalCascadeSequence seq{{a, fixtures::random_reader(tri, 2, 13, 72)}};
  auto g = gcs_compose(seq);
  auto single = gcs_compose(GlobalCascadeSequence{{a}});
  auto plain = gossip_compose(a);
  AcceptingSet f([](StateView s) { return s[1] != s[3]; }, "p2 of stage 1 differs from p1 of stage 2");
  for_each_trace(tri, 4, [&](const Trace& t) {
    auto r = gcs_execute(seq, LabelledTrace::plain(t));
    const StateVector s = run(g.automaton, t);
    CHECK(g.simulation(s) == concat_states(r.finals));
    CHECK(f.contains(g.simulation(s)) == gcs_accepts(seq, f, t));
    CHECK(apply_transducer(Transducer{g.automaton, g.xi}, LabelledTrace::plain(t)) == r.decorated);
    CHECK(single.simulation(run(single.automaton, t)) == plain.simulation(run(plain.automaton, t)));
  });
}

TEST_CASE("wreath principle on the d-above-a chain", "[cascade]") {
  auto fig = fixtures::fig6();
  const auto& st = fig.stages;
  auto head = local_cascade(local_cascade(st[0].automaton, st[1].automaton), st[2].automaton);
  auto tail = st[3].automaton;
  auto whole = local_cascade(head, tail).with_accepting(*fig.accepting);
  auto finals = explicit_finals(whole);
  auto terms = wpp_decompose(head, tail, finals);
  CHECK(terms.size() == finals.size());
  for_each_trace(fig.alphabet, 5, [&](const Trace& t) {
    CHECK(wpp_accepts(terms, LabelledTrace::plain(t)) == accepts(whole, t));
  });
  CHECK(wpp_decompose(head, tail, {finals[0]}).size() == 1);
  auto none = wpp_decompose(head, tail, {});
  for_each_trace(fig.alphabet, 3, [&](const Trace& t) { CHECK_FALSE(wpp_accepts(none, LabelledTrace::plain(t))); });
}

TEST_CASE("wreath principle on a random two-stage cascade", "[cascade]") {
  auto path = fixtures::path3();
  auto a = fixtures::random_automaton(path, 3, 81);
  auto b = fixtures::random_reader(path, 2, 7, 82);
  auto whole = local_cascade(a, b).with_accepting(*b.accepting());
  auto terms = wpp_decompose(a, b, explicit_finals(whole));
  for_each_trace(path, 5, [&](const Trace& t) {
    CHECK(wpp_accepts(terms, LabelledTrace::plain(t)) == accepts(whole, t));
  });
}

TEST_CASE("restricted cascade reads the primary order", "[cascade][gossip]") {
  auto tri = fixtures::triangle();
  auto gossip = vector_clock_gossip(tri);
  auto detector = last_c_ordered(tri);
  auto r = restricted_cascade(gossip.transducer, detector);
  CHECK(accepts(r, Trace::parse(tri, "abc")));
  CHECK_FALSE(accepts(r, Trace::parse(tri, "abac")));
  auto reader = fixtures::random_reader(tri, 2, 17, 91);
  auto r2 = restricted_cascade(gossip.transducer, reader);
  auto all = restricted_cascade(gossip.transducer, idle(tri).with_accepting(AcceptingSet::all()));
  for_each_trace(tri, 5, [&](const Trace& t) {
    CHECK(accepts(r, t) == accepts(detector, theta_oracle(t)));
    CHECK(accepts(r2, t) == accepts(reader, theta_oracle(t)));
    CHECK(accepts(all, t));
  });
}

TEST_CASE("inverse labelling through a transducer", "[cascade]") {
  // B reads the parity of the upstream local state sum; the composite
  // accepts exactly the traces whose labelling B accepts.
  auto path = fixtures::path3();
  auto a = fixtures::random_automaton(path, 3, 101);
  Transducer mu{a, [&a](Letter l, DecorationView, StateView pre) {
                  std::uint64_t sum = 0;
                  for (auto v : a.local_part(l, pre)) sum += v;
                  return Decoration{sum % 2};
                }};
  auto b = fixtures::random_reader(path, 2, 2, 102);
  auto composite = restricted_cascade(mu, b);
  for_each_trace(path, 4, [&](const Trace& t) {
    CHECK(accepts(composite, t) == accepts(b, apply_transducer(mu, LabelledTrace::plain(t))));
  });
}
