#include <catch_amalgamated.hpp>

#include <set>

#include "support/automata.hpp"
#include "support/oracles.hpp"
#include "tracekit/cascade/cascade.hpp"

using namespace tracekit;

namespace {

std::vector<AsyncAutomaton> sample_automata() {
  auto path = fixtures::path3(), tri = fixtures::triangle();
  return {fixtures::u2_p1(path),
          fixtures::triangle_mod3(tri),
          fixtures::random_automaton(path, 3, 7),
          fixtures::random_automaton(tri, 2, 11),
          fixtures::fig6().flattened()};
}

Trace tr(const AlphabetPtr& sigma, const std::string& text) { return Trace::parse(sigma, text); }

}  // namespace

TEST_CASE("the empty trace leaves the initial state", "[automaton]") {
  for (const auto& a : sample_automata()) CHECK(run(a, Trace(a.alphabet())) == a.initial());
}

TEST_CASE("two linearizations of a diamond meet in the same state", "[automaton]") {
  // p1 owns {a, c}, p2 owns {a, b}; b and c commute.
  auto sigma = fixtures::pair2();
  const Letter a = sigma->letter("a"), b = sigma->letter("b"), c = sigma->letter("c");
  TraceMorphism dfa{sigma, 2, {}, std::nullopt};
  dfa.images.resize(3, Transformation::identity(2));
  dfa.images[a] = Transformation::constant(2, 0);
  dfa.images[b] = Transformation::constant(2, 1);
  REQUIRE(dfa.respects_independence());
  auto states = [&](std::vector<Letter> w) {
    std::vector<std::uint32_t> out{0};
    for (Letter l : w) out.push_back(dfa.images[l](out.back()));
    return out;
  };
  CHECK(states({c, b}) == std::vector<std::uint32_t>{0, 0, 1});
  CHECK(states({b, c}) == std::vector<std::uint32_t>{0, 1, 1});
}

TEST_CASE("runs do not depend on the linearization", "[automaton][oracle]") {
  for (const auto& a : sample_automata()) {
    for_each_trace(a.alphabet(), 5, [&](const Trace& t) {
      const StateVector expected = run(a, t);
      for_each_linearization(t, [&](const std::vector<EventId>& order) {
        std::vector<Letter> w;
        for (EventId e : order) w.push_back(t[e]);
        CHECK(run_word(a, w) == expected);
      });
    });
  }
}

TEST_CASE("transitions of independent letters commute", "[automaton]") {
  for (const auto& a : sample_automata()) CHECK(transition_atm(a).morphism.respects_independence());
}

TEST_CASE("the d-above-a chain", "[automaton][cascade]") {
  auto fig = fixtures::fig6();
  auto flat = fig.flattened();
  const auto& sigma = fig.alphabet;
  const StateVector s = run(flat, tr(sigma, "abcd"));
  CHECK(flat.value_name(3, 2, s[3 * 3 + 2]) == "t2");
  CHECK(accepts(flat, tr(sigma, "abcd")));
  CHECK_FALSE(accepts(flat, tr(sigma, "ad")));
  CHECK_FALSE(accepts(flat, tr(sigma, "bacd")));
  CHECK(accepts(flat, tr(sigma, "abcdd")));
  // Brute force over the class order: some d with an a below it.
  for (const auto& t : enumerate_traces(sigma, 5)) {
    oracles::ClassOrder order(*sigma, t.word());
    bool expected = false;
    for (std::size_t d = 0; d < t.size(); ++d)
      for (std::size_t x = 0; x < t.size(); ++x)
        expected = expected || (sigma->letter_name(t[d]) == "d" && sigma->letter_name(t[x]) == "a" && order.leq[x][d]);
    CHECK(accepts(flat, t) == expected);
  }
}

TEST_CASE("acceptance needs an accepting set", "[automaton]") {
  auto a = fixtures::u2_p1(fixtures::path3());
  const Trace t = tr(a.alphabet(), "ab");
  CHECK(fixtures::error_code([&] { accepts(a.without_accepting(), t); }) == ErrorCode::NoAcceptingSet);
  CHECK_FALSE(accepts(a.with_accepting(AcceptingSet::states({})), t));
  CHECK(accepts(a.with_accepting(AcceptingSet::all()), t));
}

TEST_CASE("transition monoids", "[automaton][monoid]") {
  auto path = fixtures::path3();
  CHECK(transition_atm(fixtures::u2_p1(path)).atm().monoid.size() == 3);

  ExplicitAutomatonData idle{path, {{"x"}, {"y", "z"}, {"w"}}, {0, 1, 0}, {}};
  CHECK(transition_atm(make_explicit(idle)).atm().monoid.size() == 1);

  // First stage of the d-above-a chain: distinct images of traces up to length 4.
  const auto first = fixtures::fig6().stages[0].automaton;
  auto ts = transition_atm(first);
  std::set<std::vector<std::uint32_t>> seen{Transformation::identity(ts.morphism.degree).table()};
  for (const auto& t : enumerate_traces(first.alphabet(), 4)) seen.insert(ts.morphism.evaluate(t).table());
  CHECK(ts.atm().monoid.size() == seen.size());
  CHECK(seen.size() == 2);
}

TEST_CASE("transition morphism evaluated at the initial state is the run", "[automaton]") {
  for (const auto& a : sample_automata()) {
    auto ts = transition_atm(a);
    CHECK(ts.morphism.is_asynchronous());
    const auto init = ts.space.encode(a.initial());
    for_each_trace(a.alphabet(), 4, [&](const Trace& t) {
      CHECK(ts.morphism.evaluate(t)(init) == ts.space.encode(run(a, t)));
    });
  }
}

TEST_CASE("automata from asynchronous morphisms", "[automaton]") {
  auto path = fixtures::path3();
  auto phi = fixtures::u2_p1_morphism(path);
  auto a = from_morphism(phi, 0);
  auto back = transition_atm(a).morphism;
  for (Letter l = 0; l < path->num_letters(); ++l) CHECK(back.images[l] == phi.images[l]);

  // Round trip through the transition morphism keeps every run.
  for (const auto& b : sample_automata()) {
    auto ts = transition_atm(b);
    auto rebuilt = from_morphism(ts.morphism, ts.space.encode(b.initial()));
    for_each_trace(b.alphabet(), 4, [&](const Trace& t) {
      CHECK(ts.space.encode(run(b, t)) == StateSpace(rebuilt).encode(run(rebuilt, t)));
    });
  }

  // c does not touch p1, so a reset at p1 is not a c-map.
  phi.images[path->letter("c")] = Transformation::constant(2, 0);
  CHECK(fixtures::error_code([&] { from_morphism(phi, 0); }) == ErrorCode::NotAMap);

  // All identities: nothing ever moves.
  TraceMorphism idle{path, 4, std::vector<Transformation>(3, Transformation::identity(4)), AtmShape({2, 2, 1})};
  auto still = from_morphism(idle, 3);
  for_each_trace(path, 4, [&](const Trace& t) { CHECK(run(still, t) == still.initial()); });
}

TEST_CASE("chi decorations of abc", "[automaton]") {
  auto path = fixtures::path3();
  auto a = fixtures::u2_p1(path);
  auto d = chi(a, tr(path, "abc"));
  REQUIRE(d.size() == 3);
  CHECK(d.decoration(0) == Decoration{0});
  CHECK(d.decoration(1) == Decoration{0, 0});
  CHECK(d.decoration(2) == Decoration{0, 0});
  CHECK(a.value_name(0, 0, d.decoration(1)[0]) == "1");
  CHECK(a.value_name(0, 1, d.decoration(1)[1]) == "_");
  CHECK(chi(a, Trace(path)).size() == 0);
}

TEST_CASE("chi of an extension appends one decoration", "[automaton]") {
  for (const auto& a : sample_automata()) {
    const auto& sigma = a.alphabet();
    for_each_trace(sigma, 3, [&](const Trace& t) {
      const auto before = chi(a, t);
      const StateVector s = run(a, t);
      for (Letter l = 0; l < sigma->num_letters(); ++l) {
        std::vector<Letter> w = t.word();
        w.push_back(l);
        auto decos = before.decorations;
        decos.push_back(a.local_part(l, s));
        const Trace ta = Trace::from_word(sigma, w);
        CHECK(chi(a, ta) == LabelledTrace::from_linearization(sigma, w, decos));
      }
    });
  }
}

TEST_CASE("output maps over a propagation automaton", "[automaton][oracle]") {
  // Process state bit: has the process heard of an event of process i.
  for (auto sigma : {fixtures::path3(), fixtures::triangle(), fixtures::chain3()}) {
    const std::size_t n = sigma->num_processes();
    for (ProcessId target = 0; target < n; ++target) {
      StepFn step = [sigma, target](Letter a, DecorationView, StateRef s) {
        std::uint64_t heard = sigma->loc(a).contains(target) ? 1 : 0;
        for (ProcessId p : sigma->loc_list(a)) heard |= s[p];
        for (ProcessId p : sigma->loc_list(a)) s[p] = heard;
      };
      AsyncAutomaton prop(sigma, 1, StateVector(n, 0), std::vector<std::uint64_t>(n, 2), step);
      Transducer mu{prop, [sigma](Letter a, DecorationView, StateView pre) {
                      std::uint64_t any = 0;
                      for (ProcessId p : sigma->loc_list(a)) any |= pre[p];
                      return Decoration{any};
                    }};
      Transducer same{prop, [&prop](Letter a, DecorationView, StateView pre) { return prop.local_part(a, pre); }};
      Transducer constant{prop, [](Letter, DecorationView, StateView) { return Decoration{7}; }};
      for_each_trace(sigma, 5, [&](const Trace& t) {
        const auto out = apply_transducer(mu, LabelledTrace::plain(t));
        oracles::ClassOrder order(*sigma, t.word());
        for (EventId e = 0; e < t.size(); ++e) {
          bool expected = false;
          for (std::size_t f = 0; f < t.size(); ++f)
            expected = expected || (f != e && order.leq[f][e] && sigma->loc(t[f]).contains(target));
          CHECK(out.decoration(e) == Decoration{expected ? 1U : 0U});
        }
        CHECK(apply_transducer(same, LabelledTrace::plain(t)) == chi(prop, t));
        for (const auto& d : apply_transducer(constant, LabelledTrace::plain(t)).decorations) CHECK(d == Decoration{7});
      });
    }
  }
}

TEST_CASE("zeta sees states of processes that never met", "[automaton]") {
  auto path = fixtures::path3();
  auto a = fixtures::u2_p1(path);
  auto z = zeta_oracle(a, tr(path, "abc"));
  // c runs on p2 and p3; the decoration holds the whole global state.
  REQUIRE(z.decoration(2).size() == 3);
  CHECK(a.value_name(0, 0, z.decoration(2)[0]) == "2");
  CHECK(zeta_oracle(a, Trace(path)).size() == 0);
}

TEST_CASE("chi is the local restriction of zeta", "[automaton]") {
  for (const auto& a : sample_automata()) {
    for_each_trace(a.alphabet(), 4, [&](const Trace& t) {
      const auto z = zeta_oracle(a, t), c = chi(a, t);
      for (EventId e = 0; e < t.size(); ++e) CHECK(a.local_part(t[e], z.decoration(e)) == c.decoration(e));
    });
  }
}

TEST_CASE("one process: zeta and chi coincide", "[automaton]") {
  auto solo = DistributedAlphabet::make({"p"}, {{"a", {"p"}}, {"b", {"p"}}});
  auto a = fixtures::random_automaton(solo, 3, 5);
  for_each_trace(solo, 5, [&](const Trace& t) { CHECK(zeta_oracle(a, t) == chi(a, t)); });
}
