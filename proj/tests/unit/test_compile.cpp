#include <catch_amalgamated.hpp>

#include "support/automata.hpp"
#include "support/formulas.hpp"
#include "tracekit/loctl/compile.hpp"
#include "tracekit/loctl/decompile.hpp"
#include "tracekit/loctl/eval.hpp"
#include "tracekit/loctl/parser.hpp"

using namespace tracekit;

namespace {

TraceFormula parse(const fixtures::FormulaCase& c) { return parse_trace_formula(c.text, *c.alphabet); }

}  // namespace

TEST_CASE("S_i formulas compile to reset chains with the same language", "[compile]") {
  for (const auto& c : fixtures::since_formulas()) {
    INFO(c.text);
    auto f = parse(c);
    auto compiled = compile_sprtl(f, c.alphabet);
    auto flat = compiled.automaton();
    auto staged = compiled.chain.as_cascade_chain().flattened().with_accepting(compiled.accepting_set());
    for (const auto& st : compiled.chain.stages()) CHECK(st.process < c.alphabet->num_processes());
    for_each_trace(c.alphabet, 5, [&](const Trace& t) {
      const bool expected = eval(f, t);
      CHECK(accepts(flat, t) == expected);
      CHECK(accepts(staged, t) == expected);
    });
  }
}

TEST_CASE("compiled chains have aperiodic transition monoids", "[compile][monoid]") {
  for (const auto& c : fixtures::since_formulas()) {
    INFO(c.text);
    auto compiled = compile_sprtl(parse(c), c.alphabet);
    auto ts = transition_atm(compiled.chain.flatten());
    CHECK(is_aperiodic(ts.morphism.image_monoid()));
  }
}

TEST_CASE("last p1-event is an a", "[compile]") {
  auto c3 = fixtures::chain3();
  auto a = compile_sprtl(parse_trace_formula("E[1] a", *c3), c3).automaton();
  CHECK(accepts(a, Trace::parse(c3, "a")));
  CHECK(accepts(a, Trace::parse(c3, "ba")));
  CHECK_FALSE(accepts(a, Trace::parse(c3, "ab")));
  CHECK_FALSE(accepts(a, Trace(c3)));
}

TEST_CASE("the reset language as a formula", "[compile]") {
  auto path = fixtures::path3();
  LetterMacros rs{{"R1", {"a"}}, {"R2", {"b"}}};
  auto high = parse_trace_formula("E[p1] (R2 | (!R1 & ((!R1) S[p1] R2)))", *path, rs);
  auto u2 = fixtures::u2_p1(path);
  auto low_state = u2.with_accepting(AcceptingSet::conjunctive({{0}, {}, {}}));
  auto compiled_low = compile_sprtl(!high, path).automaton();
  for_each_trace(path, 5, [&](const Trace& t) {
    CHECK(eval(high, t) == accepts(u2, t));
    CHECK(accepts(compiled_low, t) == accepts(low_state, t));
  });
}

TEST_CASE("nested S on one process counts events", "[compile]") {
  auto c3 = fixtures::chain3();
  auto f = parse_trace_formula("E[3] (true S[3] (false S[3] true))", *c3);
  auto a = compile_sprtl(f, c3).automaton();
  for_each_trace(c3, 5, [&](const Trace& t) { CHECK(accepts(a, t) == eval(f, t)); });
}

TEST_CASE("wrong fragments are rejected", "[compile]") {
  auto tri = fixtures::triangle();
  auto yleq = parse_trace_formula("E[3] Yleq(1,3)", *tri);
  auto prev = parse_trace_formula("E[3] Y[1] a", *tri);
  CHECK(fixtures::error_code([&] { compile_sprtl(yleq, tri); }) == ErrorCode::WrongFragment);
  CHECK(fixtures::error_code([&] { compile_sprtl(prev, tri); }) == ErrorCode::WrongFragment);
  CHECK(fixtures::error_code([&] { compile_restricted(prev, tri); }) == ErrorCode::WrongFragment);
  CHECK(fixtures::error_code([&] { compile_gcs(yleq, tri); }) == ErrorCode::WrongFragment);
  CHECK(fixtures::error_code([&] { compile_gcs(prev, tri).chain.chain.flatten(); }) == ErrorCode::WrongFragment);
}

TEST_CASE("Yleq formulas through the restricted cascade", "[compile][gossip]") {
  auto tri = fixtures::triangle();
  auto ordered = compile_restricted(parse_trace_formula("E[3] Yleq(1,3)", *tri), tri);
  CHECK(accepts(ordered.automaton, Trace::parse(tri, "abc")));
  CHECK_FALSE(accepts(ordered.automaton, Trace::parse(tri, "abac")));
  for (const auto& c : fixtures::yleq_formulas()) {
    INFO(c.text);
    auto f = parse(c);
    auto r = compile_restricted(f, c.alphabet);
    for_each_trace(c.alphabet, 5, [&](const Trace& t) { CHECK(accepts(r.automaton, t) == eval(f, t)); });
  }
  auto none = parse_trace_formula("!E[3] true", *tri);
  auto r = compile_restricted(none, tri);
  for_each_trace(tri, 4, [&](const Trace& t) {
    bool p3 = false;
    for (Letter l : t.word()) p3 = p3 || tri->loc(l).contains(2);
    CHECK(accepts(r.automaton, t) == !p3);
  });
}

TEST_CASE("S_i formulas agree through both compilers", "[compile]") {
  for (const auto& c : fixtures::since_formulas()) {
    INFO(c.text);
    auto f = parse(c);
    auto plain = compile_sprtl(f, c.alphabet).automaton();
    auto restricted = compile_restricted(f, c.alphabet).automaton;
    auto seq = compile_gcs(f, c.alphabet);
    for_each_trace(c.alphabet, 4, [&](const Trace& t) {
      CHECK(accepts(plain, t) == accepts(restricted, t));
      CHECK(accepts(plain, t) == seq.accepts(t));
    });
  }
}

TEST_CASE("Y_i formulas through global cascade sequences", "[compile][gcs]") {
  auto cases = fixtures::prev_formulas();
  cases.push_back({fixtures::path3(), "E[2] Y[1] a"});
  cases.push_back({fixtures::triangle(), "E[p2] Y[p2] true"});
  for (const auto& c : cases) {
    INFO(c.text);
    auto f = parse(c);
    auto g = compile_gcs(f, c.alphabet);
    for_each_trace(c.alphabet, 4, [&](const Trace& t) { CHECK(g.accepts(t) == eval(f, t)); });
  }
}

TEST_CASE("decompiling a single reset stage", "[compile][decompile]") {
  auto path = fixtures::path3();
  auto u2 = fixtures::u2_p1(path);
  CascadeChain chain({u2.without_accepting()});
  auto high = decompile_sprtl(chain, AcceptingSet::conjunctive({{1}, {}, {}}));
  auto everything = decompile_sprtl(chain, AcceptingSet::all());
  LetterMacros rs{{"R1", {"a"}}, {"R2", {"b"}}};
  auto spelled = parse_trace_formula("E[p1] (R2 | (!R1 & ((!R1) S[p1] R2)))", *path, rs);
  for_each_trace(path, 5, [&](const Trace& t) {
    CHECK(eval(high, t) == accepts(u2, t));
    CHECK(eval(high, t) == eval(spelled, t));
    CHECK(eval(everything, t));
  });
  auto tri = fixtures::triangle();
  CHECK(fixtures::error_code([&] {
    decompile_sprtl(CascadeChain({fixtures::triangle_mod3(tri)}), AcceptingSet::all());
  }) == ErrorCode::NotResetChain);
}

TEST_CASE("decompiling compiled chains gives equivalent formulas", "[compile][decompile]") {
  for (const auto& c : fixtures::since_formulas()) {
    INFO(c.text);
    auto f = parse(c);
    auto back = decompile_sprtl(compile_sprtl(f, c.alphabet));
    CHECK(fragment_of(back.node()) == Fragment::SinceOnly);
    for_each_trace(c.alphabet, 4, [&](const Trace& t) { CHECK(eval(back, t) == eval(f, t)); });
  }
}
