#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tracekit/trace/poset.hpp"

using namespace tracekit;

TEST_CASE("normal form is the least linearization", "[trace]") {
  auto sigma = fixtures::path3();
  CHECK(Trace::parse(sigma, "ca").to_string() == "a c");
  CHECK(Trace::parse(sigma, "ca") == Trace::parse(sigma, "ac"));
  auto tri = fixtures::triangle();
  CHECK(Trace::parse(tri, "bc").to_string() == "b c");
  CHECK_FALSE(Trace::parse(tri, "bc") == Trace::parse(tri, "cb"));
}

TEST_CASE("unknown letters are rejected", "[trace]") {
  auto sigma = fixtures::path3();
  CHECK_THROWS_AS(Trace::parse(sigma, "a z"), Error);
  try {
    Trace::from_names(sigma, {"z"});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownLetter);
  }
}

TEST_CASE("normal form of every word is the minimum of its swap class", "[trace][oracle]") {
  for (auto sigma : {fixtures::chain3(), fixtures::triangle(), fixtures::path3()}) {
    for (const auto& w : oracles::all_words(sigma->num_letters(), 5)) {
      auto cls = oracles::swap_class(*sigma, w);
      CHECK(Trace::from_word(sigma, w).word() == *cls.begin());
    }
  }
}

TEST_CASE("poset agrees with the order common to all linearizations", "[trace][oracle]") {
  for (auto sigma : {fixtures::chain3(), fixtures::triangle(), fixtures::path3()}) {
    for (const auto& t : enumerate_traces(sigma, 5)) {
      oracles::ClassOrder ref(*sigma, t.word());
      TracePoset po(t);
      for (EventId e = 0; e < t.size(); ++e) {
        for (EventId f = 0; f < t.size(); ++f) REQUIRE(po.leq(e, f) == ref.leq[e][f]);
        for (ProcessId i = 0; i < sigma->num_processes(); ++i) {
          auto want = ref.primary(*sigma, e, i);
          auto got = po.primary_event(e, i);
          REQUIRE(got.has_value() == want.has_value());
          if (got) REQUIRE(*got == *want);
        }
      }
    }
  }
}

TEST_CASE("primary events on a small example", "[trace]") {
  auto tri = fixtures::triangle();
  auto t = Trace::parse(tri, "abc");
  TracePoset po(t);
  EventId c = 2;
  REQUIRE(t[c] == tri->letter("c"));
  CHECK(po.primary_event(c, 0) == std::optional<EventId>(0));
  CHECK(po.primary_event(c, 2) == std::optional<EventId>(1));
  CHECK(po.strict_past(c).count() == 2);
  CHECK_THROWS_AS(po.primary_event(7, 0), Error);
}

TEST_CASE("enumeration counts", "[trace]") {
  CHECK(enumerate_traces(fixtures::triangle(), 1).size() == 4);
  CHECK(enumerate_traces(fixtures::triangle(), 2).size() == 13);
  CHECK(enumerate_traces(fixtures::path3(), 2).size() == 12);
}

TEST_CASE("enumeration yields each class exactly once", "[trace][oracle]") {
  for (auto sigma : {fixtures::chain3(), fixtures::path3()}) {
    std::set<std::vector<Letter>> classes;
    for (const auto& w : oracles::all_words(sigma->num_letters(), 4))
      classes.insert(*oracles::swap_class(*sigma, w).begin());
    auto traces = enumerate_traces(sigma, 4);
    CHECK(traces.size() == classes.size());
    std::set<std::vector<Letter>> got;
    for (const auto& t : traces) got.insert(t.word());
    CHECK(got == classes);
  }
}

TEST_CASE("process views are prefixes", "[trace]") {
  for (auto sigma : {fixtures::chain3(), fixtures::triangle()}) {
    for (const auto& t : enumerate_traces(sigma, 4)) {
      for (ProcessId i = 0; i < sigma->num_processes(); ++i) {
        Trace v = i_view(t, i);
        TracePoset po(t);
        EventSet rest(t.size());
        EventSet keep(t.size());
        if (auto last = po.last_event(i)) keep = po.down(*last);
        rest = ~keep;
        CHECK(v.concat(restrict_trace(t, rest)) == t);
        // The view contains every i-event.
        std::size_t count = 0;
        for (Letter a : v.word()) count += sigma->loc(a).contains(i);
        CHECK(count == po.chain(i).size());
      }
    }
  }
}

TEST_CASE("linearizations are exactly the swap class", "[trace][oracle]") {
  auto sigma = fixtures::chain3();
  for (const auto& t : enumerate_traces(sigma, 4)) {
    std::set<std::vector<Letter>> lins;
    for_each_linearization(t, [&](const std::vector<EventId>& order) {
      std::vector<Letter> w;
      for (auto e : order) w.push_back(t[e]);
      lins.insert(w);
    });
    CHECK(lins == oracles::swap_class(*sigma, t.word()));
  }
}
