#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tracekit/gossip/gossip.hpp"

using namespace tracekit;

namespace {

Gamma gamma_of_last(const LabelledTrace& t) { return t.decoration(static_cast<EventId>(t.size() - 1))[0]; }

// Trace (ab)^n followed by `tail`, over the triangle.
Trace pumped(const AlphabetPtr& tri, int n, const std::string& tail) {
  std::string w;
  for (int k = 0; k < n; ++k) w += "ab";
  return Trace::parse(tri, w + tail);
}

}  // namespace

TEST_CASE("primary order at the final c", "[gossip]") {
  auto tri = fixtures::triangle();
  CHECK(gamma_at(gamma_of_last(theta_oracle(Trace::parse(tri, "abc"))), 0, 2, 3));
  CHECK_FALSE(gamma_at(gamma_of_last(theta_oracle(Trace::parse(tri, "abac"))), 0, 2, 3));
  // A minimal event has an empty strict past.
  for (auto sigma : {tri, fixtures::path3()})
    for (Letter a = 0; a < sigma->num_letters(); ++a)
      CHECK(theta_oracle(Trace::from_word(sigma, std::vector<Letter>{a})).decoration(0)[0] == 0);
}

TEST_CASE("order oracle agrees with the class order", "[gossip][oracle]") {
  for (auto sigma : {fixtures::triangle(), fixtures::path3(), fixtures::chain3()}) {
    const std::size_t n = sigma->num_processes();
    for_each_trace(sigma, 5, [&](const Trace& t) {
      auto labels = theta_oracle(t);
      oracles::ClassOrder order(*sigma, t.word());
      for (EventId e = 0; e < t.size(); ++e)
        for (ProcessId i = 0; i < n; ++i)
          for (ProcessId j = 0; j < n; ++j)
            CHECK(gamma_at(labels.decoration(e)[0], i, j, n) == oracles::yleq(*sigma, order, e, i, j));
    });
  }
}

TEST_CASE("labels are partial orders on the existing primaries", "[gossip]") {
  for (auto sigma : {fixtures::triangle(), fixtures::path3()}) {
    const std::size_t n = sigma->num_processes();
    for_each_trace(sigma, 5, [&](const Trace& t) {
      TracePoset po(t);
      auto labels = theta_oracle(t);
      for (EventId e = 0; e < t.size(); ++e) {
        const Gamma g = labels.decoration(e)[0];
        for (ProcessId i = 0; i < n; ++i) {
          CHECK(gamma_at(g, i, i, n) == po.primary_event(e, i).has_value());
          for (ProcessId j = 0; j < n; ++j)
            for (ProcessId k = 0; k < n; ++k)
              if (gamma_at(g, i, j, n) && gamma_at(g, j, k, n)) CHECK(gamma_at(g, i, k, n));
        }
      }
    });
  }
}

TEST_CASE("vector clocks compute the primary order labelling", "[gossip][oracle]") {
  for (auto sigma : {fixtures::triangle(), fixtures::path3()}) {
    auto g = vector_clock_gossip(sigma);
    for_each_trace(sigma, 6, [&](const Trace& t) {
      CHECK(apply_transducer(g.transducer, LabelledTrace::plain(t)) == theta_oracle(t));
    });
  }
}

TEST_CASE("pumped pattern separates c from a c", "[gossip]") {
  auto tri = fixtures::triangle();
  auto g = vector_clock_gossip(tri);
  for (int n = 1; n <= 10; ++n) {
    CHECK(gamma_at(gamma_of_last(apply_transducer(g.transducer, LabelledTrace::plain(pumped(tri, n, "c")))), 0, 2, 3));
    CHECK_FALSE(
        gamma_at(gamma_of_last(apply_transducer(g.transducer, LabelledTrace::plain(pumped(tri, n, "ac")))), 0, 2, 3));
  }
}

TEST_CASE("gossip labels do not depend on the linearization", "[gossip]") {
  for (auto sigma : {fixtures::path3(), fixtures::chain3()}) {
    auto g = vector_clock_gossip(sigma);
    const auto& aut = g.transducer.automaton;
    for_each_trace(sigma, 5, [&](const Trace& t) {
      const auto expected = apply_transducer(g.transducer, LabelledTrace::plain(t)).decorations;
      for_each_linearization(t, [&](const std::vector<EventId>& order) {
        StateVector s = aut.initial();
        std::vector<Decoration> got(t.size());
        for (EventId e : order) {
          got[e] = g.transducer.output(t[e], {}, s);
          aut.step(t[e], {}, s);
        }
        CHECK(got == expected);
      });
    });
  }
}

TEST_CASE("own clock counts own events", "[gossip]") {
  auto sigma = fixtures::chain3();
  auto g = vector_clock_gossip(sigma);
  const std::size_t n = sigma->num_processes();
  const auto& aut = g.transducer.automaton;
  for_each_trace(sigma, 5, [&](const Trace& t) {
    StateVector s = aut.initial();
    std::vector<std::uint32_t> count(n, 0);
    for (EventId e = 0; e < t.size(); ++e) {
      aut.step(t[e], {}, s);
      for (ProcessId p : sigma->loc_list(t[e])) {
        ++count[p];
        CHECK(g.store->value(s[p])[p * n + p] == count[p]);
      }
    }
  });
}
