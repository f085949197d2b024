#include <catch_amalgamated.hpp>

#include "support/automata.hpp"
#include "tracekit/krohn_rhodes.hpp"

using namespace tracekit;

namespace {

Transformation T(std::vector<std::uint32_t> v) { return Transformation(std::move(v)); }

TraceMorphism morphism(const AlphabetPtr& sigma, std::size_t degree, std::vector<std::pair<std::string, Transformation>> moves) {
  TraceMorphism m{sigma, degree, std::vector<Transformation>(sigma->num_letters(), Transformation::identity(degree)), std::nullopt};
  for (auto& [name, t] : moves) m.images[sigma->letter(name)] = t;
  return m;
}

// Every trace of length at most `len` acts compatibly with the simulation map.
bool preserves_languages(const TraceMorphism& phi, const Decomposition& d, std::size_t len) {
  bool ok = true;
  for_each_trace(phi.alphabet, len, [&](const Trace& t) {
    const auto big = d.morphism.evaluate(t), small = phi.evaluate(t);
    for (std::uint32_t y = 0; y < d.morphism.degree; ++y) ok = ok && d.map[big(y)] == small(d.map[y]);
  });
  return ok;
}

}  // namespace

TEST_CASE("communication graphs", "[kr]") {
  auto g1 = communication_graph(*fixtures::chain3());
  CHECK(g1.adjacent[0][1]);
  CHECK(g1.adjacent[1][2]);
  CHECK_FALSE(g1.adjacent[0][2]);
  CHECK(is_acyclic(*fixtures::chain3()));
  CHECK(is_acyclic(*fixtures::path3()));
  CHECK_FALSE(is_acyclic(*fixtures::triangle()));
  auto solo = DistributedAlphabet::make({"p"}, {{"a", {"p"}}});
  CHECK(communication_graph(*solo).degree(0) == 0);
  CHECK(is_acyclic(*solo));
}

TEST_CASE("split at a process with no private letters", "[kr][split]") {
  auto c3 = fixtures::chain3();
  auto phi = morphism(c3, 2, {{"a", Transformation::constant(2, 1)}, {"b", Transformation::constant(2, 0)}});
  auto sp = split(phi, 1);  // p2 owns no letter alone
  CHECK(sp.n_elements.size() == 1);
  CHECK(sp.first.degree == 1);
  for (Letter a = 0; a < c3->num_letters(); ++a) CHECK(sp.second.images[sp.letters.letter(a, 0)] == phi.images[a]);
  CHECK(check_simulation(phi, sp.wreath.morphism, sp.map));
}

TEST_CASE("split satisfies its simulation equation", "[kr][split]") {
  auto path = fixtures::path3(), c3 = fixtures::chain3();
  std::vector<std::pair<TraceMorphism, ProcessId>> cases = {
      {morphism(path, 3, {{"a", T({1, 2, 2})}, {"b", T({2, 0, 1})}}), 0},
      {morphism(path, 3, {{"a", T({1, 2, 2})}, {"b", T({2, 0, 1})}, {"c", T({2, 2, 2})}}), 2},
      {morphism(c3, 4, {{"a", T({1, 1, 3, 3})}, {"d", T({2, 3, 2, 3})}}), 0},
      {morphism(c3, 4, {{"a", T({1, 1, 3, 3})}, {"d", T({2, 3, 2, 3})}}), 1},
      {morphism(c3, 4, {{"a", T({1, 1, 3, 3})}, {"d", T({2, 3, 2, 3})}}), 2},
      {morphism(c3, 2, {}), 0},
  };
  for (const auto& [phi, p] : cases) {
    REQUIRE(phi.respects_independence());
    auto sp = split(phi, p);
    const auto& sigma = *phi.alphabet;
    // f(eta(a)(n, x)) = phi(a)(f(n, x)) at every letter and point.
    for (Letter a = 0; a < sigma.num_letters(); ++a)
      for (std::uint32_t nx = 0; nx < sp.wreath.morphism.degree; ++nx)
        CHECK(sp.map[sp.wreath.morphism.images[a](nx)] == phi.images[a](sp.map[nx]));
    CHECK(check_simulation(phi, sp.wreath.morphism, sp.map));
    // Letters on p shared with others reset N-bar; resets are idempotent.
    for (Letter a = 0; a < sigma.num_letters(); ++a)
      if (sigma.loc(a).contains(p) && sigma.loc(a).size() > 1)
        CHECK(sp.first.images[a] * sp.first.images[a] == sp.first.images[a]);
  }
  // The trivial morphism splits into trivial parts.
  auto sp = split(morphism(c3, 2, {}), 0);
  CHECK(sp.n_elements.size() == 1);
  for (const auto& img : sp.wreath.morphism.images) CHECK(img.is_identity());
}

TEST_CASE("join of an asynchronous pair", "[kr][join]") {
  auto c3 = fixtures::chain3();
  const Letter b = c3->letter("b"), c = c3->letter("c"), d = c3->letter("d");
  // First factor: two states at p3, c resets to 0 and d to 1.
  auto phi1 = morphism(c3, 2, {{"c", Transformation::constant(2, 0)}, {"d", Transformation::constant(2, 1)}});
  TraceMorphism psi1 = phi1;
  psi1.shape = localized_shape(3, 2, 2);
  const std::vector<std::uint32_t> f1{0, 1};

  // Second factor over Sigma x X: two states at p2; b resets to 1, c reads x.
  ProductAlphabet letters(c3, 2);
  TraceMorphism phi2{letters.alphabet, 2, std::vector<Transformation>(letters.alphabet->num_letters(), Transformation::identity(2)), std::nullopt};
  for (std::uint32_t x = 0; x < 2; ++x) {
    phi2.images[letters.letter(b, x)] = Transformation::constant(2, 1);
    phi2.images[letters.letter(c, x)] = x == 0 ? Transformation::constant(2, 0) : T({1, 0});
  }
  LocalProductAlphabet local(c3, *psi1.shape);
  TraceMorphism psi2 = lift_second(phi2, letters, local, f1);
  psi2.shape = localized_shape(3, 1, 2);
  const std::vector<std::uint32_t> f2{0, 1};

  auto j = join(phi1, phi2, letters, psi1, f1, psi2, f2);
  CHECK(j.asynchronous.morphism.is_asynchronous());
  CHECK(check_simulation(j.wreath.morphism, j.asynchronous.morphism, j.map));
  // Bijective f1, asynchronous phi1: the wreath elements coincide.
  for (Letter a = 0; a < c3->num_letters(); ++a) CHECK(j.asynchronous.elements[a].first == phi1.images[a]);

  // Breaking the map loses the simulation.
  std::vector<std::uint32_t> broken(j.map.size(), 0);
  CHECK_FALSE(check_simulation(j.wreath.morphism, j.asynchronous.morphism, broken));

  // d is private to p3 but the second factor reads x at d: rejected.
  auto bad = phi2;
  bad.images[letters.letter(d, 0)] = Transformation::constant(2, 0);
  bad.images[letters.letter(d, 1)] = Transformation::constant(2, 1);
  // With the first factor's states at p1, d cannot see them.
  LocalProductAlphabet at_p1(c3, localized_shape(3, 0, 2));
  CHECK(fixtures::error_code([&] { lift_second(bad, letters, at_p1, f1); }) == ErrorCode::HypothesisViolation);
}

TEST_CASE("acyclic decomposition of the reset monoid", "[kr]") {
  auto phi = io::load_morphism(fixtures::data_path("morphisms/u2.morph"));
  auto d = acyclic_decompose(phi);
  CHECK(verify(phi, d));
  CHECK(preserves_languages(phi, d, 4));
  CHECK(d.morphism.is_asynchronous());
  CHECK(d.leaf_order == std::vector<ProcessId>{0, 1, 2});
  REQUIRE(d.factors.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(d.factors[k].process == d.leaf_order[k]);
  CHECK(is_aperiodic(d.morphism.image_monoid()));
  CHECK(decomposition_report(phi, d).find("simulation: ok") != std::string::npos);
}

TEST_CASE("acyclic decomposition of a four-element aperiodic monoid", "[kr]") {
  auto phi = io::load_morphism(fixtures::data_path("morphisms/aperiodic4.morph"));
  REQUIRE(phi.image_monoid().size() == 4);
  REQUIRE(is_aperiodic(phi.image_monoid()));
  auto d = acyclic_decompose(phi);
  CHECK(verify(phi, d));
  CHECK(preserves_languages(phi, d, 4));
  CHECK(is_aperiodic(d.morphism.image_monoid()));
  for (const auto& f : d.factors) CHECK(is_aperiodic(f.monoid));
}

TEST_CASE("resets on independent letters do not form a morphism", "[kr]") {
  auto c3 = fixtures::chain3();
  auto phi = morphism(c3, 2, {{"a", Transformation::constant(2, 0)}, {"d", Transformation::constant(2, 1)}});
  CHECK_FALSE(phi.respects_independence());
  CHECK(fixtures::error_code([&] { acyclic_decompose(phi); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cyclic alphabets are refused", "[kr]") {
  auto tri = fixtures::triangle();
  auto phi = morphism(tri, 2, {{"a", Transformation::constant(2, 0)}});
  CHECK(fixtures::error_code([&] { acyclic_decompose(phi); }) == ErrorCode::NotAcyclic);
}

TEST_CASE("one process keeps the monoid as its only factor", "[kr]") {
  auto solo = DistributedAlphabet::make({"p"}, {{"a", {"p"}}, {"b", {"p"}}});
  struct Case {
    TraceMorphism phi;
    FactorKind kind;
  };
  std::vector<Case> cases = {
      {morphism(solo, 2, {{"a", Transformation::constant(2, 0)}, {"b", Transformation::constant(2, 1)}}), FactorKind::U2},
      {morphism(solo, 3, {}), FactorKind::Trivial},
      {morphism(solo, 3, {{"a", T({1, 2, 0})}}), FactorKind::Group},
      {morphism(solo, 3, {{"a", T({1, 2, 0})}, {"b", T({0, 0, 2})}}), FactorKind::Tm},
  };
  for (const auto& c : cases) {
    auto d = acyclic_decompose(c.phi);
    REQUIRE(d.factors.size() == 1);
    CHECK(d.factors[0].kind == c.kind);
    CHECK(d.factors[0].non_prime() == (c.kind == FactorKind::Tm));
    CHECK(verify(c.phi, d));
    CHECK(preserves_languages(c.phi, d, 5));
  }
}

TEST_CASE("a cyclic group survives decomposition on the path", "[kr]") {
  auto path = fixtures::path3();
  auto phi = morphism(path, 3, {{"a", T({1, 2, 0})}, {"b", T({0, 0, 2})}});
  REQUIRE(phi.respects_independence());
  auto d = acyclic_decompose(phi);
  CHECK(verify(phi, d));
  CHECK(preserves_languages(phi, d, 4));
  CHECK_FALSE(is_aperiodic(d.morphism.image_monoid()));
}
