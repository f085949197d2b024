#pragma once

#include <utility>
#include <vector>

#include "tracekit/monoid/morphism.hpp"

namespace tracekit {

// Element (m, f) of a wreath product acting by (x, y) -> (m(x), f(x)(y)).
struct WreathElement {
  Transformation first;
  std::vector<Transformation> second;  // indexed by x

  std::pair<std::uint32_t, std::uint32_t> apply(std::uint32_t x, std::uint32_t y) const {
    return {first(x), second.at(x)(y)};
  }

  // (m1, f1)(m2, f2) = (m1 m2, x -> f1(x) f2(m1(x)))
  friend WreathElement operator*(const WreathElement& l, const WreathElement& r) {
    WreathElement out;
    out.first = l.first * r.first;
    out.second.reserve(l.second.size());
    for (std::uint32_t x = 0; x < l.second.size(); ++x) out.second.push_back(l.second[x] * r.second.at(l.first(x)));
    return out;
  }

  static WreathElement identity(std::size_t x_size, std::size_t y_size) {
    return {Transformation::identity(x_size), std::vector<Transformation>(x_size, Transformation::identity(y_size))};
  }

  friend bool operator==(const WreathElement&, const WreathElement&) = default;
};

// Carrier of X x Y with pair index x * |Y| + y.
inline Transformation flat_transformation(const WreathElement& w, std::size_t y_size) {
  const std::size_t x_size = w.first.degree();
  return Transformation::from_function(static_cast<std::uint32_t>(x_size * y_size), [&](std::uint32_t xy) {
    auto [x, y] = w.apply(xy / static_cast<std::uint32_t>(y_size), xy % static_cast<std::uint32_t>(y_size));
    return static_cast<std::uint32_t>(x * y_size + y);
  });
}

// Product shape of an asynchronous wreath product: process i holds S_i x Q_i
// with local index s_i * |Q_i| + q_i.
struct WreathShape {
  AtmShape first, second, combined;

  WreathShape() = default;
  WreathShape(AtmShape s, AtmShape q) : first(std::move(s)), second(std::move(q)) {
    if (first.num_processes() != second.num_processes())
      fail(ErrorCode::InvalidArgument, "wreath factors over different process sets");
    std::vector<std::uint32_t> sizes;
    for (ProcessId i = 0; i < first.num_processes(); ++i) sizes.push_back(first.local_size(i) * second.local_size(i));
    combined = AtmShape(sizes);
  }

  std::uint32_t index(std::uint32_t s, std::uint32_t q) const {
    std::vector<std::uint32_t> local(first.num_processes());
    for (ProcessId i = 0; i < local.size(); ++i)
      local[i] = first.component(s, i) * second.local_size(i) + second.component(q, i);
    return combined.encode(local);
  }
  std::pair<std::uint32_t, std::uint32_t> split(std::uint32_t sq) const {
    std::vector<std::uint32_t> ls(first.num_processes()), lq(first.num_processes());
    for (ProcessId i = 0; i < ls.size(); ++i) {
      std::uint32_t c = combined.component(sq, i);
      ls[i] = c / second.local_size(i);
      lq[i] = c % second.local_size(i);
    }
    return {first.encode(ls), second.encode(lq)};
  }
  Transformation realize(const WreathElement& w) const {
    return Transformation::from_function(combined.carrier(), [&](std::uint32_t sq) {
      auto [s, q] = split(sq);
      auto [s2, q2] = w.apply(s, q);
      return index(s2, q2);
    });
  }
};

struct WreathMorphism {
  TraceMorphism morphism;  // over the base alphabet, into the combined carrier
  std::vector<WreathElement> elements;
};

struct AsyncWreathMorphism {
  TraceMorphism morphism;
  std::vector<WreathElement> elements;
  WreathShape shape;
};

// eta(a) = (phi(a), s -> psi(a, s_a)). phi is asynchronous into an atm over S,
// psi is asynchronous over Sigma x_loc S.
inline AsyncWreathMorphism asynchronous_wreath_morphism(const TraceMorphism& phi, const TraceMorphism& psi,
                                                        const LocalProductAlphabet& letters) {
  if (!phi.shape || !psi.shape) fail(ErrorCode::InvalidArgument, "asynchronous wreath needs product structures");
  require_same_alphabet(phi.alphabet, letters.base, "first factor over another alphabet");
  require_same_alphabet(psi.alphabet, letters.alphabet, "second factor is not over Sigma x_loc S");
  if (!(letters.shape == *phi.shape)) fail(ErrorCode::AlphabetMismatch, "second factor reads another state space");
  if (auto a = phi.first_non_local_letter()) fail(ErrorCode::NotAMap, "first factor at " + phi.alphabet->letter_name(*a));
  if (auto a = psi.first_non_local_letter()) fail(ErrorCode::NotAMap, "second factor at " + psi.alphabet->letter_name(*a));

  AsyncWreathMorphism out;
  out.shape = WreathShape(*phi.shape, *psi.shape);
  out.morphism.alphabet = phi.alphabet;
  out.morphism.degree = out.shape.combined.carrier();
  out.morphism.shape = out.shape.combined;
  for (Letter a = 0; a < phi.alphabet->num_letters(); ++a) {
    WreathElement w;
    w.first = phi.images[a];
    for (std::uint32_t s = 0; s < phi.degree; ++s) w.second.push_back(psi.images[letters.letter_at(a, s)]);
    out.morphism.images.push_back(out.shape.realize(w));
    out.elements.push_back(std::move(w));
  }
  return out;
}

// Wreath composition for morphisms that are not necessarily asynchronous.
// For independent a, b the second factor must satisfy
// psi(b, phi(a)(x)) = psi(b, x) on every x.
inline WreathMorphism wreath_morphism_checked(const TraceMorphism& phi, const TraceMorphism& psi,
                                              const ProductAlphabet& letters) {
  require_same_alphabet(phi.alphabet, letters.base, "first factor over another alphabet");
  require_same_alphabet(psi.alphabet, letters.alphabet, "second factor is not over Sigma x X");
  if (letters.factor != phi.degree) fail(ErrorCode::AlphabetMismatch, "second factor reads another state space");
  const auto& sigma = *phi.alphabet;
  for (Letter a = 0; a < sigma.num_letters(); ++a)
    for (Letter b = 0; b < sigma.num_letters(); ++b) {
      if (a == b || !sigma.independent(a, b)) continue;
      for (std::uint32_t x = 0; x < phi.degree; ++x)
        if (!(psi.images[letters.letter(b, phi.images[a](x))] == psi.images[letters.letter(b, x)]))
          fail(ErrorCode::CommutationViolation, "letters " + sigma.letter_name(a) + ", " + sigma.letter_name(b) +
                                                    " at state " + std::to_string(x));
    }
  WreathMorphism out;
  out.morphism.alphabet = phi.alphabet;
  out.morphism.degree = phi.degree * psi.degree;
  for (Letter a = 0; a < sigma.num_letters(); ++a) {
    WreathElement w;
    w.first = phi.images[a];
    for (std::uint32_t x = 0; x < phi.degree; ++x) w.second.push_back(psi.images[letters.letter(a, x)]);
    out.morphism.images.push_back(flat_transformation(w, psi.degree));
    out.elements.push_back(std::move(w));
  }
  return out;
}

}  // namespace tracekit
