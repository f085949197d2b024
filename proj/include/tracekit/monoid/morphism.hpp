#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <string>
#include <vector>

#include "tracekit/monoid/atm.hpp"
#include "tracekit/trace/trace.hpp"

namespace tracekit {

// Morphism from the trace monoid over `alphabet` into a transformation monoid
// on {0..degree-1}, given by the images of letters. When `shape` is set, the
// target is an asynchronous transformation monoid with that product structure.
struct TraceMorphism {
  AlphabetPtr alphabet;
  std::size_t degree = 0;
  std::vector<Transformation> images;
  std::optional<AtmShape> shape;

  const Transformation& image(Letter a) const { return images.at(a); }

  Transformation evaluate(std::span<const Letter> word) const {
    Transformation r = Transformation::identity(degree);
    for (Letter a : word) r = r * images.at(a);
    return r;
  }
  Transformation evaluate(const Trace& t) const {
    require_same_alphabet(alphabet, t.alphabet(), "morphism applied to a trace over another alphabet");
    return evaluate(t.word());
  }

  TransformationMonoid image_monoid() const { return close_generators(degree, images); }

  // Images of independent letters commute.
  bool respects_independence() const {
    for (Letter a = 0; a < images.size(); ++a)
      for (Letter b = a + 1; b < images.size(); ++b)
        if (alphabet->independent(a, b) && !(images[a] * images[b] == images[b] * images[a])) return false;
    return true;
  }

  // Every image phi(a) is a loc(a)-map of the target shape.
  std::optional<Letter> first_non_local_letter() const {
    if (!shape) fail(ErrorCode::InvalidArgument, "morphism target has no product structure");
    for (Letter a = 0; a < images.size(); ++a)
      if (!is_p_map(images[a], alphabet->loc(a), *shape)) return a;
    return std::nullopt;
  }
  bool is_asynchronous() const { return !first_non_local_letter().has_value(); }

  void validate() const {
    if (images.size() != alphabet->num_letters()) fail(ErrorCode::InvalidArgument, "one image per letter required");
    for (const auto& t : images)
      if (t.degree() != degree) fail(ErrorCode::InvalidArgument, "image degree mismatch");
    if (shape && shape->carrier() != degree) fail(ErrorCode::InvalidArgument, "shape carrier differs from degree");
  }
};

// Sigma x X with loc(a, x) = loc(a); letter (a, x) has index a * |X| + x.
struct ProductAlphabet {
  AlphabetPtr base;
  std::size_t factor = 0;
  AlphabetPtr alphabet;

  ProductAlphabet() = default;
  ProductAlphabet(AlphabetPtr base_alphabet, std::size_t x_size) : base(std::move(base_alphabet)), factor(x_size) {
    std::vector<std::string> names;
    std::vector<ProcessSet> locs;
    for (Letter a = 0; a < base->num_letters(); ++a)
      for (std::size_t x = 0; x < factor; ++x) {
        names.push_back(base->letter_name(a) + "<" + std::to_string(x) + ">");
        locs.push_back(base->loc(a));
      }
    alphabet = std::make_shared<const DistributedAlphabet>(base->process_names(), names, locs);
  }
  Letter letter(Letter a, std::uint32_t x) const { return static_cast<Letter>(a * factor + x); }
  Letter base_letter(Letter l) const { return static_cast<Letter>(l / factor); }
  std::uint32_t value(Letter l) const { return static_cast<std::uint32_t>(l % factor); }
};

// Sigma x_loc S: letters (a, s_a) with s_a ranging over S_loc(a).
struct LocalProductAlphabet {
  AlphabetPtr base;
  AtmShape shape;
  AlphabetPtr alphabet;
  std::vector<Letter> offsets;  // first letter index of each base letter
  std::vector<std::pair<Letter, std::uint32_t>> parts;

  LocalProductAlphabet() = default;
  LocalProductAlphabet(AlphabetPtr base_alphabet, AtmShape s) : base(std::move(base_alphabet)), shape(std::move(s)) {
    std::vector<std::string> names;
    std::vector<ProcessSet> locs;
    for (Letter a = 0; a < base->num_letters(); ++a) {
      offsets.push_back(static_cast<Letter>(names.size()));
      const ProcessSet la = base->loc(a);
      for (std::uint32_t sa = 0; sa < shape.size_of(la); ++sa) {
        std::string n = base->letter_name(a) + "[";
        auto comps = shape.decode_part(sa, la);
        for (std::size_t k = 0; k < comps.size(); ++k) n += (k ? "," : "") + std::to_string(comps[k]);
        names.push_back(n + "]");
        locs.push_back(la);
        parts.emplace_back(a, sa);
      }
    }
    alphabet = std::make_shared<const DistributedAlphabet>(base->process_names(), names, locs);
  }
  Letter letter(Letter a, std::uint32_t sa) const { return offsets.at(a) + sa; }
  Letter letter_at(Letter a, std::uint32_t global_state) const {
    return letter(a, shape.restrict(global_state, base->loc(a)));
  }
};

// psi simulates phi through the surjection f : Y -> X, meaning
// f(psi(a)(y)) = phi(a)(f(y)) for every letter a and y in Y.
inline bool check_simulation(const TraceMorphism& phi, const TraceMorphism& psi, const std::vector<std::uint32_t>& f) {
  require_same_alphabet(phi.alphabet, psi.alphabet, "simulation between morphisms over different alphabets");
  if (f.size() != psi.degree) fail(ErrorCode::InvalidArgument, "simulation map has wrong domain size");
  std::vector<bool> hit(phi.degree, false);
  for (auto x : f) {
    if (x >= phi.degree) fail(ErrorCode::InvalidArgument, "simulation map value out of range");
    hit[x] = true;
  }
  for (bool h : hit)
    if (!h) return false;
  for (Letter a = 0; a < phi.images.size(); ++a)
    for (std::uint32_t y = 0; y < psi.degree; ++y)
      if (f[psi.images[a](y)] != phi.images[a](f[y])) return false;
  return true;
}

struct DivisionWitness {
  std::vector<std::uint32_t> map;  // surjection Y -> X
};

// (X, M) divides (Y, N): some surjection f : Y -> X and submonoid N' of N
// admit a surjective morphism N' -> M compatible with f. For a fixed f the
// largest usable N' is the set of f-compatible elements, so the search runs
// over surjections only.
inline std::optional<DivisionWitness> check_division(const TransformationMonoid& m, const TransformationMonoid& n) {
  const std::size_t x_size = m.degree(), y_size = n.degree();
  if (y_size > 8 || n.size() > 64)
    fail(ErrorCode::SearchBudgetExceeded, "division search is limited to |Y| <= 8 and |N| <= 64");
  if (x_size > y_size || x_size == 0) return std::nullopt;
  std::vector<std::uint32_t> f(y_size, 0);
  std::vector<std::uint32_t> uses(x_size, 0);
  std::size_t missing = x_size;
  std::optional<DivisionWitness> found;

  auto test = [&]() {
    std::unordered_map<Transformation, bool, TransformationHash> induced;
    for (const auto& el : n.elements()) {
      std::vector<std::uint32_t> img(x_size, UINT32_MAX);
      bool ok = true;
      for (std::uint32_t y = 0; y < y_size && ok; ++y) {
        std::uint32_t v = f[el(y)];
        if (img[f[y]] == UINT32_MAX) img[f[y]] = v;
        else if (img[f[y]] != v) ok = false;
      }
      if (ok) induced.emplace(Transformation(img), true);
    }
    for (const auto& el : m.elements())
      if (!induced.count(el)) return false;
    return true;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t y) {
    if (found) return;
    if (y == y_size) {
      if (missing == 0 && test()) found = DivisionWitness{f};
      return;
    }
    if (y_size - y < missing) return;
    for (std::uint32_t x = 0; x < x_size && !found; ++x) {
      f[y] = x;
      if (uses[x]++ == 0) --missing;
      rec(y + 1);
      if (--uses[x] == 0) ++missing;
    }
  };
  rec(0);
  return found;
}

}  // namespace tracekit
