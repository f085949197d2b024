#pragma once

#include <deque>
#include <unordered_map>
#include <vector>

#include "tracekit/monoid/transformation.hpp"

namespace tracekit {

// A finite transformation monoid (X, M); X = {0, ..., degree-1}.
class TransformationMonoid {
 public:
  TransformationMonoid() = default;

  std::size_t degree() const { return degree_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Transformation>& elements() const { return elements_; }
  const std::vector<Transformation>& generators() const { return generators_; }
  bool contains(const Transformation& t) const { return index_.count(t) != 0; }
  std::size_t index_of(const Transformation& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) fail(ErrorCode::InvalidArgument, "transformation not in monoid");
    return it->second;
  }

  friend TransformationMonoid close_generators(std::size_t degree, const std::vector<Transformation>& gens,
                                               std::size_t limit);

 private:
  std::size_t degree_ = 0;
  std::vector<Transformation> generators_;
  std::vector<Transformation> elements_;
  std::unordered_map<Transformation, std::size_t, TransformationHash> index_;
};

// Submonoid generated by `gens`, identity included. Elements are listed in
// breadth-first order from the identity.
inline TransformationMonoid close_generators(std::size_t degree, const std::vector<Transformation>& gens,
                                             std::size_t limit = 1U << 22) {
  TransformationMonoid m;
  m.degree_ = degree;
  m.generators_ = gens;
  for (const auto& g : gens)
    if (g.degree() != degree) fail(ErrorCode::InvalidArgument, "generator degree mismatch");
  auto add = [&](Transformation t) {
    if (m.index_.count(t)) return false;
    m.index_.emplace(t, m.elements_.size());
    m.elements_.push_back(std::move(t));
    if (m.elements_.size() > limit) fail(ErrorCode::SearchBudgetExceeded, "monoid larger than limit");
    return true;
  };
  add(Transformation::identity(degree));
  for (std::size_t i = 0; i < m.elements_.size(); ++i)
    for (const auto& g : gens) add(m.elements_[i] * g);
  return m;
}

// x^n = x^{n+1} for every element, with n = |M|.
inline bool is_aperiodic(const TransformationMonoid& m) {
  const auto n = static_cast<std::uint64_t>(m.size());
  for (const auto& x : m.elements()) {
    Transformation xn = power(x, n);
    if (!(xn == xn * x)) return false;
  }
  return true;
}

}  // namespace tracekit
