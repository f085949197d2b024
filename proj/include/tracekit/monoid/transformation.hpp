#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tracekit/error.hpp"

namespace tracekit {

// A total map on {0, ..., n-1}.
class Transformation {
 public:
  Transformation() = default;
  explicit Transformation(std::vector<std::uint32_t> table) : table_(std::move(table)) {
    for (auto v : table_)
      if (v >= table_.size()) fail(ErrorCode::InvalidArgument, "transformation value out of range");
  }

  static Transformation identity(std::size_t n) {
    std::vector<std::uint32_t> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<std::uint32_t>(i);
    return Transformation(std::move(t));
  }
  static Transformation constant(std::size_t n, std::uint32_t v) {
    return Transformation(std::vector<std::uint32_t>(n, v));
  }
  static Transformation from_function(std::size_t n, const std::function<std::uint32_t(std::uint32_t)>& f) {
    std::vector<std::uint32_t> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = f(static_cast<std::uint32_t>(i));
    return Transformation(std::move(t));
  }

  std::size_t degree() const { return table_.size(); }
  std::uint32_t operator()(std::uint32_t x) const { return table_[x]; }
  const std::vector<std::uint32_t>& table() const { return table_; }

  // Product f*g acts as f first, then g.
  Transformation then(const Transformation& g) const {
    if (g.degree() != degree()) fail(ErrorCode::InvalidArgument, "degree mismatch in product");
    std::vector<std::uint32_t> t(table_.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = g.table_[table_[i]];
    return Transformation(std::move(t), Unchecked{});
  }
  friend Transformation operator*(const Transformation& f, const Transformation& g) { return f.then(g); }

  bool is_identity() const {
    for (std::size_t i = 0; i < table_.size(); ++i)
      if (table_[i] != i) return false;
    return true;
  }
  bool is_permutation() const {
    std::vector<bool> hit(table_.size(), false);
    for (auto v : table_) {
      if (hit[v]) return false;
      hit[v] = true;
    }
    return true;
  }
  bool is_constant() const {
    for (auto v : table_)
      if (v != table_.front()) return false;
    return true;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(table_[i]);
    }
    return s + "]";
  }

  friend bool operator==(const Transformation&, const Transformation&) = default;
  friend auto operator<=>(const Transformation&, const Transformation&) = default;

 private:
  struct Unchecked {};
  Transformation(std::vector<std::uint32_t> table, Unchecked) : table_(std::move(table)) {}

  std::vector<std::uint32_t> table_;
};

inline Transformation power(const Transformation& x, std::uint64_t k) {
  Transformation result = Transformation::identity(x.degree());
  Transformation base = x;
  while (k > 0) {
    if (k & 1U) result = result * base;
    base = base * base;
    k >>= 1U;
  }
  return result;
}

struct TransformationHash {
  std::size_t operator()(const Transformation& t) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : t.table()) h = (h ^ v) * 1099511628211ULL;
    return h;
  }
};

}  // namespace tracekit
