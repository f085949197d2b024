#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tracekit/monoid/monoid.hpp"
#include "tracekit/trace/alphabet.hpp"

namespace tracekit {

// Product structure S = prod_i S_i with mixed-radix indexing, process 0 being
// the least significant digit.
class AtmShape {
 public:
  AtmShape() = default;
  explicit AtmShape(std::vector<std::uint32_t> local_sizes) : sizes_(std::move(local_sizes)) {
    carrier_ = 1;
    for (auto s : sizes_) {
      if (s == 0) fail(ErrorCode::InvalidArgument, "empty local state set");
      strides_.push_back(carrier_);
      carrier_ *= s;
      if (carrier_ > (std::uint64_t{1} << 32)) fail(ErrorCode::SearchBudgetExceeded, "global state space too large");
    }
  }

  std::size_t num_processes() const { return sizes_.size(); }
  std::uint32_t local_size(ProcessId i) const { return sizes_.at(i); }
  const std::vector<std::uint32_t>& local_sizes() const { return sizes_; }
  std::uint32_t carrier() const { return static_cast<std::uint32_t>(carrier_); }

  std::uint32_t component(std::uint32_t s, ProcessId i) const {
    return static_cast<std::uint32_t>((s / strides_[i]) % sizes_[i]);
  }
  std::uint32_t with_component(std::uint32_t s, ProcessId i, std::uint32_t v) const {
    return static_cast<std::uint32_t>(s - component(s, i) * strides_[i] + v * strides_[i]);
  }
  std::vector<std::uint32_t> decode(std::uint32_t s) const {
    std::vector<std::uint32_t> out(sizes_.size());
    for (ProcessId i = 0; i < sizes_.size(); ++i) out[i] = component(s, i);
    return out;
  }
  std::uint32_t encode(const std::vector<std::uint32_t>& local) const {
    std::uint64_t s = 0;
    for (ProcessId i = 0; i < sizes_.size(); ++i) {
      if (local.at(i) >= sizes_[i]) fail(ErrorCode::InvalidArgument, "local state out of range");
      s += local[i] * strides_[i];
    }
    return static_cast<std::uint32_t>(s);
  }

  // |S_P| and the index of s_P in S_P (mixed radix over P ascending).
  std::uint32_t size_of(ProcessSet p) const {
    std::uint64_t n = 1;
    for (auto i : p.members()) n *= sizes_.at(i);
    return static_cast<std::uint32_t>(n);
  }
  std::uint32_t restrict(std::uint32_t s, ProcessSet p) const {
    std::uint64_t idx = 0, mul = 1;
    for (auto i : p.members()) {
      idx += component(s, i) * mul;
      mul *= sizes_[i];
    }
    return static_cast<std::uint32_t>(idx);
  }
  // Replaces the P-part of s by the P-state with index sp.
  std::uint32_t replace(std::uint32_t s, ProcessSet p, std::uint32_t sp) const {
    for (auto i : p.members()) {
      s = with_component(s, i, sp % sizes_[i]);
      sp /= sizes_[i];
    }
    return s;
  }
  std::vector<std::uint32_t> decode_part(std::uint32_t sp, ProcessSet p) const {
    std::vector<std::uint32_t> out;
    for (auto i : p.members()) {
      out.push_back(sp % sizes_[i]);
      sp /= sizes_[i];
    }
    return out;
  }

  // Inserts a singleton local state set at position `at`; indices are unchanged.
  AtmShape insert_singleton(ProcessId at) const {
    auto sizes = sizes_;
    sizes.insert(sizes.begin() + at, 1);
    return AtmShape(std::move(sizes));
  }

  friend bool operator==(const AtmShape& x, const AtmShape& y) { return x.sizes_ == y.sizes_; }

 private:
  std::vector<std::uint32_t> sizes_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t carrier_ = 1;
};

// Asynchronous transformation monoid: a product shape and a monoid on its carrier.
struct Atm {
  AtmShape shape;
  TransformationMonoid monoid;
};

// h is a P-map: it leaves the complement of P untouched and its P-output
// depends only on the P-input.
inline bool is_p_map(const Transformation& h, ProcessSet p, const AtmShape& shape) {
  if (h.degree() != shape.carrier()) fail(ErrorCode::InvalidArgument, "degree mismatch");
  const ProcessSet rest = ProcessSet::all(shape.num_processes()).minus(p);
  std::map<std::uint32_t, std::uint32_t> image_of_part;
  for (std::uint32_t s = 0; s < shape.carrier(); ++s) {
    std::uint32_t hs = h(s);
    if (shape.restrict(hs, rest) != shape.restrict(s, rest)) return false;
    auto [it, fresh] = image_of_part.emplace(shape.restrict(s, p), shape.restrict(hs, p));
    if (!fresh && it->second != shape.restrict(hs, p)) return false;
  }
  return true;
}

// Unique P-map extending f : S_P -> S_P.
inline Transformation extend_p_map(const Transformation& f, ProcessSet p, const AtmShape& shape) {
  if (f.degree() != shape.size_of(p)) fail(ErrorCode::InvalidArgument, "P-map degree mismatch");
  return Transformation::from_function(shape.carrier(), [&](std::uint32_t s) {
    return shape.replace(s, p, f(shape.restrict(s, p)));
  });
}

// Localization T[p]: T at process p, singleton local sets elsewhere.
inline AtmShape localized_shape(std::size_t num_processes, ProcessId p, std::uint32_t size) {
  std::vector<std::uint32_t> sizes(num_processes, 1);
  sizes.at(p) = size;
  return AtmShape(std::move(sizes));
}

}  // namespace tracekit
