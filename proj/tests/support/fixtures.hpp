#pragma once

#include <optional>

#include "tracekit/error.hpp"
#include "tracekit/trace/alphabet.hpp"

namespace fixtures {

using tracekit::AlphabetPtr;
using tracekit::DistributedAlphabet;

// Chain of three processes: {a,b} {b,c} {c,d}.
inline AlphabetPtr chain3() {
  return DistributedAlphabet::make({"p1", "p2", "p3"},
                                   {{"a", {"p1"}}, {"b", {"p1", "p2"}}, {"c", {"p2", "p3"}}, {"d", {"p3"}}});
}

// Triangle: {a,c} {a,b} {b,c}; every pair of letters is dependent.
inline AlphabetPtr triangle() {
  return DistributedAlphabet::make({"p1", "p2", "p3"},
                                   {{"a", {"p1", "p2"}}, {"b", {"p2", "p3"}}, {"c", {"p1", "p3"}}});
}

// a at p1, b shared by p1 p2, c shared by p2 p3.
inline AlphabetPtr path3() {
  return DistributedAlphabet::make({"p1", "p2", "p3"}, {{"a", {"p1"}}, {"b", {"p1", "p2"}}, {"c", {"p2", "p3"}}});
}

// Two processes, {a,c} and {a,b}.
inline AlphabetPtr pair2() {
  return DistributedAlphabet::make({"p1", "p2"}, {{"a", {"p1", "p2"}}, {"b", {"p2"}}, {"c", {"p1"}}});
}

// Code of the library error raised by f, if any.
template <class F>
std::optional<tracekit::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const tracekit::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace fixtures
