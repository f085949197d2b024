#pragma once

#include <string>
#include <vector>

#include "support/fixtures.hpp"

namespace fixtures {

struct FormulaCase {
  AlphabetPtr alphabet;
  std::string text;
};

// Formulas with S_i only, over chain3 and path3; at most three nested S.
inline std::vector<FormulaCase> since_formulas() {
  auto c = chain3(), p = path3();
  return {
      {c, "E[p1] a"},
      {c, "!E[p2] (c S[p2] b)"},
      {c, "E[p3] d | E[p1] !a"},
      {c, "E[p3] (d & (true S[p3] (c & (true S[p2] b))))"},
      {c, "E[p2] ((b | c) S[p2] (b & !(true S[p2] true)))"},
      {c, "E[p3] (true S[p3] (true S[p3] true))"},
      {c, "E[p1] (!b S[p1] a) & !E[p3] (c S[p3] d)"},
      {p, "E[p1] a"},
      {p, "E[p2] (c & (c S[p2] b))"},
      {p, "!E[p3] true"},
      {p, "E[p2] (!b S[p2] (b & (true S[p1] a)))"},
      {p, "E[p1] b -> E[p3] c"},
      {p, "E[p1] (b & (!a S[p1] (a & !(true S[p1] b))))"},
  };
}

// Formulas with Y_i (and possibly S_i), over path3 and the triangle.
inline std::vector<FormulaCase> prev_formulas() {
  auto p = path3(), t = triangle();
  return {
      {p, "E[p2] Y[p1] a"},
      {p, "E[p3] (c & Y[p1] (b & Y[p1] a))"},
      {p, "E[p1] Y[p1] true"},
      {t, "E[p3] Y[p1] (a & Y[p2] b)"},
      {t, "E[p1] (Y[p3] b S[p1] c)"},
      {t, "!E[p2] (b & Y[p1] (c | Y[p3] true))"},
  };
}

// Formulas with Yleq(i, j), over the triangle.
inline std::vector<FormulaCase> yleq_formulas() {
  auto t = triangle();
  return {
      {t, "E[3] Yleq(1,3)"},
      {t, "E[p2] (b & !Yleq(p3,p1))"},
      {t, "E[p1] (Yleq(p2,p3) S[p1] a)"},
      {t, "!E[p3] (c & Yleq(1,2) & Yleq(2,1))"},
  };
}

}  // namespace fixtures
