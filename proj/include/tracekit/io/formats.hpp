#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "tracekit/cascade/gcs.hpp"
#include "tracekit/loctl/parser.hpp"
#include "tracekit/monoid/morphism.hpp"

namespace tracekit::io {

namespace fs = std::filesystem;

// Line-oriented input: '#' starts a comment, blank lines are skipped and each
// remaining line is split into a key and the rest after the first ':'.
struct Line {
  std::size_t number = 0;
  std::string key;   // text before ':' (trimmed)
  std::string rest;  // text after ':' (trimmed)
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

[[noreturn]] inline void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  fail(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

inline std::vector<Line> read_lines(std::istream& in, const std::string& source) {
  std::vector<Line> out;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto colon = raw.find(':');
    if (colon == std::string::npos) parse_error(source, number, "expected 'key: value'");
    out.push_back({number, trim(raw.substr(0, colon)), trim(raw.substr(colon + 1))});
  }
  return out;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::vector<Line> read_lines(const fs::path& path) {
  std::istringstream in(read_file(path));
  return read_lines(in, path.string());
}

inline fs::path resolve(const fs::path& relative_to_file, const std::string& target) {
  fs::path t(target);
  if (t.is_absolute()) return t;
  return relative_to_file.parent_path() / t;
}

// ---------------------------------------------------------------------------
// Alphabets:  processes: p1 p2 p3   /   letter a: p1 p2

inline AlphabetPtr parse_alphabet(std::istream& in, const std::string& source = "<alphabet>") {
  std::vector<std::string> processes;
  std::vector<std::pair<std::string, std::vector<std::string>>> letters;
  for (const auto& l : read_lines(in, source)) {
    if (l.key == "processes") {
      processes = words(l.rest);
    } else if (l.key.rfind("letter ", 0) == 0) {
      letters.push_back({trim(l.key.substr(7)), words(l.rest)});
    } else {
      parse_error(source, l.number, "unknown key '" + l.key + "'");
    }
  }
  if (processes.empty()) fail(ErrorCode::ParseError, source + ": no 'processes:' line");
  return DistributedAlphabet::make(processes, letters);
}

inline AlphabetPtr load_alphabet(const fs::path& path) {
  std::istringstream in(read_file(path));
  return parse_alphabet(in, path.string());
}

inline std::string format_alphabet(const DistributedAlphabet& sigma) {
  std::ostringstream os;
  os << "processes:";
  for (const auto& p : sigma.process_names()) os << " " << p;
  os << "\n";
  for (Letter a = 0; a < sigma.num_letters(); ++a) {
    os << "letter " << sigma.letter_name(a) << ":";
    for (auto p : sigma.loc_list(a)) os << " " << sigma.process_name(p);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Explicit automata.
//
//   alphabet: file.alph
//   states p1: s1 s2          (processes without a line get one state "_")
//   init: s1 _ _
//   accept: s2 * *            (several lines form a union; 'none' for empty)
//   trans a: s1 -> s2
//   trans b [p2 *]: (q1,_) -> (q2,_)
//
// A bracketed pattern restricts a rule to decorated letters; its entries are
// state names of the upstream stages or '*'.

enum class DecorationLayout { None, Local, Global };

// How decoration entries of a stage are laid out and named.
struct StageContext {
  DecorationLayout layout = DecorationLayout::None;
  std::vector<std::vector<std::vector<std::string>>> upstream_names;  // [stage][process] -> names
};

struct LoadedAutomaton {
  ExplicitAutomatonData data;
  std::optional<AcceptingSet> accepting;
  std::vector<std::vector<std::optional<std::uint64_t>>> accept_patterns;
  AsyncAutomaton automaton;
};

namespace detail {

inline std::uint64_t state_index(const std::vector<std::string>& names, const std::string& tok, const std::string& source,
                                 std::size_t line) {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == tok) return k;
  if (!tok.empty() && std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const auto v = std::stoull(tok);
    if (v < names.size()) return v;
  }
  parse_error(source, line, "unknown state '" + tok + "'");
}

inline std::vector<std::string> tuple_items(std::string s) {
  s = trim(s);
  if (!s.empty() && s.front() == '(') s = s.substr(1, s.size() - 2);
  std::replace(s.begin(), s.end(), ',', ' ');
  return words(s);
}

// Names of decoration entry k of letter a.
inline const std::vector<std::string>& entry_names(const StageContext& ctx, const DistributedAlphabet& sigma, Letter a,
                                                   std::size_t k, const std::string& source, std::size_t line) {
  const std::size_t n = sigma.num_processes();
  if (ctx.layout == DecorationLayout::Local) {
    const auto& locs = sigma.loc_list(a);
    const std::size_t stage = k / locs.size();
    if (stage >= ctx.upstream_names.size()) parse_error(source, line, "decoration pattern too long");
    return ctx.upstream_names[stage][locs[k % locs.size()]];
  }
  if (ctx.layout == DecorationLayout::Global) {
    const std::size_t stage = k / n;
    if (stage >= ctx.upstream_names.size()) parse_error(source, line, "decoration pattern too long");
    return ctx.upstream_names[stage][k % n];
  }
  parse_error(source, line, "decoration pattern on an undecorated automaton");
}

inline std::size_t pattern_width(const StageContext& ctx, const DistributedAlphabet& sigma, Letter a) {
  switch (ctx.layout) {
    case DecorationLayout::Local: return ctx.upstream_names.size() * sigma.loc_list(a).size();
    case DecorationLayout::Global: return ctx.upstream_names.size() * sigma.num_processes();
    case DecorationLayout::None: return 0;
  }
  return 0;
}

}  // namespace detail

inline LoadedAutomaton parse_automaton(const std::vector<Line>& lines, const std::string& source, AlphabetPtr sigma,
                                       const StageContext& ctx = {}) {
  if (!sigma) fail(ErrorCode::ParseError, source + ": no alphabet");
  const std::size_t n = sigma->num_processes();
  LoadedAutomaton out;
  auto& d = out.data;
  d.alphabet = sigma;
  d.state_names.assign(n, {"_"});
  d.rules.assign(sigma->num_letters(), {});
  std::vector<std::string> init_tokens;
  std::size_t init_line = 0;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> accept_lines;
  std::vector<std::pair<std::size_t, std::string>> trans_lines;

  for (const auto& l : lines) {
    if (l.key == "alphabet") continue;
    if (l.key.rfind("states ", 0) == 0) {
      const auto p = sigma->find_process(trim(l.key.substr(7)));
      if (!p) parse_error(source, l.number, "unknown process '" + l.key.substr(7) + "'");
      d.state_names[*p] = words(l.rest);
      if (d.state_names[*p].empty()) parse_error(source, l.number, "empty state list");
    } else if (l.key == "init") {
      init_tokens = words(l.rest);
      init_line = l.number;
    } else if (l.key == "accept") {
      accept_lines.push_back({l.number, words(l.rest)});
    } else if (l.key.rfind("trans ", 0) == 0) {
      trans_lines.push_back({l.number, l.key.substr(6) + ":" + l.rest});
    } else {
      parse_error(source, l.number, "unknown key '" + l.key + "'");
    }
  }

  d.initial.assign(n, 0);
  if (!init_tokens.empty()) {
    if (init_tokens.size() != n) parse_error(source, init_line, "init needs one state per process");
    for (ProcessId i = 0; i < n; ++i)
      d.initial[i] = static_cast<std::uint32_t>(detail::state_index(d.state_names[i], init_tokens[i], source, init_line));
  }

  static const std::regex pair_re(R"((\([^)]*\)|[^\s,;()]+)\s*->\s*(\([^)]*\)|[^\s,;()]+))");
  for (const auto& [number, text] : trans_lines) {
    const auto colon = text.find(':');
    std::string head = trim(text.substr(0, colon));
    const std::string body = text.substr(colon + 1);
    std::vector<std::optional<std::uint64_t>> pattern;
    const auto bracket = head.find('[');
    std::string letter_name = trim(head.substr(0, bracket));
    const auto a = sigma->find_letter(letter_name);
    if (!a) parse_error(source, number, "unknown letter '" + letter_name + "'");
    if (bracket != std::string::npos) {
      const auto close = head.find(']', bracket);
      if (close == std::string::npos) parse_error(source, number, "unterminated pattern");
      auto items = detail::tuple_items(head.substr(bracket + 1, close - bracket - 1));
      if (items.size() != detail::pattern_width(ctx, *sigma, *a))
        parse_error(source, number, "pattern needs " + std::to_string(detail::pattern_width(ctx, *sigma, *a)) + " entries");
      for (std::size_t k = 0; k < items.size(); ++k) {
        if (items[k] == "*") {
          pattern.push_back(std::nullopt);
        } else {
          pattern.push_back(detail::state_index(detail::entry_names(ctx, *sigma, *a, k, source, number), items[k], source, number));
        }
      }
    }
    auto& rules = d.rules[*a];
    TransitionRule* rule = nullptr;
    for (auto& r : rules)
      if (r.pattern == pattern) rule = &r;
    if (!rule) {
      TransitionRule fresh;
      fresh.pattern = pattern;
      const std::uint32_t size = local_space_size(d, *a);
      for (std::uint32_t k = 0; k < size; ++k) fresh.table.push_back(k);
      rules.push_back(std::move(fresh));
      rule = &rules.back();
    }
    const auto& locs = sigma->loc_list(*a);
    auto encode = [&](const std::string& tuple) {
      auto items = detail::tuple_items(tuple);
      if (items.size() != locs.size()) parse_error(source, number, "tuple needs one state per process of loc(" + letter_name + ")");
      std::uint32_t idx = 0, mul = 1;
      for (std::size_t k = 0; k < locs.size(); ++k) {
        idx += static_cast<std::uint32_t>(detail::state_index(d.state_names[locs[k]], items[k], source, number)) * mul;
        mul *= static_cast<std::uint32_t>(d.state_names[locs[k]].size());
      }
      return idx;
    };
    std::size_t count = 0;
    for (std::sregex_iterator it(body.begin(), body.end(), pair_re), end; it != end; ++it, ++count)
      rule->table[encode((*it)[1])] = encode((*it)[2]);
    if (count == 0) parse_error(source, number, "no transitions listed");
  }

  if (!accept_lines.empty()) {
    std::optional<AcceptingSet> acc;
    for (const auto& [number, toks] : accept_lines) {
      if (toks.size() == 1 && toks[0] == "none") {
        acc = acc ? *acc : AcceptingSet([](StateView) { return false; }, "none");
        continue;
      }
      if (toks.size() != n) parse_error(source, number, "accept needs one entry per process");
      std::vector<std::vector<std::uint64_t>> allowed(n);
      std::vector<std::optional<std::uint64_t>> pat(n);
      for (ProcessId i = 0; i < n; ++i)
        if (toks[i] != "*") {
          allowed[i] = {detail::state_index(d.state_names[i], toks[i], source, number)};
          pat[i] = allowed[i][0];
        }
      out.accept_patterns.push_back(pat);
      AcceptingSet one = AcceptingSet::conjunctive(allowed);
      acc = acc ? (*acc || one) : one;
    }
    out.accepting = acc;
  }
  out.automaton = make_explicit(d);
  if (out.accepting) out.automaton = out.automaton.with_accepting(*out.accepting);
  return out;
}

inline AlphabetPtr alphabet_from_header(const std::vector<Line>& lines, const fs::path& path) {
  for (const auto& l : lines)
    if (l.key == "alphabet") return load_alphabet(resolve(path, l.rest));
  return nullptr;
}

inline LoadedAutomaton load_automaton(const fs::path& path, AlphabetPtr sigma = nullptr, const StageContext& ctx = {}) {
  auto lines = read_lines(path);
  if (auto own = alphabet_from_header(lines, path)) {
    if (sigma) require_same_alphabet(sigma, own, path.string() + ": alphabet differs from the chain's");
    else sigma = own;
  }
  return parse_automaton(lines, path.string(), sigma, ctx);
}

// ---------------------------------------------------------------------------
// Chains.
//
//   alphabet: file.alph
//   mode: local | global       (global: a sequence reading global states)
//   stage: a1.aut
//   stage: a2.aut
//   accept: <n tokens per stage, stage after stage>   (optional, union)
//   accept: none                                      (empty language)
//
// Without accept lines a chain accepts when every stage with its own accept
// lines accepts its slice.

struct LoadedChain {
  AlphabetPtr alphabet;
  bool global = false;
  std::vector<LoadedAutomaton> stages;
  std::optional<AcceptingSet> accepting;  // over the flattened / concatenated state

  CascadeChain chain() const {
    if (global) fail(ErrorCode::InvalidArgument, "a global sequence is not a local cascade");
    std::vector<AsyncAutomaton> s;
    for (const auto& st : stages) s.push_back(st.automaton);
    return CascadeChain(std::move(s));
  }
  GlobalCascadeSequence sequence() const {
    if (global) {
      GlobalCascadeSequence seq;
      for (const auto& st : stages) seq.stages.push_back(st.automaton);
      return seq;
    }
    return lift_chain(chain());
  }
  AsyncAutomaton flattened() const {
    AsyncAutomaton f = chain().flattened();
    if (accepting) f = f.with_accepting(*accepting);
    return f;
  }
};

inline LoadedChain load_chain(const fs::path& path) {
  auto lines = read_lines(path);
  LoadedChain out;
  out.alphabet = alphabet_from_header(lines, path);
  if (!out.alphabet) fail(ErrorCode::ParseError, path.string() + ": no 'alphabet:' line");
  const std::size_t n = out.alphabet->num_processes();
  std::vector<std::pair<std::size_t, std::vector<std::string>>> accept_lines;
  StageContext ctx;
  for (const auto& l : lines) {
    if (l.key == "alphabet") continue;
    if (l.key == "mode") {
      if (l.rest == "global") out.global = true;
      else if (l.rest != "local") parse_error(path.string(), l.number, "mode must be local or global");
    } else if (l.key == "stage") {
      if (out.stages.empty()) ctx.layout = DecorationLayout::None;
      else ctx.layout = out.global ? DecorationLayout::Global : DecorationLayout::Local;
      LoadedAutomaton st = load_automaton(resolve(path, l.rest), out.alphabet, ctx);
      ctx.upstream_names.push_back(st.data.state_names);
      out.stages.push_back(std::move(st));
    } else if (l.key == "accept") {
      accept_lines.push_back({l.number, words(l.rest)});
    } else {
      parse_error(path.string(), l.number, "unknown key '" + l.key + "'");
    }
  }
  if (out.stages.empty()) fail(ErrorCode::ParseError, path.string() + ": no stages");
  const std::size_t k = out.stages.size();
  if (!accept_lines.empty()) {
    std::optional<AcceptingSet> acc;
    for (const auto& [number, toks] : accept_lines) {
      if (toks.size() == 1 && toks[0] == "none") {
        acc = acc ? *acc : AcceptingSet([](StateView) { return false; }, "none");
        continue;
      }
      if (toks.size() != k * n) parse_error(path.string(), number, "accept needs " + std::to_string(k * n) + " entries");
      std::vector<std::vector<std::uint64_t>> allowed(k * n);
      for (std::size_t m = 0; m < k; ++m)
        for (ProcessId i = 0; i < n; ++i)
          if (toks[m * n + i] != "*")
            allowed[m * n + i] = {detail::state_index(out.stages[m].data.state_names[i], toks[m * n + i], path.string(), number)};
      AcceptingSet one = AcceptingSet::conjunctive(allowed);
      acc = acc ? (*acc || one) : one;
    }
    out.accepting = acc;
  } else {
    std::vector<std::pair<std::size_t, AcceptingSet>> parts;
    for (std::size_t m = 0; m < k; ++m)
      if (out.stages[m].accepting) parts.push_back({m, *out.stages[m].accepting});
    if (!parts.empty())
      out.accepting = AcceptingSet(
          [parts, n](StateView s) {
            for (const auto& [m, acc] : parts)
              if (!acc.contains(s.subspan(m * n, n))) return false;
            return true;
          },
          "every stage accepts");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Morphisms into transformation monoids.
//
//   alphabet: file.alph
//   degree: 4
//   image a: 1 1 3 3        (letters without a line map to the identity)

inline TraceMorphism load_morphism(const fs::path& path) {
  auto lines = read_lines(path);
  TraceMorphism m;
  m.alphabet = alphabet_from_header(lines, path);
  if (!m.alphabet) fail(ErrorCode::ParseError, path.string() + ": no 'alphabet:' line");
  std::vector<std::pair<std::size_t, std::pair<std::string, std::vector<std::string>>>> images;
  for (const auto& l : lines) {
    if (l.key == "alphabet") continue;
    if (l.key == "degree") {
      m.degree = std::stoul(l.rest);
    } else if (l.key.rfind("image ", 0) == 0) {
      images.push_back({l.number, {trim(l.key.substr(6)), words(l.rest)}});
    } else {
      parse_error(path.string(), l.number, "unknown key '" + l.key + "'");
    }
  }
  if (m.degree == 0) fail(ErrorCode::ParseError, path.string() + ": missing or zero degree");
  m.images.assign(m.alphabet->num_letters(), Transformation::identity(m.degree));
  for (const auto& [number, img] : images) {
    const auto a = m.alphabet->find_letter(img.first);
    if (!a) parse_error(path.string(), number, "unknown letter '" + img.first + "'");
    if (img.second.size() != m.degree) parse_error(path.string(), number, "image needs " + std::to_string(m.degree) + " values");
    std::vector<std::uint32_t> table;
    for (const auto& v : img.second) {
      const auto x = std::stoul(v);
      if (x >= m.degree) parse_error(path.string(), number, "value out of range");
      table.push_back(static_cast<std::uint32_t>(x));
    }
    m.images[*a] = Transformation(table);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Formula files.
//
//   alphabet: file.alph
//   let R1: a b
//   formula: E[p](R2 | (!R1 & ((!R1) S[p] R2)))

struct FormulaFile {
  AlphabetPtr alphabet;
  LetterMacros macros;
  std::string text;
};

inline FormulaFile load_formula_file(const fs::path& path) {
  auto lines = read_lines(path);
  FormulaFile f;
  f.alphabet = alphabet_from_header(lines, path);
  for (const auto& l : lines) {
    if (l.key == "alphabet") continue;
    if (l.key.rfind("let ", 0) == 0) f.macros[trim(l.key.substr(4))] = words(l.rest);
    else if (l.key == "formula") f.text = l.rest;
    else parse_error(path.string(), l.number, "unknown key '" + l.key + "'");
  }
  if (f.text.empty()) fail(ErrorCode::ParseError, path.string() + ": no 'formula:' line");
  return f;
}

}  // namespace tracekit::io
