#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tracekit/io/formats.hpp"
#include "tracekit/loctl/reset_chain.hpp"

namespace tracekit::io {

namespace detail {

inline const char* bit_name(bool high) { return high ? "2" : "1"; }

// Visible stages of stage m for letter a under the given layout.
inline std::vector<std::size_t> visible_reads(const ResetChain& chain, std::size_t m, Letter a, DecorationLayout layout) {
  const auto& procs = chain.stage_processes();
  std::vector<std::size_t> out;
  for (auto r : chain.stages()[m].reads) {
    if (std::find(out.begin(), out.end(), r) != out.end()) continue;
    if (layout == DecorationLayout::Local && !chain.alphabet()->loc(a).contains(procs[r])) continue;
    out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Text of stage m of a plain reset chain in the automaton file format.
// Local layout matches a chain manifest; global layout matches 'mode: global'.
inline std::string format_reset_stage(const ResetChain& chain, std::size_t m, DecorationLayout layout,
                                      const std::string& alphabet_file) {
  if (chain.input_width() != 0) fail(ErrorCode::InvalidArgument, "cannot export a chain over a decorated alphabet");
  if (layout == DecorationLayout::Local && chain.has_global_reads())
    fail(ErrorCode::WrongFragment, "chain needs global decorations");
  const DistributedAlphabet& sigma = *chain.alphabet();
  const std::size_t n = sigma.num_processes();
  const auto& procs = chain.stage_processes();
  const ResetStage& st = chain.stages()[m];
  const ProcessId p = st.process;
  std::ostringstream os;
  os << "# " << st.label << "\n";
  os << "alphabet: " << alphabet_file << "\n";
  os << "states " << sigma.process_name(p) << ": 1 2\n";
  os << "init:";
  for (ProcessId i = 0; i < n; ++i) os << " " << (i == p ? detail::bit_name(st.initial_high) : "_");
  os << "\n";

  for (Letter a : sigma.letters_of(p)) {
    const auto& locs = sigma.loc_list(a);
    const auto visible = detail::visible_reads(chain, m, a, layout);
    if (visible.size() > 20) fail(ErrorCode::SearchBudgetExceeded, "stage reads too many stages to export");
    auto tuple = [&](bool high) {
      std::string s = locs.size() > 1 ? "(" : "";
      for (std::size_t k = 0; k < locs.size(); ++k) {
        if (k) s += ",";
        s += locs[k] == p ? detail::bit_name(high) : "_";
      }
      return locs.size() > 1 ? s + ")" : s;
    };
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << visible.size()); ++mask) {
      StateVector assigned(m, 0);
      for (std::size_t v = 0; v < visible.size(); ++v) assigned[visible[v]] = (mask >> v) & 1U;
      const StageView view(StageView::Mode::Assigned, assigned, procs, n, 0, &locs);
      const ResetAction act = st.rule(a, {}, view);
      if (act == ResetAction::Keep) continue;
      os << "trans " << sigma.letter_name(a);
      if (m > 0) {
        os << " [";
        bool first = true;
        for (std::size_t r = 0; r < m; ++r) {
          const auto emit = [&](ProcessId i) {
            os << (first ? "" : " ");
            first = false;
            const bool shown = i == procs[r] && std::find(visible.begin(), visible.end(), r) != visible.end();
            os << (shown ? detail::bit_name(assigned[r] != 0) : "*");
          };
          if (layout == DecorationLayout::Local)
            for (ProcessId i : locs) emit(i);
          else
            for (ProcessId i = 0; i < n; ++i) emit(i);
        }
        os << "]";
      }
      const bool high = act == ResetAction::ToHigh;
      os << ": " << tuple(false) << " -> " << tuple(high) << " " << tuple(true) << " -> " << tuple(high) << "\n";
    }
  }
  return os.str();
}

// Chain manifest listing the stage files and the acceptance condition.
inline std::string format_chain_manifest(const CompiledChain& c, const std::vector<std::string>& stage_files,
                                         const std::string& alphabet_file, bool global) {
  const ResetChain& chain = c.chain;
  const std::size_t n = chain.alphabet()->num_processes(), k = chain.size();
  const auto& procs = chain.stage_processes();
  const auto& reads = c.accept.reads;
  if (reads.size() > 20) fail(ErrorCode::SearchBudgetExceeded, "acceptance reads too many stages to export");
  std::ostringstream os;
  os << "alphabet: " << alphabet_file << "\n";
  if (global) os << "mode: global\n";
  for (const auto& f : stage_files) os << "stage: " << f << "\n";
  bool any = false;
  std::vector<char> bits(k, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << reads.size()); ++mask) {
    for (std::size_t v = 0; v < reads.size(); ++v) bits[reads[v]] = (mask >> v) & 1U;
    if (!c.accept.eval([&](std::size_t m) { return bits.at(m) != 0; })) continue;
    any = true;
    os << "accept:";
    for (std::size_t m = 0; m < k; ++m)
      for (ProcessId i = 0; i < n; ++i) {
        const bool shown = i == procs[m] && std::find(reads.begin(), reads.end(), m) != reads.end();
        os << " " << (shown ? detail::bit_name(bits[m] != 0) : "*");
      }
    os << "\n";
  }
  if (!any) os << "accept: none\n";
  return os.str();
}

// Writes alphabet, stage files and manifest into `dir`; returns the manifest path.
inline fs::path write_compiled_chain(const CompiledChain& c, const fs::path& dir, bool global) {
  fs::create_directories(dir);
  auto put = [&](const fs::path& file, const std::string& text) {
    std::ofstream out(dir / file);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + (dir / file).string());
    out << text;
  };
  put("alphabet.alph", format_alphabet(*c.chain.alphabet()));
  std::vector<std::string> files;
  const auto layout = global ? DecorationLayout::Global : DecorationLayout::Local;
  for (std::size_t m = 0; m < c.chain.size(); ++m) {
    files.push_back("stage" + std::to_string(m + 1) + ".aut");
    put(files.back(), format_reset_stage(c.chain, m, layout, "alphabet.alph"));
  }
  put("chain.chain", format_chain_manifest(c, files, "alphabet.alph", global));
  return dir / "chain.chain";
}

}  // namespace tracekit::io
