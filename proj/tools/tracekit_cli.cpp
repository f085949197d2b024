// Command-line front end for the tracekit library.
//
// Exit status: 0 on success, 1 when a checked property fails (for example two
// acceptors differ), 2 on malformed input. Failures print one line
// "error: <code>: <detail>" on stderr.

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tracekit/tracekit.hpp"

namespace fs = std::filesystem;
using namespace tracekit;

namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kInputError = 2;

std::string join_words(const std::vector<std::string>& ws) {
  std::string s;
  for (const auto& w : ws) s += (s.empty() ? "" : " ") + w;
  return s;
}

bool has_extension(const std::string& path, const char* ext) { return fs::path(path).extension() == ext; }

LetterMacros parse_lets(const std::vector<std::string>& lets) {
  LetterMacros m;
  for (const auto& l : lets) {
    const auto eq = l.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ParseError, "--let expects NAME=a,b,...");
    std::string rest = l.substr(eq + 1);
    std::replace(rest.begin(), rest.end(), ',', ' ');
    m[l.substr(0, eq)] = io::words(rest);
  }
  return m;
}

// A formula given inline (needs an alphabet) or as a formula file.
struct FormulaSource {
  std::string alphabet_file;
  std::string text;
  std::string file;
  std::vector<std::string> lets;

  std::pair<AlphabetPtr, ParsedFormula> load() const {
    AlphabetPtr sigma = alphabet_file.empty() ? nullptr : io::load_alphabet(alphabet_file);
    LetterMacros macros = parse_lets(lets);
    std::string body = text;
    if (!file.empty()) {
      io::FormulaFile ff = io::load_formula_file(file);
      if (ff.alphabet) {
        if (sigma) require_same_alphabet(sigma, ff.alphabet, "formula file alphabet differs from --alphabet");
        sigma = ff.alphabet;
      }
      for (auto& [k, v] : ff.macros) macros.emplace(k, v);
      body = ff.text;
    }
    if (!sigma) fail(ErrorCode::ParseError, "no alphabet given");
    if (body.empty()) fail(ErrorCode::ParseError, "no formula given");
    return {sigma, parse_formula(body, *sigma, macros)};
  }

  std::pair<AlphabetPtr, TraceFormula> load_trace_formula() const {
    auto [sigma, f] = load();
    if (!std::holds_alternative<TraceFormula>(f)) fail(ErrorCode::WrongFragment, "expected a trace formula (E[i] ...)");
    return {sigma, std::get<TraceFormula>(f)};
  }
};

void add_formula_options(CLI::App* cmd, FormulaSource& src) {
  cmd->add_option("-a,--alphabet", src.alphabet_file, "alphabet file")->check(CLI::ExistingFile);
  cmd->add_option("-f,--formula-file", src.file, "formula file")->check(CLI::ExistingFile);
  cmd->add_option("--let", src.lets, "letter class NAME=a,b (repeatable)");
}

// Language acceptor loaded from a file or a formula.
struct Acceptor {
  AlphabetPtr alphabet;
  std::function<bool(const Trace&)> accepts;
};

Acceptor load_acceptor(const std::string& input, const std::string& alphabet_file) {
  if (has_extension(input, ".aut")) {
    auto la = io::load_automaton(input);
    if (!la.accepting) fail(ErrorCode::NoAcceptingSet, input + " has no accept lines");
    AsyncAutomaton a = la.automaton;
    return {la.data.alphabet, [a](const Trace& t) { return tracekit::accepts(a, t); }};
  }
  if (has_extension(input, ".chain")) {
    auto lc = io::load_chain(input);
    if (!lc.accepting) fail(ErrorCode::NoAcceptingSet, input + " has no acceptance condition");
    if (lc.global) {
      auto seq = lc.sequence();
      auto acc = *lc.accepting;
      return {lc.alphabet, [seq, acc](const Trace& t) { return gcs_accepts(seq, acc, t); }};
    }
    AsyncAutomaton a = lc.flattened();
    return {lc.alphabet, [a](const Trace& t) { return tracekit::accepts(a, t); }};
  }
  FormulaSource src;
  src.alphabet_file = alphabet_file;
  if (has_extension(input, ".fml")) src.file = input;
  else src.text = input;
  auto [sigma, f] = src.load_trace_formula();
  return {sigma, [f](const Trace& t) { return eval(f, t); }};
}

std::string describe_stage(const DistributedAlphabet& sigma, const ResetStage& s) {
  std::string reads;
  for (auto r : s.reads) reads += (reads.empty() ? "" : ",") + std::to_string(r + 1);
  return "process=" + sigma.process_name(s.process) + " initial=" + (s.initial_high ? "2" : "1") +
         " reads=" + (reads.empty() ? "-" : reads) + " label=" + s.label;
}

void print_chain_summary(const CompiledChain& c) {
  const auto& sigma = *c.chain.alphabet();
  std::cout << "stages: " << c.chain.size() << "\n";
  for (std::size_t m = 0; m < c.chain.size(); ++m)
    std::cout << "stage " << m + 1 << ": " << describe_stage(sigma, c.chain.stages()[m]) << "\n";
  std::string reads;
  for (auto r : c.accept.reads) reads += (reads.empty() ? "" : ",") + std::to_string(r + 1);
  std::cout << "accept reads: " << (reads.empty() ? "-" : reads) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traces, asynchronous automata, cascades and local temporal logic"};
  app.require_subcommand(1);
  std::function<int()> action;

  // normalize
  std::string alph;
  std::vector<std::string> word;
  auto* normalize = app.add_subcommand("normalize", "print the normal form of a word");
  normalize->add_option("-a,--alphabet", alph, "alphabet file")->required()->check(CLI::ExistingFile);
  normalize->add_option("word", word, "letters");
  normalize->callback([&] {
    action = [&] {
      std::cout << Trace::parse(io::load_alphabet(alph), join_words(word)).to_string() << "\n";
      return kOk;
    };
  });

  // run
  std::string model;
  auto* run_cmd = app.add_subcommand("run", "run an automaton or chain on a trace");
  run_cmd->add_option("model", model, ".aut or .chain file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("word", word, "letters");
  run_cmd->callback([&] {
    action = [&] {
      AsyncAutomaton a;
      if (has_extension(model, ".chain")) {
        auto lc = io::load_chain(model);
        if (lc.global) fail(ErrorCode::InvalidArgument, "global chains run with gcs-run");
        a = lc.flattened();
      } else {
        a = io::load_automaton(model).automaton;
      }
      const Trace t = Trace::parse(a.alphabet(), join_words(word));
      const StateVector s = run(a, t);
      std::cout << "state: " << a.state_name(s) << "\n";
      if (a.accepting()) std::cout << "accepted: " << (a.accepting()->contains(s) ? "true" : "false") << "\n";
      return kOk;
    };
  });

  // eval
  FormulaSource fsrc;
  std::optional<std::size_t> event;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula on a trace");
  add_formula_options(eval_cmd, fsrc);
  eval_cmd->add_option("-e,--formula", fsrc.text, "formula text");
  eval_cmd->add_option("--event", event, "event index for event formulas");
  eval_cmd->add_option("word", word, "letters");
  eval_cmd->callback([&] {
    action = [&] {
      auto [sigma, f] = fsrc.load();
      const Trace t = Trace::parse(sigma, join_words(word));
      bool v = false;
      if (auto* tf = std::get_if<TraceFormula>(&f)) {
        v = eval(*tf, t);
      } else {
        if (!event) fail(ErrorCode::InvalidArgument, "event formulas need --event");
        if (*event >= t.size()) fail(ErrorCode::UnknownEvent, "event " + std::to_string(*event));
        v = eval(std::get<EventFormula>(f), t, static_cast<EventId>(*event));
      }
      std::cout << (v ? "true" : "false") << "\n";
      return kOk;
    };
  });

  // compile
  std::string fragment = "since";
  std::string out_dir;
  auto* compile = app.add_subcommand("compile", "compile a formula into a chain of localized resets");
  add_formula_options(compile, fsrc);
  compile->add_option("-e,--formula", fsrc.text, "formula text");
  compile->add_option("--fragment", fragment, "since | yleq | prev")->check(CLI::IsMember({"since", "yleq", "prev"}));
  compile->add_option("-o,--out", out_dir, "directory for stage files and manifest");
  compile->callback([&] {
    action = [&] {
      auto [sigma, f] = fsrc.load_trace_formula();
      std::cout << "fragment: " << fragment << "\n";
      std::cout << "formula: " << to_string(*sigma, f) << "\n";
      if (fragment == "since") {
        CompiledChain c = compile_sprtl(f, sigma);
        print_chain_summary(c);
        if (!out_dir.empty()) std::cout << "manifest: " << io::write_compiled_chain(c, out_dir, false).string() << "\n";
      } else if (fragment == "yleq") {
        RestrictedCompilation r = compile_restricted(f, sigma);
        std::cout << "input: gamma from vector clocks\n";
        print_chain_summary(r.chain);
        if (!out_dir.empty()) fail(ErrorCode::InvalidArgument, "restricted chains read gamma and are not exported");
      } else {
        GcsCompilation g = compile_gcs(f, sigma);
        std::cout << "mode: global\n";
        print_chain_summary(g.chain);
        if (!out_dir.empty()) std::cout << "manifest: " << io::write_compiled_chain(g.chain, out_dir, true).string() << "\n";
      }
      return kOk;
    };
  });

  // product
  std::vector<std::string> stage_files;
  bool product_dot = false;
  auto* product = app.add_subcommand("product", "local cascade product of automaton files");
  product->add_option("stages", stage_files, "stage automata, upstream first")->required()->check(CLI::ExistingFile);
  product->add_flag("--dot", product_dot, "print the reachable product as DOT");
  product->callback([&] {
    action = [&] {
      AlphabetPtr sigma = io::load_automaton(stage_files[0]).data.alphabet;
      io::StageContext ctx;
      std::vector<AsyncAutomaton> stages;
      std::vector<io::LoadedAutomaton> loaded;
      for (const auto& f : stage_files) {
        ctx.layout = loaded.empty() ? io::DecorationLayout::None : io::DecorationLayout::Local;
        loaded.push_back(io::load_automaton(f, sigma, ctx));
        ctx.upstream_names.push_back(loaded.back().data.state_names);
        stages.push_back(loaded.back().automaton);
      }
      AsyncAutomaton p = CascadeChain(stages).flattened();
      if (product_dot) {
        std::cout << io::automaton_dot(p);
        return kOk;
      }
      StateSpace space(p);
      std::cout << "components: " << p.depth() << "\n";
      std::cout << "global states: " << space.size() << "\n";
      std::cout << "initial: " << p.state_name(p.initial()) << "\n";
      return kOk;
    };
  });

  // gcs-run
  auto* gcs_cmd = app.add_subcommand("gcs-run", "run a chain as a global cascade sequence");
  gcs_cmd->add_option("chain", model, ".chain file")->required()->check(CLI::ExistingFile);
  gcs_cmd->add_option("word", word, "letters");
  gcs_cmd->callback([&] {
    action = [&] {
      auto lc = io::load_chain(model);
      const GlobalCascadeSequence seq = lc.sequence();
      const Trace t = Trace::parse(lc.alphabet, join_words(word));
      const auto finals = gcs_run(seq, t);
      for (std::size_t m = 0; m < finals.size(); ++m)
        std::cout << "stage " << m + 1 << ": " << seq.stages[m].state_name(finals[m]) << "\n";
      if (lc.accepting)
        std::cout << "accepted: " << (lc.accepting->contains(concat_states(finals)) ? "true" : "false") << "\n";
      return kOk;
    };
  });

  // gossip-label
  bool use_oracle = false;
  auto* gossip = app.add_subcommand("gossip-label", "primary order labels of every event");
  gossip->add_option("-a,--alphabet", alph, "alphabet file")->required()->check(CLI::ExistingFile);
  gossip->add_flag("--oracle", use_oracle, "compute from the poset instead of vector clocks");
  gossip->add_option("word", word, "letters");
  gossip->callback([&] {
    action = [&] {
      AlphabetPtr sigma = io::load_alphabet(alph);
      const Trace t = Trace::parse(sigma, join_words(word));
      const LabelledTrace lt = use_oracle ? theta_oracle(t) : apply_transducer(vector_clock_gossip(sigma).transducer, LabelledTrace::plain(t));
      std::cout << "event letter gamma\n";
      for (EventId e = 0; e < t.size(); ++e)
        std::cout << e << " " << sigma->letter_name(t.word()[e]) << " "
                  << gamma_to_string(lt.decorations[e].at(0), sigma->num_processes()) << "\n";
      return kOk;
    };
  });

  // decompose
  std::string morphism_file;
  bool check = false;
  std::size_t check_len = 4;
  auto* decompose = app.add_subcommand("decompose", "acyclic Krohn-Rhodes decomposition of a morphism");
  decompose->add_option("morphism", morphism_file, "morphism file")->required()->check(CLI::ExistingFile);
  decompose->add_flag("--check", check, "also compare images on every trace up to --max-len");
  decompose->add_option("--max-len", check_len, "trace length bound for --check");
  decompose->callback([&] {
    action = [&] {
      const TraceMorphism phi = io::load_morphism(morphism_file);
      const Decomposition d = acyclic_decompose(phi);
      std::cout << decomposition_report(phi, d);
      bool ok = verify(phi, d);
      if (check) {
        std::size_t count = 0, bad = 0;
        for_each_trace(phi.alphabet, check_len, [&](const Trace& t) {
          ++count;
          const Transformation x = phi.evaluate(t), y = d.morphism.evaluate(t);
          for (std::uint32_t v = 0; v < d.morphism.degree; ++v)
            if (d.map[y(v)] != x(d.map[v])) {
              ++bad;
              break;
            }
        });
        std::cout << "traces checked: " << count << " mismatches: " << bad << "\n";
        ok = ok && bad == 0;
      }
      return ok ? kOk : kViolated;
    };
  });

  // equiv
  std::string left, right;
  std::size_t max_len = 5;
  auto* equiv = app.add_subcommand("equiv", "compare two acceptors on all traces up to a length");
  equiv->add_option("left", left, ".aut, .chain, .fml or formula text")->required();
  equiv->add_option("right", right, ".aut, .chain, .fml or formula text")->required();
  equiv->add_option("-a,--alphabet", alph, "alphabet for inline formulas")->check(CLI::ExistingFile);
  equiv->add_option("-n,--max-len", max_len, "trace length bound");
  equiv->callback([&] {
    action = [&] {
      const Acceptor l = load_acceptor(left, alph), r = load_acceptor(right, alph);
      require_same_alphabet(l.alphabet, r.alphabet, "acceptors over different alphabets");
      std::size_t count = 0;
      std::optional<Trace> witness;
      bool lv = false, rv = false;
      for_each_trace(l.alphabet, max_len, [&](const Trace& t) {
        if (witness) return;
        ++count;
        lv = l.accepts(t);
        rv = r.accepts(t);
        if (lv != rv) witness = t;
      });
      if (!witness) {
        std::cout << "equivalent (traces checked: " << count << ")\n";
        return kOk;
      }
      std::cout << "not equivalent\ncounterexample: " << (witness->size() ? witness->to_string() : "<empty>") << "\n";
      std::cout << "left: " << (lv ? "true" : "false") << "\nright: " << (rv ? "true" : "false") << "\n";
      return kViolated;
    };
  });

  // dot
  bool poset_mode = false;
  auto* dot = app.add_subcommand("dot", "DOT output of an automaton, a chain or a trace poset");
  dot->add_option("input", model, ".aut or .chain file, or letters with --poset");
  dot->add_flag("--poset", poset_mode, "draw the poset of the trace given by the remaining words");
  dot->add_option("-a,--alphabet", alph, "alphabet file (with --poset)")->check(CLI::ExistingFile);
  dot->add_option("word", word, "letters (with --poset)");
  dot->callback([&] {
    action = [&] {
      if (poset_mode) {
        if (alph.empty()) fail(ErrorCode::ParseError, "--poset needs --alphabet");
        std::vector<std::string> letters = word;
        if (!model.empty()) letters.insert(letters.begin(), model);
        std::cout << io::poset_dot(TracePoset(Trace::parse(io::load_alphabet(alph), join_words(letters))));
        return kOk;
      }
      if (model.empty()) fail(ErrorCode::ParseError, "no input file");
      if (has_extension(model, ".chain")) std::cout << io::automaton_dot(io::load_chain(model).flattened());
      else std::cout << io::automaton_dot(io::load_automaton(model).automaton);
      return kOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: UsageError: " << e.what() << "\n";
    return kInputError;
  }
  try {
    return action ? action() : kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.detail() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: InvalidArgument: " << e.what() << "\n";
    return kInputError;
  }
}
