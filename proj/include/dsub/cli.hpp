#pragma once

// `dsub` command-line front end. Exit codes: 0 success, 1 negative result,
// 2 usage, parse or I/O error. Machine output goes to `out`, diagnostics to
// `err`.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dsub/bounds_shift.hpp"
#include "dsub/corpus.hpp"
#include "dsub/decl_search.hpp"
#include "dsub/declarative.hpp"
#include "dsub/dotty_model.hpp"
#include "dsub/environment.hpp"
#include "dsub/errors.hpp"
#include "dsub/exposure.hpp"
#include "dsub/json_io.hpp"
#include "dsub/metatheory_lab.hpp"
#include "dsub/parser.hpp"
#include "dsub/step.hpp"

namespace dsub {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
}

inline TypeEnv load_env(const std::string& path) {
  if (path.empty()) return TypeEnv::empty();
  return parse_env(read_file(path));
}

inline void print_report(const LabReport& r, std::ostream& out) {
  out << "# " << r.header << "\n";
  out << "types: " << r.types << "\n";
  out << "derivable: " << r.derivable << "\n";
  out << "implications checked: " << r.checked << "\n";
  out << "violations: " << r.violations.size() << "\n";
  if (!r.violations.empty()) out << "violations with a verified derivation: " << r.witnesses_verified << "\n";
  for (const auto& v : r.violations) out << "  " << v << "\n";
}

/// Unmatched arguments anywhere in the parsed command path.
inline std::vector<std::string> leftovers(const CLI::App& app) {
  std::vector<std::string> out = app.remaining();
  for (const CLI::App* sc : app.get_subcommands()) {
    auto more = leftovers(*sc);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Typechecker toolkit for D<: with algorithmic typing, a declarative oracle and a Scala model", "dsub"};
  app.set_version_flag("--version", std::string("dsub ") + kVersion);
  app.require_subcommand(1);

  auto version = [](CLI::App* a) { a->set_version_flag("--version", std::string("dsub ") + kVersion); };

  std::string env_file, trace_out, file, var_name;
  std::vector<std::string> types;

  auto* check = app.add_subcommand("check", "Step-type a term file");
  version(check);
  check->add_option("FILE", file, "Term file")->required();
  check->add_option("--env", env_file, "Environment file");
  check->add_option("--emit-trace", trace_out, "Write the algorithmic trace as JSON");

  auto* sub = app.add_subcommand("sub", "Step-subtyping query S <: T");
  version(sub);
  sub->add_option("--env", env_file, "Environment file");
  sub->add_option("--emit-trace", trace_out, "Write the algorithmic trace as JSON");
  sub->add_option("TYPES", types, "S and T")->required()->expected(2);

  auto* expose_cmd = app.add_subcommand("expose", "Expose a type");
  version(expose_cmd);
  expose_cmd->add_option("--env", env_file, "Environment file");
  expose_cmd->add_option("TYPE", types, "Type")->required()->expected(1);

  auto shift_cmd = [&](const char* name, const char* desc) {
    auto* c = app.add_subcommand(name, desc);
    version(c);
    c->add_option("--env", env_file, "Environment file")->required();
    c->add_option("--var", var_name, "Variable to eliminate")->required();
    c->add_option("TYPE", types, "Type")->required()->expected(1);
    return c;
  };
  auto* promote_cmd = shift_cmd("promote", "Promote a type, eliminating a variable");
  auto* demote_cmd = shift_cmd("demote", "Demote a type, eliminating a variable");

  auto* decl = app.add_subcommand("decl", "Declarative oracle");
  version(decl);
  decl->require_subcommand(1);
  auto* verify = decl->add_subcommand("verify", "Check a derivation JSON file");
  version(verify);
  verify->add_option("FILE", file, "Derivation JSON")->required();
  auto* search = decl->add_subcommand("search", "Bounded search for a derivation");
  version(search);
  int fuel = 6;
  std::vector<std::string> sub_goal, typ_goal;
  search->add_option("--env", env_file, "Environment file");
  search->add_option("--fuel", fuel, "Maximum derivation depth")->check(CLI::Range(0, 254));
  auto* sub_opt = search->add_option("--sub", sub_goal, "S T")->expected(2);
  auto* typ_opt = search->add_option("--typ", typ_goal, "FILE T")->expected(2);
  sub_opt->excludes(typ_opt);

  auto* lab = app.add_subcommand("lab", "Metatheory harnesses");
  version(lab);
  lab->require_subcommand(1);
  int max_size = 4, lab_fuel = 6;
  auto* colours = lab->add_subcommand("colours", "Check the well-behavedness statements for Gamma*");
  version(colours);
  colours->add_option("--max-size", max_size)->check(CLI::Range(1, 7));
  colours->add_option("--fuel", lab_fuel)->check(CLI::Range(1, 254));
  auto* tags = lab->add_subcommand("tags", "Check that declarations keep their tags in Gamma*");
  version(tags);
  tags->add_option("--max-size", max_size)->check(CLI::Range(1, 7));
  tags->add_option("--fuel", lab_fuel)->check(CLI::Range(1, 254));
  auto* minimality = lab->add_subcommand("minimality", "Reproduce the minimal-typing counterexample");
  version(minimality);

  auto* bench = app.add_subcommand("bench", "Benchmarks");
  version(bench);
  bench->require_subcommand(1);
  auto* pn = bench->add_subcommand("pn", "Scala-model P_N family");
  version(pn);
  int min_n = 1, max_n = 16;
  std::string metric = "calls", csv_out;
  pn->add_option("--min", min_n)->check(CLI::Range(1, 40));
  pn->add_option("--max", max_n)->check(CLI::Range(1, 40));
  pn->add_option("--metric", metric)->check(CLI::IsMember({"calls", "nanos"}));
  pn->add_option("--out", csv_out, "CSV output file");

  auto* corpus = app.add_subcommand("corpus", "Golden corpus");
  version(corpus);
  corpus->require_subcommand(1);
  auto* corpus_run = corpus->add_subcommand("run", "Run every corpus case");
  version(corpus_run);
  std::string corpus_dir = "corpus";
  corpus_run->add_option("--dir", corpus_dir, "Corpus directory");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << (e.get_name() == "CallForAllHelp" ? app.help("", CLI::AppFormatMode::All) : app.help());
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "dsub " << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    auto extra = detail::leftovers(app);
    if (!extra.empty())
      err << "dsub: unknown argument '" << extra.front() << "'\n";
    else
      err << "dsub: " << e.what() << "\n";
    err << "Run with --help for usage.\n";
    return 2;
  }

  try {
    if (check->parsed()) {
      TypeEnv g = detail::load_env(env_file);
      Term t = parse_term(read_file(file));
      AlgoContext ctx;
      auto r = step_type(g, t, ctx);
      if (auto* ok = std::get_if<Typed>(&r)) {
        if (!trace_out.empty()) detail::write_file(trace_out, trace_to_json(ok->trace).dump(2) + "\n");
        out << print_type(ok->type) << "\n";
        return 0;
      }
      const auto& u = std::get<Untypable>(r);
      err << "untypable at " << u.location << ": " << u.reason << "\n";
      return 1;
    }
    if (sub->parsed()) {
      TypeEnv g = detail::load_env(env_file);
      AlgoContext ctx;
      auto r = step_subtype(g, parse_type(types[0]), parse_type(types[1]), ctx);
      if (r.holds && !trace_out.empty()) detail::write_file(trace_out, trace_to_json(*r.trace).dump(2) + "\n");
      out << (r.holds ? "true" : "false") << "\n";
      if (!r.holds) err << r.diagnostic << "\n";
      return r.holds ? 0 : 1;
    }
    if (expose_cmd->parsed()) {
      TypeEnv g = detail::load_env(env_file);
      Type t = parse_type(types[0]);
      for (const auto& v : fv_type(t))
        if (!g.contains(v)) throw Error(ErrorKind::UnboundVariable, "variable '" + v.name + "' is not bound");
      auto r = expose(g, t);
      if (is_exposed(r)) {
        out << print_type(exposed_type(r)) << "\n";
        return 0;
      }
      out << describe(r) << "\n";
      return 1;
    }
    if (promote_cmd->parsed() || demote_cmd->parsed()) {
      TypeEnv g = detail::load_env(env_file);
      auto dir = promote_cmd->parsed() ? ShiftDirection::Promote : ShiftDirection::Demote;
      AlgoContext ctx;
      auto r = shift(g, parse_type(types[0]), var(var_name), dir, ctx);
      if (is_shifted(r)) {
        out << print_type(shifted_type(r)) << "\n";
        return 0;
      }
      err << "stuck: " << std::get<ShiftStuck>(r).reason << "\n";
      return 1;
    }
    if (verify->parsed()) {
      auto tree = tree_from_text(read_file(file));
      auto v = decl_verify(tree);
      if (v.ok) {
        out << "accepted\n";
        return 0;
      }
      out << "rejected\n";
      err << "at " << v.where() << ": " << v.message << "\n";
      return 1;
    }
    if (search->parsed()) {
      if (sub_goal.empty() == typ_goal.empty()) {
        err << "dsub: decl search needs exactly one of --sub S T or --typ FILE T\n";
        return 2;
      }
      TypeEnv g = detail::load_env(env_file);
      std::optional<DerivationTree> d;
      if (!sub_goal.empty()) {
        Type s = parse_type(sub_goal[0]), t = parse_type(sub_goal[1]);
        for (const Type* x : {&s, &t})
          for (const auto& v : fv_type(*x))
            if (!g.contains(v)) throw Error(ErrorKind::UnboundVariable, "variable '" + v.name + "' is not bound");
        d = decl_search(SubJ{g, s, t}, fuel);
      } else {
        Term term = parse_term(read_file(typ_goal[0]));
        Type t = parse_type(typ_goal[1]);
        d = decl_search(TypJ{g, term, t}, fuel);
      }
      if (!d) {
        err << "unknown: no derivation found within fuel " << fuel << "\n";
        return 1;
      }
      out << tree_to_json(*d).dump(2) << "\n";
      return 0;
    }
    if (colours->parsed() || tags->parsed()) {
      LabReport r = colours->parsed() ? check_wellbehaved(max_size, lab_fuel) : check_no_tag_switch(max_size, lab_fuel);
      detail::print_report(r, out);
      return r.clean() ? 0 : 1;
    }
    if (minimality->parsed()) {
      auto r = run_minimality_counterexample();
      auto yn = [](bool b) { return b ? "accepted" : "rejected"; };
      out << "step_type(Gamma*, w) = " << r.w_type << "\n";
      out << "decl_verify(Gamma* |- w : B) = " << yn(r.w_B_verified) << "\n";
      out << "decl_verify(Gamma* |- w : C) = " << yn(r.w_C_verified) << "\n";
      out << "decl_verify(Gamma* |- all(b: B) B <: all(b: B) C) = " << yn(r.trans_verified) << "\n";
      out << "step_subtype(Gamma*, B, C) = " << (r.B_sub_C ? "true" : "false") << "\n";
      out << "step_subtype(Gamma*, C, B) = " << (r.C_sub_B ? "true" : "false") << "\n";
      for (const auto& n : r.notes) err << n << "\n";
      return r.reproduced() ? 0 : 1;
    }
    if (pn->parsed()) {
      if (max_n < min_n) throw Error(ErrorKind::Parse, "--max must be at least --min");
      auto m = metric == "calls" ? scala::BenchMetric::Calls : scala::BenchMetric::Nanos;
      auto rows = scala::bench_pn(min_n, max_n, m);
      if (csv_out.empty()) {
        scala::write_csv(out, rows, m);
      } else {
        std::ofstream f(csv_out, std::ios::binary);
        if (!f) throw Error(ErrorKind::Io, "cannot write " + csv_out);
        scala::write_csv(f, rows, m);
      }
      return 0;
    }
    if (corpus_run->parsed()) {
      auto s = run_corpus(corpus_dir);
      for (const auto& c : s.cases) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (!c.pass) out << ": " << c.detail;
        out << "\n";
      }
      out << s.passed() << " passed, " << s.failed() << " failed\n";
      return s.failed() == 0 ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "dsub: " << e.what() << "\n";
    return 2;
  }
  err << "dsub: no command\n";
  return 2;
}

}  // namespace dsub
