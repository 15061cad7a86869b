// SPDX-License-Identifier: Apache-2.0

#include "smr/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smr/cdg.h"
#include "smr/ddg.h"
#include "smr/error.h"
#include "smr/interp.h"
#include "smr/pipeline.h"

namespace smr {

namespace {

/// An Error tagged with the file it came from.
struct FileError {
  std::string file;
  Error error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FileError{path, Error(ErrorKind::Syntax, "cannot open file")};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
auto in_file(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw FileError{path, e};
  }
}

struct Options {
  std::string pat;
  std::string input;
  std::string emit;
  std::string report = "json";
  std::string config;
  std::size_t path_cap = kDefaultPathCap;
  std::string entry;
  std::vector<std::string> run_args;
  std::size_t fuel = kDefaultFuel;
};

DialectConfig load_config(const Options& o) {
  if (o.config.empty()) return DialectConfig::core();
  std::string text = read_file(o.config);
  return in_file(o.config, [&] { return DialectConfig::from_json(text); });
}

std::size_t path_cap(const Options& o) {
  if (const char* env = std::getenv("SMR_PATH_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw FileError{"SMR_PATH_CAP",
                    Error(ErrorKind::Config, "expected a positive integer")};
  }
  return o.path_cap;
}

Matcher load_matcher(const Options& o) {
  DialectConfig cfg = load_config(o);
  std::string text = read_file(o.pat);
  return in_file(o.pat, [&] {
    return Matcher::from_text(text, std::move(cfg), path_cap(o));
  });
}

ModuleIR load_module(const std::string& path) {
  std::string text = read_file(path);
  return in_file(path, [&] { return parse_module(text); });
}

std::string report(const Options& o, const Matcher& m, const MatchResult& r,
                   const RewriteOutcome* rw) {
  return o.report == "text" ? report_text(m, r, rw) : report_json(m, r, rw);
}

int cmd_match(const Options& o, std::ostream& out) {
  Matcher m = load_matcher(o);
  MatchResult r = m.match(load_module(o.input));
  out << report(o, m, r, nullptr);
  return kExitOk;
}

int cmd_rewrite(const Options& o, std::ostream& out, std::ostream& err) {
  Matcher m = load_matcher(o);
  MatchResult r = m.match(load_module(o.input));
  RewriteOutcome rw = m.rewrite(r);
  std::string ir = print_module(rw.module);
  if (o.emit.empty()) {
    out << ir;
    err << report(o, m, r, &rw);
  } else {
    std::ofstream f(o.emit, std::ios::binary);
    if (!f) throw FileError{o.emit, Error(ErrorKind::Syntax, "cannot write file")};
    f << ir;
    out << report(o, m, r, &rw);
  }
  return kExitOk;
}

InterpArg parse_run_arg(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorKind::Syntax, "argument '" + spec + "' is not <kind>:<value>");
  std::string kind = spec.substr(0, colon);
  std::string value = spec.substr(colon + 1);
  try {
    nlohmann::json j = nlohmann::json::parse(value);
    if (kind == "i64") return j.get<std::int64_t>();
    if (kind == "f64") return j.get<double>();
    if (kind == "i1") return j.is_boolean() ? j.get<bool>() : j.get<std::int64_t>() != 0;
    if (kind == "f64buf") return Buffer{j.get<std::vector<double>>()};
    if (kind == "i64buf") return Buffer{j.get<std::vector<std::int64_t>>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Syntax, "argument '" + spec + "': " + e.what());
  }
  throw Error(ErrorKind::Syntax, "unknown argument kind '" + kind +
                                     "' (expected i1, i64, f64, i64buf or f64buf)");
}

int cmd_run(const Options& o, std::ostream& out) {
  ModuleIR m = load_module(o.input);
  std::vector<InterpArg> args;
  for (const std::string& a : o.run_args) args.push_back(parse_run_arg(a));
  InterpResult r = interpret_function(m, o.entry, args, o.fuel);

  const FuncDef* f = m.find(o.entry);
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  std::size_t k = 0;
  for (const Param& p : f->params)
    if (p.type.is_memref()) {
      std::visit([&](const auto& v) { j[p.name] = v; }, r.buffers.at(k++));
    }
  out << j.dump() << "\n";
  return kExitOk;
}

std::string sorted_strings(const std::vector<DataString>& strings) {
  std::vector<std::string> lines;
  for (const DataString& s : strings) lines.push_back(s.str());
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

int cmd_dump_cdg(const Options& o, std::ostream& out) {
  DialectConfig cfg = load_config(o);
  if (!o.pat.empty()) {
    std::string text = read_file(o.pat);
    PatFile pats = in_file(o.pat, [&] { return parse_pat_file(text, cfg); });
    for (const PatternPair& p : pats.pairs)
      out << "pattern @" << p.name << "\n"
          << pattern_control_string(p.body(), cfg).indented();
  }
  if (!o.input.empty()) {
    ModuleIR m = load_module(o.input);
    DefUseIndex index(m);
    for (const ControlString& s : input_control_strings(m, cfg))
      out << "rdo @" << s.function->name << ":" << index.path(s.root) << "\n"
          << s.indented();
  }
  return kExitOk;
}

int cmd_dump_ddg(const Options& o, std::ostream& out) {
  DialectConfig cfg = load_config(o);
  std::size_t cap = path_cap(o);
  if (!o.pat.empty()) {
    std::string text = read_file(o.pat);
    PatFile pats = in_file(o.pat, [&] { return parse_pat_file(text, cfg); });
    for (std::size_t i = 0; i < pats.pairs.size(); ++i) {
      DdgGraph g = in_file(o.pat, [&] { return build_pat_ddg(pats.pairs[i], cfg, i); });
      out << "pattern @" << pats.pairs[i].name << "\n"
          << g.dump() << "strings\n"
          << sorted_strings(in_file(o.pat, [&] { return stringify_ddg(g, cap); }));
    }
  }
  if (!o.input.empty()) {
    ModuleIR m = load_module(o.input);
    DefUseIndex index(m);
    for (const ControlString& s : input_control_strings(m, cfg)) {
      out << "rdo @" << s.function->name << ":" << index.path(s.root) << "\n";
      try {
        DdgGraph g = build_in_ddg(*s.root, index, cfg);
        out << g.dump() << "strings\n" << sorted_strings(stringify_ddg(g, cap));
      } catch (const Error& e) {
        out << "skipped: " << e.what() << "\n";
      }
    }
  }
  return kExitOk;
}

int cmd_dump_automaton(const Options& o, std::ostream& out) {
  Matcher m = load_matcher(o);
  out << m.cdg().dump() << m.ddg().automaton.dump();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Structural idiom matcher and rewriter", "smr"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool pat, bool input) {
    auto* p = sub->add_option("--pat", o.pat, "PAT file");
    auto* i = sub->add_option("--input", o.input, "input IR file");
    if (pat) p->required();
    if (input) i->required();
    sub->add_option("--config", o.config, "dialect config (JSON)");
    sub->add_option("--path-cap", o.path_cap, "data-string path cap")
        ->check(CLI::PositiveNumber);
  };
  auto add_report = [&](CLI::App* sub) {
    sub->add_option("--report", o.report, "report format")
        ->check(CLI::IsMember({"json", "text"}));
  };

  CLI::App* match = app.add_subcommand("match", "report matches");
  add_common(match, true, true);
  add_report(match);

  CLI::App* rewrite = app.add_subcommand("rewrite", "replace matches with calls");
  add_common(rewrite, true, true);
  add_report(rewrite);
  rewrite->add_option("--emit", o.emit, "output IR file (default: stdout)");

  CLI::App* run = app.add_subcommand("run", "interpret a function");
  run->add_option("--input", o.input, "input IR file")->required();
  run->add_option("--entry", o.entry, "function to run")->required();
  run->add_option("--arg", o.run_args, "argument, e.g. i64:5 or f64buf:[1,2]");
  run->add_option("--fuel", o.fuel, "step budget");

  CLI::App* dump_cdg = app.add_subcommand("dump-cdg", "print control-strings");
  add_common(dump_cdg, false, false);
  CLI::App* dump_ddg = app.add_subcommand("dump-ddg", "print data-dependency graphs");
  add_common(dump_ddg, false, false);
  CLI::App* dump_auto = app.add_subcommand("dump-automaton", "print both automata");
  add_common(dump_auto, true, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (match->parsed()) return cmd_match(o, out);
    if (rewrite->parsed()) return cmd_rewrite(o, out, err);
    if (run->parsed()) return cmd_run(o, out);
    if (dump_cdg->parsed()) return cmd_dump_cdg(o, out);
    if (dump_ddg->parsed()) return cmd_dump_ddg(o, out);
    if (dump_auto->parsed()) return cmd_dump_automaton(o, out);
  } catch (const FileError& e) {
    err << e.file << (e.error.line() ? ":" : ": ") << e.error.what() << "\n";
    return e.error.kind() == ErrorKind::BrokenUse ? kExitInternal : kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::BrokenUse ? kExitInternal : kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInputError;
}

}  // namespace smr
