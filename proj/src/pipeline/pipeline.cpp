// SPDX-License-Identifier: Apache-2.0

#include "smr/pipeline.h"

#include <chrono>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace smr {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::ordered_json;

double since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::vector<ControlString> control_strings(const PatFile& pats,
                                           const DialectConfig& cfg) {
  std::vector<ControlString> out;
  for (const PatternPair& p : pats.pairs)
    out.push_back(pattern_control_string(p.body(), cfg));
  return out;
}

struct Site {
  std::string function;
  std::string root;
  std::vector<std::string> args;
};

Site describe(const Binding& b, const DefUseIndex& index) {
  Site s;
  const FuncDef* f = b.function ? b.function : index.function_of(b.root);
  s.root = index.path(b.root);
  if (!f) return s;
  s.function = f->name;
  auto names = value_names(*f);
  for (ValueId v : b.arg_map) {
    auto it = names.find(v);
    s.args.push_back(it == names.end() ? "?" : it->second);
  }
  return s;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::size_t MatchResult::total() const {
  std::size_t n = 0;
  for (const auto& m : matches) n += m.size();
  return n;
}

Matcher::Matcher(PatFile pats, DialectConfig cfg, std::size_t path_cap)
    : Matcher(std::move(pats), std::move(cfg), path_cap, Clock::now()) {}

Matcher::Matcher(PatFile pats, DialectConfig cfg, std::size_t path_cap,
                 std::chrono::steady_clock::time_point start)
    : pats_(std::make_shared<const PatFile>(std::move(pats))),
      cfg_(std::move(cfg)),
      path_cap_(path_cap),
      cdg_(control_strings(*pats_, cfg_)),
      ddg_(build_ddg_patterns(*pats_, cfg_, path_cap_)),
      build_ms_(since(start)) {}

Matcher Matcher::from_text(std::string_view pat_text, DialectConfig cfg,
                           std::size_t path_cap) {
  Clock::time_point t = Clock::now();
  PatFile pats = parse_pat_file(pat_text, cfg);
  return Matcher(std::move(pats), std::move(cfg), path_cap, t);
}

MatchResult Matcher::match(std::shared_ptr<const ModuleIR> m) const {
  MatchResult r;
  r.module = std::move(m);
  r.index = std::make_shared<const DefUseIndex>(*r.module);
  r.timings.automaton_build_ms = build_ms_;

  Clock::time_point t = Clock::now();
  CdgResult cdg = cdg_match(*r.module, cdg_, cfg_);
  r.timings.cdg_ms = since(t);
  r.funnel.rdos = cdg.rdos_seen;
  r.funnel.cdg_candidates = cdg.candidates.size();

  DdgMatchResult ddg = ddg_match(cdg.candidates, ddg_, *r.index, cfg_, path_cap_);
  r.timings.ddg_ms = ddg.strings_ms;
  r.timings.verify_ms = ddg.verify_ms;
  r.funnel.ddg_accepted = ddg.string_accepted;
  std::set<const Operation*> roots;
  for (const auto& per_pattern : ddg.matches)
    for (const Binding& b : per_pattern) roots.insert(b.root);
  r.funnel.ddg_matches = roots.size();

  r.candidates = std::move(cdg.candidates);
  r.matches = std::move(ddg.matches);
  r.warnings = std::move(ddg.warnings);
  return r;
}

RewriteOutcome Matcher::rewrite(const MatchResult& r) const {
  Clock::time_point t = Clock::now();
  RewriteOutcome out;
  out.plan = plan_rewrite(*r.module, r.matches, *pats_, *r.index);
  out.module = apply_rewrite(*r.module, out.plan, *pats_);
  out.rewrite_ms = since(t);
  return out;
}

std::string report_json(const Matcher& matcher, const MatchResult& r,
                        const RewriteOutcome* rewrite, ReportOptions opts) {
  json j;
  json patterns = json::array();
  json counts = json::object();
  for (std::size_t p = 0; p < matcher.patterns().pairs.size(); ++p) {
    const std::string& name = matcher.patterns().pairs[p].name;
    json sites = json::array();
    for (const Binding& b : r.matches[p]) {
      Site s = describe(b, *r.index);
      sites.push_back({{"function", s.function}, {"root", s.root}, {"args", s.args}});
    }
    patterns.push_back({{"name", name}, {"matches", r.matches[p].size()}, {"sites", sites}});
    counts[name] = r.matches[p].size();
  }
  j["patterns"] = patterns;
  j["matches"] = counts;
  j["funnel"] = {{"rdos", r.funnel.rdos},
                 {"cdg_candidates", r.funnel.cdg_candidates},
                 {"ddg_accepted", r.funnel.ddg_accepted},
                 {"ddg_matches", r.funnel.ddg_matches}};
  j["warnings"] = r.warnings;
  if (rewrite) {
    json inserted = json::array();
    for (const FuncDef& f : rewrite->plan.inserted_funcs) inserted.push_back(f.name);
    j["rewrite"] = {{"selected", rewrite->plan.selected.size()},
                    {"inserted", inserted},
                    {"diagnostics", rewrite->plan.diagnostics}};
  }
  if (opts.timings) {
    j["timings_ms"] = {{"automaton_build", r.timings.automaton_build_ms},
                       {"cdg", r.timings.cdg_ms},
                       {"ddg", r.timings.ddg_ms},
                       {"verify", r.timings.verify_ms},
                       {"rewrite", rewrite ? rewrite->rewrite_ms : 0.0}};
  }
  return j.dump(2) + "\n";
}

std::string report_text(const Matcher& matcher, const MatchResult& r,
                        const RewriteOutcome* rewrite, ReportOptions opts) {
  std::string out;
  for (std::size_t p = 0; p < matcher.patterns().pairs.size(); ++p) {
    out += "pattern " + matcher.patterns().pairs[p].name + ": " +
           std::to_string(r.matches[p].size()) + " match(es)\n";
    for (const Binding& b : r.matches[p]) {
      Site s = describe(b, *r.index);
      out += "  @" + s.function + " op " + s.root + " (";
      for (std::size_t i = 0; i < s.args.size(); ++i)
        out += (i ? ", " : "") + s.args[i];
      out += ")\n";
    }
  }
  out += "funnel: rdos=" + std::to_string(r.funnel.rdos) +
         " cdg_candidates=" + std::to_string(r.funnel.cdg_candidates) +
         " ddg_accepted=" + std::to_string(r.funnel.ddg_accepted) +
         " ddg_matches=" + std::to_string(r.funnel.ddg_matches) + "\n";
  for (const std::string& w : r.warnings) out += "warning: " + w + "\n";
  if (rewrite) {
    out += "rewrite: " + std::to_string(rewrite->plan.selected.size()) +
           " site(s) replaced\n";
    for (const FuncDef& f : rewrite->plan.inserted_funcs)
      out += "  inserted @" + f.name + "\n";
    for (const std::string& d : rewrite->plan.diagnostics) out += "  " + d + "\n";
  }
  if (opts.timings)
    out += "timings_ms: build=" + fixed(r.timings.automaton_build_ms) +
           " cdg=" + fixed(r.timings.cdg_ms) + " ddg=" + fixed(r.timings.ddg_ms) +
           " verify=" + fixed(r.timings.verify_ms) +
           " rewrite=" + fixed(rewrite ? rewrite->rewrite_ms : 0.0) + "\n";
  return out;
}

}  // namespace smr
