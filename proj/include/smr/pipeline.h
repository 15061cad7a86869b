// SPDX-License-Identifier: Apache-2.0
//
// End-to-end driver: automata are built once per PAT file and reused for
// every input module.

#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "smr/cdg.h"
#include "smr/ddg.h"
#include "smr/ir.h"
#include "smr/pat.h"
#include "smr/rewrite.h"

namespace smr {

struct Funnel {
  std::size_t rdos = 0;
  std::size_t cdg_candidates = 0;
  /// Candidates whose data-strings some control-matching pattern accepts.
  std::size_t ddg_accepted = 0;
  /// Candidates with at least one verified binding.
  std::size_t ddg_matches = 0;
};

struct Timings {
  double automaton_build_ms = 0;
  double cdg_ms = 0;
  double ddg_ms = 0;
  double verify_ms = 0;
  double rewrite_ms = 0;
};

struct MatchResult {
  /// The matched module; bindings and the index point into it.
  std::shared_ptr<const ModuleIR> module;
  std::shared_ptr<const DefUseIndex> index;
  std::vector<Candidate> candidates;
  /// Verified bindings per pattern.
  std::vector<std::vector<Binding>> matches;
  Funnel funnel;
  Timings timings;
  std::vector<std::string> warnings;

  std::size_t total() const;
};

struct RewriteOutcome {
  ModuleIR module;
  RewritePlan plan;
  double rewrite_ms = 0;
};

class Matcher {
 public:
  Matcher(PatFile pats, DialectConfig cfg = DialectConfig::core(),
          std::size_t path_cap = kDefaultPathCap);

  static Matcher from_text(std::string_view pat_text,
                           DialectConfig cfg = DialectConfig::core(),
                           std::size_t path_cap = kDefaultPathCap);

  MatchResult match(std::shared_ptr<const ModuleIR> m) const;
  MatchResult match(const ModuleIR& m) const {
    return match(std::make_shared<const ModuleIR>(m));
  }
  RewriteOutcome rewrite(const MatchResult& r) const;

  const PatFile& patterns() const { return *pats_; }
  const DialectConfig& config() const { return cfg_; }
  const CdgAutomaton& cdg() const { return cdg_; }
  const DdgPatternSet& ddg() const { return ddg_; }
  std::size_t path_cap() const { return path_cap_; }
  double build_ms() const { return build_ms_; }

 private:
  Matcher(PatFile pats, DialectConfig cfg, std::size_t path_cap,
          std::chrono::steady_clock::time_point start);

  std::shared_ptr<const PatFile> pats_;
  DialectConfig cfg_;
  std::size_t path_cap_;
  CdgAutomaton cdg_;
  DdgPatternSet ddg_;
  double build_ms_ = 0;
};

struct ReportOptions {
  bool timings = true;
};

/// Machine-readable report. Patterns keep PAT order.
std::string report_json(const Matcher& matcher, const MatchResult& r,
                        const RewriteOutcome* rewrite = nullptr,
                        ReportOptions opts = {});
std::string report_text(const Matcher& matcher, const MatchResult& r,
                        const RewriteOutcome* rewrite = nullptr,
                        ReportOptions opts = {});

}  // namespace smr
