// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>

#include "gen.h"
#include "helpers.h"
#include "oracle.h"
#include "smr/pipeline.h"

using namespace smr;
using namespace smr::testing;

namespace {

constexpr int kModules = 150;

std::vector<const Operation*> rdos_of(const DefUseIndex& index) {
  std::vector<const Operation*> out;
  for (const Operation* op : index.operations())
    if (DialectConfig::core().is_rdo(*op)) out.push_back(op);
  return out;
}

std::set<std::string> paths(const DefUseIndex& index,
                            const std::vector<const Operation*>& ops) {
  std::set<std::string> out;
  for (const Operation* op : ops) out.insert(index.path(op));
  return out;
}

}  // namespace

TEST_CASE("property: generated modules respect the size bound") {
  Rng rng(1);
  for (int i = 0; i < kModules; ++i) {
    ModuleIR m = random_module(rng);
    CHECK(count_ops(m) <= 50);
    CHECK(validate_constraints(m, DialectConfig::core()).empty());
    CHECK_FALSE(check_ssa(m));
  }
}

TEST_CASE("property: print and parse round-trip") {
  Rng rng(2);
  for (int i = 0; i < kModules; ++i) {
    ModuleIR m = random_module(rng);
    std::string text = print_module(m);
    ModuleIR again = parse_module(text);
    CHECK(structurally_equal(m, again));
    CHECK(print_module(again) == text);
  }
}

TEST_CASE("property: validation is a pure function of the module") {
  Rng rng(3);
  for (int i = 0; i < kModules; ++i) {
    ModuleIR m = random_module(rng);
    // Break a random region by dropping its terminator.
    std::vector<Region*> regions;
    walk_ops(m.functions[0].body, [&](Operation& op) {
      for (Region& r : op.regions) regions.push_back(&r);
    });
    if (!regions.empty()) regions[rng() % regions.size()]->block().ops.pop_back();
    auto first = validate_constraints(m, DialectConfig::core());
    CHECK(first == validate_constraints(m, DialectConfig::core()));
    CHECK(first.size() == (regions.empty() ? 0u : 1u));
  }
}

TEST_CASE("property: control automaton agrees with string equality") {
  Rng rng(4);
  const DialectConfig cfg = DialectConfig::core();
  for (int i = 0; i < 40; ++i) {
    ModuleIR a = random_module(rng), b = random_module(rng);
    auto pats = input_control_strings(a, cfg);
    if (pats.empty()) continue;
    CdgAutomaton automaton(pats);
    for (const auto& inputs : {pats, input_control_strings(b, cfg)})
      for (const ControlString& s : inputs) {
        std::vector<std::size_t> expected;
        for (std::size_t k = 0; k < pats.size(); ++k)
          if (pats[k].str() == s.str()) expected.push_back(k);
        CHECK(automaton.run(s) == expected);
      }
  }
}

TEST_CASE("property: control strings agree with the shape oracle") {
  Rng rng(5);
  const DialectConfig cfg = DialectConfig::core();
  for (int i = 0; i < 60; ++i) {
    ModuleIR m = random_module(rng);
    auto strings = input_control_strings(m, cfg);
    for (const ControlString& x : strings)
      for (const ControlString& y : strings)
        CHECK((x.tokens == y.tokens) == oracle_shape_equal(*x.root, *y.root, cfg));
  }
}

TEST_CASE("property: graphs and strings are deterministic") {
  Rng rng(6);
  const DialectConfig cfg = DialectConfig::core();
  for (int i = 0; i < 60; ++i) {
    ModuleIR m = random_module(rng);
    ModuleIR copy = parse_module(print_module(m));
    DefUseIndex a(m), b(copy);
    auto ra = rdos_of(a), rb = rdos_of(b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t k = 0; k < ra.size(); ++k) {
      DdgGraph ga = build_in_ddg(*ra[k], a, cfg);
      DdgGraph gb = build_in_ddg(*rb[k], b, cfg);
      CHECK(ga.dump() == gb.dump());
      auto sa = stringify_ddg(ga, 1'000'000), sb = stringify_ddg(gb, 1'000'000);
      REQUIRE(sa.size() == sb.size());
      for (std::size_t j = 0; j < sa.size(); ++j) CHECK(sa[j].str() == sb[j].str());
    }
  }
}

TEST_CASE("property: peeling keeps the wrapper body") {
  Rng rng(7);
  for (int i = 0; i < kModules; ++i) {
    ModuleIR m = random_module(rng);
    DefUseIndex index(m);
    auto rdos = rdos_of(index);
    if (rdos.empty()) continue;
    FuncDef p = excise_pattern(m, *rdos[rng() % rdos.size()], rng, 0.5, "p");
    PeeledWrapper w = peel_wrapper(p, DialectConfig::core());
    Region expected = p.body;
    expected.block().ops.pop_back();
    CHECK(structurally_equal(w.body, expected));
    CHECK(w.args.size() == p.params.size());
  }
}

TEST_CASE("property: funnel narrows and matches agree with the oracle") {
  Rng rng(8);
  const DialectConfig cfg = DialectConfig::core();
  int positives = 0;
  for (int i = 0; i < kModules; ++i) {
    ModuleIR m = random_module(rng);
    DefUseIndex index(m);
    auto rdos = rdos_of(index);
    if (rdos.empty()) continue;
    const Operation* source = rdos[rng() % rdos.size()];
    FuncDef p = excise_pattern(m, *source, rng, 0.5, "p");
    bool mutated = i % 2 && !mutate_pattern(p, rng).empty();
    Matcher matcher = Matcher::from_text(pat_text(p));
    MatchResult r = matcher.match(m);
    const Funnel& f = r.funnel;
    CHECK(f.rdos == rdos.size());
    CHECK(f.rdos >= f.cdg_candidates);
    CHECK(f.cdg_candidates >= f.ddg_accepted);
    CHECK(f.ddg_accepted >= f.ddg_matches);
    CHECK(f.ddg_matches == r.total());

    std::vector<const Operation*> got;
    for (const Binding& b : r.matches[0]) got.push_back(b.root);
    auto want = oracle_roots(matcher.patterns().pairs[0], *r.module, cfg);
    CHECK(paths(*r.index, got) == paths(*r.index, want));
    if (!mutated) CHECK(paths(*r.index, got).contains(index.path(source)));
    positives += !want.empty();
  }
  CHECK(positives > 0);
}

TEST_CASE("property: rewriting a generated module keeps it well formed") {
  Rng rng(9);
  for (int i = 0; i < 60; ++i) {
    ModuleIR m = random_module(rng);
    DefUseIndex index(m);
    auto rdos = rdos_of(index);
    if (rdos.empty()) continue;
    FuncDef p = excise_pattern(m, *rdos[rng() % rdos.size()], rng, 1.0, "p");
    Matcher matcher = Matcher::from_text(pat_text(p));
    MatchResult r = matcher.match(m);
    RewriteOutcome out = matcher.rewrite(r);
    CHECK_FALSE(check_ssa(out.module));
    ModuleIR again = parse_module(print_module(out.module));
    CHECK(validate_constraints(again, DialectConfig::core()).empty());
    if (r.total() > 0) CHECK(out.module.functions.back().name == "p_r");
  }
}
