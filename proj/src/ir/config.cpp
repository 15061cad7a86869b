// SPDX-License-Identifier: Apache-2.0

#include <json.hpp>

#include "smr/error.h"
#include "smr/ir.h"

namespace smr {

bool DialectConfig::is_potential_root(const Operation& op) const {
  // Unlisted result-less ops would otherwise be unreachable from any root.
  return potential_root_ops.contains(op.name) || op.results.empty();
}

DialectConfig DialectConfig::core() {
  DialectConfig c;
  c.rdo_ops = {"core.if", "core.for"};
  c.terminator_ops = {"core.yield", "core.return"};
  c.potential_root_ops = {"core.store", "core.yield", "core.return",
                          "core.if", "core.for"};
  c.match_attrs = {
      {"core.constant", {"value"}},
      {"core.cmpi", {"predicate"}},
      {"core.call", {"callee"}},
      {"core.alloc", {"size"}},
  };
  auto ar = [](unsigned operands, unsigned results, unsigned regions) {
    return OpArity{operands, results, regions};
  };
  c.arity = {
      {"core.constant", ar(0, 1, 0)}, {"core.addf", ar(2, 1, 0)},
      {"core.subf", ar(2, 1, 0)},     {"core.mulf", ar(2, 1, 0)},
      {"core.divf", ar(2, 1, 0)},     {"core.addi", ar(2, 1, 0)},
      {"core.subi", ar(2, 1, 0)},     {"core.muli", ar(2, 1, 0)},
      {"core.cmpi", ar(2, 1, 0)},     {"core.load", ar(2, 1, 0)},
      {"core.store", ar(3, 0, 0)},    {"core.if", ar(1, 0, 2)},
      {"core.for", ar(3, 0, 1)},      {"core.yield", ar(0, 0, 0)},
      {"core.alloc", ar(0, 1, 0)},
  };
  return c;
}

namespace {

using json = nlohmann::json;

std::set<std::string> string_set(const json& j, const char* key) {
  std::set<std::string> out;
  if (!j.contains(key)) return out;
  for (const json& e : j.at(key)) out.insert(e.get<std::string>());
  return out;
}

}  // namespace

DialectConfig DialectConfig::from_json(std::string_view text) {
  DialectConfig c;
  try {
    json j = json::parse(text);
    c.rdo_ops = string_set(j, "rdo_ops");
    c.terminator_ops = string_set(j, "terminator_ops");
    c.potential_root_ops = string_set(j, "potential_root_ops");
    if (j.contains("match_attrs"))
      for (const auto& [op, keys] : j.at("match_attrs").items())
        c.match_attrs[op] = keys.get<std::vector<std::string>>();
    if (j.contains("arity"))
      for (const auto& [op, a] : j.at("arity").items()) {
        OpArity arity;
        if (a.contains("operands")) arity.operands = a.at("operands").get<unsigned>();
        if (a.contains("results")) arity.results = a.at("results").get<unsigned>();
        if (a.contains("regions")) arity.regions = a.at("regions").get<unsigned>();
        c.arity[op] = arity;
      }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("invalid dialect config: ") + e.what());
  }
  for (const std::string& rdo : c.rdo_ops)
    if (auto it = c.arity.find(rdo);
        it != c.arity.end() && it->second.regions && *it->second.regions == 0)
      throw Error(ErrorKind::Config,
                  "RDO '" + rdo + "' is declared with zero regions");
  return c;
}

std::string DialectConfig::to_json() const {
  json j;
  j["rdo_ops"] = rdo_ops;
  j["terminator_ops"] = terminator_ops;
  j["potential_root_ops"] = potential_root_ops;
  j["match_attrs"] = match_attrs;
  json ar = json::object();
  for (const auto& [op, a] : arity) {
    json e = json::object();
    if (a.operands) e["operands"] = *a.operands;
    if (a.results) e["results"] = *a.results;
    if (a.regions) e["regions"] = *a.regions;
    ar[op] = e;
  }
  j["arity"] = ar;
  return j.dump(2);
}

}  // namespace smr
