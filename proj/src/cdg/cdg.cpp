// SPDX-License-Identifier: Apache-2.0

#include "smr/cdg.h"

namespace smr {

namespace {

std::string token_text(const ControlToken& t) {
  switch (t.kind) {
    case ControlToken::Kind::Rdo: return "\"" + t.name + "\"";
    case ControlToken::Kind::Open: return "{";
    case ControlToken::Kind::Close: return "}";
    case ControlToken::Kind::Seq: return "SEQ";
  }
  return "?";
}

void emit(const Operation& rdo, const DialectConfig& cfg,
          std::vector<ControlToken>& out) {
  out.push_back(ControlToken::rdo(rdo.name));
  for (const Region& r : rdo.regions) {
    out.push_back(ControlToken::open());
    for (const Block& b : r.blocks)
      for (const Operation& op : b.ops) {
        if (cfg.is_rdo(op)) {
          emit(op, cfg, out);
        } else if (out.back().kind != ControlToken::Kind::Seq) {
          // Terminators count as ordinary ops, so a terminator-only region
          // still yields one SEQ.
          out.push_back(ControlToken::seq());
        }
      }
    out.push_back(ControlToken::close());
  }
}

}  // namespace

std::string ControlString::str() const {
  std::string s;
  for (const ControlToken& t : tokens) {
    if (!s.empty()) s += ' ';
    s += token_text(t);
  }
  return s;
}

std::string ControlString::indented() const {
  std::vector<std::string> lines;
  int depth = 0;
  auto line = [&](const std::string& text) {
    lines.push_back(std::string(static_cast<std::size_t>(depth) * 2, ' ') + text);
  };
  for (const ControlToken& t : tokens) {
    switch (t.kind) {
      case ControlToken::Kind::Rdo: line(token_text(t)); break;
      case ControlToken::Kind::Seq: line("SEQ"); break;
      case ControlToken::Kind::Open:
        if (lines.empty()) line("");
        lines.back() += " {";
        ++depth;
        break;
      case ControlToken::Kind::Close:
        --depth;
        line("}");
        break;
    }
  }
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

ControlString control_string(const Operation& rdo, const DialectConfig& cfg) {
  ControlString s;
  s.root = &rdo;
  emit(rdo, cfg, s.tokens);
  return s;
}

ControlString pattern_control_string(const Region& body,
                                     const DialectConfig& cfg) {
  for (const Block& b : body.blocks)
    for (const Operation& op : b.ops)
      if (cfg.is_rdo(op)) return control_string(op, cfg);
  return {};
}

std::vector<ControlString> input_control_strings(const ModuleIR& m,
                                                 const DialectConfig& cfg) {
  std::vector<ControlString> out;
  for (const FuncDef& f : m.functions)
    walk_ops(f.body, [&](const Operation& op) {
      if (!cfg.is_rdo(op)) return;
      out.push_back(control_string(op, cfg));
      out.back().function = &f;
    });
  return out;
}

CdgAutomaton::CdgAutomaton(const std::vector<ControlString>& pattern_strings) {
  for (std::size_t i = 0; i < pattern_strings.size(); ++i)
    finals_[trie_.insert(pattern_strings[i].tokens)].insert(i);
}

std::vector<std::size_t> CdgAutomaton::run(const ControlString& s) const {
  auto end = trie_.run(s.tokens);
  if (!end) return {};
  auto it = finals_.find(*end);
  if (it == finals_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::string CdgAutomaton::dump() const {
  std::string out = "cdg-automaton states=" + std::to_string(trie_.size()) + "\n";
  for (StateId s = 0; s < trie_.size(); ++s) {
    out += "  s" + std::to_string(s);
    if (auto it = finals_.find(s); it != finals_.end()) {
      out += " final{";
      bool first = true;
      for (std::size_t p : it->second) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(p);
      }
      out += "}";
    }
    out += "\n";
    for (const auto& [tok, to] : trie_.transitions(s))
      out += "    " + token_text(tok) + " -> s" + std::to_string(to) + "\n";
  }
  return out;
}

CdgResult cdg_match(const ModuleIR& input, const CdgAutomaton& automaton,
                    const DialectConfig& cfg) {
  CdgResult result;
  for (const ControlString& s : input_control_strings(input, cfg)) {
    ++result.rdos_seen;
    std::vector<std::size_t> hits = automaton.run(s);
    if (hits.empty()) continue;
    result.candidates.push_back(Candidate{s.root, s.function, std::move(hits)});
  }
  return result;
}

CdgResult cdg_match(const ModuleIR& input,
                    const std::vector<PatternPair>& patterns,
                    const DialectConfig& cfg) {
  std::vector<ControlString> strings;
  strings.reserve(patterns.size());
  for (const PatternPair& p : patterns)
    strings.push_back(pattern_control_string(p.body(), cfg));
  return cdg_match(input, CdgAutomaton(strings), cfg);
}

}  // namespace smr
