// SPDX-License-Identifier: Apache-2.0

#include "smr/ir.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "parser.h"
#include "smr/error.h"

namespace smr {

// ---------------------------------------------------------------------------
// Errors.

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::UndefinedValue: return "UndefinedValue";
    case ErrorKind::DuplicateValue: return "DuplicateValue";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::UnsupportedLanguage: return "UnsupportedLanguage";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::Config: return "Config";
    case ErrorKind::SequentialRdos: return "SequentialRdos";
    case ErrorKind::NoRdo: return "NoRdo";
    case ErrorKind::MultiBlockRegion: return "MultiBlockRegion";
    case ErrorKind::MultiResult: return "MultiResult";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::MissingTerminator: return "MissingTerminator";
    case ErrorKind::UnreachableOp: return "UnreachableOp";
    case ErrorKind::UnbindableArg: return "UnbindableArg";
    case ErrorKind::ExplosionGuard: return "ExplosionGuard";
    case ErrorKind::BrokenUse: return "BrokenUse";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
    case ErrorKind::UnknownOp: return "UnknownOp";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::InterpTypeMismatch: return "TypeMismatch";
  }
  return "Error";
}

namespace {
std::string render_error(ErrorKind kind, const std::string& message,
                         unsigned line, unsigned column) {
  std::string out;
  if (line) out += std::to_string(line) + ":" + std::to_string(column) + ": ";
  out += std::string(to_string(kind)) + ": " + message;
  return out;
}
}  // namespace

Error::Error(ErrorKind kind, std::string message, unsigned line,
             unsigned column)
    : std::runtime_error(render_error(kind, message, line, column)),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(std::move(message)) {}

// ---------------------------------------------------------------------------
// Types and attributes.

Type::Type(std::string_view text) {
  text_.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) text_ += c;
}

Type Type::element_type() const {
  constexpr std::string_view prefix = "memref<";
  if (text_.size() <= prefix.size() + 1 || !text_.starts_with(prefix) ||
      text_.back() != '>')
    return Type{};
  return Type(std::string_view(text_).substr(
      prefix.size(), text_.size() - prefix.size() - 1));
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Shortest representation that still round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      s = buf;
      break;
    }
  }
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_attr(const AttrValue& value) {
  struct Visitor {
    std::string operator()(const IntAttr& a) const {
      return std::to_string(a.value) + " : " + a.type.str();
    }
    std::string operator()(const FloatAttr& a) const {
      return format_double(a.value) + " : " + a.type.str();
    }
    std::string operator()(const StringAttr& a) const { return quote(a.value); }
    std::string operator()(const SymbolAttr& a) const { return "@" + a.name; }
    std::string operator()(const TypeAttr& a) const { return a.type.str(); }
  };
  return std::visit(Visitor{}, value);
}

std::string format_attr_compact(const AttrValue& value) {
  struct Visitor {
    std::string operator()(const IntAttr& a) const {
      return std::to_string(a.value) + ":" + a.type.str();
    }
    std::string operator()(const FloatAttr& a) const {
      return format_double(a.value) + ":" + a.type.str();
    }
    std::string operator()(const StringAttr& a) const { return a.value; }
    std::string operator()(const SymbolAttr& a) const { return "@" + a.name; }
    std::string operator()(const TypeAttr& a) const { return a.type.str(); }
  };
  return std::visit(Visitor{}, value);
}

const AttrValue* Operation::attr(std::string_view key) const {
  auto it = attributes.find(std::string(key));
  return it == attributes.end() ? nullptr : &it->second;
}

const FuncDef* ModuleIR::find(std::string_view name) const {
  for (const FuncDef& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

ValueId ModuleIR::next_value_id() const {
  ValueId next = 0;
  auto bump = [&](ValueId v) { next = std::max(next, v + 1); };
  for (const FuncDef& f : functions) {
    for (const Param& p : f.params) bump(p.id);
    walk_ops(f.body, [&](const Operation& op) {
      for (const Result& r : op.results) bump(r.id);
      for (const Region& r : op.regions)
        for (const Block& b : r.blocks)
          for (const BlockArg& a : b.args) bump(a.id);
    });
    for (const Block& b : f.body.blocks)
      for (const BlockArg& a : b.args) bump(a.id);
  }
  return next;
}

// ---------------------------------------------------------------------------
// Parsing.

ModuleIR parse_module(std::string_view text) {
  detail::Lexer lex(text);
  ValueId next_id = 0;
  detail::Parser parser(lex, next_id);
  ModuleIR m;
  while (!lex.at(detail::Tok::Eof)) {
    detail::Token start = lex.peek();
    FuncDef f = parser.parse_function();
    if (m.find(f.name))
      throw Error(ErrorKind::DuplicateName,
                  "duplicate function @" + f.name, start.line, start.column);
    m.functions.push_back(std::move(f));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Printing.

namespace {

class Printer {
 public:
  explicit Printer(const FuncDef& f) { number(f); }

  std::string function(const FuncDef& f) {
    out_ = "func @" + f.name + "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out_ += ", ";
      out_ += names_.at(f.params[i].id) + ": " + f.params[i].type.str();
    }
    out_ += ") {\n";
    region_body(f.body, 1);
    out_ += "}\n";
    return std::move(out_);
  }

  const std::unordered_map<ValueId, std::string>& names() const {
    return names_;
  }

 private:
  void name(ValueId v) { names_.emplace(v, "%" + std::to_string(names_.size())); }

  void number(const FuncDef& f) {
    for (const Param& p : f.params) name(p.id);
    number(f.body);
  }
  void number(const Region& r) {
    for (const Block& b : r.blocks) {
      for (const BlockArg& a : b.args) name(a.id);
      for (const Operation& op : b.ops) {
        for (const Result& res : op.results) name(res.id);
        for (const Region& nested : op.regions) number(nested);
      }
    }
  }

  std::string value(ValueId v) const {
    auto it = names_.find(v);
    return it == names_.end() ? "%<undef" + std::to_string(v) + ">"
                              : it->second;
  }

  void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

  void region_body(const Region& r, int depth) {
    for (std::size_t bi = 0; bi < r.blocks.size(); ++bi) {
      const Block& b = r.blocks[bi];
      if (bi > 0 || !b.args.empty()) {
        indent(depth - 1);
        out_ += "^(";
        for (std::size_t i = 0; i < b.args.size(); ++i) {
          if (i) out_ += ", ";
          out_ += value(b.args[i].id) + ": " + b.args[i].type.str();
        }
        out_ += "):\n";
      }
      for (const Operation& op : b.ops) operation(op, depth);
    }
  }

  void operation(const Operation& op, int depth) {
    indent(depth);
    if (!op.results.empty()) {
      for (std::size_t i = 0; i < op.results.size(); ++i) {
        if (i) out_ += ", ";
        out_ += value(op.results[i].id);
      }
      out_ += " = ";
    }
    out_ += "\"" + op.name + "\"(";
    for (std::size_t i = 0; i < op.operands.size(); ++i) {
      if (i) out_ += ", ";
      out_ += value(op.operands[i]);
    }
    out_ += ")";
    if (!op.attributes.empty()) {
      out_ += " {";
      bool first = true;
      for (const auto& [key, attr] : op.attributes) {
        if (!first) out_ += ", ";
        first = false;
        out_ += key + " = " + format_attr(attr);
      }
      out_ += "}";
    }
    if (!op.regions.empty()) {
      out_ += " (";
      for (std::size_t i = 0; i < op.regions.size(); ++i) {
        if (i) out_ += ", ";
        out_ += "{\n";
        region_body(op.regions[i], depth + 1);
        indent(depth);
        out_ += "}";
      }
      out_ += ")";
    }
    out_ += " : (";
    for (std::size_t i = 0; i < op.operands.size(); ++i) {
      if (i) out_ += ", ";
      out_ += operand_types_.count(op.operands[i])
                  ? operand_types_.at(op.operands[i])
                  : std::string("?");
    }
    out_ += ") -> ";
    if (op.results.size() == 1) {
      out_ += op.results[0].type.str();
    } else {
      out_ += "(";
      for (std::size_t i = 0; i < op.results.size(); ++i) {
        if (i) out_ += ", ";
        out_ += op.results[i].type.str();
      }
      out_ += ")";
    }
    out_ += "\n";
  }

 public:
  void collect_types(const FuncDef& f) {
    for (const Param& p : f.params) operand_types_[p.id] = p.type.str();
    auto region = [&](const Region& r, auto&& self) -> void {
      for (const Block& b : r.blocks) {
        for (const BlockArg& a : b.args) operand_types_[a.id] = a.type.str();
        for (const Operation& op : b.ops) {
          for (const Result& res : op.results)
            operand_types_[res.id] = res.type.str();
          for (const Region& nested : op.regions) self(nested, self);
        }
      }
    };
    region(f.body, region);
  }

 private:
  std::unordered_map<ValueId, std::string> names_;
  std::unordered_map<ValueId, std::string> operand_types_;
  std::string out_;
};

}  // namespace

std::string print_function(const FuncDef& f) {
  Printer p(f);
  p.collect_types(f);
  return p.function(f);
}

std::string print_module(const ModuleIR& m) {
  std::string out;
  for (std::size_t i = 0; i < m.functions.size(); ++i) {
    if (i) out += "\n";
    out += print_function(m.functions[i]);
  }
  return out;
}

std::unordered_map<ValueId, std::string> value_names(const FuncDef& f) {
  return Printer(f).names();
}

// ---------------------------------------------------------------------------
// Structural equality.

namespace {

class Equiv {
 public:
  bool value(ValueId a, ValueId b) {
    auto [it, fresh] = fwd_.emplace(a, b);
    auto [jt, fresh2] = bwd_.emplace(b, a);
    return it->second == b && jt->second == a;
  }

  bool region(const Region& a, const Region& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
      const Block& x = a.blocks[i];
      const Block& y = b.blocks[i];
      if (x.args.size() != y.args.size() || x.ops.size() != y.ops.size())
        return false;
      for (std::size_t k = 0; k < x.args.size(); ++k)
        if (x.args[k].type != y.args[k].type || !value(x.args[k].id, y.args[k].id))
          return false;
      for (std::size_t k = 0; k < x.ops.size(); ++k)
        if (!op(x.ops[k], y.ops[k])) return false;
    }
    return true;
  }

  bool op(const Operation& a, const Operation& b) {
    if (a.name != b.name || a.attributes != b.attributes ||
        a.operands.size() != b.operands.size() ||
        a.results.size() != b.results.size() ||
        a.regions.size() != b.regions.size())
      return false;
    for (std::size_t i = 0; i < a.operands.size(); ++i)
      if (!value(a.operands[i], b.operands[i])) return false;
    for (std::size_t i = 0; i < a.results.size(); ++i)
      if (a.results[i].type != b.results[i].type ||
          !value(a.results[i].id, b.results[i].id))
        return false;
    for (std::size_t i = 0; i < a.regions.size(); ++i)
      if (!region(a.regions[i], b.regions[i])) return false;
    return true;
  }

  bool function(const FuncDef& a, const FuncDef& b) {
    if (a.name != b.name || a.params.size() != b.params.size()) return false;
    for (std::size_t i = 0; i < a.params.size(); ++i)
      if (a.params[i].type != b.params[i].type ||
          !value(a.params[i].id, b.params[i].id))
        return false;
    return region(a.body, b.body);
  }

 private:
  std::unordered_map<ValueId, ValueId> fwd_, bwd_;
};

}  // namespace

bool structurally_equal(const ModuleIR& a, const ModuleIR& b) {
  if (a.functions.size() != b.functions.size()) return false;
  Equiv eq;
  for (std::size_t i = 0; i < a.functions.size(); ++i)
    if (!eq.function(a.functions[i], b.functions[i])) return false;
  return true;
}

bool structurally_equal(const FuncDef& a, const FuncDef& b) {
  return Equiv{}.function(a, b);
}

bool structurally_equal(const Region& a, const Region& b) {
  return Equiv{}.region(a, b);
}

// ---------------------------------------------------------------------------
// Def-use index.

DefUseIndex::DefUseIndex(const ModuleIR& m) {
  for (const FuncDef& f : m.functions) add_function(f);
}

DefUseIndex::DefUseIndex(const FuncDef& f) { add_function(f); }

void DefUseIndex::add_function(const FuncDef& f) {
  for (unsigned i = 0; i < f.params.size(); ++i)
    defs_[f.params[i].id] =
        DefSite{DefKind::FuncParam, nullptr, nullptr, &f, i, f.params[i].type};
  walk(f.body, nullptr, f, "");
}

void DefUseIndex::walk(const Region& r, const Operation* parent,
                       const FuncDef& f, const std::string& prefix) {
  std::size_t position = 0;
  for (const Block& b : r.blocks) {
    for (unsigned i = 0; i < b.args.size(); ++i)
      defs_[b.args[i].id] =
          DefSite{DefKind::BlockArg, nullptr, &r, &f, i, b.args[i].type};
    for (const Operation& op : b.ops) {
      std::string path = prefix + std::to_string(position++);
      info_[&op] = OpInfo{parent, &r, &f, ops_.size(), path};
      ops_.push_back(&op);
      for (unsigned k = 0; k < op.operands.size(); ++k)
        uses_[op.operands[k]].push_back(Use{&op, k});
      for (unsigned k = 0; k < op.results.size(); ++k)
        defs_[op.results[k].id] =
            DefSite{DefKind::OpResult, &op, &r, &f, k, op.results[k].type};
      for (std::size_t ri = 0; ri < op.regions.size(); ++ri) {
        std::string nested = path + "." + std::string(1, char('A' + ri)) + ".";
        walk(op.regions[ri], &op, f, nested);
      }
    }
  }
}

const DefSite* DefUseIndex::def(ValueId v) const {
  auto it = defs_.find(v);
  return it == defs_.end() ? nullptr : &it->second;
}

const std::vector<Use>& DefUseIndex::uses(ValueId v) const {
  static const std::vector<Use> none;
  auto it = uses_.find(v);
  return it == uses_.end() ? none : it->second;
}

const Operation* DefUseIndex::parent_op(const Operation* op) const {
  auto it = info_.find(op);
  return it == info_.end() ? nullptr : it->second.parent;
}

const Region* DefUseIndex::parent_region(const Operation* op) const {
  auto it = info_.find(op);
  return it == info_.end() ? nullptr : it->second.region;
}

const FuncDef* DefUseIndex::function_of(const Operation* op) const {
  auto it = info_.find(op);
  return it == info_.end() ? nullptr : it->second.function;
}

std::size_t DefUseIndex::order(const Operation* op) const {
  auto it = info_.find(op);
  return it == info_.end() ? static_cast<std::size_t>(-1) : it->second.order;
}

std::string DefUseIndex::path(const Operation* op) const {
  auto it = info_.find(op);
  return it == info_.end() ? std::string("?") : it->second.path;
}

}  // namespace smr
