// SPDX-License-Identifier: Apache-2.0

#include "smr/interp.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_map>

#include <json.hpp>

#include "smr/error.h"

namespace smr {

namespace {

[[noreturn]] void mismatch(const Operation& op, const std::string& what) {
  throw Error(ErrorKind::InterpTypeMismatch, "'" + op.name + "': " + what);
}

std::string_view kind_name(const Value& v) {
  switch (v.index()) {
    case 0: return "i1";
    case 1: return "i64";
    case 2: return "f64";
    default: return "memref";
  }
}

class Interpreter {
 public:
  Interpreter(const ModuleIR& m, std::size_t fuel) : module_(m), fuel_(fuel) {}

  InterpResult run(std::string_view entry, const std::vector<InterpArg>& args) {
    const FuncDef& f = function(entry);
    if (args.size() != f.params.size())
      throw Error(ErrorKind::InterpTypeMismatch,
                  "@" + f.name + " expects " + std::to_string(f.params.size()) +
                      " arguments, got " + std::to_string(args.size()));
    std::vector<Value> values;
    std::vector<std::size_t> handles;
    for (std::size_t i = 0; i < args.size(); ++i) {
      const Type& t = f.params[i].type;
      const InterpArg& a = args[i];
      Value v;
      if (const Buffer* b = std::get_if<Buffer>(&a)) {
        Type elem = t.element_type();
        bool is_f64 = std::holds_alternative<std::vector<double>>(*b);
        if (elem.str() != (is_f64 ? "f64" : "i64"))
          throw Error(ErrorKind::InterpTypeMismatch,
                      "argument " + std::to_string(i) + " of @" + f.name +
                          " has type " + t.str());
        handles.push_back(memory_.size());
        v = MemRefHandle{memory_.size()};
        memory_.push_back(*b);
      } else if (const bool* x = std::get_if<bool>(&a)) {
        v = *x;
      } else if (const std::int64_t* x = std::get_if<std::int64_t>(&a)) {
        v = *x;
      } else {
        v = std::get<double>(a);
      }
      if (!std::holds_alternative<MemRefHandle>(v) && kind_name(v) != t.str())
        throw Error(ErrorKind::InterpTypeMismatch,
                    "argument " + std::to_string(i) + " of @" + f.name +
                        " has type " + t.str() + ", got " +
                        std::string(kind_name(v)));
      values.push_back(v);
    }
    call(f, values);
    InterpResult r;
    for (std::size_t h : handles) r.buffers.push_back(memory_[h]);
    r.steps = steps_;
    return r;
  }

 private:
  using Env = std::unordered_map<ValueId, Value>;
  enum class Flow { Next, Return };

  const FuncDef& function(std::string_view name) const {
    const FuncDef* f = module_.find(name);
    if (!f)
      throw Error(ErrorKind::UnknownFunction,
                  "no function @" + std::string(name));
    return *f;
  }

  std::optional<Value> call(const FuncDef& f, const std::vector<Value>& args) {
    if (++depth_ > 256)
      throw Error(ErrorKind::FuelExhausted, "call depth exceeded");
    Env env;
    for (std::size_t i = 0; i < f.params.size(); ++i) env[f.params[i].id] = args[i];
    std::optional<Value> ret;
    region(f.body, env, ret);
    --depth_;
    return ret;
  }

  Flow region(const Region& r, Env& env, std::optional<Value>& ret) {
    for (const Block& b : r.blocks)
      for (const Operation& op : b.ops)
        if (step(op, env, ret) == Flow::Return) return Flow::Return;
    return Flow::Next;
  }

  const Value& get(const Env& env, ValueId v, const Operation& op) const {
    auto it = env.find(v);
    if (it == env.end()) mismatch(op, "operand has no value");
    return it->second;
  }

  template <typename T>
  T as(const Env& env, ValueId v, const Operation& op) const {
    const Value& x = get(env, v, op);
    if (const T* p = std::get_if<T>(&x)) return *p;
    mismatch(op, "unexpected operand of type " + std::string(kind_name(x)));
  }

  void define(Env& env, const Operation& op, Value v) {
    if (op.results.size() != 1) mismatch(op, "expected one result");
    env[op.results[0].id] = v;
  }

  std::size_t index(Buffer& buf, std::int64_t i, const Operation& op) {
    std::size_t n = std::visit([](auto& v) { return v.size(); }, buf);
    if (i < 0 || static_cast<std::size_t>(i) >= n)
      throw Error(ErrorKind::OutOfBounds,
                  "'" + op.name + "' index " + std::to_string(i) +
                      " outside buffer of size " + std::to_string(n));
    return static_cast<std::size_t>(i);
  }

  Flow step(const Operation& op, Env& env, std::optional<Value>& ret) {
    if (steps_++ >= fuel_)
      throw Error(ErrorKind::FuelExhausted,
                  "step budget of " + std::to_string(fuel_) + " exhausted");
    const std::string& n = op.name;

    if (n == "core.constant") {
      const AttrValue* a = op.attr("value");
      if (!a || op.results.size() != 1) mismatch(op, "malformed constant");
      const std::string& t = op.results[0].type.str();
      if (const IntAttr* i = std::get_if<IntAttr>(a)) {
        if (t == "i1") define(env, op, i->value != 0);
        else if (t == "f64") define(env, op, static_cast<double>(i->value));
        else define(env, op, i->value);
      } else if (const FloatAttr* f = std::get_if<FloatAttr>(a)) {
        define(env, op, f->value);
      } else {
        mismatch(op, "unsupported constant attribute");
      }
    } else if (n == "core.addi" || n == "core.subi" || n == "core.muli") {
      std::int64_t a = as<std::int64_t>(env, op.operands.at(0), op);
      std::int64_t b = as<std::int64_t>(env, op.operands.at(1), op);
      // Wrap on overflow like two's-complement hardware.
      auto ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
      std::uint64_t r = n == "core.addi" ? ua + ub : n == "core.subi" ? ua - ub : ua * ub;
      define(env, op, static_cast<std::int64_t>(r));
    } else if (n == "core.addf" || n == "core.subf" || n == "core.mulf" ||
               n == "core.divf") {
      double a = as<double>(env, op.operands.at(0), op);
      double b = as<double>(env, op.operands.at(1), op);
      double r = n == "core.addf" ? a + b
                 : n == "core.subf" ? a - b
                 : n == "core.mulf" ? a * b
                                    : a / b;
      define(env, op, r);
    } else if (n == "core.cmpi") {
      const AttrValue* p = op.attr("predicate");
      const StringAttr* s = p ? std::get_if<StringAttr>(p) : nullptr;
      if (!s) mismatch(op, "missing predicate");
      const Value& x = get(env, op.operands.at(0), op);
      const Value& y = get(env, op.operands.at(1), op);
      std::int64_t a, b;
      if (x.index() != y.index()) mismatch(op, "operand types differ");
      if (const bool* bx = std::get_if<bool>(&x)) {
        a = *bx;
        b = std::get<bool>(y);
      } else {
        a = as<std::int64_t>(env, op.operands[0], op);
        b = as<std::int64_t>(env, op.operands[1], op);
      }
      const std::string& pr = s->value;
      bool r;
      if (pr == "eq") r = a == b;
      else if (pr == "ne") r = a != b;
      else if (pr == "slt") r = a < b;
      else if (pr == "sle") r = a <= b;
      else if (pr == "sgt") r = a > b;
      else if (pr == "sge") r = a >= b;
      else mismatch(op, "unknown predicate '" + pr + "'");
      define(env, op, r);
    } else if (n == "core.load") {
      MemRefHandle h = as<MemRefHandle>(env, op.operands.at(0), op);
      std::int64_t i = as<std::int64_t>(env, op.operands.at(1), op);
      Buffer& buf = memory_.at(h.id);
      std::size_t k = index(buf, i, op);
      std::visit([&](auto& v) { define(env, op, v[k]); }, buf);
    } else if (n == "core.store") {
      const Value& v = get(env, op.operands.at(0), op);
      MemRefHandle h = as<MemRefHandle>(env, op.operands.at(1), op);
      std::int64_t i = as<std::int64_t>(env, op.operands.at(2), op);
      Buffer& buf = memory_.at(h.id);
      std::size_t k = index(buf, i, op);
      if (auto* fb = std::get_if<std::vector<double>>(&buf)) {
        if (!std::holds_alternative<double>(v)) mismatch(op, "storing non-f64 into f64 buffer");
        (*fb)[k] = std::get<double>(v);
      } else {
        if (!std::holds_alternative<std::int64_t>(v)) mismatch(op, "storing non-i64 into i64 buffer");
        std::get<std::vector<std::int64_t>>(buf)[k] = std::get<std::int64_t>(v);
      }
    } else if (n == "core.alloc") {
      const AttrValue* a = op.attr("size");
      const IntAttr* size = a ? std::get_if<IntAttr>(a) : nullptr;
      if (!size || size->value < 0 || op.results.size() != 1)
        mismatch(op, "malformed alloc");
      std::string elem = op.results[0].type.element_type().str();
      auto count = static_cast<std::size_t>(size->value);
      if (elem == "f64") memory_.emplace_back(std::vector<double>(count, 0.0));
      else if (elem == "i64") memory_.emplace_back(std::vector<std::int64_t>(count, 0));
      else mismatch(op, "unsupported element type '" + elem + "'");
      define(env, op, MemRefHandle{memory_.size() - 1});
    } else if (n == "core.if") {
      bool c = as<bool>(env, op.operands.at(0), op);
      if (op.regions.size() != 2) mismatch(op, "expected two regions");
      return region(op.regions[c ? 0 : 1], env, ret);
    } else if (n == "core.for") {
      std::int64_t lb = as<std::int64_t>(env, op.operands.at(0), op);
      std::int64_t ub = as<std::int64_t>(env, op.operands.at(1), op);
      std::int64_t st = as<std::int64_t>(env, op.operands.at(2), op);
      if (st <= 0) mismatch(op, "step must be positive");
      if (op.regions.size() != 1 || op.regions[0].blocks.empty() ||
          op.regions[0].blocks[0].args.size() != 1)
        mismatch(op, "expected one region with one block argument");
      ValueId iv = op.regions[0].blocks[0].args[0].id;
      for (std::int64_t i = lb; i < ub; i += st) {
        env[iv] = i;
        if (region(op.regions[0], env, ret) == Flow::Return) return Flow::Return;
      }
    } else if (n == "core.yield") {
      // Region bodies end here; nothing to carry.
    } else if (n == "core.return") {
      if (!op.operands.empty()) ret = get(env, op.operands[0], op);
      return Flow::Return;
    } else if (n == "core.call") {
      const AttrValue* a = op.attr("callee");
      const SymbolAttr* s = a ? std::get_if<SymbolAttr>(a) : nullptr;
      if (!s) mismatch(op, "missing callee");
      const FuncDef& f = function(s->name);
      if (f.params.size() != op.operands.size())
        mismatch(op, "argument count does not match @" + f.name);
      std::vector<Value> args;
      for (std::size_t i = 0; i < op.operands.size(); ++i) {
        const Value& v = get(env, op.operands[i], op);
        const Type& t = f.params[i].type;
        bool ok = std::holds_alternative<MemRefHandle>(v) ? t.is_memref()
                                                          : kind_name(v) == t.str();
        if (!ok) mismatch(op, "argument " + std::to_string(i) + " of @" + f.name);
        args.push_back(v);
      }
      std::optional<Value> r = call(f, args);
      if (!op.results.empty()) {
        if (!r) mismatch(op, "@" + f.name + " returned no value");
        define(env, op, *r);
      }
    } else {
      throw Error(ErrorKind::UnknownOp, "interpreter does not support '" + n + "'");
    }
    return Flow::Next;
  }

  const ModuleIR& module_;
  std::size_t fuel_;
  std::size_t steps_ = 0;
  int depth_ = 0;
  std::vector<Buffer> memory_;
};

}  // namespace

InterpResult interpret_function(const ModuleIR& m, std::string_view entry,
                                const std::vector<InterpArg>& args,
                                std::size_t fuel) {
  return Interpreter(m, fuel).run(entry, args);
}

bool buffers_close(const Buffer& a, const Buffer& b, double rel_tol) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<std::vector<std::int64_t>>(&a))
    return *x == std::get<std::vector<std::int64_t>>(b);
  const auto& x = std::get<std::vector<double>>(a);
  const auto& y = std::get<std::vector<double>>(b);
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == y[i]) continue;
    double scale = std::max(std::abs(x[i]), std::abs(y[i]));
    if (!(std::abs(x[i] - y[i]) <= rel_tol * scale)) return false;
  }
  return true;
}

std::string format_buffer(const Buffer& b) {
  return std::visit([](const auto& v) { return nlohmann::json(v).dump(); }, b);
}

}  // namespace smr
