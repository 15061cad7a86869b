// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <limits>
#include <random>

#include "helpers.h"
#include "smr/interp.h"

using namespace smr;
using namespace smr::testing;

namespace {

using F64 = std::vector<double>;
using I64 = std::vector<std::int64_t>;

ModuleIR wrap(const std::string& params, const std::string& body) {
  return parse_module("func @f(" + params + ") {\n" + body +
                      "  \"core.return\"() : () -> ()\n}\n");
}

}  // namespace

TEST_CASE("interp: dot products against a direct sum") {
  ModuleIR m = parse_module(fixture("dot_e2e.ir"));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int round = 0; round < 10; ++round) {
    std::int64_t n = static_cast<std::int64_t>(rng() % 9);
    F64 x(n), y(n), z(n);
    for (std::int64_t i = 0; i < n; ++i) {
      x[i] = val(rng);
      y[i] = val(rng);
      z[i] = val(rng);
    }
    double xy = 0, yz = 0, xz = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      xy += x[i] * y[i];
      yz += y[i] * z[i];
      xz += x[i] + z[i];
    }
    InterpResult r = interpret_function(
        m, "kernel",
        {n, x, y, z, F64{0.0}, F64{0.0}, F64{0.0}, I64{5}});
    REQUIRE(r.buffers.size() == 7);
    CHECK(buffers_close(r.buffers[3], F64{xy}));
    CHECK(buffers_close(r.buffers[4], F64{yz}));
    CHECK(buffers_close(r.buffers[5], F64{xz}));
    CHECK(std::get<I64>(r.buffers[6]) == I64{1});
    CHECK(std::get<F64>(r.buffers[0]) == x);
  }
}

TEST_CASE("interp: exact dot value") {
  ModuleIR m = parse_module(fixture("dot_e2e.ir"));
  InterpResult r = interpret_function(
      m, "kernel",
      {std::int64_t{3}, F64{1, 2, 3}, F64{4, 5, 6}, F64{0, 0, 0}, F64{0}, F64{0},
       F64{0}, I64{0}});
  CHECK(std::get<F64>(r.buffers[3]) == F64{32});
  CHECK(std::get<F64>(r.buffers[4]) == F64{0});
  CHECK(std::get<F64>(r.buffers[5]) == F64{6});
  CHECK(std::get<I64>(r.buffers[6]) == I64{0});
  CHECK(format_buffer(r.buffers[3]) == "[32.0]");
  CHECK(format_buffer(r.buffers[6]) == "[0]");
}

TEST_CASE("interp: nested branches") {
  ModuleIR m = parse_module(fixture("nested_if.ir"));
  auto run = [&](std::int64_t test, std::int64_t val) {
    InterpResult r = interpret_function(m, "sum", {I64{test}, I64{val}});
    return std::pair{std::get<I64>(r.buffers[0])[0], std::get<I64>(r.buffers[1])[0]};
  };
  CHECK(run(1, 7) == std::pair<std::int64_t, std::int64_t>{1, 1});
  CHECK(run(0, 7) == std::pair<std::int64_t, std::int64_t>{0, 6});
  CHECK(run(0, 2) == std::pair<std::int64_t, std::int64_t>{0, 1});
  CHECK(run(5, 2) == std::pair<std::int64_t, std::int64_t>{0, 1});
}

TEST_CASE("interp: zero-trip loop") {
  ModuleIR m = parse_module(fixture("dot_e2e.ir"));
  InterpResult r = interpret_function(
      m, "kernel",
      {std::int64_t{0}, F64{}, F64{}, F64{}, F64{1.5}, F64{2.5}, F64{3.5}, I64{0}});
  CHECK(std::get<F64>(r.buffers[3]) == F64{1.5});
  CHECK(std::get<F64>(r.buffers[4]) == F64{2.5});
  CHECK(std::get<F64>(r.buffers[5]) == F64{3.5});
}

TEST_CASE("interp: integer arithmetic and comparisons") {
  ModuleIR m = wrap("%a: i64, %b: i64, %m: memref<i64>",
                    R"(  %c0 = "core.constant"() {value = 0 : i64} : () -> i64
  %c1 = "core.constant"() {value = 1 : i64} : () -> i64
  %c2 = "core.constant"() {value = 2 : i64} : () -> i64
  %s = "core.subi"(%a, %b) : (i64, i64) -> i64
  %p = "core.muli"(%a, %b) : (i64, i64) -> i64
  "core.store"(%s, %m, %c0) : (i64, memref<i64>, i64) -> ()
  "core.store"(%p, %m, %c1) : (i64, memref<i64>, i64) -> ()
  %lt = "core.cmpi"(%a, %b) {predicate = "slt"} : (i64, i64) -> i1
  "core.if"(%lt) ({
    "core.store"(%c1, %m, %c2) : (i64, memref<i64>, i64) -> ()
    "core.yield"() : () -> ()
  }, {
    "core.yield"() : () -> ()
  }) : (i1) -> ()
)");
  InterpResult r = interpret_function(m, "f", {std::int64_t{3}, std::int64_t{5}, I64{0, 0, 0}});
  CHECK(std::get<I64>(r.buffers[0]) == I64{-2, 15, 1});
  r = interpret_function(m, "f", {std::int64_t{5}, std::int64_t{3}, I64{0, 0, 0}});
  CHECK(std::get<I64>(r.buffers[0]) == I64{2, 15, 0});
  // Wrapping multiplication.
  r = interpret_function(m, "f", {std::numeric_limits<std::int64_t>::max(),
                                  std::int64_t{2}, I64{0, 0, 0}});
  CHECK(std::get<I64>(r.buffers[0])[1] == -2);
}

TEST_CASE("interp: calls get their own frame") {
  ModuleIR m = parse_module(R"(func @inc(%m: memref<i64>) {
  %c0 = "core.constant"() {value = 0 : i64} : () -> i64
  %c1 = "core.constant"() {value = 1 : i64} : () -> i64
  %v = "core.load"(%m, %c0) : (memref<i64>, i64) -> i64
  %w = "core.addi"(%v, %c1) : (i64, i64) -> i64
  "core.store"(%w, %m, %c0) : (i64, memref<i64>, i64) -> ()
  "core.return"() : () -> ()
}
func @main(%m: memref<i64>) {
  "core.call"(%m) {callee = @inc} : (memref<i64>) -> ()
  "core.call"(%m) {callee = @inc} : (memref<i64>) -> ()
  %t = "core.alloc"() {size = 1 : i64} : () -> memref<i64>
  "core.call"(%t) {callee = @inc} : (memref<i64>) -> ()
  "core.return"() : () -> ()
})");
  InterpResult r = interpret_function(m, "main", {I64{40}});
  CHECK(std::get<I64>(r.buffers[0]) == I64{42});
}

TEST_CASE("interp: errors") {
  SUBCASE("fuel") {
    ModuleIR m = parse_module(fixture("dot_e2e.ir"));
    std::vector<InterpArg> args{std::int64_t{100}, F64(100), F64(100), F64(100),
                                F64{0}, F64{0}, F64{0}, I64{0}};
    CHECK(kind_of([&] { interpret_function(m, "kernel", args, 50); }) ==
          ErrorKind::FuelExhausted);
    CHECK_NOTHROW(interpret_function(m, "kernel", args));
  }
  SUBCASE("recursion depth") {
    ModuleIR m = parse_module(R"(func @f() {
  "core.call"() {callee = @f} : () -> ()
  "core.return"() : () -> ()
})");
    CHECK(kind_of([&] { interpret_function(m, "f", {}); }) == ErrorKind::FuelExhausted);
  }
  SUBCASE("out of bounds") {
    ModuleIR m = parse_module(fixture("dot_e2e.ir"));
    CHECK(kind_of([&] {
            interpret_function(m, "kernel",
                               {std::int64_t{4}, F64(3), F64(3), F64(3), F64{0},
                                F64{0}, F64{0}, I64{0}});
          }) == ErrorKind::OutOfBounds);
  }
  SUBCASE("unknown op") {
    ModuleIR m = wrap("%a: i64", "  %b = \"core.frob\"(%a) : (i64) -> i64\n");
    CHECK(kind_of([&] { interpret_function(m, "f", {std::int64_t{1}}); }) ==
          ErrorKind::UnknownOp);
  }
  SUBCASE("unknown function") {
    ModuleIR m = wrap("", "  \"core.call\"() {callee = @nope} : () -> ()\n");
    CHECK(kind_of([&] { interpret_function(m, "f", {}); }) == ErrorKind::UnknownFunction);
    CHECK(kind_of([&] { interpret_function(m, "g", {}); }) == ErrorKind::UnknownFunction);
  }
  SUBCASE("type mismatch") {
    ModuleIR m = parse_module(fixture("nested_if.ir"));
    CHECK(kind_of([&] { interpret_function(m, "sum", {F64{1}, I64{1}}); }) ==
          ErrorKind::InterpTypeMismatch);
    CHECK(kind_of([&] { interpret_function(m, "sum", {I64{1}}); }) ==
          ErrorKind::InterpTypeMismatch);
  }
}

TEST_CASE("interp: runs are deterministic") {
  ModuleIR m = parse_module(fixture("dot_e2e.ir"));
  std::vector<InterpArg> args{std::int64_t{3}, F64{0.1, 0.2, 0.3}, F64{3, 2, 1},
                              F64{1, 1, 1}, F64{0}, F64{0}, F64{0}, I64{2}};
  InterpResult a = interpret_function(m, "kernel", args);
  InterpResult b = interpret_function(m, "kernel", args);
  CHECK(a.steps == b.steps);
  REQUIRE(a.buffers.size() == b.buffers.size());
  for (std::size_t i = 0; i < a.buffers.size(); ++i) CHECK(a.buffers[i] == b.buffers[i]);
}

TEST_CASE("interp: buffer comparison") {
  CHECK(buffers_close(F64{1.0}, F64{1.0 + 1e-12}));
  CHECK_FALSE(buffers_close(F64{1.0}, F64{1.001}));
  CHECK_FALSE(buffers_close(F64{1.0}, I64{1}));
  CHECK_FALSE(buffers_close(F64{1.0}, F64{1.0, 2.0}));
  CHECK(buffers_close(I64{3}, I64{3}));
  CHECK_FALSE(buffers_close(I64{3}, I64{4}));
}
