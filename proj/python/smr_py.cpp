// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "smr/error.h"
#include "smr/interp.h"
#include "smr/ir.h"
#include "smr/pipeline.h"

namespace py = pybind11;
using namespace smr;

namespace {

ModuleIR as_module(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return parse_module(obj.cast<std::string>());
  return obj.cast<ModuleIR>();
}

py::object json_to_py(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

InterpArg to_arg(const py::handle& h) {
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
  if (py::isinstance<py::int_>(h)) return h.cast<std::int64_t>();
  if (py::isinstance<py::float_>(h)) return h.cast<double>();
  py::list items(py::iter(h));
  bool all_int = true;
  for (const py::handle& x : items)
    all_int = all_int && py::isinstance<py::int_>(x) && !py::isinstance<py::bool_>(x);
  // An empty list stays ambiguous; the callee's parameter type decides.
  if (all_int && items.size() > 0)
    return Buffer{items.cast<std::vector<std::int64_t>>()};
  return Buffer{items.cast<std::vector<double>>()};
}

py::list run(const py::object& module, const std::string& entry,
             const py::list& args, std::size_t fuel) {
  ModuleIR m = as_module(module);
  const FuncDef* f = m.find(entry);
  std::vector<InterpArg> converted;
  for (std::size_t i = 0; i < args.size(); ++i) {
    InterpArg a = to_arg(args[i]);
    // Integer-valued lists passed for f64 buffers.
    if (f && i < f->params.size() && f->params[i].type.element_type().str() == "f64")
      if (auto* b = std::get_if<Buffer>(&a))
        if (auto* ints = std::get_if<std::vector<std::int64_t>>(b))
          a = Buffer{std::vector<double>(ints->begin(), ints->end())};
    if (f && i < f->params.size() && f->params[i].type.element_type().str() == "i64")
      if (auto* b = std::get_if<Buffer>(&a))
        if (auto* fl = std::get_if<std::vector<double>>(b); fl && fl->empty())
          a = Buffer{std::vector<std::int64_t>{}};
    converted.push_back(std::move(a));
  }
  InterpResult r = interpret_function(m, entry, converted, fuel);
  py::list out;
  for (const Buffer& b : r.buffers)
    std::visit([&](const auto& v) { out.append(py::cast(v)); }, b);
  return out;
}

}  // namespace

PYBIND11_MODULE(_smr, m) {
  m.doc() = "Structural idiom matching and rewriting over a generic SSA IR";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error.ptr())(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      exc.attr("line") = e.line();
      exc.attr("column") = e.column();
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<ModuleIR>(m, "Module")
      .def_property_readonly("functions",
                             [](const ModuleIR& mod) {
                               std::vector<std::string> names;
                               for (const FuncDef& f : mod.functions) names.push_back(f.name);
                               return names;
                             })
      .def("violations",
           [](const ModuleIR& mod) {
             std::vector<std::string> out;
             for (const Violation& v : validate_constraints(mod, DialectConfig::core()))
               out.push_back(std::string(to_string(v.kind)) + " @" + v.function + ":" +
                             v.op_path + ": " + v.message);
             return out;
           })
      .def("__str__", [](const ModuleIR& mod) { return print_module(mod); })
      .def("__eq__", [](const ModuleIR& a, const ModuleIR& b) {
        return structurally_equal(a, b);
      });

  m.def("parse_module", &parse_module, py::arg("text"));
  m.def("print_module", &print_module, py::arg("module"));

  py::class_<MatchResult>(m, "MatchResult")
      .def_property_readonly("total", &MatchResult::total)
      .def_property_readonly("warnings",
                             [](const MatchResult& r) { return r.warnings; })
      .def_property_readonly("funnel", [](const MatchResult& r) {
        py::dict d;
        d["rdos"] = r.funnel.rdos;
        d["cdg_candidates"] = r.funnel.cdg_candidates;
        d["ddg_accepted"] = r.funnel.ddg_accepted;
        d["ddg_matches"] = r.funnel.ddg_matches;
        return d;
      });

  py::class_<Matcher>(m, "Matcher")
      .def(py::init([](const std::string& pat, const std::string& config,
                       std::size_t path_cap) {
             DialectConfig cfg =
                 config.empty() ? DialectConfig::core() : DialectConfig::from_json(config);
             return Matcher::from_text(pat, std::move(cfg), path_cap);
           }),
           py::arg("pat"), py::arg("config") = "", py::arg("path_cap") = kDefaultPathCap)
      .def_property_readonly("patterns",
                             [](const Matcher& self) {
                               std::vector<std::string> names;
                               for (const PatternPair& p : self.patterns().pairs)
                                 names.push_back(p.name);
                               return names;
                             })
      .def("match",
           [](const Matcher& self, const py::object& module) {
             return self.match(as_module(module));
           },
           py::arg("module"))
      .def("report",
           [](const Matcher& self, const MatchResult& r, bool timings) {
             return json_to_py(report_json(self, r, nullptr, {.timings = timings}));
           },
           py::arg("result"), py::arg("timings") = true)
      .def("rewrite",
           [](const Matcher& self, const py::object& module) {
             MatchResult r = self.match(as_module(module));
             RewriteOutcome out = self.rewrite(r);
             py::object report = json_to_py(report_json(self, r, &out));
             return py::make_tuple(std::move(out.module), report);
           },
           py::arg("module"),
           "Returns the rewritten module and the report.");

  m.def("run", &run, py::arg("module"), py::arg("entry"), py::arg("args"),
        py::arg("fuel") = kDefaultFuel,
        "Interprets `entry` and returns the final contents of its memref arguments.");
}
