#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fourcurv/cli.hpp"
#include "fourcurv/suite.hpp"

namespace py = pybind11;
using namespace fourcurv;

namespace {

// Library errors surface in Python as ValueError("<Kind>: message").
template <class F>
std::string guarded(F&& f) {
  try {
    return f().dump();
  } catch (const Error& e) {
    throw py::value_error(e.kind() + ": " + e.what());
  } catch (const json::exception& e) {
    throw py::value_error(std::string("SchemaError: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = FOURCURV_VERSION;

  m.def("decompose", [](const std::string& t) { return guarded([&] { return decompose_report(tensor_from_json(json::parse(t))); }); });
  m.def("berger", [](const std::string& t) { return guarded([&] { return berger_report(tensor_from_json(json::parse(t))); }); });
  m.def("quadratic", [](const std::string& t) { return guarded([&] { return quadratic_report(tensor_from_json(json::parse(t))); }); });
  m.def(
      "classify",
      [](const std::string& t, int samples, unsigned seed) {
        return guarded([&] {
          IsotropicBudget b;
          b.starts = samples;
          b.seed = seed;
          return positivity_report(classify_point(tensor_from_json(json::parse(t)), b));
        });
      },
      py::arg("tensor"), py::arg("samples") = IsotropicBudget{}.starts, py::arg("seed") = IsotropicBudget{}.seed);
  m.def("components", [](const std::string& t) {
    return guarded([&] {
      const CurvatureTensor c = tensor_from_json(json::parse(t));
      json a = json::array();
      for (int i = 0; i < 4; ++i) {
        json b = json::array();
        for (int j = 0; j < 4; ++j) {
          json cc = json::array();
          for (int k = 0; k < 4; ++k) {
            json d = json::array();
            for (int l = 0; l < 4; ++l) d.push_back(c(i, j, k, l));
            cc.push_back(d);
          }
          b.push_back(cc);
        }
        a.push_back(b);
      }
      return a;
    });
  });
  m.def(
      "run_criterion",
      [](int id, std::uint64_t seed, int jobs) {
        return guarded([&] {
          SuiteConfig cfg;
          cfg.seed = seed;
          cfg.jobs = jobs;
          py::gil_scoped_release release;
          const CriterionResult r = run_criterion(id, cfg);
          return json{{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}, {"data", r.data}};
        });
      },
      py::arg("id"), py::arg("seed") = SuiteConfig{}.seed, py::arg("jobs") = 1);
  m.def("run", [](std::vector<std::string> args) {
    args.insert(args.begin(), "fourcurv");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  });
}
