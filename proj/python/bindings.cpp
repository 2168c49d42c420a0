#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "selfsim/cli.hpp"
#include "selfsim/error.hpp"
#include "selfsim/io.hpp"
#include "selfsim/kep.hpp"
#include "selfsim/selftest.hpp"

namespace py = pybind11;
using namespace selfsim;

namespace {

KatsuraPair pair_of(const Matrix& A, const Matrix& B) {
  KatsuraPair p{A, B};
  require_valid(p);
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Katsura pairs, self-similar actions and their limit spaces";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "SelfsimError", PyExc_ValueError);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run one subcommand; returns (exit code, stdout, stderr).");

  m.def(
      "analyze_json",
      [](const Matrix& A, const Matrix& B) {
        KatsuraPair p = pair_of(A, B);
        return to_json(p, analyze(p)).dump();
      },
      py::arg("A"), py::arg("B"));

  m.def(
      "k_theory_json",
      [](const Matrix& A, const Matrix& B) {
        KTheory k = k_theory(pair_of(A, B));
        return Json{{"K0", to_json(k.K0)}, {"K1", to_json(k.K1)}}.dump();
      },
      py::arg("A"), py::arg("B"));

  m.def(
      "isotropy_orders",
      [](const Matrix& A, const Matrix& B) {
        std::vector<std::string> out;
        for (Modulus o : isotropy_orders(pair_of(A, B))) out.push_back(modulus_text(o));
        return out;
      },
      py::arg("A"), py::arg("B"));

  m.def(
      "selftest",
      [](std::uint64_t seed) {
        std::vector<std::pair<std::string, bool>> out;
        for (const auto& c : selftest(seed)) out.emplace_back(c.name, c.pass);
        return out;
      },
      py::arg("seed") = 1);
}
