// Python extension _manyone. Structured results cross the boundary as JSON text; manyone/__init__.py decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "manyone/cyclotomic.hpp"
#include "manyone/harness.hpp"

namespace py = pybind11;
using namespace manyone;

namespace {

CycloForm form_of(const std::string& field, const std::string& h, std::uint64_t r, std::uint64_t s) {
  return CycloForm(Poly::parse(Field::parse(field), h), r, s);
}

std::string to_text(const BigInt& n) {
  std::ostringstream os;
  os << n;
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_manyone, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_ValueError);
  py::register_exception<ScaleError>(m, "ScaleError", PyExc_OverflowError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_OverflowError);

  m.def(
      "analyze",
      [](const std::string& field, const std::string& poly, std::optional<std::size_t> mm, bool star) {
        return manyone::analyze({field, poly, mm, star}).dump();
      },
      py::arg("field"), py::arg("poly"), py::arg("m") = py::none(), py::arg("star") = false);

  m.def(
      "predict",
      [](const std::string& field, const std::string& h, std::uint64_t r, std::uint64_t s, std::size_t mm) {
        const auto p = main_predict(form_of(field, h, r, s), mm);
        return py::make_tuple(p.verdict, p.reason);
      },
      py::arg("field"), py::arg("h"), py::arg("r"), py::arg("s"), py::arg("m"));

  m.def(
      "check",
      [](const std::string& field, const std::string& h, std::uint64_t r, std::uint64_t s, std::size_t mm) {
        return check_m_to_1(form_of(field, h, r, s).on_units(), mm).verdict;
      },
      py::arg("field"), py::arg("h"), py::arg("r"), py::arg("s"), py::arg("m"));

  m.def("count_formula", [](std::uint64_t q, std::uint64_t mm) { return to_text(count_formula(q, mm)); },
        py::arg("q"), py::arg("m"));

  m.def(
      "verify",
      [](const std::string& family, const std::map<std::string, std::string>& grid, std::uint64_t seed,
         unsigned jobs, bool all_m) {
        VerifyJob job;
        job.family = family;
        job.grid = grid;
        job.seed = seed;
        job.jobs = jobs;
        job.all_m = all_m;
        py::gil_scoped_release release;
        return report_json(run_verify(job)).dump();
      },
      py::arg("family"), py::arg("grid") = std::map<std::string, std::string>{}, py::arg("seed") = 1,
      py::arg("jobs") = 0, py::arg("all_m") = false);

  m.def("families", &verify_families);

  m.def(
      "search",
      [](const std::string& field, std::uint64_t s, int degree, std::size_t mm, std::vector<std::uint64_t> r,
         std::uint64_t budget, std::size_t limit) {
        SearchRequest req{field, s, std::move(r), degree, mm, budget, limit};
        py::gil_scoped_release release;
        return search_json(req, run_search(req)).dump();
      },
      py::arg("field"), py::arg("s"), py::arg("degree"), py::arg("m"), py::arg("r") = std::vector<std::uint64_t>{},
      py::arg("budget") = std::uint64_t{1} << 27, py::arg("limit") = 0);
}
