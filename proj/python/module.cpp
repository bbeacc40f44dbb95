#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biham/pipeline.hpp"
#include "biham/polytools.hpp"

namespace py = pybind11;
using namespace biham;

namespace {

/// Value wrapper so python holds immutable expressions by value.
struct PyExpr {
    Expr e;
};

ZeroTestConfig config_from_kwargs(
    long precision, int samples, uint64_t seed,
    const std::map<std::string, std::pair<std::string, std::string>>& intervals) {
    ZeroTestConfig cfg;
    if (precision > 0) cfg.precision = precision;
    if (samples > 0) cfg.samples = samples;
    cfg.seed = seed;
    for (const auto& [s, iv] : intervals)
        cfg.intervals[s] = {Rational::from_string(iv.first), Rational::from_string(iv.second)};
    cfg.validate();
    return cfg;
}

py::dict verdict_to_dict(const Verdict& v) {
    py::dict d;
    switch (v.kind) {
    case VerdictKind::Zero: d["verdict"] = "zero"; break;
    case VerdictKind::NonZero: d["verdict"] = "nonzero"; break;
    case VerdictKind::Inconclusive: d["verdict"] = "inconclusive"; break;
    }
    d["confidence"] = v.confidence;
    d["samples_used"] = v.samples_used;
    d["singular_points"] = v.singular_points;
    if (v.witness) {
        py::dict w;
        for (const auto& [s, r] : v.witness->point) w[py::str(s)] = r.str();
        d["witness"] = w;
        d["value"] = v.witness->value.str(32);
    }
    return d;
}

py::dict result_to_dict(const PipelineResult& r) {
    py::dict d;
    d["status"] = status_name(r.report.overall());
    d["exit_code"] = r.report.overall() == CheckStatus::Pass ? 0 : 1;
    d["json"] = r.report.render_json(r.cfg.seed, r.cfg.precision);
    d["text"] = r.rendered + r.report.render_text();
    return d;
}

} // namespace

PYBIND11_MODULE(_biham, m) {
    m.doc() = "symbolic verification of bihamiltonian systems of hydrodynamic type "
              "under linear reciprocal transformations";

    py::class_<PyExpr>(m, "Expr")
        .def("__repr__", [](const PyExpr& e) { return render(e.e); })
        .def("__str__", [](const PyExpr& e) { return render(e.e); });

    m.def("parse", [](const std::string& text) { return PyExpr{parse(text)}; },
          "parse an expression in the input grammar");
    m.def("render", [](const PyExpr& e) { return render(e.e); });
    m.def("differentiate",
          [](const PyExpr& e, const std::string& s) { return PyExpr{derivative(e.e, s)}; },
          py::arg("expr"), py::arg("symbol"));
    m.def("substitute",
          [](const PyExpr& e, const std::map<std::string, PyExpr>& map) {
              std::map<std::string, Expr> raw;
              for (const auto& [s, x] : map) raw.emplace(s, x.e);
              return PyExpr{substitute(e.e, raw)};
          },
          py::arg("expr"), py::arg("map"));
    m.def("simplify", [](const PyExpr& e) { return PyExpr{simplify(e.e)}; });
    m.def("expand", [](const PyExpr& e) { return PyExpr{expand(e.e)}; });
    m.def("rational_normalize", [](const PyExpr& e) { return PyExpr{rational_normalize(e.e)}; });
    m.def("free_symbols", [](const PyExpr& e) { return free_symbols(e.e); });
    m.def("equal", [](const PyExpr& a, const PyExpr& b) { return equal(a.e, b.e); });

    m.def(
        "evaluate",
        [](const PyExpr& e, const std::map<std::string, std::complex<double>>& point,
           long precision) {
            EvalPoint pt;
            pt.precision = precision;
            for (const auto& [s, z] : point) {
                Real re(precision), im(precision);
                mpfr_set_d(re.raw(), z.real(), MPFR_RNDN);
                mpfr_set_d(im.raw(), z.imag(), MPFR_RNDN);
                pt.set(s, Complex(std::move(re), std::move(im)));
            }
            EvalResult r = evaluate(e.e, pt);
            return std::complex<double>(r.value.re.to_double(), r.value.im.to_double());
        },
        py::arg("expr"), py::arg("point"), py::arg("precision") = 256,
        "evaluate at a point (values converted through double precision)");

    m.def(
        "is_identically_zero",
        [](const PyExpr& e, long precision, int samples, uint64_t seed,
           const std::map<std::string, std::pair<std::string, std::string>>& intervals) {
            return verdict_to_dict(
                is_identically_zero(e.e, config_from_kwargs(precision, samples, seed, intervals)));
        },
        py::arg("expr"), py::arg("precision") = 256, py::arg("samples") = 16,
        py::arg("seed") = kDefaultSeed,
        py::arg("intervals") = std::map<std::string, std::pair<std::string, std::string>>{},
        "probabilistic zero test; intervals map symbols to (lo, hi) rational strings");

    m.def("check_file",
          [](const std::string& path) { return result_to_dict(run_check(parse_definition_file(path))); },
          "run the structural checks of a definition file");
    m.def("transform_file",
          [](const std::string& path) {
              return result_to_dict(run_transform(parse_definition_file(path)));
          },
          "run the reciprocal-transformation pipeline of a definition file");
    m.def("example",
          [](const std::string& name, int m_, int k_) {
              return result_to_dict(run_example(name, m_, k_));
          },
          py::arg("name"), py::arg("m") = 1, py::arg("k") = 1,
          "run a built-in worked example (kdv or toda)");

    m.attr("default_seed") = kDefaultSeed;
}
