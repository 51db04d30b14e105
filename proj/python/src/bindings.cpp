#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "specgrad/error.hpp"
#include "specgrad/operator.hpp"
#include "specgrad/oracle.hpp"
#include "specgrad/sample.hpp"
#include "specgrad/symbol.hpp"

namespace py = pybind11;
using namespace specgrad;

namespace {

using ComplexArray = py::array_t<complex, py::array::c_style | py::array::forcecast>;

Field to_field(const Grid& grid, const ComplexArray& values) {
    if (static_cast<std::size_t>(values.size()) != grid.size()) {
        throw UsageError("array has " + std::to_string(values.size()) + " values, grid has " +
                         std::to_string(grid.size()));
    }
    const complex* p = values.data();
    return Field(grid, std::vector<complex>(p, p + values.size()));
}

ComplexArray to_array(const Grid& grid, std::span<const complex> values) {
    std::vector<py::ssize_t> shape(grid.shape().begin(), grid.shape().end());
    ComplexArray out(shape);
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

ComplexArray to_array(const Field& f) { return to_array(f.grid(), f.values()); }

void emit_warnings(const Diagnostics& diag) {
    if (diag.warnings.empty()) return;
    auto warn = py::module_::import("warnings").attr("warn");
    for (const auto& w : diag.warnings) warn(w, py::module_::import("builtins").attr("RuntimeWarning"), 2);
}

std::vector<complex> beta_list(const py::object& beta) {
    if (beta.is_none()) return {};
    if (py::isinstance<py::sequence>(beta) && !py::isinstance<py::str>(beta)) return beta.cast<std::vector<complex>>();
    return {beta.cast<complex>()};
}

py::dict report_dict(const StabilityReport& r) {
    py::dict d;
    d["max_magnitude"] = r.max_magnitude;
    d["argmax_k"] = r.argmax_k;
    d["flagged"] = r.flagged;
    return d;
}

}  // namespace

PYBIND11_MODULE(_specgrad, m) {
    m.doc() = "Functions of constant-coefficient differential operators on periodic grids";

    auto base = py::register_exception<Error>(m, "SpecgradError", PyExc_RuntimeError);
    auto usage = py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", usage.ptr());
    auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<OverflowError>(m, "OverflowError", domain.ptr());
    py::register_exception<AmplificationError>(m, "AmplificationError", domain.ptr());

    py::class_<Grid>(m, "Grid")
        .def(py::init([](std::vector<std::size_t> n, std::vector<double> spacing, std::vector<double> origin) {
                 if (origin.empty()) origin.assign(n.size(), 0.0);
                 return make_grid(static_cast<int>(n.size()), n, spacing, origin);
             }),
             py::arg("n"), py::arg("spacing"), py::arg("origin") = std::vector<double>{})
        .def_property_readonly("dims", &Grid::dims)
        .def_property_readonly("shape", &Grid::shape)
        .def_property_readonly("spacing", &Grid::spacings)
        .def_property_readonly("origin", &Grid::origins)
        .def_property_readonly("size", &Grid::size)
        .def("period", &Grid::period, py::arg("axis"))
        .def("coordinates", [](const Grid& g, int axis) { return coordinates(g, axis); }, py::arg("axis"))
        .def("wavenumbers", [](const Grid& g, int axis) { return wavenumbers(g, axis); }, py::arg("axis"))
        .def(py::self == py::self)
        .def("__repr__", [](const Grid& g) {
            std::string s = "Grid(n=[";
            for (int d = 0; d < g.dims(); ++d) s += (d ? ", " : "") + std::to_string(g.n(d));
            return s + "])";
        });

    m.def("sample", [](const std::string& expression, const Grid& grid) { return to_array(sample_field(expression, grid)); },
          py::arg("expression"), py::arg("grid"), "Samples an expression in x, y, z on the grid.");

    m.def("dft", [](const ComplexArray& v, const Grid& g) {
        const auto s = dft_forward(to_field(g, v));
        return to_array(g, s.coeffs());
    }, py::arg("values"), py::arg("grid"));
    m.def("idft", [](const ComplexArray& v, const Grid& g) {
        const complex* p = v.data();
        if (static_cast<std::size_t>(v.size()) != g.size()) throw UsageError("coefficient count does not match grid");
        return to_array(dft_inverse(SpectralField(g, std::vector<complex>(p, p + v.size()))));
    }, py::arg("coeffs"), py::arg("grid"));

    m.def("canonical", [](const std::string& text) { return unparse(parse(text, symbol_vars())); }, py::arg("symbol"),
          "Parses a symbol in z and returns its canonical text.");
    m.def("evaluate", [](const std::string& text, complex z) { return eval(parse(text, symbol_vars()), "z", z); },
          py::arg("symbol"), py::arg("z"));

    m.def("apply", [](const std::string& symbol, const py::object& beta, const ComplexArray& values, const Grid& grid,
                      const std::string& kind) {
        const auto spec = make_operator(symbol, beta_list(beta), operator_kind_from_string(kind));
        return to_array(apply_operator(spec, to_field(grid, values)));
    }, py::arg("symbol"), py::arg("beta"), py::arg("values"), py::arg("grid"), py::arg("kind") = "dot-gradient",
          "Applies f(beta . grad) or f(laplacian) spectrally.");

    m.def("stability_report", [](const std::string& symbol, const py::object& beta, const Grid& grid,
                                 const std::string& kind) {
        return report_dict(stability_report(make_operator(symbol, beta_list(beta), operator_kind_from_string(kind)), grid));
    }, py::arg("symbol"), py::arg("beta"), py::arg("grid"), py::arg("kind") = "dot-gradient");

    m.def("shift", [](const ComplexArray& v, const Grid& g, const py::object& beta) {
        const auto b = beta_list(beta);
        return to_array(shift_field(to_field(g, v), b));
    }, py::arg("values"), py::arg("grid"), py::arg("beta"));

    m.def("inverse_derivative", [](const ComplexArray& v, const Grid& g, complex beta) {
        return to_array(inverse_derivative(to_field(g, v), beta));
    }, py::arg("values"), py::arg("grid"), py::arg("beta"));

    m.def("sgn_kernel", [](const ComplexArray& v, const Grid& g, complex beta) {
        Diagnostics diag;
        auto out = to_array(sgn_kernel_apply(to_field(g, v), beta, &diag));
        emit_warnings(diag);
        return out;
    }, py::arg("values"), py::arg("grid"), py::arg("beta"));

    m.def("shifted_derivative", [](const ComplexArray& v, const Grid& g, double beta) {
        return to_array(shifted_derivative_apply(to_field(g, v), beta));
    }, py::arg("values"), py::arg("grid"), py::arg("beta"));

    m.def("fresnel_cos", [](const ComplexArray& v, const Grid& g, double beta) {
        Diagnostics diag;
        auto out = to_array(fresnel_cos_apply(to_field(g, v), beta, &diag));
        emit_warnings(diag);
        return out;
    }, py::arg("values"), py::arg("grid"), py::arg("beta"));

    m.def("heat_smooth", [](const ComplexArray& v, const Grid& g, double alpha) {
        Diagnostics diag;
        auto out = to_array(heat_smooth_realspace(to_field(g, v), alpha, &diag));
        emit_warnings(diag);
        return out;
    }, py::arg("values"), py::arg("grid"), py::arg("alpha"));

    py::class_<Kernel1D>(m, "Kernel1D")
        .def_readonly("offsets", &Kernel1D::offsets)
        .def_readonly("values", &Kernel1D::values)
        .def_readonly("beta", &Kernel1D::beta)
        .def_readonly("spacing", &Kernel1D::spacing);

    m.def("extract_kernel", [](const std::string& symbol, complex beta, const Grid& grid, int oversample,
                               double taper_fraction) {
        KernelOptions opts;
        opts.oversample = oversample;
        opts.taper_fraction = taper_fraction;
        return extract_kernel_1d(parse(symbol, symbol_vars()), beta, grid, opts);
    }, py::arg("symbol"), py::arg("beta"), py::arg("grid"), py::arg("oversample") = KernelOptions{}.oversample,
          py::arg("taper_fraction") = KernelOptions{}.taper_fraction);

    m.def("convolve_kernel", [](const Kernel1D& k, const ComplexArray& v, const Grid& g) {
        return to_array(convolve_kernel(k, to_field(g, v)));
    }, py::arg("kernel"), py::arg("values"), py::arg("grid"));

    m.def("brute_force_apply", [](const std::string& symbol, complex beta, const ComplexArray& v, const Grid& g) {
        return to_array(brute_force_apply(parse(symbol, symbol_vars()), beta, to_field(g, v)));
    }, py::arg("symbol"), py::arg("beta"), py::arg("values"), py::arg("grid"));

    m.def("verify", [](unsigned seed, int trials) {
        auto cases = closed_form_catalog();
        for (auto& c : brute_force_cases(seed, trials)) cases.push_back(std::move(c));
        OracleReport report;
        {
            py::gil_scoped_release release;
            report = run_oracles(cases, default_implementations());
        }
        return report_to_json(report).dump();
    }, py::arg("seed") = 42u, py::arg("trials") = 20, "Runs the oracle catalog; returns the JSON report text.");

    m.attr("AMPLIFICATION_LIMIT") = kAmplificationLimit;
}
