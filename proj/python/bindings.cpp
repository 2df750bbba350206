#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fsosec/error.hpp"
#include "fsosec/ew_fading.hpp"
#include "fsosec/montecarlo.hpp"
#include "fsosec/presets.hpp"
#include "fsosec/scenario.hpp"
#include "fsosec/secrecy.hpp"
#include "fsosec/sweep.hpp"

namespace py = pybind11;
using namespace fsosec;

namespace
{

py::dict table_to_dict(const cli::CurveTable& t)
{
    py::dict d;
    py::list names;
    py::dict columns;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
    {
        names.append(t.columns[i].name);
        py::list col;
        for (const auto& row : t.rows)
            col.append(row[i]);
        columns[py::str(t.columns[i].name)] = col;
    }
    d["names"] = names;
    d["columns"] = columns;
    d["metadata"] = t.metadata;
    d["failures"] = t.failures;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Secrecy performance of optical satellite/HAPS links under exponentiated-Weibull fading";
    m.attr("__version__") = cli::kVersion;

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    auto num = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", num.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    py::class_<ew::EWParams>(m, "EWParams")
        .def(py::init([](double a, double b, double e) { return ew::EWParams{a, b, e}; }),
             py::arg("alpha"), py::arg("beta"), py::arg("eta"))
        .def_readwrite("alpha", &ew::EWParams::alpha)
        .def_readwrite("beta", &ew::EWParams::beta)
        .def_readwrite("eta", &ew::EWParams::eta)
        .def("__repr__", [](const ew::EWParams& p) {
            std::ostringstream s;
            s.precision(12);
            s << "EWParams(alpha=" << p.alpha << ", beta=" << p.beta << ", eta=" << p.eta << ")";
            return s.str();
        });

    m.def("normalized", &ew::normalized, py::arg("alpha"), py::arg("beta"));
    m.def("fit_from_scint", [](double s) {
        const auto f = ew::fit_from_scint(s);
        return py::make_tuple(f.params, f.in_validity_range);
    }, py::arg("scint_index"), "Returns (EWParams, in_validity_range).");
    m.def("ew_cdf_snr", &ew::ew_cdf_snr, py::arg("snr"), py::arg("avg_snr"), py::arg("params"));
    m.def("ew_pdf_snr", &ew::ew_pdf_snr, py::arg("snr"), py::arg("avg_snr"), py::arg("params"));
    m.def("ew_quantile", &ew::ew_quantile, py::arg("u"), py::arg("params"));
    m.def("ew_moment", [](int n, const ew::EWParams& p) { return ew::ew_moment(n, p); },
          py::arg("n"), py::arg("params"));

    py::class_<secrecy::LinkBudget>(m, "LinkBudget")
        .def_static("from_fractions", &secrecy::LinkBudget::from_fractions,
                    py::arg("power_over_noise"), py::arg("frac_legit"), py::arg("frac_eav"))
        .def_static("from_snrs", &secrecy::LinkBudget::from_snrs, py::arg("avg_snr_legit"),
                    py::arg("avg_snr_eav"))
        .def_property_readonly("avg_snr_legit", &secrecy::LinkBudget::avg_snr_legit)
        .def_property_readonly("avg_snr_eav", &secrecy::LinkBudget::avg_snr_eav);

    m.def("sop_downlink", [](const secrecy::LinkBudget& b, const ew::EWParams& p, double rs) {
        return secrecy::sop_downlink(b, p, rs).value;
    }, py::arg("budget"), py::arg("params"), py::arg("rs"));
    m.def("sop_uplink_series", [](const secrecy::LinkBudget& b, const ew::EWParams& p, double rs) {
        return secrecy::sop_uplink_series(b, p, rs).value;
    }, py::arg("budget"), py::arg("params"), py::arg("rs"));
    m.def("sop_uplink_quadrature",
          [](const secrecy::LinkBudget& b, const ew::EWParams& p, double rs, bool exact_shift) {
              return secrecy::sop_uplink_quadrature(b, p, p, rs, exact_shift).value;
          },
          py::arg("budget"), py::arg("params"), py::arg("rs"), py::arg("exact_shift") = false);
    m.def("asc_downlink", [](const secrecy::LinkBudget& b) { return secrecy::asc_downlink(b).value; },
          py::arg("budget"));
    m.def("asc_uplink_quadrature", [](const secrecy::LinkBudget& b, const ew::EWParams& p) {
        return secrecy::asc_uplink_quadrature(b, p, p).value;
    }, py::arg("budget"), py::arg("params"));

    m.def("mc_sop",
          [](const secrecy::LinkBudget& b, const ew::EWParams& p, bool eav_faded, double rs,
             std::uint64_t samples, std::uint64_t seed) {
              mc::McConfig cfg;
              cfg.samples = samples;
              cfg.seed = seed;
              const auto e = mc::mc_sop(b, p, eav_faded ? std::optional(p) : std::nullopt, rs, cfg);
              return py::make_tuple(e.mean, e.ci_half_width);
          },
          py::arg("budget"), py::arg("params"), py::arg("eav_faded"), py::arg("rs"),
          py::arg("samples") = 1'000'000, py::arg("seed") = mc::McConfig{}.seed,
          "Returns (estimate, confidence half-width).");

    m.def("preset_names", [] {
        std::vector<std::string> v(cli::preset_names().begin(), cli::preset_names().end());
        return v;
    });
    m.def("preset_text", [](const std::string& name) {
        const auto t = cli::preset_text(name);
        if (!t)
            throw ConfigError("unknown preset '" + name + "'");
        return std::string(*t);
    }, py::arg("name"));
    m.def("run_sweep",
          [](const std::string& text, std::optional<std::uint64_t> mc_samples,
             std::optional<unsigned> workers) {
              const auto s = cli::parse_scenario(text);
              cli::RunOptions o;
              o.mc_samples = mc_samples;
              o.workers = workers;
              o.timestamp = false;
              cli::CurveTable t;
              {
                  py::gil_scoped_release release;
                  t = cli::run_sweep(s, o);
              }
              return table_to_dict(t);
          },
          py::arg("scenario_text"), py::arg("mc_samples") = std::nullopt,
          py::arg("workers") = std::nullopt,
          "Evaluates a scenario document; returns names, columns, metadata and failures.");
}
