// Python bindings for the fastctrl core: spectra, canonical products, the
// multiplier, Gram-based minimal-norm controls and costs, biorthogonal
// synthesis, and the modal simulator.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fastctrl/biorthogonal.hpp"
#include "fastctrl/gram.hpp"
#include "fastctrl/lemmas.hpp"
#include "fastctrl/prng.hpp"
#include "fastctrl/product.hpp"
#include "fastctrl/simulation.hpp"
#include "fastctrl/spectrum.hpp"

namespace py = pybind11;
using namespace fastctrl;

namespace {

SystemKind kind_from_string(const std::string& s) {
    if (s == "parabolic") return SystemKind::Parabolic;
    if (s == "dispersive") return SystemKind::Dispersive;
    throw DomainError("kind must be 'parabolic' or 'dispersive'");
}

std::string kind_to_string(SystemKind k) {
    return k == SystemKind::Parabolic ? "parabolic" : "dispersive";
}

}  // namespace

PYBIND11_MODULE(_fastctrl, m) {
    m.doc() = "fast boundary controls for 1-D spectral control systems";

    py::register_exception<GapViolation>(m, "GapViolation", PyExc_ValueError);
    py::register_exception<PrecisionInsufficient>(m, "PrecisionInsufficient",
                                                  PyExc_ArithmeticError);
    py::register_exception<TruncationError>(m, "TruncationError", PyExc_ArithmeticError);
    py::register_exception<QuadratureNotConverged>(m, "QuadratureNotConverged",
                                                   PyExc_ArithmeticError);

    py::class_<SpectralSystem>(m, "SpectralSystem")
        .def(py::init([](const std::string& kind, std::vector<int> indices,
                         std::vector<double> lambdas,
                         std::vector<std::complex<double>> bs, double alpha, double rate) {
                 return SpectralSystem(kind_from_string(kind), std::move(indices),
                                       std::move(lambdas), std::move(bs), alpha, rate);
             }),
             py::arg("kind"), py::arg("indices"), py::arg("lambdas"), py::arg("bs"),
             py::arg("alpha"), py::arg("rate"))
        .def_property_readonly("kind",
                               [](const SpectralSystem& s) { return kind_to_string(s.kind); })
        .def_readonly("indices", &SpectralSystem::indices)
        .def_readonly("lambdas", &SpectralSystem::lambdas)
        .def_readonly("bs", &SpectralSystem::bs)
        .def_readonly("alpha", &SpectralSystem::alpha)
        .def_readonly("rate", &SpectralSystem::rate)
        .def("two_sided", &SpectralSystem::two_sided)
        .def("to_json", [](const SpectralSystem& s) { return to_json(s).dump(); })
        .def("__len__", [](const SpectralSystem& s) { return s.size(); });

    m.def("system_from_json", [](const std::string& text) {
        return system_from_json(nlohmann::json::parse(text));
    });

    m.def("make_power_law_spectrum",
          [](double alpha, double rate, int n, double perturb, std::uint64_t seed,
             const std::string& kind) {
              return make_power_law_spectrum(alpha, rate, n, perturb, seed,
                                             kind_from_string(kind));
          },
          py::arg("alpha"), py::arg("rate"), py::arg("n_modes"),
          py::arg("perturb_amplitude") = 0.0, py::arg("seed") = 0,
          py::arg("kind") = "parabolic");
    m.def("make_two_sided_spectrum", &make_two_sided_spectrum, py::arg("alpha"),
          py::arg("rate"), py::arg("n_modes"), py::arg("perturb_amplitude") = 0.0,
          py::arg("seed") = 0);
    m.def("periodic_kdv_spectrum", &periodic_kdv_spectrum, py::arg("length"),
          py::arg("n_modes"));
    m.def("fractional_spectrum",
          [](double g, double length, int n, const std::string& kind) {
              return fractional_spectrum(g, length, n, kind_from_string(kind));
          },
          py::arg("gamma_exp"), py::arg("length"), py::arg("n_modes"),
          py::arg("kind") = "parabolic");
    m.def("spectral_gap", &spectral_gap);
    m.def("validate_asymptotics", [](const SpectralSystem& s) {
        FitReport r = validate_asymptotics(s);
        return py::dict(py::arg("exponent") = r.exponent, py::arg("prefactor") = r.prefactor,
                        py::arg("max_residual") = r.max_residual);
    });

    m.def("counting_function", &counting_function, py::arg("sys"), py::arg("n_index"),
          py::arg("s"));
    m.def("phi_n",
          [](const SpectralSystem& s, int n, std::complex<double> z, double tol) {
              ProductEval e = phi_n(s, n, z, tol);
              return py::dict(py::arg("value") = e.value, py::arg("log_abs") = e.log_abs,
                              py::arg("truncation_index") = e.truncation_index,
                              py::arg("tail_bound") = e.tail_bound);
          },
          py::arg("sys"), py::arg("n_index"), py::arg("z"), py::arg("tol") = 1e-8);

    m.def("sigma_nu", py::overload_cast<double, double>(&sigma_nu), py::arg("nu"),
          py::arg("t"));
    m.def("c_nu", &c_nu, py::arg("nu"), py::arg("quad_nodes") = 256);
    m.def("link_beta_to_nu",
          [](double alpha, double delta, double beta) {
              MultiplierConfig c = link_beta_to_nu(alpha, delta, beta);
              return py::dict(py::arg("nu") = c.nu, py::arg("beta") = c.beta,
                              py::arg("delta") = c.delta, py::arg("alpha") = c.alpha);
          },
          py::arg("alpha"), py::arg("delta"), py::arg("beta"));
    m.def("h_beta",
          [](double alpha, double delta, double beta, std::complex<double> z) {
              return h_beta(link_beta_to_nu(alpha, delta, beta), z);
          },
          py::arg("alpha"), py::arg("delta"), py::arg("beta"), py::arg("z"));

    py::class_<GramSystem>(m, "GramSystem")
        .def_property_readonly("T", [](const GramSystem& g) { return g.T; })
        .def_property_readonly("condition_estimate",
                               [](const GramSystem& g) { return g.condition_estimate; })
        .def_property_readonly("digits",
                               [](const GramSystem& g) { return g.precision.digits; })
        .def("distance_dm", [](const GramSystem& g, int m) { return distance_dm(g, m); })
        .def("distance_dm_projection",
             [](const GramSystem& g, int m) { return distance_dm_projection(g, m); })
        .def("psi_norm", [](const GramSystem& g, int m) { return psi_norm(g, m); })
        .def("truncated_cost", [](const GramSystem& g) { return truncated_cost(g); })
        .def("lower_bound_cost", [](const GramSystem& g) { return lower_bound_cost(g); })
        .def("worst_initial_direction",
             [](const GramSystem& g) { return worst_initial_direction(g); })
        .def("minimal_norm_control",
             [](const GramSystem& g, const std::vector<std::complex<double>>& y0,
                int samples) {
                 MinimalControl mc = minimal_norm_control(g, y0, samples);
                 return py::dict(py::arg("t") = mc.signal.time_grid,
                                 py::arg("values") = mc.signal.values,
                                 py::arg("l2_norm") = mc.l2_norm,
                                 py::arg("l2_sampled") = mc.signal.l2,
                                 py::arg("linf") = mc.signal.linf);
             },
             py::arg("y0"), py::arg("samples") = 4097);

    m.def("gram_matrix",
          [](const SpectralSystem& s, double T, int digits) {
              return gram_matrix(s, T,
                                 digits == 0 ? default_gram_precision(s.kind)
                                             : PrecisionContext(digits));
          },
          py::arg("sys"), py::arg("T"), py::arg("digits") = 0);

    py::class_<BiorthogonalFamily>(m, "BiorthogonalFamily")
        .def_readonly("T", &BiorthogonalFamily::T)
        .def_readonly("time_grid", &BiorthogonalFamily::time_grid)
        .def_readonly("samples", &BiorthogonalFamily::samples)
        .def_readonly("x_cutoff", &BiorthogonalFamily::x_cutoff)
        .def_readonly("tail_bound", &BiorthogonalFamily::tail_bound);

    m.def("synthesize_family",
          [](const SpectralSystem& s, double T, double delta, int time_points) {
              SynthesisOptions opts;
              opts.delta = delta;
              opts.time_points = time_points;
              return synthesize_family(s, T, opts);
          },
          py::arg("sys"), py::arg("T"), py::arg("delta") = 0.05,
          py::arg("time_points") = 4097);
    m.def("biorthogonality_matrix", &biorthogonality_matrix, py::arg("family"),
          py::arg("sys"));
    m.def("biorthogonality_residual", &biorthogonality_residual);
    m.def("synthesize_control",
          [](const BiorthogonalFamily& fam, const SpectralSystem& s,
             const std::vector<std::complex<double>>& y0) {
              ControlSignal u = synthesize_control(fam, s, y0);
              return py::dict(py::arg("t") = u.time_grid, py::arg("values") = u.values,
                              py::arg("l2") = u.l2, py::arg("linf") = u.linf);
          },
          py::arg("family"), py::arg("sys"), py::arg("y0"));

    m.def("forward_simulate",
          [](const SpectralSystem& s, const std::vector<std::complex<double>>& y0,
             const std::vector<double>& t, const std::vector<std::complex<double>>& values,
             double T) {
              ControlSignal u = ControlSignal::from_samples(T, values);
              if (!t.empty() && std::abs(t.back() - T) > 1e-9)
                  throw GridMismatch("control grid must end at T");
              ModalState st{y0, 0.0};
              ModalState out = forward_simulate(s, st, u, T);
              return out.coeffs;
          },
          py::arg("sys"), py::arg("y0"), py::arg("t"), py::arg("values"), py::arg("T"));
    m.def("residual_norm", [](const std::vector<std::complex<double>>& coeffs) {
        return residual_norm(ModalState{coeffs, 0.0});
    });
    m.def("admissibility_probe",
          [](const SpectralSystem& s, double T, int trials, std::uint64_t seed) {
              AdmissibilityReport r = admissibility_probe(s, T, trials, seed);
              return py::dict(py::arg("sampled_max") = r.sampled_max,
                              py::arg("exact_supremum") = r.exact_supremum,
                              py::arg("trials") = r.trials);
          },
          py::arg("sys"), py::arg("T"), py::arg("trials") = 16, py::arg("seed") = 0);

    m.def("integral_U", &integral_U, py::arg("alpha"), py::arg("x"));
    m.def("integral_V", &integral_V, py::arg("alpha"), py::arg("x"));
    m.def("integral_W", &integral_W, py::arg("alpha"), py::arg("x"));
    m.def("integral_W_closed_form", &integral_W_closed_form, py::arg("alpha"), py::arg("x"));
    m.def("integral_I", &integral_I, py::arg("alpha"));
    m.def("hyp2f1", &hyp2f1, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));
    m.def("harmonic_frac", &harmonic_frac, py::arg("r"));
    m.def("verify_inequality_suite",
          [](const std::vector<double>& alphas, const std::vector<double>& xs) {
              py::list out;
              for (auto& rep : verify_inequality_suite(alphas, xs)) {
                  out.append(py::dict(py::arg("name") = rep.name,
                                      py::arg("max_slack") = rep.max_slack,
                                      py::arg("witnesses") = rep.witnesses));
              }
              return out;
          },
          py::arg("alpha_grid"), py::arg("x_grid"));
    m.def("default_alpha_grid", &default_alpha_grid);
    m.def("default_x_grid", &default_x_grid);

    m.def("random_unit_vector", &random_unit_vector, py::arg("n"), py::arg("seed"),
          py::arg("real_valued") = false);
}
