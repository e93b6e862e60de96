#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bogent/bogoliubov.hpp"
#include "bogent/cavity.hpp"
#include "bogent/cli.hpp"
#include "bogent/coeff_io.hpp"
#include "bogent/errors.hpp"
#include "bogent/frw.hpp"
#include "bogent/gaussian.hpp"
#include "bogent/perturbation.hpp"

namespace py = pybind11;
using namespace bogent;

namespace {

cavity::LinearSource parse_source(const std::string& name) {
    if (name == "quadrature") return cavity::LinearSource::quadrature;
    if (name == "closed_form") return cavity::LinearSource::closed_form;
    throw std::invalid_argument("linear_source must be 'quadrature' or 'closed_form'");
}

}  // namespace

PYBIND11_MODULE(_bogent, m) {
    m.doc() = "Gaussian-state entanglement under Bogoliubov transformations";
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<EntanglementReport>(m, "EntanglementReport")
        .def_readonly("nu_minus", &EntanglementReport::nu_minus)
        .def_readonly("negativity", &EntanglementReport::negativity)
        .def_readonly("log_negativity", &EntanglementReport::log_negativity)
        .def_readonly("det_cov", &EntanglementReport::det_cov)
        .def("__repr__", [](const EntanglementReport& r) {
            std::ostringstream os;
            os.precision(17);
            os << "EntanglementReport(nu_minus=" << r.nu_minus << ", negativity=" << r.negativity
               << ", log_negativity=" << r.log_negativity << ", det_cov=" << r.det_cov << ")";
            return os.str();
        });

    py::class_<GaussianState>(m, "GaussianState")
        .def(py::init<std::vector<ModeLabel>, Matrix>(), py::arg("modes"), py::arg("cov"))
        .def_property_readonly("modes", &GaussianState::modes)
        .def_property_readonly("cov", &GaussianState::cov)
        .def("is_physical", &GaussianState::is_physical, py::arg("tol") = 1e-9);

    m.def("symplectic_form", &symplectic_form, py::arg("n_modes"));
    m.def("vacuum_state", &vacuum_state, py::arg("n_modes"));
    m.def("single_mode_squeezed_state",
          [](const std::vector<double>& s) { return single_mode_squeezed_state(s); }, py::arg("squeezings"));
    m.def(
        "apply_symplectic",
        [](const Matrix& s, const GaussianState& state, double tol) {
            return apply_symplectic(SymplecticMatrix(s, tol), state);
        },
        py::arg("s"), py::arg("state"), py::arg("tolerance") = SymplecticMatrix::kExactTolerance);
    m.def(
        "partial_trace",
        [](const GaussianState& state, const std::vector<ModeLabel>& keep) { return partial_trace(state, keep); },
        py::arg("state"), py::arg("keep"));
    m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("m"));
    m.def("negativity", &negativity, py::arg("state"));

    py::class_<BogoCoeffs>(m, "BogoCoeffs")
        .def(py::init([](std::vector<ModeLabel> modes, CMatrix alpha, CMatrix beta) {
                 return BogoCoeffs::exact(std::move(modes), std::move(alpha), std::move(beta));
             }),
             py::arg("modes"), py::arg("alpha"), py::arg("beta"))
        .def_property_readonly("modes", &BogoCoeffs::modes)
        .def_property_readonly("alpha", &BogoCoeffs::alpha)
        .def_property_readonly("beta", &BogoCoeffs::beta)
        .def_property_readonly("identity_tolerance", &BogoCoeffs::identity_tolerance);

    m.def(
        "verify_identities",
        [](const BogoCoeffs& c, double tol) {
            const IdentityReport r = verify_identities(c, tol);
            py::dict d;
            d["unitarity_residual"] = r.unitarity_residual;
            d["symmetry_residual"] = r.symmetry_residual;
            d["tolerance"] = r.tolerance;
            d["passed"] = r.passed;
            return d;
        },
        py::arg("coeffs"), py::arg("tol"));
    m.def("to_symplectic", [](const BogoCoeffs& c) { return to_symplectic(c).mat(); }, py::arg("coeffs"));
    m.def("read_coeffs", py::overload_cast<const std::string&>(&read_coeffs), py::arg("path"));
    m.def("write_coeffs", py::overload_cast<const BogoCoeffs&, const std::string&>(&write_coeffs),
          py::arg("coeffs"), py::arg("path"));

    m.def(
        "degenerate_nu_correction",
        [](const GaussianState& base, const Matrix& correction, ModeLabel transposed_mode) {
            const DegenerateCorrection c =
                degenerate_nu_correction(PerturbedTwoModeState(base, correction), transposed_mode);
            py::dict d;
            d["nu_c"] = c.nu_c;
            d["roots"] = std::vector<double>(c.roots.begin(), c.roots.end());
            d["nu_minus"] = c.nu_minus;
            return d;
        },
        py::arg("base"), py::arg("correction"), py::arg("transposed_mode") = 2);
    m.def(
        "leading_negativity",
        [](Complex g_k, Complex g_k_prime, Complex alpha1, Complex beta1, double s) {
            return leading_negativity(LinearCoefficientData{g_k, g_k_prime, alpha1, beta1, s});
        },
        py::arg("g_k"), py::arg("g_k_prime"), py::arg("alpha1"), py::arg("beta1"), py::arg("s"));

    m.def(
        "junction_coefficients",
        [](double h, int cutoff, double delta) { return cavity::junction_coefficients({delta, h, cutoff}); },
        py::arg("h"), py::arg("cutoff"), py::arg("delta") = 1.0);
    m.def("linear_coefficients_closed_form", &cavity::linear_coefficients_closed_form, py::arg("m"),
          py::arg("n"));
    m.def(
        "full_negativity",
        [](double h, double u, ModeLabel k, ModeLabel k_prime, double s, int cutoff, double delta) {
            py::gil_scoped_release release;
            const cavity::CavityConfig c{delta, h, cutoff};
            return cavity::full_negativity(cavity::TravelScenario::single_acceleration(h, u), c, k, k_prime, s,
                                           cutoff);
        },
        py::arg("h"), py::arg("u"), py::arg("k"), py::arg("k_prime"), py::arg("s"), py::arg("cutoff") = 30,
        py::arg("delta") = 1.0);
    m.def(
        "figure1_sweep",
        [](double h, ModeLabel k, ModeLabel k_prime, const std::vector<double>& squeezings,
           const std::vector<double>& u_grid, int cutoff, double delta, const std::string& linear_source,
           bool include_full, bool check_cutoff, int threads) {
            cavity::SweepOptions o;
            o.linear_source = parse_source(linear_source);
            o.include_full = include_full;
            o.check_cutoff = check_cutoff;
            o.threads = threads;
            cavity::SweepTable t;
            {
                py::gil_scoped_release release;
                t = cavity::figure1_sweep({delta, h, cutoff}, k, k_prime, squeezings, u_grid, o);
            }
            const auto n_u = static_cast<Eigen::Index>(t.rows.size());
            const auto n_s = static_cast<Eigen::Index>(squeezings.size());
            Matrix lead(n_u, n_s), full(include_full ? n_u : 0, n_s), det(n_u, n_s);
            Vector u(n_u), f(n_u);
            for (Eigen::Index i = 0; i < n_u; ++i) {
                const cavity::SweepRow& r = t.rows[i];
                u(i) = r.u;
                f(i) = r.f_over_h2;
                for (Eigen::Index j = 0; j < n_s; ++j) {
                    lead(i, j) = r.n_over_h_leading[j];
                    det(i, j) = r.det_sigma[j];
                    if (include_full) full(i, j) = r.n_over_h_full[j];
                }
            }
            py::dict d;
            d["u"] = u;
            d["squeezings"] = squeezings;
            d["n_over_h_leading"] = lead;
            d["n_over_h_full"] = full;
            d["f_over_h2"] = f;
            d["det_sigma"] = det;
            return d;
        },
        py::arg("h"), py::arg("k"), py::arg("k_prime"), py::arg("squeezings"), py::arg("u_grid"),
        py::arg("cutoff") = 30, py::arg("delta") = 1.0, py::arg("linear_source") = "quadrature",
        py::arg("include_full") = true, py::arg("check_cutoff") = true, py::arg("threads") = 1);

    m.def(
        "frw_coefficients",
        [](double epsilon, double rho, double mass, double k) {
            const frw::FRWCoefficients c = frw::frw_coefficients({epsilon, rho, mass, k});
            return std::make_pair(c.alpha_sq, c.beta_sq);
        },
        py::arg("epsilon"), py::arg("rho"), py::arg("mass"), py::arg("k"));
    m.def(
        "frw_pair_state",
        [](double epsilon, double rho, double mass, double k) {
            return frw::frw_pair_state({epsilon, rho, mass, k});
        },
        py::arg("epsilon"), py::arg("rho"), py::arg("mass"), py::arg("k"));
    m.def(
        "frw_negativity",
        [](double epsilon, double rho, double mass, double k) {
            return frw::frw_negativity({epsilon, rho, mass, k});
        },
        py::arg("epsilon"), py::arg("rho"), py::arg("mass"), py::arg("k"));

    m.def(
        "cli_run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
