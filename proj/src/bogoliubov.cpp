#include "bogent/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bogent/errors.hpp"

namespace bogent {

namespace {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void validate_shape(const std::vector<ModeLabel>& modes, const CMatrix& alpha, const CMatrix& beta) {
    if (modes.empty()) throw std::invalid_argument("BogoCoeffs: empty mode list");
    std::set<ModeLabel> seen;
    for (ModeLabel m : modes) {
        if (m <= 0) throw std::invalid_argument("BogoCoeffs: mode labels must be positive");
        if (!seen.insert(m).second) throw std::invalid_argument("BogoCoeffs: duplicate mode label");
    }
    const auto n = static_cast<Eigen::Index>(modes.size());
    if (alpha.rows() != n || alpha.cols() != n || beta.rows() != n || beta.cols() != n) {
        throw std::invalid_argument("BogoCoeffs: alpha and beta must be M x M with M the mode count");
    }
}

std::vector<ModeLabel> default_modes(int n) {
    std::vector<ModeLabel> modes(n);
    for (int i = 0; i < n; ++i) modes[i] = i + 1;
    return modes;
}

// Largest absolute row sum, which bounds ||A E A^T||_max / ||E||_max.
double row_norm(const Matrix& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------------------
// BogoCoeffs

BogoCoeffs BogoCoeffs::exact(std::vector<ModeLabel> modes, CMatrix alpha, CMatrix beta,
                             double h_value, double identity_tolerance) {
    validate_shape(modes, alpha, beta);
    if (!(identity_tolerance >= 0.0)) {
        throw std::invalid_argument("BogoCoeffs: identity tolerance must be non-negative");
    }
    BogoCoeffs c;
    c.modes_ = std::move(modes);
    c.alpha_ = std::move(alpha);
    c.beta_ = std::move(beta);
    c.h_value_ = h_value;
    c.identity_tolerance_ = identity_tolerance;
    return c;
}

BogoCoeffs BogoCoeffs::series(std::vector<ModeLabel> modes, CMatrix alpha, CMatrix beta, int order) {
    validate_shape(modes, alpha, beta);
    if (order < 0) throw std::invalid_argument("BogoCoeffs: series order must be >= 0");
    BogoCoeffs c;
    c.modes_ = std::move(modes);
    c.alpha_ = std::move(alpha);
    c.beta_ = std::move(beta);
    c.series_order_ = order;
    return c;
}

int BogoCoeffs::index_of(ModeLabel label) const {
    const auto it = std::find(modes_.begin(), modes_.end(), label);
    if (it == modes_.end()) throw std::invalid_argument("unknown mode label " + std::to_string(label));
    return static_cast<int>(it - modes_.begin());
}

// ---------------------------------------------------------------------------
// PhaseVector

PhaseVector::PhaseVector(std::vector<Complex> phases) : phases_(std::move(phases)) {
    for (const Complex& g : phases_) {
        if (!(std::abs(std::abs(g) - 1.0) <= 1e-12)) {
            throw std::invalid_argument("PhaseVector: phase factor is not of unit modulus");
        }
    }
}

// ---------------------------------------------------------------------------
// Identities and the symplectic lift

IdentityReport verify_identities(const BogoCoeffs& c, double tol) {
    const auto n = c.size();
    const CMatrix& a = c.alpha();
    const CMatrix& b = c.beta();
    IdentityReport r;
    r.unitarity_residual =
        max_abs((a * a.adjoint() - b * b.adjoint() - CMatrix::Identity(n, n)).eval());
    const CMatrix abt = a * b.transpose();
    r.symmetry_residual = max_abs((abt - abt.transpose()).eval());
    r.tolerance = tol;
    r.passed = r.unitarity_residual <= tol && r.symmetry_residual <= tol;
    return r;
}

Matrix phase_space_matrix(const CMatrix& alpha, const CMatrix& beta) {
    const auto n = alpha.rows();
    Matrix s(2 * n, 2 * n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const Complex diff = alpha(m, k) - beta(m, k);
            const Complex sum = alpha(m, k) + beta(m, k);
            s(2 * m, 2 * k) = diff.real();
            s(2 * m, 2 * k + 1) = sum.imag();
            s(2 * m + 1, 2 * k) = -diff.imag();
            s(2 * m + 1, 2 * k + 1) = sum.real();
        }
    }
    return s;
}

SymplecticMatrix to_symplectic(const BogoCoeffs& c) {
    if (!c.is_exact()) throw std::invalid_argument("to_symplectic: coefficients must be exact");
    Matrix s = phase_space_matrix(c.alpha(), c.beta());
    // Each entry of S Omega S^T - Omega is a sum of two identity residual
    // components, so the symplectic residual is at most twice the identity one.
    const double tol = std::max(SymplecticMatrix::kExactTolerance, 2.0 * c.identity_tolerance());
    return SymplecticMatrix(std::move(s), tol);
}

BogoCoeffs from_symplectic(const SymplecticMatrix& s, std::vector<ModeLabel> modes, double h_value) {
    const int n = s.n_modes();
    if (modes.empty()) modes = default_modes(n);
    if (static_cast<int>(modes.size()) != n) {
        throw std::invalid_argument("from_symplectic: mode list does not match matrix size");
    }
    CMatrix alpha(n, n), beta(n, n);
    const Matrix& m = s.mat();
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double xx = m(2 * i, 2 * k), xp = m(2 * i, 2 * k + 1);
            const double px = m(2 * i + 1, 2 * k), pp = m(2 * i + 1, 2 * k + 1);
            alpha(i, k) = Complex(0.5 * (xx + pp), 0.5 * (xp - px));
            beta(i, k) = Complex(0.5 * (pp - xx), 0.5 * (xp + px));
        }
    }
    return BogoCoeffs::exact(std::move(modes), std::move(alpha), std::move(beta), h_value,
                             std::max(BogoCoeffs::kExactIdentityTolerance, s.tolerance()));
}

BogoCoeffs phase_transform(const PhaseVector& p, std::vector<ModeLabel> modes) {
    const int n = p.size();
    if (n == 0) throw std::invalid_argument("phase_transform: empty phase vector");
    if (modes.empty()) modes = default_modes(n);
    CMatrix alpha = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) alpha(i, i) = p.phases()[i];
    return BogoCoeffs::exact(std::move(modes), std::move(alpha), CMatrix::Zero(n, n));
}

SymplecticMatrix compose(const SymplecticMatrix& outer, const SymplecticMatrix& inner) {
    if (outer.mat().rows() != inner.mat().rows()) {
        throw std::invalid_argument("compose: dimension mismatch");
    }
    const double rn = row_norm(outer.mat());
    const double tol = outer.tolerance() + inner.tolerance() * rn * rn;
    return SymplecticMatrix::derived(outer.mat() * inner.mat(), tol);
}

SymplecticMatrix symplectic_inverse(const SymplecticMatrix& s) {
    const Matrix omega = symplectic_form(s.n_modes());
    Matrix inv = omega * s.mat().transpose() * omega.transpose();
    const double rn = row_norm(inv);
    return SymplecticMatrix::derived(std::move(inv), s.tolerance() * std::max(1.0, rn * rn));
}

// ---------------------------------------------------------------------------
// Series evaluation

std::vector<SeriesEstimate> series_eval(const CoeffProvider& provider, std::span<const int> orders,
                                        double h_probe) {
    if (!(h_probe > 0.0)) throw std::invalid_argument("series_eval: h_probe must be positive");
    for (int k : orders) {
        if (k < 0 || k > 2) throw std::invalid_argument("series_eval: supported orders are 0, 1, 2");
    }

    const BogoCoeffs at0 = provider(0.0);
    const int n = at0.size();
    const bool need_diff = std::any_of(orders.begin(), orders.end(), [](int k) { return k > 0; });

    struct Pair {
        CMatrix alpha, beta;
    };
    std::vector<Pair> plus, minus;
    const double steps[3] = {h_probe, 0.5 * h_probe, 0.25 * h_probe};
    if (need_diff) {
        for (double t : steps) {
            BogoCoeffs p = provider(t);
            BogoCoeffs m = provider(-t);
            if (p.size() != n || m.size() != n) {
                throw NumericalError("series_eval: provider changed its mode count");
            }
            plus.push_back({p.alpha(), p.beta()});
            minus.push_back({m.alpha(), m.beta()});
        }
    }

    // Two-level Richardson extrapolation on a sequence whose error is even in t.
    auto extrapolate = [](const CMatrix& d0, const CMatrix& d1, const CMatrix& d2, double& err) {
        const CMatrix r1 = (4.0 * d1 - d0) / 3.0;
        const CMatrix r2 = (4.0 * d2 - d1) / 3.0;
        const CMatrix r = (16.0 * r2 - r1) / 15.0;
        err = std::max(err, max_abs((r - r2).eval()));
        return r;
    };

    const double scale0 = std::max(max_abs(at0.alpha()), max_abs(at0.beta()));
    std::vector<SeriesEstimate> out;
    for (int k : orders) {
        if (k == 0) {
            out.push_back({BogoCoeffs::series(at0.modes(), at0.alpha(), at0.beta(), 0), 0.0});
            continue;
        }
        CMatrix da[3], db[3];
        for (int i = 0; i < 3; ++i) {
            const double t = steps[i];
            if (k == 1) {
                da[i] = (plus[i].alpha - minus[i].alpha) / (2.0 * t);
                db[i] = (plus[i].beta - minus[i].beta) / (2.0 * t);
            } else {
                da[i] = (plus[i].alpha - 2.0 * at0.alpha() + minus[i].alpha) / (2.0 * t * t);
                db[i] = (plus[i].beta - 2.0 * at0.beta() + minus[i].beta) / (2.0 * t * t);
            }
        }
        double err = 0.0;
        CMatrix alpha = extrapolate(da[0], da[1], da[2], err);
        CMatrix beta = extrapolate(db[0], db[1], db[2], err);
        const double leading = std::max({scale0, max_abs(alpha), max_abs(beta)});
        if (err > 1e-6 * leading) {
            std::ostringstream os;
            os << "series_eval: extrapolation for order " << k << " did not converge (error estimate "
               << err << ", leading value " << leading << ")";
            throw NumericalError(os.str());
        }
        if (k == 1) {
            // Diagonal entries at the extrapolation noise level are zero.
            for (int i = 0; i < n; ++i) {
                if (std::abs(alpha(i, i)) <= 1e-10) alpha(i, i) = 0.0;
                if (std::abs(beta(i, i)) <= 1e-10) beta(i, i) = 0.0;
            }
        }
        out.push_back({BogoCoeffs::series(at0.modes(), std::move(alpha), std::move(beta), k), err});
    }
    return out;
}

// ---------------------------------------------------------------------------
// First-order transforms

LinearizedTransform LinearizedTransform::identity(std::vector<ModeLabel> modes) {
    const auto n = static_cast<Eigen::Index>(modes.size());
    return {std::move(modes), CMatrix::Identity(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
}

LinearizedTransform LinearizedTransform::from_phases(const PhaseVector& p,
                                                     std::vector<ModeLabel> modes) {
    if (static_cast<int>(modes.size()) != p.size()) {
        throw std::invalid_argument("LinearizedTransform: phase count does not match modes");
    }
    auto t = identity(std::move(modes));
    for (int i = 0; i < p.size(); ++i) t.alpha0(i, i) = p.phases()[i];
    return t;
}

BogoCoeffs LinearizedTransform::linear_coeffs(double h) const {
    if (!(h > 0.0)) throw std::invalid_argument("linear_coeffs: h must be positive");
    return BogoCoeffs::series(modes, alpha1 / h, beta1 / h, 1);
}

LinearizedTransform compose_linear(const LinearizedTransform& outer,
                                   const LinearizedTransform& inner) {
    if (outer.modes != inner.modes) throw std::invalid_argument("compose_linear: mode sets differ");
    LinearizedTransform r;
    r.modes = outer.modes;
    r.alpha0 = outer.alpha0 * inner.alpha0;
    r.alpha1 = outer.alpha0 * inner.alpha1 + outer.alpha1 * inner.alpha0;
    r.beta1 = outer.alpha0 * inner.beta1 + outer.beta1 * inner.alpha0.conjugate();
    return r;
}

}  // namespace bogent
