#include "bogent/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bogent/errors.hpp"

namespace bogent {

namespace {

constexpr double kDegeneracyTolerance = 1e-6;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix momentum_flip(int transposed_index) {
    Matrix t = Matrix::Identity(4, 4);
    t(2 * transposed_index + 1, 2 * transposed_index + 1) = -1.0;
    return t;
}

void require_linear(const BogoCoeffs& c, const char* what) {
    if (c.series_order() != 1) {
        throw std::invalid_argument(std::string(what) + ": expected order-1 series coefficients");
    }
    const double diag = std::max(c.alpha().diagonal().cwiseAbs().maxCoeff(),
                                 c.beta().diagonal().cwiseAbs().maxCoeff());
    if (diag > 1e-10) {
        throw std::invalid_argument(std::string(what) +
                                    ": linear coefficients must vanish on the diagonal");
    }
}

// Rows n = 1..n_max of the coefficient set, in label order.
std::vector<int> rows_up_to(const BogoCoeffs& c, int n_max, const char* what) {
    std::vector<int> rows;
    for (int n = 1; n <= n_max; ++n) {
        const auto it = std::find(c.modes().begin(), c.modes().end(), n);
        if (it == c.modes().end()) {
            throw std::invalid_argument(std::string(what) + ": coefficients do not cover mode " +
                                        std::to_string(n));
        }
        rows.push_back(static_cast<int>(it - c.modes().begin()));
    }
    return rows;
}

struct ColumnSums {
    double f_alpha = 0.0;  // 1/2 sum_{n != excluded} |alpha_nk|^2
    double f_beta = 0.0;
    double cross = 0.0;    // sum_{n != k, excluded} Re(alpha_nk conj(beta_nk))
    double last_alpha = 0.0, last_beta = 0.0, last_cross = 0.0;
};

ColumnSums column_sums(const BogoCoeffs& c, const std::vector<int>& rows, int col, int excluded_row) {
    ColumnSums s;
    for (int r : rows) {
        if (r == excluded_row) continue;
        const Complex a = c.alpha()(r, col);
        const Complex b = c.beta()(r, col);
        s.f_alpha += 0.5 * std::norm(a);
        s.f_beta += 0.5 * std::norm(b);
        if (r != col) s.cross += std::real(a * std::conj(b));
    }
    const int last = rows.back();
    s.last_alpha = 0.5 * std::norm(c.alpha()(last, col));
    s.last_beta = 0.5 * std::norm(c.beta()(last, col));
    s.last_cross = std::abs(std::real(c.alpha()(last, col) * std::conj(c.beta()(last, col))));
    return s;
}

void check_pair(const BogoCoeffs& c, ModeLabel k, ModeLabel k_prime, int n_max, const char* what) {
    if (k == k_prime) throw std::invalid_argument(std::string(what) + ": modes must differ");
    if (n_max < std::max(k, k_prime) + 1) {
        throw std::invalid_argument(std::string(what) + ": n_max must exceed both mode numbers");
    }
    c.index_of(k);
    c.index_of(k_prime);
}

// Summands decay as n^-5, so the omitted tail is about (last summand) * n_max / 4.
double tail(double last_summand, int n_max) { return last_summand * n_max / 4.0; }

}  // namespace

// ---------------------------------------------------------------------------
// Degenerate perturbation of the symplectic spectrum

PerturbedTwoModeState::PerturbedTwoModeState(GaussianState base_state, Matrix correction_matrix)
    : base(std::move(base_state)), correction(std::move(correction_matrix)) {
    if (base.n_modes() != 2) throw std::invalid_argument("PerturbedTwoModeState: base must be two-mode");
    if (correction.rows() != 4 || correction.cols() != 4) {
        throw std::invalid_argument("PerturbedTwoModeState: correction must be 4x4");
    }
    if (max_abs(correction - correction.transpose()) > 1e-12 * std::max(1.0, max_abs(correction))) {
        throw std::invalid_argument("PerturbedTwoModeState: correction must be symmetric");
    }
    for (double nu : symplectic_eigenvalues(base.cov())) {
        if (std::abs(nu - 1.0) > 1e-9) {
            throw std::invalid_argument("PerturbedTwoModeState: base state is not pure");
        }
    }
}

DegenerateCorrection degenerate_nu_correction(const PerturbedTwoModeState& p,
                                              ModeLabel transposed_mode) {
    const Matrix t = momentum_flip(p.base.index_of(transposed_mode));
    const CMatrix i_omega = Complex(0.0, 1.0) * symplectic_form(2).cast<Complex>();
    const CMatrix unperturbed = i_omega * (t * p.base.cov() * t).cast<Complex>();
    const CMatrix perturbation = i_omega * (t * p.correction * t).cast<Complex>();

    Eigen::ComplexEigenSolver<CMatrix> solver(unperturbed);
    if (solver.info() != Eigen::Success) throw NumericalError("degenerate_nu_correction: eigensolver failed");

    std::vector<int> selected;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(solver.eigenvalues()(i) - Complex(1.0, 0.0)) <= kDegeneracyTolerance) {
            selected.push_back(i);
        }
    }
    if (selected.size() != 2) {
        std::ostringstream os;
        os << "degenerate_nu_correction: expected a two-fold eigenvalue 1, found " << selected.size();
        throw NumericalError(os.str());
    }

    // Right eigenvectors are the columns of V; the matching rows of V^-1 are
    // the left eigenvectors, normalized so that <L_i|R_j> = delta_ij.
    const CMatrix& v = solver.eigenvectors();
    Eigen::FullPivLU<CMatrix> lu(v);
    if (lu.rank() < 4 || lu.rcond() < 1e-12) {
        throw NumericalError("degenerate_nu_correction: eigenvectors cannot be biorthogonalized");
    }
    const CMatrix v_inv = lu.inverse();
    CMatrix right(4, 2), left(2, 4);
    for (int j = 0; j < 2; ++j) {
        right.col(j) = v.col(selected[j]);
        left.row(j) = v_inv.row(selected[j]);
    }
    const CMatrix projected = left * perturbation * right;
    Eigen::ComplexEigenSolver<CMatrix> proj_solver(projected, /*computeEigenvectors=*/false);
    const Complex l0 = proj_solver.eigenvalues()(0);
    const Complex l1 = proj_solver.eigenvalues()(1);

    DegenerateCorrection out;
    out.nu_c = std::abs(l0.real()) >= std::abs(l1.real()) ? l0.real() : l1.real();
    out.roots = {1.0 + std::min(l0.real(), l1.real()), 1.0 + std::max(l0.real(), l1.real())};
    out.nu_minus = out.roots[0];
    return out;
}

// ---------------------------------------------------------------------------
// Leading-order negativity

void LinearCoefficientData::validate() const {
    if (std::abs(std::abs(g_k) - 1.0) > 1e-12 || std::abs(std::abs(g_k_prime) - 1.0) > 1e-12) {
        throw std::invalid_argument("LinearCoefficientData: phases must have unit modulus");
    }
    if (!std::isfinite(s)) throw std::invalid_argument("LinearCoefficientData: squeezing must be finite");
}

double leading_negativity(const LinearCoefficientData& d) {
    d.validate();
    const Complex gb = std::conj(d.g_k) * d.beta1;
    const Complex ga = std::conj(d.g_k) * d.alpha1;
    const double re = gb.real();
    const double im = gb.imag() * std::cosh(d.s) - ga.imag() * std::sinh(d.s);
    return std::hypot(re, im);
}

MonotonicityReport enhancement_monotonicity_check(const LinearCoefficientData& d,
                                                  std::span<const double> s_grid) {
    if (s_grid.empty()) throw std::invalid_argument("enhancement_monotonicity_check: empty grid");
    MonotonicityReport r;
    const Complex ga = std::conj(d.g_k) * d.alpha1;
    const Complex gb = std::conj(d.g_k) * d.beta1;
    r.sign_condition = ga.imag() * gb.imag() <= 0.0;

    double s_min = s_grid.front();
    for (double s : s_grid) {
        if (!(s >= 0.0)) throw std::invalid_argument("enhancement_monotonicity_check: s must be >= 0");
        s_min = std::min(s_min, s);
    }
    LinearCoefficientData base = d;
    base.s = s_min;
    const double reference = leading_negativity(base);
    r.monotone = true;
    for (double s : s_grid) {
        LinearCoefficientData at = d;
        at.s = s;
        const double value = leading_negativity(at);
        r.values.push_back(value);
        if (value < reference * (1.0 - 1e-12)) r.monotone = false;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Two-mode truncation

BogoCoeffs two_mode_truncation(const BogoCoeffs& c, ModeLabel k, ModeLabel k_prime) {
    if (!c.is_exact()) throw std::invalid_argument("two_mode_truncation: expected summed coefficients");
    if ((k + k_prime) % 2 == 0) {
        throw std::invalid_argument("two_mode_truncation: modes must have opposite parity");
    }
    const int idx[2] = {c.index_of(k), c.index_of(k_prime)};
    CMatrix alpha(2, 2), beta(2, 2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            alpha(i, j) = c.alpha()(idx[i], idx[j]);
            beta(i, j) = c.beta()(idx[i], idx[j]);
        }
    }

    const Matrix omega = symplectic_form(2);
    Matrix s = phase_space_matrix(alpha, beta);
    // Row i of blocks is symplectic iff det S_ii + det S_ij = 1; rescale the
    // diagonal blocks to meet this, which leaves the off-diagonal entries alone.
    for (int i = 0; i < 2; ++i) {
        const int j = 1 - i;
        const double d_ii = s.block<2, 2>(2 * i, 2 * i).determinant();
        const double target = 1.0 - s.block<2, 2>(2 * i, 2 * j).determinant();
        if (d_ii > 0.0 && target > 0.0) s.block<2, 2>(2 * i, 2 * i) *= std::sqrt(target / d_ii);
    }
    constexpr int kMaxIterations = 50;
    int iteration = 0;
    for (;; ++iteration) {
        const Matrix e = s * omega * s.transpose() - omega;
        if (max_abs(e) <= 1e-12) break;
        if (iteration == kMaxIterations) {
            throw NumericalError("two_mode_truncation: symplectic projection did not converge");
        }
        s = (Matrix::Identity(4, 4) - 0.5 * e * omega.transpose()) * s;
    }
    return from_symplectic(SymplecticMatrix(std::move(s)), {k, k_prime}, c.h_value().value_or(0.0));
}

BogoCoeffs two_mode_truncation(const LinearizedTransform& t, ModeLabel k, ModeLabel k_prime) {
    const BogoCoeffs summed = BogoCoeffs::exact(t.modes, t.alpha0 + t.alpha1, t.beta1, 0.0,
                                                std::numeric_limits<double>::infinity());
    return two_mode_truncation(summed, k, k_prime);
}

double squeezing_parameter(const GaussianState& state, double symmetry_tol) {
    if (state.n_modes() != 2) throw std::invalid_argument("squeezing_parameter: state must be two-mode");
    const Matrix& c = state.cov();
    const double det_k = c.block(0, 0, 2, 2).determinant();
    const double det_kp = c.block(2, 2, 2, 2).determinant();
    if (std::abs(det_k - det_kp) > symmetry_tol) {
        std::ostringstream os;
        os << "squeezing_parameter: state is not symmetric (local determinants " << det_k << ", "
           << det_kp << ")";
        throw std::invalid_argument(os.str());
    }
    const double neg_det = -c.block(0, 2, 2, 2).determinant();
    if (neg_det < -1e-12) {
        throw std::invalid_argument("squeezing_parameter: off-diagonal block has positive determinant");
    }
    return 0.5 * std::asinh(std::sqrt(std::max(0.0, neg_det)));
}

// ---------------------------------------------------------------------------
// Mixedness diagnostics

TruncatedSum mixedness_determinant(const BogoCoeffs& linear, ModeLabel k, ModeLabel k_prime,
                                   double s, int n_max) {
    require_linear(linear, "mixedness_determinant");
    check_pair(linear, k, k_prime, n_max, "mixedness_determinant");
    const auto rows = rows_up_to(linear, n_max, "mixedness_determinant");
    const int ik = linear.index_of(k), ikp = linear.index_of(k_prime);

    const ColumnSums sk = column_sums(linear, rows, ik, ikp);
    const ColumnSums skp = column_sums(linear, rows, ikp, ik);
    const double ch = std::cosh(s), sh = std::sinh(s);

    TruncatedSum out;
    out.value = 1.0 + 4.0 * (sk.f_beta + skp.f_beta) * (ch + 1.0) +
                4.0 * (sk.f_alpha + skp.f_alpha) * (ch - 1.0) - 4.0 * sh * (sk.cross + skp.cross);
    out.tail_estimate = tail(4.0 * (sk.last_beta + skp.last_beta) * (ch + 1.0) +
                                 4.0 * (sk.last_alpha + skp.last_alpha) * (ch - 1.0) +
                                 4.0 * std::abs(sh) * (sk.last_cross + skp.last_cross),
                             n_max);
    return out;
}

TruncatedSum validity_F(const BogoCoeffs& linear, ModeLabel k, ModeLabel k_prime, int n_max) {
    require_linear(linear, "validity_F");
    check_pair(linear, k, k_prime, n_max, "validity_F");
    const auto rows = rows_up_to(linear, n_max, "validity_F");
    const int ik = linear.index_of(k), ikp = linear.index_of(k_prime);
    const ColumnSums sk = column_sums(linear, rows, ik, ikp);
    const ColumnSums skp = column_sums(linear, rows, ikp, ik);
    return {sk.f_alpha + skp.f_alpha, tail(sk.last_alpha + skp.last_alpha, n_max)};
}

}  // namespace bogent
