#include "bogent/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bogent/errors.hpp"

namespace bogent {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kPairTolerance = 1e-9;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_symmetric(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix is not square");
    }
    const double asym = max_abs(m - m.transpose());
    if (asym > kSymmetryTolerance * std::max(1.0, max_abs(m))) {
        std::ostringstream os;
        os << what << ": matrix is not symmetric (max asymmetry " << asym << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

Matrix symplectic_form(int n_modes) {
    Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < n_modes; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    return omega;
}

double symplectic_residual(const Matrix& s) {
    const Matrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
    return max_abs(s * omega * s.transpose() - omega);
}

// ---------------------------------------------------------------------------
// GaussianState

GaussianState::GaussianState(std::vector<ModeLabel> modes, Matrix cov, Vector first_moments)
    : modes_(std::move(modes)), cov_(std::move(cov)), first_moments_(std::move(first_moments)) {
    if (modes_.empty()) {
        throw std::invalid_argument("GaussianState: at least one mode is required");
    }
    std::set<ModeLabel> seen;
    for (ModeLabel m : modes_) {
        if (m <= 0) throw std::invalid_argument("GaussianState: mode labels must be positive");
        if (!seen.insert(m).second) throw std::invalid_argument("GaussianState: duplicate mode label");
    }
    const Eigen::Index dim = 2 * static_cast<Eigen::Index>(modes_.size());
    if (cov_.rows() != dim || cov_.cols() != dim) {
        throw std::invalid_argument("GaussianState: covariance dimension does not match mode count");
    }
    require_symmetric(cov_, "GaussianState");
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
    if (first_moments_.size() == 0) {
        first_moments_ = Vector::Zero(dim);
    } else if (first_moments_.size() != dim) {
        throw std::invalid_argument("GaussianState: first moment vector has wrong length");
    }
}

int GaussianState::index_of(ModeLabel label) const {
    const auto it = std::find(modes_.begin(), modes_.end(), label);
    if (it == modes_.end()) {
        throw std::invalid_argument("unknown mode label " + std::to_string(label));
    }
    return static_cast<int>(it - modes_.begin());
}

bool GaussianState::is_physical(double tol) const {
    const auto nu = symplectic_eigenvalues(cov_);
    return nu.front() >= 1.0 - tol;
}

// ---------------------------------------------------------------------------
// SymplecticMatrix

SymplecticMatrix::SymplecticMatrix(Matrix mat, double tolerance)
    : mat_(std::move(mat)), tolerance_(tolerance) {
    if (mat_.rows() != mat_.cols() || mat_.rows() % 2 != 0 || mat_.rows() == 0) {
        throw std::invalid_argument("SymplecticMatrix: expected a non-empty 2N x 2N matrix");
    }
    const double scale = std::max(1.0, max_abs(mat_) * max_abs(mat_));
    const double res = residual();
    if (!(res <= tolerance_ * scale)) {
        std::ostringstream os;
        os << "SymplecticMatrix: residual " << res << " exceeds tolerance " << tolerance_;
        throw std::invalid_argument(os.str());
    }
}

SymplecticMatrix SymplecticMatrix::derived(Matrix mat, double tolerance) {
    SymplecticMatrix s;
    s.mat_ = std::move(mat);
    s.tolerance_ = tolerance;
    return s;
}

SymplecticMatrix SymplecticMatrix::identity(int n_modes) {
    return SymplecticMatrix(Matrix::Identity(2 * n_modes, 2 * n_modes));
}

// ---------------------------------------------------------------------------
// Operations

GaussianState vacuum_state(int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("vacuum_state: n_modes must be >= 1");
    std::vector<ModeLabel> modes(n_modes);
    for (int i = 0; i < n_modes; ++i) modes[i] = i + 1;
    return GaussianState(std::move(modes), Matrix::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState single_mode_squeezed_state(std::span<const double> squeezings) {
    const int n = static_cast<int>(squeezings.size());
    if (n < 1) throw std::invalid_argument("single_mode_squeezed_state: empty squeezing list");
    Matrix cov = Matrix::Zero(2 * n, 2 * n);
    std::vector<ModeLabel> modes(n);
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(squeezings[i])) {
            throw std::invalid_argument("single_mode_squeezed_state: non-finite squeezing");
        }
        cov(2 * i, 2 * i) = std::exp(squeezings[i]);
        cov(2 * i + 1, 2 * i + 1) = std::exp(-squeezings[i]);
        modes[i] = i + 1;
    }
    return GaussianState(std::move(modes), std::move(cov));
}

SymplecticMatrix local_rotation(std::span<const Complex> phases) {
    const int n = static_cast<int>(phases.size());
    if (n < 1) throw std::invalid_argument("local_rotation: empty phase list");
    Matrix r = Matrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        const Complex g = phases[i];
        if (std::abs(std::abs(g) - 1.0) > 1e-12) {
            throw std::invalid_argument("local_rotation: phase factor is not of unit modulus");
        }
        r(2 * i, 2 * i) = g.real();
        r(2 * i, 2 * i + 1) = g.imag();
        r(2 * i + 1, 2 * i) = -g.imag();
        r(2 * i + 1, 2 * i + 1) = g.real();
    }
    return SymplecticMatrix(std::move(r));
}

GaussianState apply_symplectic(const SymplecticMatrix& s, const GaussianState& state) {
    if (s.mat().rows() != state.cov().rows()) {
        throw std::invalid_argument("apply_symplectic: dimension mismatch");
    }
    Matrix cov = s.mat() * state.cov() * s.mat().transpose();
    cov = 0.5 * (cov + cov.transpose()).eval();
    Vector d = s.mat() * state.first_moments();
    return GaussianState(state.modes(), std::move(cov), std::move(d));
}

GaussianState partial_trace(const GaussianState& state, std::span<const ModeLabel> keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    std::set<ModeLabel> wanted(keep.begin(), keep.end());
    for (ModeLabel m : wanted) state.index_of(m);

    std::vector<ModeLabel> modes;
    std::vector<int> rows;
    for (int i = 0; i < state.n_modes(); ++i) {
        if (wanted.count(state.modes()[i])) {
            modes.push_back(state.modes()[i]);
            rows.push_back(2 * i);
            rows.push_back(2 * i + 1);
        }
    }
    const auto dim = static_cast<Eigen::Index>(rows.size());
    Matrix cov(dim, dim);
    Vector d(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        d(i) = state.first_moments()(rows[i]);
        for (Eigen::Index j = 0; j < dim; ++j) cov(i, j) = state.cov()(rows[i], rows[j]);
    }
    return GaussianState(std::move(modes), std::move(cov), std::move(d));
}

Matrix partial_transpose(const GaussianState& state, ModeLabel transposed_mode) {
    if (state.n_modes() != 2) throw std::invalid_argument("partial_transpose: state is not two-mode");
    const int idx = state.index_of(transposed_mode);
    Matrix out = state.cov();
    const int p = 2 * idx + 1;
    out.row(p) *= -1.0;
    out.col(p) *= -1.0;
    return out;
}

std::vector<double> symplectic_eigenvalues(const Matrix& m) {
    require_symmetric(m, "symplectic_eigenvalues");
    if (m.rows() % 2 != 0 || m.rows() == 0) {
        throw std::invalid_argument("symplectic_eigenvalues: expected a non-empty 2N x 2N matrix");
    }
    const int n = static_cast<int>(m.rows() / 2);
    const CMatrix a = Complex(0.0, 1.0) * (symplectic_form(n) * m).cast<Complex>();
    Eigen::ComplexEigenSolver<CMatrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symplectic_eigenvalues: eigenvalue solver failed");
    }

    std::vector<double> values;
    values.reserve(2 * n);
    for (const Complex& z : solver.eigenvalues()) {
        if (std::abs(z.imag()) > kPairTolerance * std::max(1.0, std::abs(z))) {
            std::ostringstream os;
            os << "symplectic_eigenvalues: eigenvalue " << z << " is not real";
            throw NumericalError(os.str());
        }
        values.push_back(z.real());
    }
    std::sort(values.begin(), values.end());

    std::vector<double> nu(n);
    for (int i = 0; i < n; ++i) {
        const double pos = values[n + i];
        const double neg = -values[n - 1 - i];
        if (std::abs(pos - neg) > kPairTolerance * std::max(1.0, pos)) {
            std::ostringstream os;
            os << "symplectic_eigenvalues: eigenvalues " << pos << " and " << -neg
               << " do not form a +/- pair";
            throw NumericalError(os.str());
        }
        nu[i] = 0.5 * (pos + neg);
    }
    return nu;
}

EntanglementReport report_from_nu(double nu_minus, double det_cov) {
    EntanglementReport r;
    r.nu_minus = nu_minus;
    r.det_cov = det_cov;
    if (nu_minus >= 1.0 - kSeparableTolerance) return r;
    r.negativity = (1.0 - nu_minus) / (2.0 * nu_minus);
    r.log_negativity = -std::log(nu_minus);
    return r;
}

EntanglementReport negativity(const GaussianState& state) {
    if (state.n_modes() != 2) throw std::invalid_argument("negativity: state is not two-mode");
    const Matrix pt = partial_transpose(state, state.modes()[1]);
    const double nu = symplectic_eigenvalues(pt).front();
    return report_from_nu(nu, state.cov().determinant());
}

}  // namespace bogent
