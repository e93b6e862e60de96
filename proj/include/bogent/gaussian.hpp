#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bogent {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Mode labels are positive integers. Mode n of a state occupies the quadrature
/// pair (2i, 2i+1) where i is its position in the state's mode list.
using ModeLabel = int;

/// Block-diagonal symplectic form with 2x2 blocks [[0, 1], [-1, 0]].
Matrix symplectic_form(int n_modes);

/// ||S Omega S^T - Omega||_max.
double symplectic_residual(const Matrix& s);

/// Covariance-matrix description of a Gaussian state in units where the vacuum
/// covariance is the identity. Quadratures are ordered (x_1, p_1, x_2, p_2, ...).
class GaussianState {
public:
    /// Throws std::invalid_argument on malformed labels, dimensions, or an
    /// asymmetric covariance (tolerance 1e-12 relative).
    GaussianState(std::vector<ModeLabel> modes, Matrix cov, Vector first_moments = Vector());

    const std::vector<ModeLabel>& modes() const { return modes_; }
    const Matrix& cov() const { return cov_; }
    const Vector& first_moments() const { return first_moments_; }
    int n_modes() const { return static_cast<int>(modes_.size()); }

    /// Position of `label` in the mode list; throws if absent.
    int index_of(ModeLabel label) const;

    /// Smallest symplectic eigenvalue is >= 1 - tol.
    bool is_physical(double tol = 1e-9) const;

private:
    std::vector<ModeLabel> modes_;
    Matrix cov_;
    Vector first_moments_;
};

/// Real 2N x 2N matrix that preserves the symplectic form up to a declared
/// tolerance class. Exact generators use 1e-12; truncated providers declare
/// their own (typically O(h^2)) residual.
class SymplecticMatrix {
public:
    static constexpr double kExactTolerance = 1e-12;

    /// Throws std::invalid_argument if the residual exceeds
    /// tolerance * max(1, ||S||_max^2).
    explicit SymplecticMatrix(Matrix mat, double tolerance = kExactTolerance);

    /// Wraps a matrix whose tolerance has been propagated analytically
    /// (products, inverses) without re-checking it.
    static SymplecticMatrix derived(Matrix mat, double tolerance);

    static SymplecticMatrix identity(int n_modes);

    const Matrix& mat() const { return mat_; }
    double tolerance() const { return tolerance_; }
    double residual() const { return symplectic_residual(mat_); }
    int n_modes() const { return static_cast<int>(mat_.rows() / 2); }

private:
    SymplecticMatrix() = default;
    Matrix mat_;
    double tolerance_ = kExactTolerance;
};

struct EntanglementReport {
    double nu_minus = 1.0;        ///< smallest partial-transpose symplectic eigenvalue
    double negativity = 0.0;      ///< max{0, (1 - nu)/(2 nu)}
    double log_negativity = 0.0;  ///< max{0, -ln nu}
    double det_cov = 1.0;
};

/// Vacuum on modes 1..n_modes.
GaussianState vacuum_state(int n_modes);

/// Product of blocks diag(e^{s_n}, e^{-s_n}) on modes 1..N.
GaussianState single_mode_squeezed_state(std::span<const double> squeezings);

/// Block-diagonal rotation with blocks [[Re G, Im G], [-Im G, Re G]].
/// Throws std::invalid_argument unless every |G_n| = 1 within 1e-12.
SymplecticMatrix local_rotation(std::span<const Complex> phases);

/// cov -> S cov S^T, first moments -> S d.
GaussianState apply_symplectic(const SymplecticMatrix& s, const GaussianState& state);

/// Deletes the rows and columns of all modes not in `keep`; the state's mode
/// order is preserved.
GaussianState partial_trace(const GaussianState& state, std::span<const ModeLabel> keep);

/// T cov T for a two-mode state, T flipping the momentum of `transposed_mode`.
Matrix partial_transpose(const GaussianState& state, ModeLabel transposed_mode);

/// Moduli of the eigenvalues of i Omega m, one per +/- pair, ascending.
/// Throws std::invalid_argument for asymmetric input and NumericalError when
/// the spectrum has imaginary parts or fails to pair (tolerance 1e-9).
std::vector<double> symplectic_eigenvalues(const Matrix& m);

/// nu_minus within this distance below 1 counts as separable.
inline constexpr double kSeparableTolerance = 1e-12;

/// Report for a given smallest partial-transpose eigenvalue; negativity and
/// log-negativity are zero once nu_minus >= 1 - kSeparableTolerance.
EntanglementReport report_from_nu(double nu_minus, double det_cov);

/// Negativity of a two-mode state; the second listed mode is transposed.
EntanglementReport negativity(const GaussianState& state);

}  // namespace bogent
