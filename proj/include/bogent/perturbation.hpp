#pragma once

#include <array>
#include <span>
#include <vector>

#include "bogent/bogoliubov.hpp"
#include "bogent/gaussian.hpp"

namespace bogent {

/// Uncorrelated pure two-mode state plus a small symmetric correction.
struct PerturbedTwoModeState {
    GaussianState base;
    Matrix correction;

    /// Throws std::invalid_argument unless base is two-mode with both
    /// symplectic eigenvalues equal to 1 (1e-9) and the correction is a
    /// symmetric 4x4 matrix.
    PerturbedTwoModeState(GaussianState base, Matrix correction);
};

struct DegenerateCorrection {
    double nu_c = 0.0;                 ///< eigenvalue of the projected perturbation with largest modulus
    std::array<double, 2> roots{1, 1};  ///< 1 + eigenvalues of the projection, ascending
    double nu_minus = 1.0;             ///< roots[0]; equals 1 - |nu_c| for traceless projections
};

/// First-order splitting of the two-fold degenerate symplectic eigenvalue 1
/// of the partially transposed base state. The perturbation i Omega T s^c T is
/// projected onto the +1 eigenspace of i Omega T s T using biorthonormal left
/// and right eigenvectors.
///
/// Throws NumericalError if the base spectrum is not degenerate at 1 (1e-6) or
/// the eigenvector basis is too ill-conditioned to biorthogonalize.
DegenerateCorrection degenerate_nu_correction(const PerturbedTwoModeState& p,
                                              ModeLabel transposed_mode);

/// Inputs of the leading-order negativity for symmetric single-mode squeezing s.
/// The linear coefficients include their factor of h.
struct LinearCoefficientData {
    Complex g_k{1.0, 0.0};
    Complex g_k_prime{1.0, 0.0};
    Complex alpha1{0.0, 0.0};
    Complex beta1{0.0, 0.0};
    double s = 0.0;

    void validate() const;
};

/// sqrt(Re(G* b)^2 + (Im(G* b) cosh s - Im(G* a) sinh s)^2).
double leading_negativity(const LinearCoefficientData& d);

struct MonotonicityReport {
    bool sign_condition = false;  ///< Im(G* a) Im(G* b) <= 0
    bool monotone = false;        ///< N(s) >= N(s_min) on the whole grid
    std::vector<double> values;
};

/// Evaluates the leading-order negativity on `s_grid` (s >= 0) and checks
/// enhancement over the smallest grid value.
MonotonicityReport enhancement_monotonicity_check(const LinearCoefficientData& d,
                                                  std::span<const double> s_grid);

/// Restricts a transformation to the mode pair (k, k') and re-unitarizes the
/// resulting 4x4 phase-space matrix. The diagonal blocks are first rescaled so
/// that det S_ii + det S_ij = 1 (exact when the off-diagonal blocks already
/// satisfy the first-order identities); any remaining defect is removed by
/// repeated corrections S <- (1 - E Omega^T / 2) S, E = S Omega S^T - Omega,
/// until ||E||_max <= 1e-12. Requires k + k' odd.
/// Throws NumericalError after 50 iterations without convergence.
BogoCoeffs two_mode_truncation(const BogoCoeffs& exact, ModeLabel k, ModeLabel k_prime);
BogoCoeffs two_mode_truncation(const LinearizedTransform& t, ModeLabel k, ModeLabel k_prime);

/// |r| = arsinh(sqrt(-det C_kk')) / 2 for a symmetric pure two-mode state.
/// Throws std::invalid_argument if det C_kk and det C_k'k' differ by more
/// than `symmetry_tol`.
double squeezing_parameter(const GaussianState& state, double symmetry_tol = 1e-6);

/// Value of a truncated mode sum with an estimate of the omitted tail.
struct TruncatedSum {
    double value = 0.0;
    double tail_estimate = 0.0;
};

/// Leading-order determinant of the reduced (k, k') state for symmetric
/// single-mode squeezing s, with sums over modes up to n_max. `linear` must be
/// the order-1 coefficients (h factor included).
TruncatedSum mixedness_determinant(const BogoCoeffs& linear, ModeLabel k, ModeLabel k_prime,
                                   double s, int n_max);

/// F_{k,k'} = f^alpha_{k not k'} + f^alpha_{k' not k}.
TruncatedSum validity_F(const BogoCoeffs& linear, ModeLabel k, ModeLabel k_prime, int n_max);

}  // namespace bogent
