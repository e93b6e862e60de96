#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bogent/gaussian.hpp"

namespace bogent {

/// Bogoliubov coefficients over a truncated mode set, in the convention
///   a~_m = sum_n (conj(alpha_mn) a_n - conj(beta_mn) a_n^dagger).
///
/// A coefficient set is either exact (evaluated at a definite h) or the
/// order-k Taylor coefficient of a family in h.
class BogoCoeffs {
public:
    /// Residual class for analytically exact providers.
    static constexpr double kExactIdentityTolerance = 1e-10;

    /// `identity_tolerance` is the residual the provider guarantees for the
    /// Bogoliubov identities (truncated providers declare C h^2).
    static BogoCoeffs exact(std::vector<ModeLabel> modes, CMatrix alpha, CMatrix beta,
                            double h_value = 0.0,
                            double identity_tolerance = kExactIdentityTolerance);

    /// Order-k series coefficient.
    static BogoCoeffs series(std::vector<ModeLabel> modes, CMatrix alpha, CMatrix beta, int order);

    const std::vector<ModeLabel>& modes() const { return modes_; }
    const CMatrix& alpha() const { return alpha_; }
    const CMatrix& beta() const { return beta_; }
    int size() const { return static_cast<int>(modes_.size()); }
    bool is_exact() const { return !series_order_.has_value(); }
    std::optional<int> series_order() const { return series_order_; }
    std::optional<double> h_value() const { return h_value_; }
    double identity_tolerance() const { return identity_tolerance_; }

    /// Position of `label` in the mode list; throws if absent.
    int index_of(ModeLabel label) const;

private:
    BogoCoeffs() = default;
    std::vector<ModeLabel> modes_;
    CMatrix alpha_;
    CMatrix beta_;
    std::optional<int> series_order_;
    std::optional<double> h_value_;
    double identity_tolerance_ = kExactIdentityTolerance;
};

/// Unit-modulus phase factors G_m, one per mode.
class PhaseVector {
public:
    explicit PhaseVector(std::vector<Complex> phases);
    const std::vector<Complex>& phases() const { return phases_; }
    int size() const { return static_cast<int>(phases_.size()); }

private:
    std::vector<Complex> phases_;
};

struct IdentityReport {
    double unitarity_residual = 0.0;  ///< ||alpha alpha^+ - beta beta^+ - 1||_max
    double symmetry_residual = 0.0;   ///< ||alpha beta^T - (alpha beta^T)^T||_max
    double tolerance = 0.0;
    bool passed = false;
};

IdentityReport verify_identities(const BogoCoeffs& c, double tol);

/// Unchecked block assembly shared by `to_symplectic`.
Matrix phase_space_matrix(const CMatrix& alpha, const CMatrix& beta);

/// Phase-space representation, assembled from the 2x2 blocks
///   [[Re(a - b), Im(a + b)], [-Im(a - b), Re(a + b)]].
/// The symplectic tolerance follows the identity tolerance of `c`.
SymplecticMatrix to_symplectic(const BogoCoeffs& c);

/// Inverse of the block map of `to_symplectic`.
BogoCoeffs from_symplectic(const SymplecticMatrix& s, std::vector<ModeLabel> modes,
                           double h_value = 0.0);

/// alpha = diag(G), beta = 0. Modes default to 1..N.
BogoCoeffs phase_transform(const PhaseVector& p, std::vector<ModeLabel> modes = {});

/// outer * inner: `inner` acts first.
SymplecticMatrix compose(const SymplecticMatrix& outer, const SymplecticMatrix& inner);

/// Omega S^T Omega^T.
SymplecticMatrix symplectic_inverse(const SymplecticMatrix& s);

using CoeffProvider = std::function<BogoCoeffs(double h)>;

struct SeriesEstimate {
    BogoCoeffs coeffs;
    double error_estimate = 0.0;  ///< max-norm difference between Richardson levels
};

/// Taylor coefficients of an h-family at h = 0. Order 0 is the value at 0;
/// orders 1 and 2 use central differences at h_probe, h_probe/2, h_probe/4
/// with two levels of Richardson extrapolation. The provider must accept
/// negative h. Throws NumericalError when the error estimate exceeds 1e-6 of
/// the leading value.
std::vector<SeriesEstimate> series_eval(const CoeffProvider& provider, std::span<const int> orders,
                                        double h_probe = 1e-3);

/// Transformation known to first order in h:
///   alpha = alpha0 + alpha1, beta = beta1,
/// where alpha0 is the diagonal phase matrix and alpha1, beta1 are the linear
/// terms including their factor of h.
struct LinearizedTransform {
    std::vector<ModeLabel> modes;
    CMatrix alpha0;
    CMatrix alpha1;
    CMatrix beta1;

    static LinearizedTransform identity(std::vector<ModeLabel> modes);
    static LinearizedTransform from_phases(const PhaseVector& p, std::vector<ModeLabel> modes);

    /// Order-1 coefficients as a series-tagged BogoCoeffs (per unit of h when
    /// `h` is given, otherwise with the h factor included).
    BogoCoeffs linear_coeffs(double h = 1.0) const;
};

/// First-order composition; `inner` acts first. Terms of order h^2 are dropped.
LinearizedTransform compose_linear(const LinearizedTransform& outer,
                                   const LinearizedTransform& inner);

}  // namespace bogent
