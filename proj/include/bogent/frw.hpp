#pragma once

#include "bogent/gaussian.hpp"

namespace bogent::frw {

/// Charged scalar field in a (1+1) conformally flat universe with conformal
/// factor C(eta) = 1 + epsilon (1 + tanh(rho eta)), asymptotically static in
/// the past (C = 1) and future (C = 1 + 2 epsilon). Each momentum k couples
/// only to -k.
struct FRWConfig {
    double epsilon = 1.0;
    double rho = 1.0;
    double mass = 1.0;
    double k = 1.0;

    /// Throws std::invalid_argument unless epsilon >= 0, rho > 0, mass >= 0,
    /// k > 0 (all finite).
    void validate() const;
    double omega_in() const;
    double omega_out() const;
};

struct FRWCoefficients {
    double alpha_sq = 1.0;  ///< |alpha_k|^2
    double beta_sq = 0.0;   ///< |beta_k|^2
};

/// |alpha|^2 = sinh^2(pi w+/rho) / (sinh(pi w_in/rho) sinh(pi w_out/rho)),
/// |beta|^2  = sinh^2(pi w-/rho) / (sinh(pi w_in/rho) sinh(pi w_out/rho)),
/// w+- = (w_out +- w_in)/2, evaluated through log sinh.
FRWCoefficients frw_coefficients(const FRWConfig& config);

/// Two-mode squeezed state of (k, -k) with sinh r = |beta_k|; modes are
/// labelled 1 (k) and 2 (-k).
GaussianState frw_pair_state(const FRWConfig& config);

/// Closed form nu_minus = (|alpha| - |beta|)^2.
EntanglementReport frw_negativity(const FRWConfig& config);

}  // namespace bogent::frw
