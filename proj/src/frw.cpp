#include "bogent/frw.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bogent::frw {

namespace {

// log(sinh x) for x >= 0; uses the asymptotic form above 30 so that
// arguments far beyond the overflow threshold of sinh stay finite.
double log_sinh(double x) {
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x > 30.0) return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
    return std::log(std::sinh(x));
}

}  // namespace

void FRWConfig::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(epsilon) || epsilon < 0.0) throw std::invalid_argument("frw: epsilon must be >= 0");
    if (!finite(rho) || !(rho > 0.0)) throw std::invalid_argument("frw: rho must be positive");
    if (!finite(mass) || mass < 0.0) throw std::invalid_argument("frw: mass must be >= 0");
    if (!finite(k) || !(k > 0.0)) throw std::invalid_argument("frw: k must be positive");
}

double FRWConfig::omega_in() const { return std::sqrt(k * k + mass * mass); }

double FRWConfig::omega_out() const { return std::sqrt(k * k + mass * mass * (1.0 + 2.0 * epsilon)); }

FRWCoefficients frw_coefficients(const FRWConfig& config) {
    config.validate();
    const double w_in = config.omega_in();
    const double w_out = config.omega_out();
    const double scale = std::numbers::pi / config.rho;
    const double w_plus = 0.5 * (w_out + w_in);
    const double w_minus = 0.5 * (w_out - w_in);

    const double log_den = log_sinh(scale * w_in) + log_sinh(scale * w_out);
    FRWCoefficients c;
    c.alpha_sq = std::exp(2.0 * log_sinh(scale * w_plus) - log_den);
    c.beta_sq = w_minus > 0.0 ? std::exp(2.0 * log_sinh(scale * w_minus) - log_den) : 0.0;
    return c;
}

GaussianState frw_pair_state(const FRWConfig& config) {
    const FRWCoefficients c = frw_coefficients(config);
    const double r = std::asinh(std::sqrt(c.beta_sq));
    const double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
    Matrix cov = Matrix::Zero(4, 4);
    cov.diagonal().setConstant(ch);
    cov(0, 2) = cov(2, 0) = sh;
    cov(1, 3) = cov(3, 1) = -sh;
    return GaussianState({1, 2}, std::move(cov));
}

EntanglementReport frw_negativity(const FRWConfig& config) {
    const FRWCoefficients c = frw_coefficients(config);
    const double diff = std::sqrt(c.alpha_sq) - std::sqrt(c.beta_sq);
    return report_from_nu(diff * diff, 1.0);
}

}  // namespace bogent::frw
