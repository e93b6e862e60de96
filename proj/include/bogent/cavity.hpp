#pragma once

#include <map>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "bogent/bogoliubov.hpp"
#include "bogent/gaussian.hpp"

namespace bogent::cavity {

/// Rigid Dirichlet cavity of proper width `delta`. While accelerated, the
/// proper acceleration at the centre is h / delta; the walls then sit at the
/// Rindler positions a = delta/h - delta/2 and b = delta/h + delta/2.
struct CavityConfig {
    double delta = 1.0;
    double h = 1e-3;
    int cutoff = 30;

    /// Throws std::invalid_argument unless delta > 0, 0 < h < 2, cutoff >= 2.
    void validate() const;
    double a() const { return delta / h - 0.5 * delta; }
    double b() const { return delta / h + 0.5 * delta; }
    /// ln(b/a) = 2 atanh(h/2).
    double rindler_log_width() const;
};

/// Mode function on the t = 0 slice together with the factor multiplying
/// -i times the function in its time derivative (the frequency, for Rindler
/// modes the Rindler frequency divided by x).
struct ModeValue {
    double value;
    double time_derivative_factor;
};

/// phi_n(0, x) = (n pi)^{-1/2} sin(n pi (x - a)/delta), omega_n = n pi / delta.
ModeValue minkowski_mode(int n, double x, const CavityConfig& config);

/// psi_m(0, x) = (m pi)^{-1/2} sin(m pi ln(x/a) / ln(b/a)), factor Omega_m / x.
ModeValue rindler_mode(int m, double x, const CavityConfig& config);

/// Klein-Gordon overlaps between the Minkowski modes of the cavity at rest and
/// the Rindler modes of the cavity at the onset of acceleration, for modes
/// 1..cutoff. Each entry is integrated with composite Kronrod panels.
///
/// The result is exact up to truncation; the declared identity tolerance is
/// identity_residual_constant(cutoff) * h^2. Throws NumericalError on quadrature failure.
BogoCoeffs junction_coefficients(const CavityConfig& config);

/// 1.5 * 4 M (M+1) / pi^4; the observed residual at cutoff 30 is 38.2 h^2.
double identity_residual_constant(int cutoff);

/// Junction coefficients as a function of a signed h, for use with
/// series_eval. Negative h is the mirror-image cavity accelerating towards -x,
/// whose coefficients carry the factor (-1)^{m+n}; h = 0 is the identity.
CoeffProvider junction_provider(double delta, int cutoff);

/// Taylor coefficients (alpha^(1)/h, beta^(1)/h) from the closed forms;
/// both vanish unless m + n is odd.
std::pair<double, double> linear_coefficients_closed_form(int m, int n);

/// Inertial motion for a proper time `duration`.
struct Inertial {
    double duration = 0.0;
};

/// Uniform acceleration with parameter h for a dimensionless duration
/// u = h tau / (4 delta atanh(h/2)), tau the proper time at the centre.
struct Accelerated {
    double h = 0.0;
    double u = 0.0;
};

using Segment = std::variant<Inertial, Accelerated>;

struct TravelScenario {
    std::vector<Segment> segments;

    /// Throws std::invalid_argument on negative durations or |h| outside (0, 2).
    void validate() const;

    /// Inertial except for one segment of uniform acceleration.
    static TravelScenario single_acceleration(double h, double u);
};

/// Free evolution phases for modes 1..n_modes:
///   inertial:    G_n = exp(-i n pi t / delta)
///   accelerated: G_m = exp(-2 pi i m u)
PhaseVector segment_phases(const Segment& segment, int n_modes, const CavityConfig& config);

/// Junction into uniform acceleration and its inverse, in phase space.
struct Junction {
    SymplecticMatrix forward;
    SymplecticMatrix inverse;
};

/// Precomputed junctions for every acceleration appearing in a scenario.
class JunctionSet {
public:
    JunctionSet(const TravelScenario& scenario, const CavityConfig& config, int cutoff);
    const Junction& at(double h) const;
    int cutoff() const { return cutoff_; }

private:
    int cutoff_;
    std::map<double, Junction> junctions_;
};

/// Product over segments; an accelerated segment contributes O^{-1} P(u) O.
SymplecticMatrix scenario_symplectic(const TravelScenario& scenario, const CavityConfig& config,
                                     int cutoff);
SymplecticMatrix scenario_symplectic(const TravelScenario& scenario, const CavityConfig& config,
                                     const JunctionSet& junctions);

/// Where the junction's linear coefficients come from.
enum class LinearSource { quadrature, closed_form };

/// Linear coefficients of a junction (per unit h) for modes 1..n_modes.
struct JunctionLinear {
    CMatrix alpha;  ///< alpha^(1) / h
    CMatrix beta;   ///< beta^(1) / h
};

JunctionLinear junction_linear(int n_modes, LinearSource source, double delta = 1.0,
                               double h_probe = 1e-3);

/// Scenario transformation to first order in the accelerations.
LinearizedTransform scenario_linear(const TravelScenario& scenario, const CavityConfig& config,
                                    const JunctionLinear& junction);

/// Full non-perturbative pipeline: squeeze modes k and k' by s, transform all
/// `junctions.cutoff()` modes, trace out all but (k, k'), and evaluate the
/// negativity. With `check` given (junctions at a doubled cutoff), throws
/// NumericalError if the negativity shifts by more than 1e-10.
EntanglementReport full_negativity(const TravelScenario& scenario, const CavityConfig& config,
                                   ModeLabel k, ModeLabel k_prime, double s,
                                   const JunctionSet& junctions,
                                   const JunctionSet* check = nullptr);

/// Convenience overload that builds the junctions at `cutoff` and 2 * cutoff.
EntanglementReport full_negativity(const TravelScenario& scenario, const CavityConfig& config,
                                   ModeLabel k, ModeLabel k_prime, double s, int cutoff);

/// Reduced covariance matrix of (k, k') behind `full_negativity`.
GaussianState transformed_pair_state(const TravelScenario& scenario, const CavityConfig& config,
                                     ModeLabel k, ModeLabel k_prime, double s,
                                     const JunctionSet& junctions);

struct SweepOptions {
    LinearSource linear_source = LinearSource::quadrature;
    bool include_full = true;   ///< evaluate the non-perturbative pipeline
    bool check_cutoff = true;   ///< verify the full pipeline at twice the cutoff
    int threads = 1;
};

struct SweepRow {
    double u = 0.0;
    std::vector<double> n_over_h_leading;  ///< per squeezing, leading-order formula
    std::vector<double> n_over_h_full;     ///< per squeezing, full pipeline (empty if skipped)
    double f_over_h2 = 0.0;
    std::vector<double> det_sigma;         ///< per squeezing, leading-order determinant
};

struct SweepTable {
    std::vector<double> squeezings;
    std::vector<SweepRow> rows;
};

/// One-segment travel scenario swept over u. The cutoff of `config` bounds
/// both the full pipeline and the mode sums of the validity and mixedness
/// diagnostics. Rows are ordered by the u-grid regardless of `threads`.
SweepTable figure1_sweep(const CavityConfig& config, ModeLabel k, ModeLabel k_prime,
                         std::span<const double> squeezings, std::span<const double> u_grid,
                         const SweepOptions& options = {});

}  // namespace bogent::cavity
