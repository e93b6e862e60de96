#include "bogent/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bogent/errors.hpp"
#include "bogent/perturbation.hpp"

namespace bogent::cavity {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadratureRelTol = 1e-12;

// Fractional part in [0, 1), so that the phase angle 2 pi frac is reduced
// before evaluating trigonometric functions.
double frac(double x) { return x - std::floor(x); }

Complex unit_phase(double turns) {
    const double angle = 2.0 * kPi * frac(turns);
    return {std::cos(angle), -std::sin(angle)};
}

std::vector<ModeLabel> labels(int n) {
    std::vector<ModeLabel> modes(n);
    for (int i = 0; i < n; ++i) modes[i] = i + 1;
    return modes;
}

void require_in_cavity(double x, const CavityConfig& c) {
    const double tol = 1e-12 * std::max(1.0, std::abs(c.b()));
    if (x < c.a() - tol || x > c.b() + tol) {
        throw std::invalid_argument("cavity mode evaluated outside the walls");
    }
}


// Composite Kronrod rule on `panels` equal subintervals of [0, 1]. The
// integrand is entire, so a panel holding at most one oscillation is
// resolved to roundoff by a single 61-point rule.
template <class F>
double integrate_unit(F&& f, int panels, double scale) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double value = 0.0;
    double error = 0.0;
    for (int p = 0; p < panels; ++p) {
        double e = 0.0;
        const double lo = static_cast<double>(p) / panels;
        const double hi = static_cast<double>(p + 1) / panels;
        value += GK::integrate(f, lo, hi, /*max_depth=*/0, 0.0, &e);
        error += e;
    }
    if (!(error <= kQuadratureRelTol * std::max(1.0, scale)) || !std::isfinite(value)) {
        std::ostringstream os;
        os << "junction quadrature did not converge (error estimate " << error << ")";
        throw NumericalError(os.str());
    }
    return value;
}

}  // namespace

// Truncation leakage of the Bogoliubov identities is dominated by the
// coupling of the highest retained mode M to mode M + 1, which is
// 4 M (M+1) h^2 / pi^4 at leading order; the factor 1.5 covers the rest
// of the tail and the beta contributions.
double identity_residual_constant(int cutoff) {
    return 1.5 * 4.0 * cutoff * (cutoff + 1.0) / (kPi * kPi * kPi * kPi);
}

// ---------------------------------------------------------------------------
// Configuration and mode functions

void CavityConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("cavity: width delta must be positive");
    }
    if (!(h > 0.0 && h < 2.0)) throw std::invalid_argument("cavity: h must satisfy 0 < h < 2");
    if (cutoff < 2) throw std::invalid_argument("cavity: cutoff must be at least 2");
}

double CavityConfig::rindler_log_width() const { return 2.0 * std::atanh(0.5 * h); }

ModeValue minkowski_mode(int n, double x, const CavityConfig& config) {
    if (n < 1) throw std::invalid_argument("minkowski_mode: n must be >= 1");
    config.validate();
    require_in_cavity(x, config);
    const double xi = std::clamp((x - config.a()) / config.delta, 0.0, 1.0);
    const double value = xi == 1.0 ? 0.0 : std::sin(n * kPi * xi) / std::sqrt(n * kPi);
    return {value, n * kPi / config.delta};
}

ModeValue rindler_mode(int m, double x, const CavityConfig& config) {
    if (m < 1) throw std::invalid_argument("rindler_mode: m must be >= 1");
    config.validate();
    require_in_cavity(x, config);
    const double l = config.rindler_log_width();
    const double xi = std::clamp(std::log1p((x - config.a()) / config.a()) / l, 0.0, 1.0);
    const double value = xi == 1.0 ? 0.0 : std::sin(m * kPi * xi) / std::sqrt(m * kPi);
    return {value, m * kPi / (l * x)};
}

// ---------------------------------------------------------------------------
// Junction coefficients

BogoCoeffs junction_coefficients(const CavityConfig& config) {
    config.validate();
    const int n_modes = config.cutoff;
    const double delta = config.delta;
    const double a = config.a();
    const double log_width = config.rindler_log_width();

    // On the slice t = 0, with x = a + delta xi:
    //   alpha_mn =  (psi_m, phi_n)    = delta int (omega_n + Omega_m / x) psi_m phi_n dxi
    //   beta_mn  = -(psi_m, phi_n^*)  = delta int (omega_n - Omega_m / x) psi_m phi_n dxi
    CMatrix alpha(n_modes, n_modes), beta(n_modes, n_modes);
    for (int m = 1; m <= n_modes; ++m) {
        for (int n = 1; n <= n_modes; ++n) {
            const double norm = delta / (kPi * std::sqrt(static_cast<double>(m) * n));
            const double omega_n = n * kPi / delta;
            auto overlap = [&](double sign) {
                return integrate_unit([&](double xi) {
                    const double x = a + delta * xi;
                    const double rindler_xi = std::log1p(delta * xi / a) / log_width;
                    const double rindler_freq = m * kPi / (log_width * x);
                    return (omega_n + sign * rindler_freq) * std::sin(m * kPi * rindler_xi) *
                           std::sin(n * kPi * xi);
                }, std::max(2, (m + n) / 2), omega_n + m * kPi / (log_width * a));
            };
            alpha(m - 1, n - 1) = norm * overlap(+1.0);
            beta(m - 1, n - 1) = norm * overlap(-1.0);
        }
    }
    const double tol = identity_residual_constant(n_modes) * config.h * config.h;
    return BogoCoeffs::exact(labels(n_modes), std::move(alpha), std::move(beta), config.h,
                             std::max(tol, BogoCoeffs::kExactIdentityTolerance));
}

CoeffProvider junction_provider(double delta, int cutoff) {
    return [delta, cutoff](double h) {
        if (h == 0.0) {
            return BogoCoeffs::exact(labels(cutoff), CMatrix::Identity(cutoff, cutoff),
                                     CMatrix::Zero(cutoff, cutoff), 0.0);
        }
        CavityConfig c{delta, std::abs(h), cutoff};
        BogoCoeffs j = junction_coefficients(c);
        if (h > 0.0) return j;
        CMatrix alpha = j.alpha(), beta = j.beta();
        for (int m = 0; m < cutoff; ++m) {
            for (int n = 0; n < cutoff; ++n) {
                if ((m + n) % 2 != 0) {
                    alpha(m, n) = -alpha(m, n);
                    beta(m, n) = -beta(m, n);
                }
            }
        }
        return BogoCoeffs::exact(j.modes(), std::move(alpha), std::move(beta), h,
                                 j.identity_tolerance());
    };
}

std::pair<double, double> linear_coefficients_closed_form(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("linear coefficients: mode numbers must be >= 1");
    if ((m + n) % 2 == 0) return {0.0, 0.0};
    const double root = std::sqrt(static_cast<double>(m) * n);
    const double pi2 = kPi * kPi;
    const double d = m - n, s = m + n;
    return {-2.0 * root / (pi2 * d * d * d), 2.0 * root / (pi2 * s * s * s)};
}

// ---------------------------------------------------------------------------
// Travel scenarios

void TravelScenario::validate() const {
    for (const Segment& seg : segments) {
        if (const auto* in = std::get_if<Inertial>(&seg)) {
            if (!(in->duration >= 0.0) || !std::isfinite(in->duration)) {
                throw std::invalid_argument("scenario: inertial duration must be >= 0");
            }
        } else {
            const auto& acc = std::get<Accelerated>(seg);
            if (!(std::abs(acc.h) > 0.0 && std::abs(acc.h) < 2.0)) {
                throw std::invalid_argument("scenario: acceleration parameter must satisfy 0 < |h| < 2");
            }
            if (!(acc.u >= 0.0) || !std::isfinite(acc.u)) {
                throw std::invalid_argument("scenario: acceleration duration u must be >= 0");
            }
        }
    }
}

TravelScenario TravelScenario::single_acceleration(double h, double u) {
    return TravelScenario{{Accelerated{h, u}}};
}

PhaseVector segment_phases(const Segment& segment, int n_modes, const CavityConfig& config) {
    std::vector<Complex> g(n_modes);
    if (const auto* in = std::get_if<Inertial>(&segment)) {
        // exp(-i n pi t / delta) = exp(-2 pi i n t / (2 delta))
        const double turns = in->duration / (2.0 * config.delta);
        for (int n = 1; n <= n_modes; ++n) g[n - 1] = unit_phase(n * turns);
    } else {
        const double u = std::get<Accelerated>(segment).u;
        for (int m = 1; m <= n_modes; ++m) g[m - 1] = unit_phase(m * u);
    }
    return PhaseVector(std::move(g));
}

JunctionSet::JunctionSet(const TravelScenario& scenario, const CavityConfig& config, int cutoff)
    : cutoff_(cutoff) {
    scenario.validate();
    if (cutoff < 2) throw std::invalid_argument("JunctionSet: cutoff must be at least 2");
    const CoeffProvider provider = junction_provider(config.delta, cutoff);
    for (const Segment& seg : scenario.segments) {
        const auto* acc = std::get_if<Accelerated>(&seg);
        if (!acc || junctions_.count(acc->h)) continue;
        SymplecticMatrix forward = to_symplectic(provider(acc->h));
        SymplecticMatrix inverse = symplectic_inverse(forward);
        junctions_.emplace(acc->h, Junction{std::move(forward), std::move(inverse)});
    }
}

const Junction& JunctionSet::at(double h) const {
    const auto it = junctions_.find(h);
    if (it == junctions_.end()) throw std::invalid_argument("JunctionSet: no junction for this h");
    return it->second;
}

SymplecticMatrix scenario_symplectic(const TravelScenario& scenario, const CavityConfig& config,
                                     int cutoff) {
    return scenario_symplectic(scenario, config, JunctionSet(scenario, config, cutoff));
}

SymplecticMatrix scenario_symplectic(const TravelScenario& scenario, const CavityConfig& config,
                                     const JunctionSet& junctions) {
    scenario.validate();
    const int n = junctions.cutoff();
    SymplecticMatrix total = SymplecticMatrix::identity(n);
    for (const Segment& seg : scenario.segments) {
        const PhaseVector phases = segment_phases(seg, n, config);
        const SymplecticMatrix p = local_rotation(phases.phases());
        if (const auto* acc = std::get_if<Accelerated>(&seg)) {
            const Junction& j = junctions.at(acc->h);
            total = compose(j.inverse, compose(p, compose(j.forward, total)));
        } else {
            total = compose(p, total);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// First-order composition

JunctionLinear junction_linear(int n_modes, LinearSource source, double delta, double h_probe) {
    if (n_modes < 2) throw std::invalid_argument("junction_linear: need at least two modes");
    JunctionLinear out{CMatrix::Zero(n_modes, n_modes), CMatrix::Zero(n_modes, n_modes)};
    if (source == LinearSource::closed_form) {
        for (int m = 1; m <= n_modes; ++m) {
            for (int n = 1; n <= n_modes; ++n) {
                const auto [a, b] = linear_coefficients_closed_form(m, n);
                out.alpha(m - 1, n - 1) = a;
                out.beta(m - 1, n - 1) = b;
            }
        }
        return out;
    }
    const int orders[] = {1};
    const auto series = series_eval(junction_provider(delta, n_modes), orders, h_probe);
    out.alpha = series.front().coeffs.alpha();
    out.beta = series.front().coeffs.beta();
    return out;
}

LinearizedTransform scenario_linear(const TravelScenario& scenario, const CavityConfig& config,
                                    const JunctionLinear& junction) {
    scenario.validate();
    const int n = static_cast<int>(junction.alpha.rows());
    const auto modes = labels(n);
    LinearizedTransform total = LinearizedTransform::identity(modes);
    for (const Segment& seg : scenario.segments) {
        const auto p = LinearizedTransform::from_phases(segment_phases(seg, n, config), modes);
        if (const auto* acc = std::get_if<Accelerated>(&seg)) {
            // The linear terms are odd in h, including the mirror case h < 0.
            LinearizedTransform forward = LinearizedTransform::identity(modes);
            forward.alpha1 = acc->h * junction.alpha;
            forward.beta1 = acc->h * junction.beta;
            LinearizedTransform inverse = LinearizedTransform::identity(modes);
            inverse.alpha1 = -forward.alpha1;
            inverse.beta1 = -forward.beta1;
            total = compose_linear(inverse, compose_linear(p, compose_linear(forward, total)));
        } else {
            total = compose_linear(p, total);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Full pipeline

GaussianState transformed_pair_state(const TravelScenario& scenario, const CavityConfig& config,
                                     ModeLabel k, ModeLabel k_prime, double s,
                                     const JunctionSet& junctions) {
    const int n = junctions.cutoff();
    if (k < 1 || k_prime < 1 || k > n || k_prime > n || k == k_prime) {
        throw std::invalid_argument("mode pair must be two distinct modes within the cutoff");
    }
    const SymplecticMatrix total = scenario_symplectic(scenario, config, junctions);

    // Initial covariance: diag(e^s, e^-s) on k and k', vacuum elsewhere.
    Vector initial = Vector::Ones(2 * n);
    for (ModeLabel mode : {k, k_prime}) {
        initial(2 * (mode - 1)) = std::exp(s);
        initial(2 * (mode - 1) + 1) = std::exp(-s);
    }
    // C_ij = sum_n M_in psi_n M_jn^T for the two retained modes.
    Matrix rows(4, 2 * n);
    rows.topRows(2) = total.mat().middleRows(2 * (k - 1), 2);
    rows.bottomRows(2) = total.mat().middleRows(2 * (k_prime - 1), 2);
    Matrix cov = rows * initial.asDiagonal() * rows.transpose();
    cov = 0.5 * (cov + cov.transpose()).eval();
    return GaussianState({k, k_prime}, std::move(cov));
}

EntanglementReport full_negativity(const TravelScenario& scenario, const CavityConfig& config,
                                   ModeLabel k, ModeLabel k_prime, double s,
                                   const JunctionSet& junctions, const JunctionSet* check) {
    const EntanglementReport r =
        negativity(transformed_pair_state(scenario, config, k, k_prime, s, junctions));
    if (check) {
        const EntanglementReport r2 =
            negativity(transformed_pair_state(scenario, config, k, k_prime, s, *check));
        if (std::abs(r2.negativity - r.negativity) > 1e-10) {
            std::ostringstream os;
            os << "full_negativity: not converged in the cutoff (" << junctions.cutoff() << " -> "
               << check->cutoff() << " shifts the negativity by "
               << std::abs(r2.negativity - r.negativity) << ")";
            throw NumericalError(os.str());
        }
    }
    return r;
}

EntanglementReport full_negativity(const TravelScenario& scenario, const CavityConfig& config,
                                   ModeLabel k, ModeLabel k_prime, double s, int cutoff) {
    const JunctionSet base(scenario, config, cutoff);
    const JunctionSet doubled(scenario, config, 2 * cutoff);
    return full_negativity(scenario, config, k, k_prime, s, base, &doubled);
}

// ---------------------------------------------------------------------------
// Sweep over u

SweepTable figure1_sweep(const CavityConfig& config, ModeLabel k, ModeLabel k_prime,
                         std::span<const double> squeezings, std::span<const double> u_grid,
                         const SweepOptions& options) {
    config.validate();
    const int n = config.cutoff;
    if (k < 1 || k_prime < 1 || k == k_prime || std::max(k, k_prime) + 1 > n) {
        throw std::invalid_argument("figure1_sweep: mode pair must be distinct and below the cutoff");
    }
    if (squeezings.empty() || u_grid.empty()) {
        throw std::invalid_argument("figure1_sweep: empty squeezing list or u-grid");
    }

    const TravelScenario shape = TravelScenario::single_acceleration(config.h, 0.0);
    const JunctionLinear linear = junction_linear(n, options.linear_source, config.delta);
    std::optional<JunctionSet> base, doubled;
    if (options.include_full) {
        base.emplace(shape, config, n);
        if (options.check_cutoff) doubled.emplace(shape, config, 2 * n);
    }

    SweepTable table;
    table.squeezings.assign(squeezings.begin(), squeezings.end());
    table.rows.resize(u_grid.size());
    const double h = config.h;

    auto evaluate = [&](std::size_t i) {
        const double u = u_grid[i];
        const TravelScenario scenario = TravelScenario::single_acceleration(h, u);
        const LinearizedTransform t = scenario_linear(scenario, config, linear);
        const BogoCoeffs lin = t.linear_coeffs();
        const int ik = k - 1, ikp = k_prime - 1;

        SweepRow row;
        row.u = u;
        row.f_over_h2 = validity_F(lin, k, k_prime, n).value / (h * h);
        for (double s : squeezings) {
            LinearCoefficientData d{t.alpha0(ik, ik), t.alpha0(ikp, ikp), t.alpha1(ik, ikp),
                                    t.beta1(ik, ikp), s};
            row.n_over_h_leading.push_back(leading_negativity(d) / h);
            row.det_sigma.push_back(mixedness_determinant(lin, k, k_prime, s, n).value);
            if (options.include_full) {
                const auto r = full_negativity(scenario, config, k, k_prime, s, *base,
                                               doubled ? &*doubled : nullptr);
                row.n_over_h_full.push_back(r.negativity / h);
            }
        }
        table.rows[i] = std::move(row);
    };

    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(u_grid.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < u_grid.size(); ++i) evaluate(i);
        return table;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < u_grid.size(); i += threads) evaluate(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return table;
}

}  // namespace bogent::cavity
