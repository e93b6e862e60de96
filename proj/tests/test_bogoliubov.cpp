#include <doctest.h>

#include <cmath>
#include <random>

#include "bogent/bogoliubov.hpp"
#include "bogent/errors.hpp"

using namespace bogent;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }
double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Exact coefficients from a unitary mixer U, diagonal squeezes and a second
// unitary V: alpha = U cosh(r) V, beta = U sinh(r) conj(V).
BogoCoeffs random_exact(int n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    auto unitary = [&] {
        CMatrix z(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
        Eigen::HouseholderQR<CMatrix> qr(z);
        return CMatrix(qr.householderQ());
    };
    const CMatrix u = unitary(), v = unitary();
    CMatrix ch = CMatrix::Zero(n, n), sh = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double r = 0.3 * g(rng);
        ch(i, i) = std::cosh(r);
        sh(i, i) = std::sinh(r);
    }
    std::vector<ModeLabel> modes(n);
    for (int i = 0; i < n; ++i) modes[i] = i + 1;
    return BogoCoeffs::exact(modes, u * ch * v, u * sh * v.conjugate());
}

}  // namespace

TEST_CASE("BogoCoeffs construction") {
    CHECK_THROWS_AS(BogoCoeffs::exact({1, 2}, CMatrix::Identity(2, 3), CMatrix::Zero(2, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(BogoCoeffs::exact({1, 1}, CMatrix::Identity(2, 2), CMatrix::Zero(2, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(BogoCoeffs::series({1, 2}, CMatrix::Identity(2, 2), CMatrix::Zero(2, 2), -1),
                    std::invalid_argument);
    const auto c = BogoCoeffs::series({3, 5}, CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), 1);
    CHECK_FALSE(c.is_exact());
    CHECK(c.series_order() == 1);
    CHECK(c.index_of(5) == 1);
    CHECK_THROWS_AS(c.index_of(4), std::invalid_argument);
    CHECK_THROWS_AS(PhaseVector({Complex(0.9, 0.0)}), std::invalid_argument);
}

TEST_CASE("verify_identities") {
    const auto id = BogoCoeffs::exact({1, 2}, CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
    const auto r0 = verify_identities(id, 1e-10);
    CHECK(r0.unitarity_residual == 0.0);
    CHECK(r0.symmetry_residual == 0.0);
    CHECK(r0.passed);

    const double r = 0.7;
    const auto sq = BogoCoeffs::exact({1, 2}, CMatrix::Identity(2, 2) * std::cosh(r),
                                      CMatrix::Identity(2, 2) * std::sinh(r));
    CHECK(verify_identities(sq, 1e-14).passed);

    const auto two = BogoCoeffs::exact({1}, CMatrix::Identity(1, 1) * 2.0, CMatrix::Zero(1, 1));
    const auto bad = verify_identities(two, 1e-10);
    CHECK(bad.unitarity_residual == doctest::Approx(3.0));
    CHECK_FALSE(bad.passed);

    std::mt19937 rng(1);
    CHECK(verify_identities(random_exact(5, rng), 1e-12).passed);
}

TEST_CASE("to_symplectic block map") {
    const auto id = BogoCoeffs::exact({1, 2}, CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
    CHECK(to_symplectic(id).mat() == Matrix::Identity(4, 4));

    const double th = 0.4;
    const auto rot = phase_transform(PhaseVector({std::polar(1.0, th)}));
    const Complex ph[] = {std::polar(1.0, th)};
    CHECK(max_abs(Matrix(to_symplectic(rot).mat() - local_rotation(ph).mat())) < 1e-15);

    const double r = 0.6;
    const auto sq = BogoCoeffs::exact({1}, CMatrix::Constant(1, 1, std::cosh(r)),
                                      CMatrix::Constant(1, 1, std::sinh(r)));
    const Matrix s = to_symplectic(sq).mat();
    CHECK(s(0, 0) == doctest::Approx(std::exp(-r)));
    CHECK(s(1, 1) == doctest::Approx(std::exp(r)));
    CHECK(std::abs(s(0, 1)) < 1e-15);

    const auto quarter = phase_transform(PhaseVector({Complex(0.0, 1.0)}));
    Matrix expect(2, 2);
    expect << 0, 1, -1, 0;
    CHECK(max_abs(Matrix(to_symplectic(quarter).mat() - expect)) < 1e-15);

    const auto once = phase_transform(PhaseVector({std::polar(1.0, -2 * M_PI * 1.0)}));
    CHECK(max_abs(Matrix(to_symplectic(once).mat() - Matrix::Identity(2, 2))) < 1e-15);

    const auto series = BogoCoeffs::series({1}, CMatrix::Zero(1, 1), CMatrix::Zero(1, 1), 1);
    CHECK_THROWS_AS(to_symplectic(series), std::invalid_argument);
}

TEST_CASE("symplectic round trip and residual class") {
    std::mt19937 rng(2);
    for (int n = 1; n <= 6; ++n) {
        const BogoCoeffs c = random_exact(n, rng);
        const SymplecticMatrix s = to_symplectic(c);
        CHECK(s.residual() <= 1e-12);
        const BogoCoeffs back = from_symplectic(s, c.modes());
        CHECK(max_abs(CMatrix(back.alpha() - c.alpha())) < 1e-14);
        CHECK(max_abs(CMatrix(back.beta() - c.beta())) < 1e-14);
    }
}

TEST_CASE("composition agrees with coefficient algebra") {
    // Inner (A, B) then outer (C, D): alpha = C A + D conj(B), beta = C B + D conj(A).
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const BogoCoeffs in = random_exact(4, rng), out = random_exact(4, rng);
        const CMatrix alpha = out.alpha() * in.alpha() + out.beta() * in.beta().conjugate();
        const CMatrix beta = out.alpha() * in.beta() + out.beta() * in.alpha().conjugate();
        const SymplecticMatrix direct = to_symplectic(BogoCoeffs::exact(in.modes(), alpha, beta));
        const SymplecticMatrix prod = compose(to_symplectic(out), to_symplectic(in));
        CHECK(max_abs(Matrix(direct.mat() - prod.mat())) <= 1e-10);
    }
}

TEST_CASE("compose and inverse") {
    std::mt19937 rng(4);
    const SymplecticMatrix s = to_symplectic(random_exact(5, rng));
    const SymplecticMatrix id = SymplecticMatrix::identity(5);
    CHECK(compose(s, id).mat() == s.mat());
    CHECK(max_abs(Matrix(compose(s, symplectic_inverse(s)).mat() - Matrix::Identity(10, 10))) <= 1e-10);
    CHECK(max_abs(Matrix(compose(symplectic_inverse(s), s).mat() - Matrix::Identity(10, 10))) <= 1e-10);

    const Complex a[] = {std::polar(1.0, 0.3)}, b[] = {std::polar(1.0, 1.1)}, ab[] = {std::polar(1.0, 1.4)};
    CHECK(max_abs(Matrix(compose(local_rotation(a), local_rotation(b)).mat() - local_rotation(ab).mat())) < 1e-15);
    CHECK_THROWS_AS(compose(s, id.identity(2)), std::invalid_argument);
}

TEST_CASE("series_eval on analytic providers") {
    const int orders[] = {0, 1, 2};
    const CoeffProvider constant = [](double) {
        return BogoCoeffs::exact({1, 2}, CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
    };
    const auto c = series_eval(constant, orders);
    CHECK(max_abs(c[1].coeffs.alpha()) == 0.0);
    CHECK(max_abs(c[2].coeffs.beta()) == 0.0);

    const CoeffProvider phase = [](double h) {
        return BogoCoeffs::exact({1}, CMatrix::Constant(1, 1, std::polar(1.0, h)), CMatrix::Zero(1, 1), h);
    };
    const int first[] = {1};
    CHECK(std::abs(series_eval(phase, first)[0].coeffs.alpha()(0, 0) - Complex(0.0, 1.0)) <= 1e-8);
    const int second[] = {2};
    const auto d2 = series_eval(phase, second);
    CHECK(std::abs(d2[0].coeffs.alpha()(0, 0) - Complex(-0.5, 0.0)) <= 1e-8);

    // Two modes: a beam-splitter angle linear in h plus a two-mode squeeze.
    const double w = 0.8, q = 1.3;
    const CoeffProvider family = [&](double h) {
        CMatrix a(2, 2), b = CMatrix::Zero(2, 2);
        const double ch = std::cosh(q * h), sh = std::sinh(q * h);
        a << std::cos(w * h) * ch, std::sin(w * h) * ch, -std::sin(w * h) * ch, std::cos(w * h) * ch;
        b(0, 1) = b(1, 0) = Complex(0.0, sh);
        return BogoCoeffs::exact({1, 2}, a, b, h);
    };
    const auto d1 = series_eval(family, first);
    CHECK(std::abs(d1[0].coeffs.alpha()(0, 1) - w) <= 1e-8);
    CHECK(std::abs(d1[0].coeffs.alpha()(1, 0) + w) <= 1e-8);
    CHECK(std::abs(d1[0].coeffs.beta()(0, 1) - Complex(0.0, q)) <= 1e-8);
    CHECK(d1[0].coeffs.alpha()(0, 0) == Complex(0.0, 0.0));
    CHECK(d1[0].error_estimate < 1e-8);

    const int bad[] = {3};
    CHECK_THROWS_AS(series_eval(constant, bad), std::invalid_argument);

    const CoeffProvider noisy = [](double h) {
        CMatrix a = CMatrix::Identity(2, 2);
        a(0, 1) = std::abs(h) < 1e-9 ? 0.0 : std::sin(1.0 / h);
        return BogoCoeffs::exact({1, 2}, a, CMatrix::Zero(2, 2), h);
    };
    CHECK_THROWS_AS(series_eval(noisy, first), NumericalError);
}

TEST_CASE("first-order composition") {
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    const int n = 4;
    std::vector<ModeLabel> modes{1, 2, 3, 4};
    auto random_linear = [&](const PhaseVector& p) {
        LinearizedTransform t = LinearizedTransform::from_phases(p, modes);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) {
                    t.alpha1(i, j) = 1e-4 * Complex(g(rng), g(rng));
                    t.beta1(i, j) = 1e-4 * Complex(g(rng), g(rng));
                }
        return t;
    };
    std::vector<Complex> ph1, ph2;
    for (int i = 0; i < n; ++i) {
        ph1.push_back(std::polar(1.0, g(rng)));
        ph2.push_back(std::polar(1.0, g(rng)));
    }
    const LinearizedTransform a = random_linear(PhaseVector(ph1)), b = random_linear(PhaseVector(ph2));
    const LinearizedTransform ab = compose_linear(b, a);
    // Full product of the truncated expansions differs at second order only.
    const CMatrix full_alpha = (b.alpha0 + b.alpha1) * (a.alpha0 + a.alpha1) + b.beta1 * a.beta1.conjugate();
    const CMatrix full_beta = (b.alpha0 + b.alpha1) * a.beta1 + b.beta1 * (a.alpha0 + a.alpha1).conjugate();
    CHECK(max_abs(CMatrix(full_alpha - ab.alpha0 - ab.alpha1)) < 1e-6);
    CHECK(max_abs(CMatrix(full_beta - ab.beta1)) < 1e-6);

    const LinearizedTransform id = LinearizedTransform::identity(modes);
    const LinearizedTransform same = compose_linear(id, a);
    CHECK(max_abs(CMatrix(same.alpha1 - a.alpha1)) == 0.0);
    CHECK(max_abs(CMatrix(same.beta1 - a.beta1)) == 0.0);

    const BogoCoeffs lin = a.linear_coeffs(1e-4);
    CHECK(lin.series_order() == 1);
    CHECK(max_abs(CMatrix(lin.alpha() * 1e-4 - a.alpha1)) < 1e-18);
}
