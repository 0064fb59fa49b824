#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "decoh/errors.hpp"
#include "decoh/scattering.hpp"

using namespace decoh;

namespace {
const cplx I(0.0, 1.0);

// (k/2) int_{-1}^{1} f(u) f'*(u) du over the outgoing direction cosine, 2000 gauss points split in panels
cplx B_angular(const ScatteringSolution& a, const ScatteringSolution& b) {
    cplx sum = 0.0;
    const int panels = 40;
    for (int i = 0; i < panels; ++i) {
        const double lo = -1.0 + 2.0 * i / panels, hi = lo + 2.0 / panels;
        auto re = [&](double u) { return (scattering_amplitude(a, u) * std::conj(scattering_amplitude(b, u))).real(); };
        auto im = [&](double u) { return (scattering_amplitude(a, u) * std::conj(scattering_amplitude(b, u))).imag(); };
        sum += cplx(boost::math::quadrature::gauss<double, 50>::integrate(re, lo, hi),
                    boost::math::quadrature::gauss<double, 50>::integrate(im, lo, hi));
    }
    return 0.5 * a.k * sum;
}
}  // namespace

TEST_CASE("empty traps") {
    const auto s = solve_alphas(1.3, 0.2, Occupation(0, 0), Params::make(0.7, 2.0));
    CHECK(s.alpha_plus == cplx(0.0));
    CHECK(s.alpha_minus == cplx(0.0));
    CHECK(s.Lambda == cplx(1.0));
    for (double u : {-1.0, 0.0, 0.5}) CHECK(scattering_amplitude(s, u) == cplx(0.0));
    CHECK(pair_kernel_B(1.3, 0.2, Occupation(2, 1), Occupation(0, 0), Params::make(0.7, 2.0)) == cplx(0.0));
}

TEST_CASE("linear system residual on random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> K(0.01, 5.0), C(-1.0, 1.0), A(-2.0, 2.0), S(0.1, 20.0);
    std::uniform_int_distribution<int> N(0, 4);
    for (int i = 0; i < 500; ++i) {
        const auto s = solve_alphas(K(rng), C(rng), Occupation(N(rng), N(rng)), Params::make(A(rng), S(rng)));
        CHECK(linear_system_residual(s) < 1e-12);
    }
}

TEST_CASE("far-apart sites scatter independently") {
    const Params p = Params::make(0.3, 1e6);
    const Occupation o(2, 1);
    const double k = 1.7, c = 0.4;
    const auto s = solve_alphas(k, c, o, p);
    const double phi = 0.5 * k * p.s_over_lambda * c;
    const cplx ep = 0.6 * std::exp(I * phi) / (1.0 + I * 0.6 * k);
    const cplx em = 0.3 * std::exp(-I * phi) / (1.0 + I * 0.3 * k);
    CHECK(std::abs(s.alpha_plus - ep) / std::abs(ep) < 1e-5);
    CHECK(std::abs(s.alpha_minus - em) / std::abs(em) < 1e-5);

    // one occupied site: |f| isotropic
    const auto one = solve_alphas(k, c, Occupation(1, 0), Params::make(0.3, 1e6));
    for (double u : {-1.0, -0.3, 0.2, 1.0})
        CHECK(std::abs(scattering_amplitude(one, u)) == doctest::Approx(0.3 / std::abs(1.0 + I * 0.3 * k)).epsilon(1e-12));
}

TEST_CASE("close strong scatterers cancel") {
    const double k = 1.0, c = 0.3;
    const cplx single = 10.0 / (1.0 + I * 10.0 * k);
    const auto both = solve_alphas(k, c, Occupation(1, 1), Params::make(10.0, 0.01));
    const auto closer = solve_alphas(k, c, Occupation(1, 1), Params::make(10.0, 0.001));
    const double r1 = std::abs(both.alpha_plus + both.alpha_minus) / std::abs(single);
    const double r2 = std::abs(closer.alpha_plus + closer.alpha_minus) / std::abs(single);
    CHECK(r1 < 0.05);
    // suppression keeps improving as the pair closes up
    CHECK(r2 < 0.5 * r1);
}

TEST_CASE("optical theorem, hermiticity, angular oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> K(1e-3, 5.0), C(-1.0, 1.0), A(-2.0, 2.0), S(0.1, 20.0);
    std::uniform_int_distribution<int> N(0, 4);
    int done = 0;
    while (done < 200) {
        const double k = K(rng), c = C(rng);
        const Params p = Params::make(A(rng), S(rng));
        const Occupation n(N(rng), N(rng)), m(N(rng), N(rng));
        ScatteringSolution a, b;
        try {
            a = solve_alphas(k, c, n, p);
            b = solve_alphas(k, c, m, p);
        } catch (const NearSingularError&) {
            continue;
        }
        ++done;
        const cplx Bnn = pair_kernel_B(a, a);
        CHECK(std::abs(Bnn.imag()) <= 1e-14 * (1.0 + std::abs(Bnn)));
        CHECK(std::abs(forward_rate_A(a).real() - Bnn.real()) <= 1e-9 * std::abs(Bnn) + 1e-14);
        CHECK(std::abs(pair_kernel_B(a, b) - std::conj(pair_kernel_B(b, a))) < 1e-14 * (1.0 + std::abs(pair_kernel_B(a, b))));
        const cplx Bab = pair_kernel_B(a, b);
        CHECK(std::abs(Bab - B_angular(a, b)) <= 1e-8 * std::abs(Bab) + 1e-14);
    }
}

TEST_CASE("kernel matrix is positive semidefinite and factorizes") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> K(0.05, 5.0), C(-1.0, 1.0), A(-1.5, 1.5), S(0.1, 20.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double k = K(rng), c = C(rng);
        const Params p = Params::make(A(rng), S(rng));
        std::vector<ScatteringSolution> sols;
        try {
            for (int a = 0; a <= 3; ++a)
                for (int b = 0; b <= 3; ++b) sols.push_back(solve_alphas(k, c, Occupation(a, b), p));
        } catch (const NearSingularError&) {
            continue;
        }
        const auto n = Eigen::Index(sols.size());
        Eigen::MatrixXcd M(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                M(i, j) = pair_kernel_B(sols[std::size_t(i)], sols[std::size_t(j)]);
                const auto gi = lindblad_factors(sols[std::size_t(i)]), gj = lindblad_factors(sols[std::size_t(j)]);
                const cplx rec = gi.G1 * std::conj(gj.G1) + gi.G2 * std::conj(gj.G2);
                CHECK(std::abs(rec - M(i, j)) < 1e-10 * (1.0 + std::abs(M(i, j))));
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (M + M.adjoint()));
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("lindblad factors become diagonal when sinc(ks) = 0") {
    const double s = 2.0, k = M_PI / s;
    const auto sol = solve_alphas(k, 0.3, Occupation(2, 1), Params::make(0.4, s));
    const auto g = lindblad_factors(sol);
    CHECK(std::abs(g.G1 - std::sqrt(k) * sol.alpha_plus) < 1e-14);
    CHECK(std::abs(g.G2 - std::sqrt(k) * sol.alpha_minus) < 1e-14);
}

TEST_CASE("errors") {
    const Params p = Params::make(0.4, 2.0);
    CHECK_THROWS_AS(solve_alphas(0.0, 0.3, Occupation(1, 0), p), InvalidInput);
    CHECK_THROWS_AS(solve_alphas(1.0, 1.3, Occupation(1, 0), p), InvalidInput);
    CHECK_THROWS_AS(solve_alphas(1.0, 0.3, Occupation(1, 0), Params::make(0.4, 0.0)), InvalidInput);
    // Lambda(k) = 0 on the real axis needs 1 + i a k = +-(a/s) e^{iks} for a single strength;
    // a = -s gives Lambda(0) = 0, approached as k -> 0
    const Scatterers sc{-1.0, -1.0, 1.0};
    CHECK_THROWS_AS(solve_alphas(1e-12, 0.0, sc), NearSingularError);
    try {
        solve_alphas(1e-12, 0.0, sc);
    } catch (const NearSingularError& e) {
        CHECK(e.where() == 1e-12);
    }
}

TEST_CASE("Lambda derivative matches finite difference") {
    const Scatterers sc{0.7, -0.4, 1.3};
    for (cplx k : {cplx(0.5, 0.0), cplx(0.0, 1.2), cplx(-2.0, 0.3)}) {
        const double h = 1e-6;
        const cplx fd = (lambda_det(k + h, sc) - lambda_det(k - h, sc)) / (2.0 * h);
        CHECK(std::abs(fd - lambda_det_derivative(k, sc)) < 1e-8);
    }
}
