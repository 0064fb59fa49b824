#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "decoh/born_markov.hpp"
#include "decoh/errors.hpp"
#include "decoh/exact_rates.hpp"
#include "decoh/scattering.hpp"

using namespace decoh;

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

// (2/a^2) int dz z^2 e^{-z^2} int dmu B(z, mu), B from the scattering module; z outer adaptive, mu fixed gauss
cplx gamma_2d(const Occupation& n, const Occupation& m, const Params& p) {
    const double a = p.a_over_lambda;
    auto inner = [&](double z, bool im) {
        auto g = [&](double mu) {
            const cplx B = pair_kernel_B(solve_alphas(z, mu, n, p), solve_alphas(z, mu, m, p));
            return im ? B.imag() : B.real();
        };
        return gauss<double, 30>::integrate(g, -1.0, 0.0) + gauss<double, 30>::integrate(g, 0.0, 1.0);
    };
    auto part = [&](bool im) {
        auto f = [&](double z) { return z * z * std::exp(-z * z) * inner(z, im); };
        double sum = 0.0;
        const int panels = 26;
        for (int i = 0; i < panels; ++i)
            sum += gauss_kronrod<double, 31>::integrate(f, 6.5 * i / panels, 6.5 * (i + 1) / panels, 8, 1e-12);
        return sum;
    };
    return 2.0 / (a * a) * cplx(part(false), part(true));
}

// (2/a^2) int dz z^2 e^{-z^2} int dmu Im A(z, mu)
double omega_2d(const Occupation& n, const Params& p) {
    const double a = p.a_over_lambda;
    auto f = [&](double z) {
        auto g = [&](double mu) { return forward_rate_A(solve_alphas(z, mu, n, p)).imag(); };
        return z * z * std::exp(-z * z) * (gauss<double, 30>::integrate(g, -1.0, 0.0) + gauss<double, 30>::integrate(g, 0.0, 1.0));
    };
    double sum = 0.0;
    for (int i = 0; i < 26; ++i) sum += gauss_kronrod<double, 31>::integrate(f, 0.25 * i, 0.25 * (i + 1), 8, 1e-12);
    return 2.0 / (a * a) * sum;
}

}  // namespace

TEST_CASE("empty and degenerate cases") {
    const Params p = Params::make(0.3, 1.5);
    CHECK(gamma_exact(Occupation(0, 0), Occupation(0, 0), p) == cplx(0.0));
    CHECK(gamma_exact(Occupation(2, 0), Occupation(0, 0), p) == cplx(0.0));
    CHECK(decoherence_D(Occupation(2, 1), Occupation(2, 1), p) == cplx(0.0));
    CHECK(frequency_shift_omega(Occupation(0, 0), p) == 0.0);
    CHECK_THROWS_AS(gamma_exact(Occupation(1, 0), Occupation(0, 1), Params::make(0.3, 0.0)), InvalidInput);
    CHECK_THROWS_AS(frequency_shift_omega(Occupation(1, 0), Params::make(0.0, 1.0)), InvalidInput);
    RateOptions bad;
    bad.rel_tol = 0.5;
    CHECK_THROWS_AS(gamma_exact(Occupation(1, 0), Occupation(0, 1), p, bad), InvalidInput);
}

TEST_CASE("weak limit reproduces the Born-Markov pair rate") {
    const Params p = Params::make(1e-4, 2.0);
    const cplx g = gamma_exact(Occupation(1, 0), Occupation(0, 1), p);
    CHECK(std::abs(g - 2.0 * rate_R(2.0)) / (2.0 * rate_R(2.0)) < 5e-4);
    // a = 0 is the exact Born limit in units of Gamma
    const Params p0 = Params::make(0.0, 2.0);
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
            for (int c = 0; c <= 2; ++c)
                for (int d = 0; d <= 2; ++d) {
                    const Occupation n(a, b), m(c, d);
                    CHECK(std::abs(gamma_exact(n, m, p0) - bm_pair_rate(n, m, p0)) < 1e-9 * (1.0 + bm_pair_rate(n, m, p0)));
                }
}

TEST_CASE("gamma agrees with the 2-D thermal average of the pair kernel") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> A(-0.8, 0.8), S(0.2, 4.0);
    std::uniform_int_distribution<int> N(0, 2);
    for (int i = 0; i < 8; ++i) {
        const Params p = Params::make(A(rng), S(rng));
        const Occupation n(N(rng), N(rng)), m(N(rng), N(rng));
        if (n.empty() || m.empty()) continue;
        const cplx g = gamma_exact(n, m, p);
        const cplx o = gamma_2d(n, m, p);
        CHECK(std::abs(g - o) <= 1e-8 * std::abs(o));
    }
    const Params p = Params::make(0.5, 1.0);
    const Occupation n(1, 2);
    CHECK(std::abs(gamma_exact(n, n, p) - gamma_2d(n, n, p)) <= 1e-8 * std::abs(gamma_2d(n, n, p)));
}

TEST_CASE("hermiticity, positivity, D structure on random tuples") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> A(-1.5, 1.5), S(0.1, 20.0);
    std::uniform_int_distribution<int> N(0, 3);
    for (int i = 0; i < 60; ++i) {
        const Params p = Params::make(A(rng), S(rng));
        const Occupation n(N(rng), N(rng)), m(N(rng), N(rng));
        const cplx g = gamma_exact(n, m, p), gt = gamma_exact(m, n, p);
        CHECK(std::abs(g - std::conj(gt)) <= 1e-10 * (1.0 + std::abs(g)));
        const cplx gnn = gamma_exact(n, n, p);
        CHECK(gnn.imag() == 0.0);
        CHECK(gnn.real() >= 0.0);
        const cplx D = decoherence_D(n, m, p), Dt = decoherence_D(m, n, p);
        CHECK(D.real() >= -1e-12);
        CHECK(std::abs(D - std::conj(Dt)) <= 1e-10 * (1.0 + std::abs(D)));
        CHECK(decoherence_D(n, n, p) == cplx(0.0));
    }
}

TEST_CASE("weak-limit D matches the Born-Markov exponents") {
    for (double s : {0.5, 2.0, 10.0}) {
        const Params p = Params::make(1e-4, s);
        for (auto [n, m] : std::vector<std::pair<Occupation, Occupation>>{
                 {{1, 0}, {0, 1}}, {{2, 0}, {0, 0}}, {{1, 1}, {2, 0}}, {{3, 0}, {1, 0}}}) {
            const double bm = bm_exponent(n, m, p);
            CHECK(std::abs(decoherence_D(n, m, p).real() - bm) / bm < 1e-3);
        }
    }
}

TEST_CASE("Re D saturates monotonically in s at weak coupling") {
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
        const double s = 0.01 * std::pow(5000.0, i / 40.0);
        const double d = decoherence_D(Occupation(1, 0), Occupation(0, 1), Params::make(1e-4, s)).real();
        CHECK(d >= prev - 1e-12);
        prev = d;
    }
    // N = N', |n - n'| = 2
    CHECK(prev == doctest::Approx(4.0 * (1.0 - rate_R(50.0))).epsilon(1e-3));
}

TEST_CASE("frequency shift") {
    const Occupation n(2, 1);
    for (double s : {0.7, 3.0}) {
        const double wp = frequency_shift_omega(n, Params::make(1e-3, s));
        const double wm = frequency_shift_omega(n, Params::make(-1e-3, s));
        CHECK(wp > 0.0);
        CHECK(wm < 0.0);
        CHECK(wp == doctest::Approx(std::sqrt(M_PI) * 3.0 / 1e-3).epsilon(1e-2));
    }
    for (auto [a, s] : std::vector<std::pair<double, double>>{{0.4, 1.3}, {-0.7, 2.5}, {1.2, 0.6}}) {
        const Params p = Params::make(a, s);
        CHECK(frequency_shift_omega(n, p) == doctest::Approx(omega_2d(n, p)).epsilon(1e-8));
    }
}

TEST_CASE("exact_evolve contracts") {
    const FockBasis b(2);
    const auto rho = DensityMatrix::pure(
        b, {{Occupation(1, 0), 1.0}, {Occupation(0, 1), 1.0}, {Occupation(1, 1), cplx(0.3, 0.4)}, {Occupation(0, 0), 0.5}});
    const Params p = Params::make(0.6, 1.1);
    const RateTable tab(b, p);
    CHECK_THROWS_AS(exact_evolve(rho, -0.1, tab), InvalidInput);
    CHECK((exact_evolve(rho, 0.0, tab).matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
    for (double t : {0.05, 0.5, 3.0}) {
        const auto r = exact_evolve(rho, t, tab);
        CHECK(std::abs(r.trace() - 1.0) < 1e-12);
        CHECK((r.matrix() - r.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((r.matrix().diagonal() - rho.matrix().diagonal()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(r.matrix().cwiseAbs().maxCoeff() <= rho.matrix().cwiseAbs().maxCoeff() + 1e-15);
    }
    const auto ab = exact_evolve(exact_evolve(rho, 0.4, tab), 1.1, tab);
    CHECK((ab.matrix() - exact_evolve(rho, 1.5, tab).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact_evolve reduces to bm_evolve at weak coupling") {
    const FockBasis b(2);
    const auto rho = DensityMatrix::pure(b, {{Occupation(1, 0), 1.0}, {Occupation(0, 1), 1.0}, {Occupation(1, 1), 1.0},
                                             {Occupation(0, 0), 1.0}});
    auto worst = [&](double a, double s, const DensityMatrix& r0) {
        const Params p = Params::make(a, s);
        const auto e = exact_evolve(r0, 1.0, p, FrequencyShift::exclude);
        const auto m = bm_evolve(r0, 1.0, p);
        double w = 0.0;
        for (Eigen::Index i = 0; i < e.matrix().rows(); ++i)
            for (Eigen::Index j = 0; j < e.matrix().cols(); ++j) {
                const cplx x = e.matrix()(i, j), y = m.matrix()(i, j);
                if (std::abs(y) > 1e-14) w = std::max(w, std::abs(x - y) / std::abs(y));
            }
        return w;
    };
    CHECK(worst(1e-4, 2.0, rho) < 1e-3);
    // larger occupations amplify the O(a n / s) multiple-scattering correction; it must vanish linearly in a
    const FockBasis b3(3);
    const auto big = DensityMatrix::pure(b3, {{Occupation(2, 1), 1.0}, {Occupation(0, 0), 1.0}, {Occupation(1, 0), 1.0}});
    const double w4 = worst(1e-4, 1.5, big), w5 = worst(1e-5, 1.5, big);
    CHECK(w5 < 0.15 * w4);
    CHECK(w5 < 1e-3);
}

TEST_CASE("finite_N_factor") {
    const cplx D(0.7, 0.1);
    const double dw = -0.4, t = 1.0;
    const cplx x = t * (cplx(0.0, -dw) - D);
    CHECK(std::abs(finite_N_factor(D, dw, t, 1) - (1.0 + x)) < 1e-15);
    for (long long nb : {1LL, 10LL, 1000000LL}) CHECK(finite_N_factor(0.0, 0.0, 3.0, nb) == cplx(1.0));
    CHECK(std::abs(finite_N_factor(D, dw, t, 1000000) - std::exp(x)) / std::abs(std::exp(x)) < 1e-5);
    CHECK(std::abs(finite_N_factor(D, dw, t, 10) - std::pow(1.0 + x / 10.0, 10)) < 1e-13);
    CHECK_THROWS_AS(finite_N_factor(D, dw, t, 0), InvalidInput);

    const Params p = Params::make(0.5, 1.0);
    const Occupation n(1, 0), m(0, 1);
    const cplx ex = std::exp(0.5 * (cplx(0.0, -(frequency_shift_omega(n, p) - frequency_shift_omega(m, p))) - decoherence_D(n, m, p)));
    CHECK(std::abs(finite_N_factor(n, m, p, 0.5, 1000000) - ex) / std::abs(ex) < 1e-5);
}
