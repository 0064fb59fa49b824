#include "decoh/born_markov.hpp"

#include <cmath>

#include <gsl/gsl_sf_dawson.h>

#include "decoh/errors.hpp"
#include "decoh/quadrature.hpp"
#include "decoh/special.hpp"

namespace decoh {

double rate_R(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidInput("rate_R: x must be finite and >= 0");
    if (x < 1e-3) {
        const double x2 = x * x;
        return 1.0 - x2 * (2.0 / 3.0) + x2 * x2 * (4.0 / 15.0) - x2 * x2 * x2 * (8.0 / 105.0);
    }
    return gsl_sf_dawson(x) / x;
}

double rate_R_quadrature(double x, double rel_tol) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidInput("rate_R_quadrature: x must be finite and >= 0");
    // 2 xi sin^2(x xi)/x^2 written with sinc so that x = 0 is regular
    auto f = [x](double xi) {
        const double sc = sinc(x * xi);
        return 2.0 * xi * xi * xi * sc * sc * std::exp(-xi * xi);
    };
    quad::Options o;
    o.rel_tol = rel_tol;
    o.abs_tol = 1e-300;
    if (x > 1.0) o.max_panel = pi / (4.0 * x);
    return quad::integrate_or_throw<double>(f, {0.0, 6.5}, o, "rate_R_quadrature");
}

BMDecayExponents bm_rates(const Params& p) {
    p.validate();
    const double R = rate_R(p.s_over_lambda);
    return {1.0 + R, 1.0 - R};
}

double bm_exponent(int N, int n, int Np, int np, const Params& p) {
    const auto r = bm_rates(p);
    const double dN = N - Np, dn = n - np;
    return r.total_rate * dN * dN + r.relative_rate * dn * dn;
}

double bm_exponent(const Occupation& a, const Occupation& b, const Params& p) {
    return bm_exponent(a.total(), a.relative(), b.total(), b.relative(), p);
}

double bm_pair_rate(const Occupation& a, const Occupation& b, const Params& p) {
    const auto r = bm_rates(p);
    return r.total_rate * a.total() * b.total() + r.relative_rate * a.relative() * b.relative();
}

DensityMatrix bm_evolve(const DensityMatrix& rho0, double t, const Params& p) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("bm_evolve: t must be finite and >= 0");
    const auto r = bm_rates(p);
    const auto& B = rho0.basis();
    Eigen::MatrixXcd m = rho0.matrix();
    for (std::size_t i = 0; i < B.size(); ++i)
        for (std::size_t j = 0; j < B.size(); ++j) {
            if (i == j) continue;
            const double dN = B.state(i).total() - B.state(j).total();
            const double dn = B.state(i).relative() - B.state(j).relative();
            const double lam = r.total_rate * dN * dN + r.relative_rate * dn * dn;
            m(Eigen::Index(i), Eigen::Index(j)) *= std::exp(-lam * t);
        }
    return DensityMatrix::unchecked(B, std::move(m));
}

}  // namespace decoh
