#include "decoh/exact_rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/quadrature.hpp"
#include "decoh/special.hpp"

namespace decoh {

namespace {

const cplx I(0.0, 1.0);

struct Side {
    cplx Ap, Am, Bp, Bm, L;
};

Side side(double z, double ap, double am, double s) {
    Side r;
    r.Ap = 1.0 + I * ap * z;
    r.Am = 1.0 + I * am * z;
    const cplx e = std::exp(I * z * s);
    r.Bp = (ap / s) * e;
    r.Bm = (am / s) * e;
    r.L = r.Ap * r.Am - r.Bp * r.Bm;
    if (std::abs(r.L) < 1e-10 * std::max(1.0, std::abs(r.Ap * r.Am)))
        throw NearSingularError("Lambda vanishes on the real axis at z = " + std::to_string(z), z);
    return r;
}

quad::Options radial_options(const Params& p, const RateOptions& o) {
    quad::Options q;
    q.rel_tol = o.rel_tol;
    q.abs_tol = o.abs_tol;
    q.max_panel = std::min(o.z_max, pi / (4.0 * p.s_over_lambda));
    return q;
}

void check_options(const RateOptions& o) {
    if (!(o.rel_tol > 0.0 && o.rel_tol <= 1e-2)) throw InvalidInput("rel_tol must lie in (0, 1e-2]");
    if (!(o.abs_tol >= 0.0)) throw InvalidInput("abs_tol must be >= 0");
    if (!(o.z_max > 0.0)) throw InvalidInput("z_max must be > 0");
}

}  // namespace

cplx gamma_exact(const Occupation& n, const Occupation& m, const Params& p, const RateOptions& o) {
    p.require_positive_separation("gamma_exact");
    check_options(o);
    if (n.empty() || m.empty()) return 0.0;
    const double a = p.a_over_lambda, s = p.s_over_lambda;
    const double np = n.n_plus(), nm = n.n_minus(), mp = m.n_plus(), mm = m.n_minus();

    // angle-averaged numerator over a^2; primed coefficients enter conjugated
    auto f = [&](double z) -> cplx {
        const Side u = side(z, a * np, a * nm, s);
        const Side v = side(z, a * mp, a * mm, s);
        const double c = sinc(z * s);
        const cplx Ap = std::conj(v.Ap), Am = std::conj(v.Am), Bp = std::conj(v.Bp), Bm = std::conj(v.Bm);
        cplx num = np * mp * (u.Am * Am + u.Bm * Bm - c * (u.Am * Bm + u.Bm * Am));
        num += nm * mm * (u.Ap * Ap + u.Bp * Bp - c * (u.Ap * Bp + u.Bp * Ap));
        num += c * np * mm * (c * (u.Am * Ap + u.Bm * Bp) - u.Am * Bp - u.Bm * Ap);
        num += c * nm * mp * (c * (u.Ap * Am + u.Bp * Bm) - u.Ap * Bm - u.Bp * Am);
        return 4.0 * std::exp(-z * z) * z * z * z * num / (u.L * std::conj(v.L));
    };
    cplx g = quad::integrate_or_throw<cplx>(f, {0.0, o.z_max}, radial_options(p, o), "gamma_exact");
    if (n == m) g = g.real();
    return g;
}

cplx decoherence_D(const Occupation& n, const Occupation& m, const Params& p, const RateOptions& o) {
    if (n == m) {
        p.require_positive_separation("decoherence_D");
        return 0.0;
    }
    return gamma_exact(n, n, p, o) + gamma_exact(m, m, p, o) - 2.0 * gamma_exact(n, m, p, o);
}

double frequency_shift_omega(const Occupation& n, const Params& p, const RateOptions& o) {
    p.require_positive_separation("frequency_shift_omega");
    check_options(o);
    if (n.empty()) return 0.0;
    const double a = p.a_over_lambda, s = p.s_over_lambda;
    if (a == 0.0) throw InvalidInput("frequency_shift_omega: Omega/Gamma diverges like 1/a; undefined at a = 0");
    const double np = n.n_plus(), nm = n.n_minus();
    auto f = [&](double z) -> double {
        const Side u = side(z, a * np, a * nm, s);
        const double c = sinc(z * s);
        const cplx fwd = (np * (u.Am - c * u.Bm) + nm * (u.Ap - c * u.Bp)) / u.L;
        return z * z * std::exp(-z * z) * fwd.real();
    };
    const double v = quad::integrate_or_throw<double>(f, {0.0, o.z_max}, radial_options(p, o), "frequency_shift_omega");
    return 4.0 * v / a;
}

RateResult rate_result(const Occupation& n, const Occupation& m, const Params& p, const RateOptions& o) {
    RateResult r;
    r.gamma = gamma_exact(n, m, p, o);
    r.D = n == m ? cplx(0.0) : gamma_exact(n, n, p, o) + gamma_exact(m, m, p, o) - 2.0 * r.gamma;
    r.omega = n == m ? 0.0 : frequency_shift_omega(n, p, o) - frequency_shift_omega(m, p, o);
    return r;
}

RateTable::RateTable(const FockBasis& basis, const Params& p, FrequencyShift fs, const RateOptions& o)
    : basis_(basis), p_(p), fs_(fs) {
    p.require_positive_separation("RateTable");
    const auto d = Eigen::Index(basis.size());
    g_ = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j) {
            const cplx g = gamma_exact(basis.state(std::size_t(i)), basis.state(std::size_t(j)), p, o);
            g_(i, j) = g;
            g_(j, i) = std::conj(g);
        }
    omega_.assign(basis.size(), 0.0);
    if (fs == FrequencyShift::include)
        for (std::size_t i = 0; i < basis.size(); ++i) omega_[i] = frequency_shift_omega(basis.state(i), p, o);
}

cplx RateTable::D(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    return gamma(i, i) + gamma(j, j) - 2.0 * gamma(i, j);
}

DensityMatrix exact_evolve(const DensityMatrix& rho0, double t, const RateTable& tab) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("exact_evolve: t must be finite and >= 0");
    if (rho0.basis().max_total() > tab.basis().max_total())
        throw InvalidInput("exact_evolve: rate table basis smaller than density matrix basis");
    const auto& B = rho0.basis();
    std::vector<std::size_t> idx(B.size());
    for (std::size_t i = 0; i < B.size(); ++i) idx[i] = tab.basis().index(B.state(i));
    Eigen::MatrixXcd m = rho0.matrix();
    for (std::size_t i = 0; i < B.size(); ++i)
        for (std::size_t j = 0; j < B.size(); ++j) {
            if (i == j) continue;
            const double dw = tab.omega(idx[i]) - tab.omega(idx[j]);
            m(Eigen::Index(i), Eigen::Index(j)) *= std::exp(t * (-I * dw - tab.D(idx[i], idx[j])));
        }
    return DensityMatrix::unchecked(B, std::move(m));
}

DensityMatrix exact_evolve(const DensityMatrix& rho0, double t, const Params& p, FrequencyShift fs,
                           const RateOptions& o) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("exact_evolve: t must be finite and >= 0");
    return exact_evolve(rho0, t, RateTable(rho0.basis(), p, fs, o));
}

cplx finite_N_factor(cplx D, double dw, double t, long long N_B) {
    if (N_B < 1) throw InvalidInput("finite_N_factor: N_B must be >= 1");
    const cplx x = t * (-I * dw - D);
    if (N_B == 1) return 1.0 + x;
    const cplx w = x / double(N_B);
    // log(1 + w) without cancellation for small |w|
    const cplx l(0.5 * std::log1p(2.0 * w.real() + std::norm(w)), std::atan2(w.imag(), 1.0 + w.real()));
    return std::exp(double(N_B) * l);
}

cplx finite_N_factor(const Occupation& n, const Occupation& m, const Params& p, double t, long long N_B,
                     const RateOptions& o) {
    const RateResult r = rate_result(n, m, p, o);
    return finite_N_factor(r.D, r.omega, t, N_B);
}

}  // namespace decoh
