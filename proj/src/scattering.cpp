#include "decoh/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/special.hpp"

namespace decoh {

namespace {

const cplx I(0.0, 1.0);

struct Coeffs {
    cplx Ap, Am, Bp, Bm, L;
};

Coeffs coeffs(cplx k, const Scatterers& sc) {
    Coeffs c;
    c.Ap = 1.0 + I * sc.a_plus * k;
    c.Am = 1.0 + I * sc.a_minus * k;
    if (sc.s > 0.0) {
        const cplx e = std::exp(I * k * sc.s);
        c.Bp = (sc.a_plus / sc.s) * e;
        c.Bm = (sc.a_minus / sc.s) * e;
    } else if (sc.a_plus != 0.0 && sc.a_minus != 0.0) {
        throw InvalidInput("two occupied sites need s > 0");
    }
    c.L = c.Ap * c.Am - c.Bp * c.Bm;
    return c;
}

void check_lambda(const Coeffs& c, double where) {
    if (std::abs(c.L) < 1e-10 * std::max(1.0, std::abs(c.Ap * c.Am)))
        throw NearSingularError("Lambda(k) nearly vanishes at k = " + std::to_string(where), where);
}

}  // namespace

cplx lambda_det(cplx k, const Scatterers& sc) { return coeffs(k, sc).L; }

cplx lambda_det_derivative(cplx k, const Scatterers& sc) {
    // d/dk [(1 + i a+ k)(1 + i a- k) - (a+ a-/s^2) e^{2iks}]
    const double ap = sc.a_plus, am = sc.a_minus;
    cplx d = I * ap * (1.0 + I * am * k) + I * am * (1.0 + I * ap * k);
    if (sc.s > 0.0) d -= (ap * am / (sc.s * sc.s)) * 2.0 * I * sc.s * std::exp(2.0 * I * k * sc.s);
    return d;
}

std::pair<cplx, cplx> alpha_offshell(cplx k, double phi, const Scatterers& sc) {
    if (sc.empty()) return {0.0, 0.0};
    const Coeffs c = coeffs(k, sc);
    check_lambda(c, k.real());
    const cplx ep = std::exp(I * phi), em = std::conj(ep);
    return {sc.a_plus * (c.Am * ep - c.Bm * em) / c.L, sc.a_minus * (c.Ap * em - c.Bp * ep) / c.L};
}

ScatteringSolution solve_alphas(double k, double incidence_cos, const Scatterers& sc) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidInput("solve_alphas: k must be > 0");
    if (!(incidence_cos >= -1.0 && incidence_cos <= 1.0)) throw InvalidInput("solve_alphas: incidence_cos outside [-1,1]");
    if (!std::isfinite(sc.a_plus) || !std::isfinite(sc.a_minus) || !std::isfinite(sc.s))
        throw InvalidInput("solve_alphas: non-finite scatterer data");
    ScatteringSolution r;
    r.k = k;
    r.incidence_cos = incidence_cos;
    r.sc = sc;
    const Coeffs c = coeffs(k, sc);
    r.A_plus = c.Ap;
    r.A_minus = c.Am;
    r.B_plus = c.Bp;
    r.B_minus = c.Bm;
    r.Lambda = c.L;
    if (sc.empty()) return r;
    check_lambda(c, k);
    auto [ap, am] = alpha_offshell(k, r.incident_phase(), sc);
    r.alpha_plus = ap;
    r.alpha_minus = am;
    return r;
}

ScatteringSolution solve_alphas(double k, double incidence_cos, const Occupation& occ, const Params& p) {
    p.require_positive_separation("solve_alphas");
    return solve_alphas(k, incidence_cos, Scatterers::from(occ, p));
}

double linear_system_residual(const ScatteringSolution& s) {
    const cplx ep = std::exp(I * s.incident_phase());
    const double r1 = std::abs(s.A_plus * s.alpha_plus + s.B_plus * s.alpha_minus - s.sc.a_plus * ep);
    const double r2 = std::abs(s.A_minus * s.alpha_minus + s.B_minus * s.alpha_plus - s.sc.a_minus * std::conj(ep));
    return std::max(r1 / std::max(1.0, std::abs(s.sc.a_plus)), r2 / std::max(1.0, std::abs(s.sc.a_minus)));
}

cplx scattering_amplitude(const ScatteringSolution& s, double out_cos) {
    const double h = 0.5 * s.k * s.sc.s * out_cos;
    return -(s.alpha_plus * std::exp(-I * h) + s.alpha_minus * std::exp(I * h));
}

cplx forward_rate_A(const ScatteringSolution& s) { return -I * scattering_amplitude(s, s.incidence_cos); }

cplx pair_kernel_B(const ScatteringSolution& s, const ScatteringSolution& t) {
    if (s.k != t.k || s.incidence_cos != t.incidence_cos || s.sc.s != t.sc.s)
        throw InvalidInput("pair_kernel_B: solutions must share k, incidence and separation");
    const double c = sinc(s.k * s.sc.s);
    const cplx bp = std::conj(t.alpha_plus), bm = std::conj(t.alpha_minus);
    return s.k * (s.alpha_plus * bp + s.alpha_minus * bm + c * (s.alpha_plus * bm + s.alpha_minus * bp));
}

cplx pair_kernel_B(double k, double incidence_cos, const Occupation& occ, const Occupation& occ_prime,
                   const Params& p) {
    return pair_kernel_B(solve_alphas(k, incidence_cos, occ, p), solve_alphas(k, incidence_cos, occ_prime, p));
}

LindbladFactors lindblad_factors(const ScatteringSolution& s) {
    // k [[1, c], [c, 1]] = L L^dagger with L = sqrt(k) [[1, 0], [c, sqrt(1 - c^2)]]
    const double c = sinc(s.k * s.sc.s);
    const double rk = std::sqrt(s.k);
    return {rk * (s.alpha_plus + c * s.alpha_minus), rk * std::sqrt(std::max(0.0, 1.0 - c * c)) * s.alpha_minus};
}

LindbladFactors lindblad_factors(double k, double incidence_cos, const Occupation& occ, const Params& p) {
    return lindblad_factors(solve_alphas(k, incidence_cos, occ, p));
}

}  // namespace decoh
