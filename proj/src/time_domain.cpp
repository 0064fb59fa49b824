#include "decoh/time_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/quadrature.hpp"
#include "decoh/scattering.hpp"
#include "decoh/special.hpp"

namespace decoh {

namespace {

const cplx I(0.0, 1.0);

cplx abar(Site site, cplx k, double phi0, const Scatterers& sc) {
    auto [p, m] = alpha_offshell(k, phi0, sc);
    return site == Site::plus ? p : m;
}

double site_a(Site site, const Scatterers& sc) { return site == Site::plus ? sc.a_plus : sc.a_minus; }

// breakpoints on [a, b] so that each panel spans about half an oscillation
template <class Rate>
std::vector<double> phase_breaks(double a, double b, Rate rate) {
    std::vector<double> br{a};
    double x = a;
    while (x < b) {
        double h = pi / rate(x);
        h = std::min(h, pi / rate(std::min(x + h, b)));
        x = (b - x <= h * 1.0000001) ? b : x + h;
        br.push_back(x);
        if (br.size() > 4000000) throw NumericError("PV integral: oscillation too fast to resolve");
    }
    return br;
}

void check_wave_args(double rho, double t, double k0, const Scatterers& sc) {
    if (!(k0 > 0.0) || !std::isfinite(k0)) throw InvalidInput("wave: k0 must be > 0");
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("wave: t must be >= 0");
    if (!(sc.s > 0.0)) throw InvalidInput("wave: needs s > 0");
    if (!(rho > 1e-6 * sc.s) || !std::isfinite(rho)) throw InvalidInput("wave: point too close to a scatterer");
}

Vec3 site_pos(Site site, double s) { return {0.0, 0.0, site == Site::plus ? 0.5 * s : -0.5 * s}; }

double dist(const Vec3& a, const Vec3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double incident_phase(const Vec3& k0, double s) { return 0.5 * k0[2] * s; }

PartialWave scattered_partial_wave(Site site, double rho, double t, double k0, double phi0, const Scatterers& sc,
                                   const std::vector<BoundState>& bound, const WaveOptions& o) {
    check_wave_args(rho, t, k0, sc);
    PartialWave out;
    if (site_a(site, sc) == 0.0) return out;

    const double E0 = 0.5 * k0 * k0;
    auto theta = [&](double k) { return -0.5 * k * k * t + k * rho; };
    auto dtheta = [&](double k) { return rho - k * t; };
    std::size_t evals = 0;
    // smooth amplitude: F(k) = g(k) e^{i theta(k)}
    auto g = [&](double k) -> cplx {
        ++evals;
        return 2.0 * k * abar(site, k, phi0, sc) / (rho * (k * k - k0 * k0));
    };
    auto F = [&](double k) -> cplx { return g(k) * std::exp(I * theta(k)); };
    // F with one pole factor removed
    auto G = [&](double k) -> cplx {
        ++evals;
        return 2.0 * k * abar(site, k, phi0, sc) * std::exp(I * theta(k)) / (rho * (k + k0));
    };
    auto H = [&](double k) -> cplx {
        ++evals;
        return 2.0 * k * abar(site, k, phi0, sc) * std::exp(I * theta(k)) / (rho * (k - k0));
    };

    double amin = std::numeric_limits<double>::infinity();
    for (double a : {sc.a_plus, sc.a_minus})
        if (a != 0.0) amin = std::min(amin, std::abs(a));
    double K = std::max({4.0 * k0, 8.0 / amin, 8.0 / sc.s, t > 0.0 ? 4.0 * rho / t : 0.0});
    // remainder after two integration-by-parts terms scales like this
    auto tail_est = [&](double k) { return 2.0 / (rho * k * k * k * std::pow(rho + k * t, 2)); };
    for (int i = 0; i < 60 && tail_est(K) > o.tail_tol; ++i) K *= 1.25;
    out.k_cut = K;

    const double w = 0.5 * k0;
    const double delta = std::min(1e-4 * k0, 1e-3 / (std::abs(dtheta(k0)) + 2.0 * sc.s + 1.0));
    auto rate_k = [&](double k) { return std::abs(dtheta(k)) + 2.0 * sc.s + 1.0; };

    quad::Options qo;
    qo.rel_tol = o.rel_tol;
    qo.abs_tol = o.abs_tol;
    qo.max_intervals = 8000000;
    cplx pv = 0.0;
    auto direct = [&](double a, double b) {
        pv += quad::integrate_or_throw<cplx>(F, phase_breaks(a, b, rate_k), qo, "PV integral");
    };
    direct(-K, -k0 - w);
    direct(-k0 + w, k0 - w);
    direct(k0 + w, K);

    // symmetric folding about each pole; the sliver [0, delta] is taken as a
    // central difference of the regular factor
    auto fold_rate = [&](double kc) {
        return [&, kc](double u) { return std::max(rate_k(kc + u), rate_k(kc - u)); };
    };
    auto foldG = [&](double u) -> cplx { return (G(k0 + u) - G(k0 - u)) / u; };
    auto foldH = [&](double u) -> cplx { return (H(-k0 + u) - H(-k0 - u)) / u; };
    pv += quad::integrate_or_throw<cplx>(foldG, phase_breaks(delta, w, fold_rate(k0)), qo, "PV pole fold");
    pv += quad::integrate_or_throw<cplx>(foldH, phase_breaks(delta, w, fold_rate(-k0)), qo, "PV pole fold");
    pv += G(k0 + delta) - G(k0 - delta);
    pv += H(-k0 + delta) - H(-k0 - delta);

    // tails beyond +-K by integration by parts
    auto h0 = [&](double k) -> cplx { return g(k) / (I * dtheta(k)); };
    auto h1 = [&](double k) -> cplx {
        const double d = 1e-3 * std::abs(k);
        return (h0(k + d) - h0(k - d)) / (2.0 * d) / (I * dtheta(k));
    };
    pv += -std::exp(I * theta(K)) * (h0(K) - h1(K));
    pv += std::exp(I * theta(-K)) * (h0(-K) - h1(-K));

    out.pv_part = I / (2.0 * pi) * pv;
    out.pole_part = std::exp(-I * E0 * t) *
                    (abar(site, k0, phi0, sc) * std::exp(I * k0 * rho) +
                     abar(site, -k0, phi0, sc) * std::exp(-I * k0 * rho)) /
                    (2.0 * rho);

    // residues of the integrand at the bound-state poles k = iq
    const double a_s = site_a(site, sc);
    const double a_o = site == Site::plus ? sc.a_minus : sc.a_plus;
    const cplx ep = std::exp(I * (site == Site::plus ? phi0 : -phi0));
    for (const auto& b : bound) {
        const double q = b.q;
        const cplx N = (1.0 - a_o * q) * ep - (a_o / sc.s) * std::exp(-q * sc.s) * std::conj(ep);
        const cplx dL = lambda_det_derivative(I * q, sc);
        out.bound_part += 2.0 * I * q * std::exp(I * 0.5 * q * q * t) * a_s * N * std::exp(-q * rho) /
                          (rho * (-(q * q + k0 * k0)) * dL);
    }
    out.evaluations = evals;
    return out;
}

PartialWave scattered_partial_wave(Site site, double rho, double t, double k0, double phi0, const Scatterers& sc,
                                   const WaveOptions& o) {
    return scattered_partial_wave(site, rho, t, k0, phi0, sc, find_bound_states(sc), o);
}

cplx plane_wave(const Vec3& r, double t, const Vec3& k0) {
    const double kk = k0[0] * k0[0] + k0[1] * k0[1] + k0[2] * k0[2];
    return std::exp(I * (k0[0] * r[0] + k0[1] * r[1] + k0[2] * r[2] - 0.5 * kk * t));
}

cplx evolve_wave(const Vec3& r, double t, const Vec3& k0v, const Scatterers& sc, const WaveOptions& o) {
    const double k0 = norm3(k0v);
    const double phi0 = incident_phase(k0v, sc.s);
    const auto bound = find_bound_states(sc);
    cplx psi = plane_wave(r, t, k0v);
    for (Site site : {Site::plus, Site::minus}) {
        if (site_a(site, sc) == 0.0) continue;
        psi -= scattered_partial_wave(site, dist(r, site_pos(site, sc.s)), t, k0, phi0, sc, bound, o).total();
    }
    return psi;
}

cplx evolve_wave(const Vec3& r, double t, const Vec3& k0, const Occupation& occ, const Params& p,
                 const WaveOptions& o) {
    p.require_positive_separation("evolve_wave");
    return evolve_wave(r, t, k0, Scatterers::from(occ, p), o);
}

cplx envelope_partial_wave(Site site, double rho, double t, double k0, double phi0, const Scatterers& sc) {
    check_wave_args(rho, t, k0, sc);
    if (site_a(site, sc) == 0.0 || k0 * t < rho) return 0.0;
    return std::exp(-I * 0.5 * k0 * k0 * t) * abar(site, k0, phi0, sc) * std::exp(I * k0 * rho) / rho;
}

cplx asymptotic_wave(const Vec3& r, double t, const Vec3& k0v, const Scatterers& sc) {
    const double k0 = norm3(k0v);
    const double phi0 = incident_phase(k0v, sc.s);
    cplx psi = plane_wave(r, t, k0v);
    for (Site site : {Site::plus, Site::minus})
        psi -= envelope_partial_wave(site, dist(r, site_pos(site, sc.s)), t, k0, phi0, sc);
    return psi;
}

cplx asymptotic_wave(const Vec3& r, double t, const Vec3& k0, const Occupation& occ, const Params& p) {
    p.require_positive_separation("asymptotic_wave");
    return asymptotic_wave(r, t, k0, Scatterers::from(occ, p));
}

cplx bound_state_part(const Vec3& r, double t, const Vec3& k0v, const Scatterers& sc) {
    const double k0 = norm3(k0v);
    const double cosi = k0v[2] / k0;
    cplx sum = 0.0;
    for (const auto& b : find_bound_states(sc)) {
        const cplx c = bound_overlap_c(k0, cosi, b, sc);
        sum += c * bound_state_value(b, dist(r, site_pos(Site::plus, sc.s)), dist(r, site_pos(Site::minus, sc.s))) *
               std::exp(I * 0.5 * b.q * b.q * t);
    }
    return sum;
}

std::vector<double> bound_state_populations(const Vec3& k0v, const Scatterers& sc) {
    const double k0 = norm3(k0v);
    std::vector<double> out;
    for (const auto& b : find_bound_states(sc)) out.push_back(std::norm(bound_overlap_c(k0, k0v[2] / k0, b, sc)));
    return out;
}

double ortho_residual(const Vec3& kv, const Vec3& kpv, const Scatterers& sc) {
    if (sc.empty()) return 0.0;
    const double k = norm3(kv), kp = norm3(kpv);
    const auto a = solve_alphas(k, kv[2] / k, sc);
    const auto b = solve_alphas(kp, kpv[2] / kp, sc);
    const double s = sc.s;
    const cplx ap = std::conj(a.alpha_plus), am = std::conj(a.alpha_minus);
    const cplx bp = b.alpha_plus, bm = b.alpha_minus;
    const cplx lhs = 0.5 * (k + kp) * (ap * bp + am * bm) +
                     (std::exp(I * kp * s) - std::exp(-I * k * s)) / (2.0 * I * s) * (ap * bm + am * bp);
    const cplx ef = std::exp(I * a.incident_phase()), eg = std::exp(I * b.incident_phase());
    const cplx rhs = 0.5 * I * (bp * std::conj(ef) - ap * eg + bm * ef - am * std::conj(eg));
    return std::abs(lhs - rhs);
}

double ortho_residual(const Vec3& k, const Vec3& kp, const Occupation& occ, const Params& p) {
    p.require_positive_separation("ortho_residual");
    return ortho_residual(k, kp, Scatterers::from(occ, p));
}

std::vector<double> scat_norm_growth(const std::vector<double>& ts, const Vec3& k0v, const Scatterers& sc) {
    const double k0 = norm3(k0v);
    if (!(k0 > 0.0)) throw InvalidInput("scat_norm_growth: k0 must be > 0");
    std::vector<double> out;
    if (sc.empty()) return std::vector<double>(ts.size(), 0.0);
    const auto sol = solve_alphas(k0, k0v[2] / k0, sc);
    const cplx ap = sol.alpha_plus, am = sol.alpha_minus;
    const double s = sc.s;
    double prev = -1.0;
    for (double t : ts) {
        if (!(t > prev)) throw InvalidInput("scat_norm_growth: t grid must be increasing");
        prev = t;
        const double R = k0 * t;
        if (!(R > s)) throw InvalidInput("scat_norm_growth: front has not passed the second site yet");
        // prolate spheroidal coordinates sigma = (r+ + r-)/s, tau = (r+ - r-)/s:
        // d^3r/(r+ r-) = (s/2) dsigma dtau dphi; inside both fronts sigma + |tau| <= 2R/s,
        // inside one front only the other distance is unrestricted
        const double X = 2.0 * R / s;
        quad::Options qo;
        qo.rel_tol = 1e-11;
        auto inner = [&](double tau) {
            // integrand times r+ r-: |a+|^2 r-/r+ + |a-|^2 r+/r- + 2 Re(a+ a-* e^{ik0 s tau}) over the joint region,
            // single-front pieces integrate in closed form in sigma since the other step is 1
            auto f = [&](double sig) {
                const double rp = sig + tau, rm = sig - tau;
                double v = 0.0;
                if (0.5 * s * rp <= R) v += std::norm(ap) * rm / rp;
                if (0.5 * s * rm <= R) v += std::norm(am) * rp / rm;
                if (0.5 * s * rp <= R && 0.5 * s * rm <= R)
                    v += 2.0 * (ap * std::conj(am) * std::exp(I * k0 * s * tau)).real();
                return v;
            };
            std::vector<double> br{1.0, X - std::abs(tau), X + std::abs(tau)};
            return quad::integrate_or_throw<double>(f, br, qo, "scat_norm_growth");
        };
        std::vector<double> tb{-1.0, 0.0, 1.0};
        qo.max_panel = std::min(1.0, pi / (2.0 * k0 * s + 1.0));
        const double v = quad::integrate_or_throw<double>(inner, tb, qo, "scat_norm_growth");
        out.push_back(2.0 * pi * 0.5 * s * v);
    }
    return out;
}

std::vector<double> scat_norm_growth(const std::vector<double>& ts, const Vec3& k0, const Occupation& occ,
                                     const Params& p) {
    p.require_positive_separation("scat_norm_growth");
    return scat_norm_growth(ts, k0, Scatterers::from(occ, p));
}

double envelope_norm_slope(const Vec3& k0v, const Scatterers& sc) {
    const double k0 = norm3(k0v);
    if (sc.empty()) return 0.0;
    const auto sol = solve_alphas(k0, k0v[2] / k0, sc);
    const cplx ap = sol.alpha_plus, am = sol.alpha_minus;
    return 4.0 * pi * k0 *
           (std::norm(ap) + std::norm(am) + 2.0 * sinc(k0 * sc.s) * (ap * std::conj(am)).real());
}

cplx saddle_contribution(Site site, double rho, double t, double k0, double phi0, const Scatterers& sc) {
    check_wave_args(rho, t, k0, sc);
    if (!(t > 0.0)) throw InvalidInput("saddle_contribution: t must be > 0");
    const double ksp = rho / t;
    if (std::abs(ksp - k0) < 1e-3 * k0)
        throw FrontProximityError("saddle_contribution: stationary point within 1e-3 k0 of the pole at k0");
    if (site_a(site, sc) == 0.0) return 0.0;
    const cplx ab = abar(site, ksp, phi0, sc);
    return std::sqrt(2.0 * pi) / pi * std::exp(I * 0.25 * pi) * std::pow(t, -1.5) *
           std::exp(I * rho * rho / (2.0 * t)) * ab / (ksp * ksp - k0 * k0);
}

cplx saddle_contribution(Site site, double rho, double t, double k0, double incidence_cos, const Occupation& occ,
                         const Params& p) {
    p.require_positive_separation("saddle_contribution");
    const Scatterers sc = Scatterers::from(occ, p);
    return saddle_contribution(site, rho, t, k0, 0.5 * k0 * sc.s * incidence_cos, sc);
}

}  // namespace decoh
