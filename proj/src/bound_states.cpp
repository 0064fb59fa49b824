#include "decoh/bound_states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/scattering.hpp"
#include "decoh/special.hpp"

namespace decoh {

namespace {

const cplx I(0.0, 1.0);

void check(const Scatterers& sc) {
    if (!std::isfinite(sc.a_plus) || !std::isfinite(sc.a_minus)) throw InvalidInput("scattering lengths must be finite");
    if (!(sc.s > 0.0) || !std::isfinite(sc.s)) throw InvalidInput("bound states need s > 0");
}

double bisect(const Scatterers& sc, double lo, double hi) {
    double flo = bound_root_function(lo, sc);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bound_root_function(mid, sc);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// positive roots u of h; both a nonzero
std::vector<double> roots_two(const Scatterers& sc) {
    const double bp = sc.s / sc.a_plus, bm = sc.s / sc.a_minus;
    const double u_max = std::max(10.0, 2.0 * sc.s / std::min(std::abs(sc.a_plus), std::abs(sc.a_minus)) + 10.0);
    std::vector<double> g;
    const int n = 512;
    for (int i = 0; i < n / 2; ++i) g.push_back(1e-10 * std::pow(u_max / 1e-10, double(i) / (n / 2 - 1)));
    for (int i = 1; i <= n / 2; ++i) g.push_back(u_max * double(i) / (n / 2));
    for (double b : {bp, bm})
        if (b > 0.0 && b < u_max) {
            // the product term changes sign here; put grid points either side
            g.push_back(b);
            g.push_back(b * (1.0 - 1e-9));
            g.push_back(b * (1.0 + 1e-9));
        }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    std::vector<double> r;
    double prev = bound_root_function(g[0], sc);
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double cur = bound_root_function(g[i], sc);
        if (cur == 0.0) {
            r.push_back(g[i]);
        } else if (prev != 0.0 && (cur < 0.0) != (prev < 0.0)) {
            r.push_back(bisect(sc, g[i - 1], g[i]));
        }
        prev = cur;
    }
    return r;
}

BoundState make_state(double q, const Scatterers& sc) {
    BoundState b;
    b.q = q;
    const cplx dL = lambda_det_derivative(I * q, sc);
    b.chi_sq = -I / dL;
    const cplx chi = std::sqrt(b.chi_sq);
    const double ap = sc.a_plus, am = sc.a_minus;
    const double argp = q * ap * (1.0 - q * am), argm = q * am * (1.0 - q * ap);
    b.complex_coefficients = (ap != 0.0 && argp < 0.0) || (am != 0.0 && argm < 0.0);
    const double r2pi = std::sqrt(2.0 * pi);
    b.w_plus = ap != 0.0 ? chi / r2pi * std::sqrt(cplx(argp)) : cplx(0.0);
    b.w_minus = am != 0.0 ? chi / r2pi * std::sqrt(cplx(argm)) : cplx(0.0);
    if (ap != 0.0 && am != 0.0) {
        // the square roots fix w- only up to sign; the contact condition at the + site fixes it
        const double e = std::exp(-q * sc.s);
        const cplx r1 = (1.0 - ap * q) * b.w_plus + (ap / sc.s) * e * b.w_minus;
        const cplx r2 = (1.0 - ap * q) * b.w_plus - (ap / sc.s) * e * b.w_minus;
        if (std::abs(r2) < std::abs(r1)) b.w_minus = -b.w_minus;
    }
    return b;
}

}  // namespace

double bound_root_function(double u, const Scatterers& sc) {
    // one empty site: the pole of a single scatterer, u = s/a
    if (sc.a_minus == 0.0 && sc.a_plus != 0.0) return u - sc.s / sc.a_plus;
    if (sc.a_plus == 0.0 && sc.a_minus != 0.0) return u - sc.s / sc.a_minus;
    return (u - sc.s / sc.a_minus) * (u - sc.s / sc.a_plus) - std::exp(-2.0 * u);
}

BoundStateCount count_bound_states_detail(const Scatterers& sc) {
    check(sc);
    const double ap = sc.a_plus, am = sc.a_minus;
    if (ap == 0.0 && am == 0.0) return {0, false};
    if (ap == 0.0 || am == 0.0) return {(ap + am) > 0.0 ? 1 : 0, false};
    const double prod = ap * am / (sc.s * sc.s);
    if (std::abs(prod - 1.0) <= 1e-12) return {1, true};
    if (prod < 1.0) {
        if (ap > 0.0 && am > 0.0) return {2, false};
        if (ap < 0.0 && am < 0.0) return {0, false};
    }
    return {1, false};
}

int count_bound_states(const Scatterers& sc) { return count_bound_states_detail(sc).count; }

int count_bound_states(const Occupation& occ, const Params& p) {
    p.require_positive_separation("count_bound_states");
    return count_bound_states(Scatterers::from(occ, p));
}

std::vector<BoundState> find_bound_states(const Scatterers& sc) {
    check(sc);
    const auto expected = count_bound_states_detail(sc);
    std::vector<BoundState> out;
    const double ap = sc.a_plus, am = sc.a_minus;
    if (ap == 0.0 && am == 0.0) return out;
    if (ap == 0.0 || am == 0.0) {
        const double a = ap + am;
        if (a > 0.0) out.push_back(make_state(1.0 / a, sc));
        return out;
    }
    auto roots = roots_two(sc);
    if (expected.tangency) {
        // drop the spurious root pinned at u = 0
        roots.erase(std::remove_if(roots.begin(), roots.end(), [](double u) { return u < 1e-8; }), roots.end());
    }
    if (int(roots.size()) != expected.count)
        throw NumericError("find_bound_states: found " + std::to_string(roots.size()) + " roots, expected " +
                           std::to_string(expected.count) + " (s/a+ = " + std::to_string(sc.s / ap) +
                           ", s/a- = " + std::to_string(sc.s / am) + ")");
    for (double u : roots) out.push_back(make_state(u / sc.s, sc));
    return out;
}

std::vector<BoundState> find_bound_states(const Occupation& occ, const Params& p) {
    p.require_positive_separation("find_bound_states");
    return find_bound_states(Scatterers::from(occ, p));
}

double bound_state_norm(const BoundState& b, const Scatterers& sc) {
    return 2.0 * pi / b.q *
           (std::norm(b.w_plus) + std::norm(b.w_minus) +
            2.0 * (b.w_plus * std::conj(b.w_minus)).real() * std::exp(-b.q * sc.s));
}

cplx bound_state_value(const BoundState& b, double rp, double rm) {
    return b.w_plus * std::exp(-b.q * rp) / rp + b.w_minus * std::exp(-b.q * rm) / rm;
}

cplx bound_overlap_c(double k0, double incidence_cos, const BoundState& b, const Scatterers& sc) {
    if (!(k0 > 0.0)) throw InvalidInput("bound_overlap_c: k0 must be > 0");
    const double phi = 0.5 * k0 * sc.s * incidence_cos;
    const cplx e = std::exp(I * phi);
    return 4.0 * pi / (b.q * b.q + k0 * k0) * (std::conj(b.w_plus) * e + std::conj(b.w_minus) * std::conj(e));
}

cplx bound_overlap_c(double k0, double incidence_cos, const BoundState& b, const Params& p) {
    // the state must have been built from the same parameters; only s enters here
    Scatterers sc{0.0, 0.0, p.s_over_lambda};
    return bound_overlap_c(k0, incidence_cos, b, sc);
}

}  // namespace decoh
