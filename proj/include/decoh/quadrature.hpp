#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature.
// Works for real and complex integrands; the caller may seed breakpoints and
// cap the panel width (oscillatory integrands).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "decoh/errors.hpp"

namespace decoh::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_intervals = 200000;
    double max_panel = 0.0;  // 0: no cap
};

template <class T>
struct Result {
    T value{};
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
    bool converged = false;
};

namespace detail {

inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// gauss weights for xgk[1], xgk[3], xgk[5], xgk[7]
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
    double a, b;
    T val;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class T, class F>
Panel<T> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const T fc = f(c);
    T k = fc * wgk[7];
    T g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const T s = f(c - dx) + f(c + dx);
        k += wgk[j] * s;
        if (j % 2 == 1) g += wg[j / 2] * s;
    }
    k *= h;
    g *= h;
    return {a, b, k, std::abs(k - g)};
}

}  // namespace detail

template <class T, class F>
Result<T> integrate(F&& f, std::vector<double> breaks, const Options& opt = {}) {
    if (breaks.size() < 2) throw InvalidInput("quadrature needs at least two breakpoints");
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::priority_queue<detail::Panel<T>> heap;
    Result<T> res;
    T total{};
    double err = 0.0;
    auto push = [&](double a, double b) {
        auto p = detail::gk15<T>(f, a, b);
        res.evaluations += 15;
        total += p.val;
        err += p.err;
        heap.push(p);
    };
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        std::size_t n = 1;
        if (opt.max_panel > 0.0) n = std::max<std::size_t>(1, std::size_t(std::ceil((b - a) / opt.max_panel)));
        for (std::size_t j = 0; j < n; ++j) push(a + (b - a) * double(j) / double(n), a + (b - a) * double(j + 1) / double(n));
    }

    std::vector<detail::Panel<T>> frozen;  // too narrow to split further
    std::size_t since_resum = 0;
    while (!heap.empty()) {
        if (err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
            res.converged = true;
            break;
        }
        if (heap.size() + frozen.size() >= opt.max_intervals) break;
        auto p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b) || (p.b - p.a) < 1e-15 * std::max(std::abs(p.a), std::abs(p.b))) {
            frozen.push_back(p);
            continue;
        }
        total -= p.val;
        err -= p.err;
        push(p.a, m);
        push(m, p.b);
        if (++since_resum == 512) {
            // running sums drift; rebuild them now and then
            since_resum = 0;
            auto copy = heap;
            total = T{};
            err = 0.0;
            for (auto& q : frozen) total += q.val, err += q.err;
            while (!copy.empty()) total += copy.top().val, err += copy.top().err, copy.pop();
        }
    }
    // final exact resum
    res.intervals = heap.size() + frozen.size();
    T sum{};
    double e = 0.0;
    for (auto& q : frozen) sum += q.val, e += q.err;
    while (!heap.empty()) sum += heap.top().val, e += heap.top().err, heap.pop();
    res.value = sum;
    res.abs_error = e;
    if (!res.converged) res.converged = e <= std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
    return res;
}

template <class T, class F>
T integrate_or_throw(F&& f, std::vector<double> breaks, const Options& opt, const std::string& context) {
    auto r = integrate<T>(std::forward<F>(f), std::move(breaks), opt);
    if (!r.converged)
        throw NumericError(context + ": quadrature did not converge (error estimate " + std::to_string(r.abs_error) +
                           ", " + std::to_string(r.intervals) + " intervals)");
    return r.value;
}

}  // namespace decoh::quad
