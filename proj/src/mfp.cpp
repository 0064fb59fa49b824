#include "decoh/mfp.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "decoh/errors.hpp"
#include "decoh/quadrature.hpp"
#include "decoh/special.hpp"

namespace decoh {

namespace {

constexpr double k_max = 6.5;
constexpr double s_resolvable = 5e4;
constexpr std::size_t ws_size = 4000;

void gsl_quiet() {
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

struct Workspace {
    gsl_integration_workspace* w = gsl_integration_workspace_alloc(ws_size);
    gsl_integration_workspace* cyc = gsl_integration_workspace_alloc(ws_size);
    ~Workspace() {
        gsl_integration_workspace_free(w);
        gsl_integration_workspace_free(cyc);
    }
};

double call(double x, void* p) { return (*static_cast<std::function<double(double)>*>(p))(x); }

void check_status(int st, const char* what) {
    if (st != GSL_SUCCESS && st != GSL_EROUND)
        throw NumericError(std::string(what) + ": quadrature failed (" + gsl_strerror(st) + ")");
}

// int_a^b f(x) trig(omega x) dx
double qawo(std::function<double(double)> f, double a, double b, double omega, bool sine, const MfpOptions& o,
            const char* what) {
    if (!(b > a)) return 0.0;
    if (omega * (b - a) < 8.0 * pi) {
        // a few oscillations at most: plain adaptive rule copes and avoids qawo's extrapolation
        quad::Options qo;
        qo.rel_tol = o.rel_tol;
        qo.abs_tol = o.abs_tol;
        auto g = [&](double x) { return f(x) * (sine ? std::sin(omega * x) : std::cos(omega * x)); };
        return quad::integrate_or_throw<double>(g, {a, b}, qo, what);
    }
    gsl_quiet();
    Workspace ws;
    std::unique_ptr<gsl_integration_qawo_table, decltype(&gsl_integration_qawo_table_free)> tab(
        gsl_integration_qawo_table_alloc(omega, b - a, sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 30),
        &gsl_integration_qawo_table_free);
    gsl_function gf{&call, &f};
    double r = 0.0, err = 0.0;
    check_status(gsl_integration_qawo(&gf, a, o.abs_tol, o.rel_tol, ws_size, ws.w, tab.get(), &r, &err), what);
    return r;
}

// int_a^inf f(x) trig(omega x) dx
double qawf(std::function<double(double)> f, double a, double omega, bool sine, double epsabs, const char* what) {
    gsl_quiet();
    Workspace ws;
    std::unique_ptr<gsl_integration_qawo_table, decltype(&gsl_integration_qawo_table_free)> tab(
        gsl_integration_qawo_table_alloc(omega, 1.0, sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 30),
        &gsl_integration_qawo_table_free);
    gsl_function gf{&call, &f};
    double r = 0.0, err = 0.0;
    check_status(gsl_integration_qawf(&gf, a, epsabs, ws_size, ws.w, ws.cyc, tab.get(), &r, &err), what);
    return r;
}

// int_{-k'}^inf (u+k')/(u+2k') Delta_L(u) trig(u s) du
double inner(double kp, double s, double L, bool sine, const MfpOptions& o) {
    if (!(kp > 0.0)) throw InvalidInput("inner kernel: k' must be > 0");
    if (!(L > 0.0) || !(s >= 0.0)) throw InvalidInput("inner kernel: need L > 0, s >= 0");
    const MfpKernel D(L);
    auto f = [&](double u) { return (u + kp) / (u + 2.0 * kp) * D(u); };
    const double w = 10.0 / L;
    // the kernel falls like 1/u^2 over many decades past w; one decade per piece
    auto decades = [&](double lo, double hi) {
        double acc = 0.0;
        for (double x = lo; x < hi;) {
            const double y = std::min(hi, 10.0 * x);
            acc += qawo(f, x, y, s, sine, o, "inner kernel");
            x = y;
        }
        return acc;
    };
    auto mirrored = [&](double lo, double hi) {  // on [-hi, -lo]
        double acc = 0.0;
        for (double x = lo; x < hi;) {
            const double y = std::min(hi, 10.0 * x);
            acc += qawo(f, -y, -x, s, sine, o, "inner kernel");
            x = y;
        }
        return acc;
    };
    double sum = 0.0;
    if (kp > w) {
        sum += mirrored(w, kp);
        sum += qawo(f, -w, 0.0, s, sine, o, "inner kernel");
    } else {
        sum += qawo(f, -kp, 0.0, s, sine, o, "inner kernel");
    }
    sum += qawo(f, 0.0, w, s, sine, o, "inner kernel");
    const double u1 = std::max(1.0, 10.0 * w);
    sum += decades(w, u1);
    if (s > 0.0) {
        // qawf only takes an absolute tolerance; scale it by the kernel mass beyond w
        const double mass = std::atan(1.0 / (u1 * L)) / pi;
        sum += qawf(f, u1, s, sine, std::max(o.abs_tol, 0.1 * o.rel_tol * mass), "inner kernel tail");
    } else if (!sine) {
        // no oscillation: plain semi-infinite integral
        gsl_quiet();
        Workspace ws;
        std::function<double(double)> ff = f;
        gsl_function gf{&call, &ff};
        double r = 0.0, err = 0.0;
        check_status(gsl_integration_qagiu(&gf, u1, o.abs_tol, o.rel_tol, ws_size, ws.w, &r, &err), "inner kernel");
        sum += r;
    }
    return sum;
}

}  // namespace

MfpKernel::MfpKernel(double L) : L_over_lambda(L) {
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidInput("MfpKernel: L must be > 0");
}

double MfpKernel::operator()(double u) const {
    const double il = 1.0 / L_over_lambda;
    return il / (pi * (u * u + il * il));
}

double MfpKernel::normalization() const {
    // finite window, then the 1/(pi L u^2) tails in closed form (both sides)
    const double W = 1e4 / L_over_lambda;
    quad::Options qo;
    qo.rel_tol = 1e-13;
    std::vector<double> br{-W, -10.0 / L_over_lambda, 0.0, 10.0 / L_over_lambda, W};
    const double core = quad::integrate_or_throw<double>(*this, br, qo, "MfpKernel::normalization");
    const double il = 1.0 / L_over_lambda;
    // exact: (2/pi) atan(W L) = core; the tail beyond W is 2 (1/pi)(pi/2 - atan(W L))
    const double tail = 2.0 / pi * std::atan(il / W);
    return core + tail;
}

double inner_kernel_integral(double kp, double s, double L, const MfpOptions& o) { return inner(kp, s, L, false, o); }

double inner_kernel_integral_sin(double kp, double s, double L, const MfpOptions& o) {
    return inner(kp, s, L, true, o);
}

std::vector<std::string> rate_R_tilde_warnings(double, double L) {
    std::vector<std::string> w;
    if (L < 10.0) w.push_back("L_over_lambda below 10: the lambda << L assumption is violated");
    return w;
}

double rate_R_tilde(double s, double L, const MfpOptions& o) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("rate_R_tilde: s_over_lambda must be > 0");
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidInput("rate_R_tilde: L_over_lambda must be > 0");
    // C(k') oscillates at frequency s through the k = 0 edge, so the outer cost grows like s
    if (s > s_resolvable)
        throw NumericError("rate_R_tilde: s_over_lambda above " + std::to_string(int(s_resolvable)) +
                           " is beyond the resolvable range");
    // J(k') = C (1 - cos 2k's) + S sin 2k's with C, S the cosine/sine inner transforms
    auto wC = [&](double kp) { return kp <= 0.0 ? 0.0 : kp * std::exp(-kp * kp) * inner(kp, s, L, false, o); };
    auto wS = [&](double kp) { return kp <= 0.0 ? 0.0 : kp * std::exp(-kp * kp) * inner(kp, s, L, true, o); };

    quad::Options qo;
    qo.rel_tol = o.rel_tol;
    qo.abs_tol = o.abs_tol;
    std::vector<double> br{0.0, k_max};
    for (double b : {10.0 / L, 100.0 / L, 1000.0 / L})
        if (b < k_max) br.push_back(b);
    const double plain = quad::integrate_or_throw<double>(wC, br, qo, "rate_R_tilde");
    const double c = qawo(wC, 0.0, k_max, 2.0 * s, false, o, "rate_R_tilde");
    const double sn = qawo(wS, 0.0, k_max, 2.0 * s, true, o, "rate_R_tilde");
    return 2.0 / (s * s) * (plain - c + sn);
}

}  // namespace decoh
