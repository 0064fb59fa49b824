#pragma once

// Rate function corrected for a finite buffer-gas mean free path L.
// All lengths in units of lambda, wavenumbers in 1/lambda.

#include <string>
#include <vector>

namespace decoh {

struct MfpKernel {
    double L_over_lambda;

    explicit MfpKernel(double L);
    // (1/pi) (1/L) / (u^2 + 1/L^2)
    double operator()(double u) const;
    // integral over the real line; should be 1
    double normalization() const;
};

struct MfpOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-16;
};

// int_0^inf dk (k/(k+k')) cos((k-k') s) Delta_L(k-k')  ->  exp(-s/L)/2 for k'L >> 1
double inner_kernel_integral(double kprime, double s, double L, const MfpOptions& o = {});
// the matching sine transform, needed for the cos((k+k')s) term
double inner_kernel_integral_sin(double kprime, double s, double L, const MfpOptions& o = {});

double rate_R_tilde(double s_over_lambda, double L_over_lambda, const MfpOptions& o = {});
std::vector<std::string> rate_R_tilde_warnings(double s_over_lambda, double L_over_lambda);

}  // namespace decoh
