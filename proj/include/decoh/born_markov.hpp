#pragma once

#include "decoh/core.hpp"

namespace decoh {

struct BMDecayExponents {
    double total_rate = 0.0;     // 1 + R, multiplies (N - N')^2
    double relative_rate = 0.0;  // 1 - R, multiplies (n - n')^2
};

// R(x) = (2/x^2) int_0^inf xi sin^2(x xi) exp(-xi^2) dxi  =  F(x)/x, F = Dawson
double rate_R(double x);
// same quantity by direct adaptive quadrature on [0, 6.5]
double rate_R_quadrature(double x, double rel_tol = 1e-11);

BMDecayExponents bm_rates(const Params& p);

// decay exponent of rho_{n,n'} in units of Gamma
double bm_exponent(const Occupation& occ, const Occupation& occ_prime, const Params& p);
double bm_exponent(int N, int n, int N_prime, int n_prime, const Params& p);

// weak-coupling pair rate gamma(n,n')/Gamma = (1+R) N N' + (1-R) n n'
double bm_pair_rate(const Occupation& occ, const Occupation& occ_prime, const Params& p);

// t in units of 1/Gamma
DensityMatrix bm_evolve(const DensityMatrix& rho0, double t, const Params& p);

}  // namespace decoh
