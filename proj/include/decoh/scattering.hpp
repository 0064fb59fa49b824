#pragma once

#include <utility>

#include "decoh/core.hpp"

namespace decoh {

// Exact eigenstate of a plane wave k on two s-wave point scatterers.
// k in inverse units of the Scatterers lengths.
struct ScatteringSolution {
    double k = 0.0;
    double incidence_cos = 0.0;  // cos of the angle between k-vector and s-vector
    Scatterers sc;
    cplx A_plus, A_minus, B_plus, B_minus, Lambda;
    cplx alpha_plus, alpha_minus;

    double incident_phase() const { return 0.5 * k * sc.s * incidence_cos; }
};

// Lambda(k) = A+ A- - B+ B-, valid for complex k
cplx lambda_det(cplx k, const Scatterers& sc);
cplx lambda_det_derivative(cplx k, const Scatterers& sc);

// alpha+-(k) for an incident phase phi that need not be tied to k
// (alpha_bar in the time-domain integrals). Throws NearSingularError.
std::pair<cplx, cplx> alpha_offshell(cplx k, double incident_phase, const Scatterers& sc);

ScatteringSolution solve_alphas(double k, double incidence_cos, const Scatterers& sc);
ScatteringSolution solve_alphas(double k, double incidence_cos, const Occupation& occ, const Params& p);

// |A a + B a' - a e^{+-i phi}| worst of the two rows
double linear_system_residual(const ScatteringSolution& sol);

cplx scattering_amplitude(const ScatteringSolution& sol, double out_dir_cos);

// forward rate and pair kernel with 2 pi n_B hbar/m divided out
cplx forward_rate_A(const ScatteringSolution& sol);
cplx pair_kernel_B(const ScatteringSolution& sol, const ScatteringSolution& sol_prime);
cplx pair_kernel_B(double k, double incidence_cos, const Occupation& occ, const Occupation& occ_prime,
                   const Params& p);

struct LindbladFactors {
    cplx G1, G2;
};
LindbladFactors lindblad_factors(const ScatteringSolution& sol);
LindbladFactors lindblad_factors(double k, double incidence_cos, const Occupation& occ, const Params& p);

}  // namespace decoh
