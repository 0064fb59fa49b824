#pragma once

#include <vector>

#include "decoh/core.hpp"

namespace decoh {

struct BoundState {
    double q = 0.0;  // decay wavenumber; energy -q^2/2 with hbar = m = 1
    cplx w_plus, w_minus;
    cplx chi_sq;
    bool complex_coefficients = false;  // a square-root argument was negative

    double energy() const { return -0.5 * q * q; }
};

struct BoundStateCount {
    int count = 0;
    bool tangency = false;  // a+ a- = s^2: a root sits at q = 0
};

// h(u) = (u - s/a-)(u - s/a+) - exp(-2u), u = q s; with one site empty it is u - s/a
double bound_root_function(double u, const Scatterers& sc);

BoundStateCount count_bound_states_detail(const Scatterers& sc);
int count_bound_states(const Scatterers& sc);
int count_bound_states(const Occupation& occ, const Params& p);

std::vector<BoundState> find_bound_states(const Scatterers& sc);
std::vector<BoundState> find_bound_states(const Occupation& occ, const Params& p);

// (2 pi/q)[|w+|^2 + |w-|^2 + 2 Re(w+ conj w-) e^{-qs}]
double bound_state_norm(const BoundState& b, const Scatterers& sc);
// value of the bound-state wavefunction at distances r+, r- from the two sites
cplx bound_state_value(const BoundState& b, double r_plus, double r_minus);

// <phi_n | exp(i k0.r)>
cplx bound_overlap_c(double k0, double incidence_cos, const BoundState& b, const Scatterers& sc);
cplx bound_overlap_c(double k0, double incidence_cos, const BoundState& b, const Params& p);

}  // namespace decoh
