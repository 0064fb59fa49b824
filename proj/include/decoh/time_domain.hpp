#pragma once

// Exact single-particle evolution of a plane wave switched on at t = 0 on the
// two point scatterers. hbar = m = 1; lengths in the unit of the Scatterers
// (the s = 1 convention is the usual choice). Scatterer + sits at +s/2 on z.

#include <array>
#include <cstddef>
#include <vector>

#include "decoh/bound_states.hpp"
#include "decoh/core.hpp"

namespace decoh {

using Vec3 = std::array<double, 3>;

enum class Site { plus, minus };

struct WaveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double tail_tol = 1e-10;  // target size of the neglected tail beyond +-K
};

// pieces of the scattered s-wave radiating from one site
struct PartialWave {
    cplx pole_part;   // half residues at k = +-k0
    cplx pv_part;     // (i/2pi) PV integral over the real line, tails included
    cplx bound_part;  // bound-state poles
    cplx total() const { return pole_part + pv_part + bound_part; }
    double k_cut = 0.0;
    std::size_t evaluations = 0;
};

// psi_scat for the given site at distance rho from it; psi = psi_0 - sum of sites.
// phi0 = k0vec.svec/2.
PartialWave scattered_partial_wave(Site site, double rho, double t, double k0, double phi0, const Scatterers& sc,
                                   const std::vector<BoundState>& bound, const WaveOptions& o = {});
PartialWave scattered_partial_wave(Site site, double rho, double t, double k0, double phi0, const Scatterers& sc,
                                   const WaveOptions& o = {});

cplx evolve_wave(const Vec3& r, double t, const Vec3& k0, const Scatterers& sc, const WaveOptions& o = {});
cplx evolve_wave(const Vec3& r, double t, const Vec3& k0, const Occupation& occ, const Params& p,
                 const WaveOptions& o = {});

// e^{-iE0 t} e^{i k0.r}
cplx plane_wave(const Vec3& r, double t, const Vec3& k0);

// plane wave minus step-gated outgoing s-waves
cplx asymptotic_wave(const Vec3& r, double t, const Vec3& k0, const Scatterers& sc);
cplx asymptotic_wave(const Vec3& r, double t, const Vec3& k0, const Occupation& occ, const Params& p);
// step-gated s-wave of one site, the envelope of the numeric partial wave
cplx envelope_partial_wave(Site site, double rho, double t, double k0, double phi0, const Scatterers& sc);

// sum_n c_n phi_n(r) e^{-i E_n t}, from the projections of the bound states
cplx bound_state_part(const Vec3& r, double t, const Vec3& k0, const Scatterers& sc);
std::vector<double> bound_state_populations(const Vec3& k0, const Scatterers& sc);

double ortho_residual(const Vec3& k, const Vec3& kprime, const Scatterers& sc);
double ortho_residual(const Vec3& k, const Vec3& kprime, const Occupation& occ, const Params& p);

// integral of |psi_scat|^2 over space, psi_scat taken from the envelope
std::vector<double> scat_norm_growth(const std::vector<double>& t_grid, const Vec3& k0, const Scatterers& sc);
std::vector<double> scat_norm_growth(const std::vector<double>& t_grid, const Vec3& k0, const Occupation& occ,
                                     const Params& p);
// d/dt of the above at late times
double envelope_norm_slope(const Vec3& k0, const Scatterers& sc);

// stationary-point piece of the PV integral for one site; refuses within 1e-3 k0 of the front
cplx saddle_contribution(Site site, double rho, double t, double k0, double phi0, const Scatterers& sc);
cplx saddle_contribution(Site site, double rho, double t, double k0, double incidence_cos, const Occupation& occ,
                         const Params& p);

double incident_phase(const Vec3& k0, double s);
double norm3(const Vec3& v);

}  // namespace decoh
