#pragma once

#include <vector>

#include "decoh/core.hpp"

namespace decoh {

struct RateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-15;
    double z_max = 6.5;
};

struct RateResult {
    cplx gamma;    // gamma(n, n')
    cplx D;        // gamma(n,n) + gamma(n',n') - 2 gamma(n,n')
    double omega;  // Omega(n) - Omega(n'), Hamiltonian part
};

// all rates in units of Gamma; s_over_lambda > 0 required
cplx gamma_exact(const Occupation& occ, const Occupation& occ_prime, const Params& p, const RateOptions& o = {});
cplx decoherence_D(const Occupation& occ, const Occupation& occ_prime, const Params& p, const RateOptions& o = {});
// undefined at a = 0 for an occupied state (scales like 1/a); throws there
double frequency_shift_omega(const Occupation& occ, const Params& p, const RateOptions& o = {});
RateResult rate_result(const Occupation& occ, const Occupation& occ_prime, const Params& p, const RateOptions& o = {});

enum class FrequencyShift { include, exclude };

// gamma for every pair of basis states, Omega for every state
class RateTable {
public:
    RateTable(const FockBasis& basis, const Params& p, FrequencyShift fs = FrequencyShift::include,
              const RateOptions& o = {});
    const FockBasis& basis() const { return basis_; }
    const Params& params() const { return p_; }
    FrequencyShift frequency_shift() const { return fs_; }
    cplx gamma(std::size_t i, std::size_t j) const { return g_(Eigen::Index(i), Eigen::Index(j)); }
    cplx D(std::size_t i, std::size_t j) const;
    double omega(std::size_t i) const { return omega_[i]; }

private:
    FockBasis basis_;
    Params p_;
    FrequencyShift fs_;
    Eigen::MatrixXcd g_;
    std::vector<double> omega_;
};

// t in units of 1/Gamma
DensityMatrix exact_evolve(const DensityMatrix& rho0, double t, const RateTable& table);
DensityMatrix exact_evolve(const DensityMatrix& rho0, double t, const Params& p,
                           FrequencyShift fs = FrequencyShift::include, const RateOptions& o = {});

// [1 + (t/N_B)(-i dOmega - D)]^N_B
cplx finite_N_factor(cplx D, double delta_omega, double t, long long N_B);
cplx finite_N_factor(const Occupation& occ, const Occupation& occ_prime, const Params& p, double t, long long N_B,
                     const RateOptions& o = {});

}  // namespace decoh
