#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace decoh {

using cplx = std::complex<double>;

// a, s, L all measured in units of the thermal wavelength lambda
struct Params {
    double a_over_lambda = 0.0;
    double s_over_lambda = 0.0;
    std::optional<double> L_over_lambda;

    static Params make(double a, double s, std::optional<double> L = std::nullopt);
    void validate() const;
    // soft complaints (L not much larger than lambda)
    std::vector<std::string> warnings() const;
    void require_positive_separation(const char* who) const;
};

struct PhysicalInputs {
    double mass = 0.0;                  // kg
    double lambda = 0.0;                // m
    double buffer_density = 0.0;        // 1/m^3
    double scattering_length = 0.0;     // m, any sign
    double buffer_cross_section = 0.0;  // m^2
    double hbar = 1.054571817e-34;      // J s

    void validate() const;
    double mean_free_path() const;  // 1/(n_B sigma_B)
};

class Occupation {
public:
    Occupation() = default;
    Occupation(int n_plus, int n_minus);
    static Occupation from_total_relative(int N, int n);

    int n_plus() const { return np_; }
    int n_minus() const { return nm_; }
    int total() const { return np_ + nm_; }
    int relative() const { return np_ - nm_; }
    bool empty() const { return np_ == 0 && nm_ == 0; }
    bool operator==(const Occupation&) const = default;

private:
    int np_ = 0, nm_ = 0;
};

// point scatterers at +s/2 and -s/2 with strengths a_plus, a_minus, all in one
// common length unit
struct Scatterers {
    double a_plus = 0.0;
    double a_minus = 0.0;
    double s = 0.0;

    static Scatterers from(const Occupation& occ, const Params& p);
    bool empty() const { return a_plus == 0.0 && a_minus == 0.0; }
};

double gamma_scale(const PhysicalInputs& phys);
double g1(double separation_over_lambda);

// states (n+, n-) with n+ + n- <= max_total, ordered by total then n+ descending
class FockBasis {
public:
    explicit FockBasis(int max_total = 8);
    int max_total() const { return nmax_; }
    std::size_t size() const { return states_.size(); }
    const Occupation& state(std::size_t i) const { return states_.at(i); }
    std::size_t index(const Occupation& o) const;
    const std::vector<Occupation>& states() const { return states_; }

private:
    int nmax_;
    std::vector<Occupation> states_;
};

class DensityMatrix {
public:
    // validated: Hermitian, unit trace, positive semidefinite (all to 1e-12)
    DensityMatrix(FockBasis basis, Eigen::MatrixXcd entries);
    // normalized projector on sum_i c_i |occ_i>
    static DensityMatrix pure(FockBasis basis, const std::vector<std::pair<Occupation, cplx>>& amplitudes);
    // skips validation; for evolution maps that preserve the properties
    static DensityMatrix unchecked(FockBasis basis, Eigen::MatrixXcd entries);

    const FockBasis& basis() const { return basis_; }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    cplx operator()(const Occupation& a, const Occupation& b) const;
    cplx trace() const { return m_.trace(); }
    std::size_t dim() const { return basis_.size(); }

private:
    struct NoCheck {};
    DensityMatrix(FockBasis basis, Eigen::MatrixXcd entries, NoCheck);
    FockBasis basis_;
    Eigen::MatrixXcd m_;
};

}  // namespace decoh
