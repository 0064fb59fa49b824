#include "decoh/core.hpp"

#include <cmath>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/special.hpp"

namespace decoh {

namespace {
bool finite(double x) { return std::isfinite(x); }
}  // namespace

Params Params::make(double a, double s, std::optional<double> L) {
    Params p{a, s, L};
    p.validate();
    return p;
}

void Params::validate() const {
    if (!finite(a_over_lambda)) throw InvalidInput("a_over_lambda must be finite");
    if (!finite(s_over_lambda) || s_over_lambda < 0.0) throw InvalidInput("s_over_lambda must be finite and >= 0");
    if (L_over_lambda && (!finite(*L_over_lambda) || *L_over_lambda <= 0.0))
        throw InvalidInput("L_over_lambda must be finite and > 0");
}

std::vector<std::string> Params::warnings() const {
    std::vector<std::string> w;
    if (L_over_lambda && *L_over_lambda < 10.0)
        w.push_back("L_over_lambda = " + std::to_string(*L_over_lambda) + " is not >> 1; Lorentzian model is marginal");
    return w;
}

void Params::require_positive_separation(const char* who) const {
    validate();
    if (!(s_over_lambda > 0.0))
        throw InvalidInput(std::string(who) + ": needs s_over_lambda > 0 (point scatterers cannot coincide)");
}

void PhysicalInputs::validate() const {
    if (!(mass > 0.0) || !finite(mass)) throw InvalidInput("mass must be > 0");
    if (!(lambda > 0.0) || !finite(lambda)) throw InvalidInput("lambda must be > 0");
    if (!(buffer_density > 0.0) || !finite(buffer_density)) throw InvalidInput("buffer_density must be > 0");
    if (!finite(scattering_length)) throw InvalidInput("scattering_length must be finite");
    if (!(buffer_cross_section > 0.0) || !finite(buffer_cross_section))
        throw InvalidInput("buffer_cross_section must be > 0");
    if (!(hbar > 0.0) || !finite(hbar)) throw InvalidInput("hbar must be > 0");
}

double PhysicalInputs::mean_free_path() const {
    validate();
    return 1.0 / (buffer_density * buffer_cross_section);
}

Occupation::Occupation(int n_plus, int n_minus) : np_(n_plus), nm_(n_minus) {
    if (n_plus < 0 || n_minus < 0) throw InvalidInput("occupation numbers must be non-negative");
}

Occupation Occupation::from_total_relative(int N, int n) {
    if (N < 0 || std::abs(n) > N || ((N - n) % 2) != 0)
        throw InvalidInput("need N >= |n| and N = n (mod 2)");
    return Occupation((N + n) / 2, (N - n) / 2);
}

Scatterers Scatterers::from(const Occupation& occ, const Params& p) {
    return {p.a_over_lambda * occ.n_plus(), p.a_over_lambda * occ.n_minus(), p.s_over_lambda};
}

double gamma_scale(const PhysicalInputs& phys) {
    phys.validate();
    const double a = phys.scattering_length;
    return 2.0 * sqrt_pi * phys.buffer_density * phys.hbar * a * a / (phys.mass * phys.lambda);
}

double g1(double x) {
    if (!(x >= 0.0)) throw InvalidInput("g1: separation must be >= 0");
    return std::exp(-0.5 * x * x);
}

FockBasis::FockBasis(int max_total) : nmax_(max_total) {
    if (max_total < 0) throw InvalidInput("max_total must be >= 0");
    for (int N = 0; N <= max_total; ++N)
        for (int p = N; p >= 0; --p) states_.emplace_back(p, N - p);
}

std::size_t FockBasis::index(const Occupation& o) const {
    const int N = o.total();
    if (N > nmax_) throw InvalidInput("occupation outside truncated basis");
    return std::size_t(N) * std::size_t(N + 1) / 2 + std::size_t(N - o.n_plus());
}

DensityMatrix::DensityMatrix(FockBasis basis, Eigen::MatrixXcd entries, NoCheck)
    : basis_(std::move(basis)), m_(std::move(entries)) {}

DensityMatrix DensityMatrix::unchecked(FockBasis basis, Eigen::MatrixXcd entries) {
    return DensityMatrix(std::move(basis), std::move(entries), NoCheck{});
}

DensityMatrix::DensityMatrix(FockBasis basis, Eigen::MatrixXcd entries)
    : basis_(std::move(basis)), m_(std::move(entries)) {
    const auto d = Eigen::Index(basis_.size());
    if (m_.rows() != d || m_.cols() != d) throw InvalidInput("density matrix shape does not match basis");
    if (!m_.allFinite()) throw InvalidInput("density matrix has non-finite entries");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidInput("density matrix is not Hermitian");
    if (std::abs(m_.trace() - cplx(1.0)) > 1e-12) throw InvalidInput("density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) throw InvalidInput("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(FockBasis basis, const std::vector<std::pair<Occupation, cplx>>& amplitudes) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(basis.size()));
    for (auto& [o, c] : amplitudes) v[Eigen::Index(basis.index(o))] += c;
    const double nrm = v.norm();
    if (!(nrm > 0.0)) throw InvalidInput("pure state needs a nonzero amplitude");
    v /= nrm;
    Eigen::MatrixXcd m = v * v.adjoint();
    return DensityMatrix(std::move(basis), std::move(m));
}

cplx DensityMatrix::operator()(const Occupation& a, const Occupation& b) const {
    return m_(Eigen::Index(basis_.index(a)), Eigen::Index(basis_.index(b)));
}

}  // namespace decoh
