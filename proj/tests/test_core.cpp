#include <doctest.h>

#include <cmath>

#include "decoh/core.hpp"
#include "decoh/errors.hpp"

using namespace decoh;

TEST_CASE("gamma_scale") {
    PhysicalInputs p;
    p.mass = 1.0;
    p.lambda = 1.0;
    p.buffer_density = 1.0;
    p.scattering_length = 1.0;
    p.buffer_cross_section = 1.0;
    p.hbar = 1.0;
    CHECK(gamma_scale(p) == doctest::Approx(3.5449077018110318).epsilon(1e-15));
    p.scattering_length = 2.0;
    CHECK(gamma_scale(p) == doctest::Approx(4.0 * 3.5449077018110318));
    p.scattering_length = -2.0;
    CHECK(gamma_scale(p) == doctest::Approx(4.0 * 3.5449077018110318));
    p.scattering_length = 0.0;
    CHECK(gamma_scale(p) == 0.0);
    CHECK(p.mean_free_path() == 1.0);
    p.mass = 0.0;
    CHECK_THROWS_AS(gamma_scale(p), InvalidInput);
    p.mass = 1.0;
    p.lambda = -1.0;
    CHECK_THROWS_AS(gamma_scale(p), InvalidInput);
    p.lambda = 1.0;
    p.buffer_density = 0.0;
    CHECK_THROWS_AS(gamma_scale(p), InvalidInput);
}

TEST_CASE("g1") {
    CHECK(g1(0.0) == 1.0);
    CHECK(g1(1.0) == doctest::Approx(std::exp(-0.5)));
    CHECK(g1(10.0) == doctest::Approx(std::exp(-50.0)).epsilon(1e-14));
    CHECK_THROWS_AS(g1(-1.0), InvalidInput);
}

TEST_CASE("occupation round trip") {
    for (int p = 0; p <= 6; ++p)
        for (int m = 0; m <= 6; ++m) {
            Occupation o(p, m);
            CHECK((o.total() + o.relative()) / 2 == p);
            CHECK((o.total() - o.relative()) / 2 == m);
            CHECK(Occupation::from_total_relative(o.total(), o.relative()) == o);
        }
    CHECK_THROWS_AS(Occupation(-1, 0), InvalidInput);
    CHECK_THROWS_AS(Occupation::from_total_relative(3, 2), InvalidInput);
    CHECK_THROWS_AS(Occupation::from_total_relative(1, 3), InvalidInput);
}

TEST_CASE("params validation") {
    CHECK_NOTHROW(Params::make(0.1, 0.0));
    CHECK_THROWS_AS(Params::make(0.1, -1.0), InvalidInput);
    CHECK_THROWS_AS(Params::make(0.1, 1.0, 0.0), InvalidInput);
    CHECK(Params::make(0.1, 1.0, 5.0).warnings().size() == 1);
    CHECK(Params::make(0.1, 1.0, 50.0).warnings().empty());
    CHECK_THROWS_AS(Params::make(0.1, 0.0).require_positive_separation("x"), InvalidInput);
    auto sc = Scatterers::from(Occupation(3, 2), Params::make(0.5, 2.0));
    CHECK(sc.a_plus == 1.5);
    CHECK(sc.a_minus == 1.0);
    CHECK(sc.s == 2.0);
}

TEST_CASE("fock basis indexing") {
    FockBasis b(8);
    CHECK(b.size() == 45);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index(b.state(i)) == i);
    CHECK_THROWS_AS(b.index(Occupation(5, 4)), InvalidInput);
}

TEST_CASE("density matrix constructors validate") {
    FockBasis b(1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = 1.0;
    CHECK_NOTHROW(DensityMatrix(b, m));
    Eigen::MatrixXcd bad = m;
    bad(0, 1) = cplx(0.1, 0.0);
    CHECK_THROWS_AS(DensityMatrix(b, bad), InvalidInput);
    bad = m;
    bad(0, 0) = 1.0 + 1e-9;
    CHECK_THROWS_AS(DensityMatrix(b, bad), InvalidInput);
    // hermitian, trace one, but an eigenvalue of -0.5
    Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(3, 3);
    neg(0, 0) = 0.5;
    neg(1, 1) = 0.5;
    neg(0, 1) = neg(1, 0) = 1.0;
    CHECK_THROWS_AS(DensityMatrix(b, neg), InvalidInput);
    CHECK_THROWS_AS(DensityMatrix(FockBasis(2), m), InvalidInput);

    auto r = DensityMatrix::pure(b, {{Occupation(1, 0), 1.0}, {Occupation(0, 1), cplx(0.0, 1.0)}});
    CHECK(std::abs(r.trace() - 1.0) < 1e-15);
    CHECK(std::abs(r(Occupation(1, 0), Occupation(0, 1)) - cplx(0.0, -0.5)) < 1e-15);
}
