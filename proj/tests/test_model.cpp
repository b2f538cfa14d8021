#include <doctest.h>

#include <random>

#include "paranls/errors.hpp"
#include "paranls/model.hpp"

using namespace paranls;

TEST_SUITE("model") {

TEST_CASE("potential coefficients") {
    PotentialParams p({0.5});
    CHECK(potential_coeff(p, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(potential_coeff(p, 1) == doctest::Approx(1.0 / (4 * std::sqrt(2.0))).epsilon(1e-15));
    double j = 1e4;
    CHECK(std::abs(potential_coeff(p, j) * std::pow(japanese(j), 3) - 0.5) < 1e-6);
    CHECK_THROWS_AS(PotentialParams({0.7}), ConfigError);
}

TEST_CASE("frequencies") {
    PotentialParams zero({0.0, 0.0});
    CHECK(frequency(zero, 3) == -9.0);
    PotentialParams p({0.3, -0.1});
    CHECK(frequency(p, 0) == doctest::Approx(0.2));
    double expect = -4 + 0.3 / std::pow(5.0, 1.5) - 0.1 / std::pow(5.0, 2.5);
    CHECK(std::abs(frequency(p, 2) - expect) < 1e-15);
}

TEST_CASE("hypothesis checks") {
    CHECK(validate_hypothesis(Nonlinearity::cubic()).ok());
    CHECK(validate_hypothesis(Nonlinearity::cubic_uxx()).ok());
    Nonlinearity uuxx(Polynomial{Monomial{{1, 0, 1}, {0, 0, 0}, 1.0}});
    auto r = validate_hypothesis(uuxx);
    CHECK_FALSE(r.item2);
    CHECK_FALSE(r.ok());
    Nonlinearity complex_c(Polynomial{Monomial{{2, 0, 0}, {1, 0, 0}, cplx(1, 1)}});
    CHECK_FALSE(validate_hypothesis(complex_c).item3);
    Nonlinearity odd_ux(Polynomial{Monomial{{1, 1, 0}, {1, 0, 0}, 1.0}});
    CHECK_FALSE(validate_hypothesis(odd_ux).item1);
}

TEST_CASE("wirtinger derivatives") {
    // d/dz0 of z0^2 zb0 = 2 z0 zb0, d/dzb0 = z0^2
    auto f = Nonlinearity::cubic().monomials();
    auto d = wirtinger(f, 0, false);
    REQUIRE(d.size() == 1);
    CHECK(d[0].alpha[0] == 1);
    CHECK(d[0].beta[0] == 1);
    CHECK(d[0].C == cplx(2.0));
    auto db = wirtinger(f, 0, true);
    REQUIRE(db.size() == 1);
    CHECK(db[0].alpha[0] == 2);
    CHECK(db[0].beta[0] == 0);
    CHECK(wirtinger(f, 2, false).empty());
}

TEST_CASE("linear rhs") {
    PotentialParams p({0.2, -0.1});
    auto U = PairField::realified(FourierField::mode(8, 1, 0.3));
    auto R = rhs(U, p, Nonlinearity::zero());
    CHECK(std::abs(R.plus[1] - cplx(0, 1) * frequency(p, 1) * 0.3) < 1e-15);
}

TEST_CASE("cubic single mode") {
    double eps = 0.1;
    PotentialParams p({0.0});
    auto U = PairField::realified(FourierField::mode(8, 1, eps));
    auto R = rhs(U, p, Nonlinearity::cubic());
    auto L = rhs(U, p, Nonlinearity::zero());
    cplx nl = R.plus[1] - L.plus[1];
    CHECK(std::abs(nl - cplx(0, 1) * eps * eps * eps / (2 * kPi)) < 1e-15);
    for (int j = -8; j <= 8; ++j)
        if (j != 1) CHECK(std::abs(R.plus[j] - L.plus[j]) < 1e-15);
}

TEST_CASE("rhs keeps even data even") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    FourierField u(16);
    for (int j = 0; j <= 6; ++j) u[j] = u[-j] = 0.05 * cplx(g(rng), g(rng)) / (1.0 + j * j);
    PotentialParams p({0.1, 0.2});
    for (auto f : {Nonlinearity::cubic(), Nonlinearity::cubic_uxx()}) {
        auto R = rhs(PairField::realified(u), p, f);
        CHECK(parity_defect(R) <= 1e-12);
    }
}

TEST_CASE("rhs refuses violating nonlinearities") {
    Nonlinearity bad(Polynomial{Monomial{{1, 0, 1}, {0, 0, 0}, 1.0}});
    auto U = PairField::realified(FourierField::mode(8, 1, 0.1));
    CHECK_THROWS_AS(rhs(U, PotentialParams({0.0}), bad), HypothesisViolation);
    RhsOptions o;
    o.override_hypothesis = true;
    CHECK_NOTHROW(rhs(U, PotentialParams({0.0}), bad, o));
}

TEST_CASE("nonlinearity json round trip") {
    nlohmann::json j = Nonlinearity::cubic_uxx();
    Nonlinearity back = j.get<Nonlinearity>();
    CHECK(nlohmann::json(back) == j);
}

}
