#include <doctest.h>

#include <random>

#include "paranls/errors.hpp"
#include "paranls/reduce.hpp"

#include <unsupported/Eigen/MatrixFunctions>

using namespace paranls;

namespace {

FourierField cos_field(int J, int n, double amp = 1.0) {
    FourierField c(J);
    c[n] = c[-n] = amp * kSqrt2Pi / 2;
    return c;
}

FourierField sin_field(int J, int n, double amp = 1.0) {
    FourierField s(J);
    s[n] = amp * kSqrt2Pi / cplx(0, 2);
    s[-n] = -s[n];
    return s;
}

}  // namespace

TEST_SUITE("reduce") {

TEST_CASE("diagonalization") {
    auto a2 = cos_field(4, 1, 0.2);
    auto D = diagonalize_principal(a2, FourierField(4));
    for (size_t i = 0; i < D.x.size(); ++i) {
        CHECK(std::abs(D.lambda_plus[i] - (1 + 0.2 * std::cos(D.x[i]))) < 1e-14);
        CHECK(std::abs(D.M[i][1]) == 0.0);
        CHECK(std::abs(D.M[i][2]) == 0.0);
    }
    auto C = diagonalize_principal(FourierField(4), FourierField::constant(4, 0.1));
    for (double l : C.lambda_plus) CHECK(std::abs(l - std::sqrt(0.99)) < 1e-15);

    auto b2 = cos_field(4, 2, 0.1) + FourierField::constant(4, cplx(0.02, 0.03));
    auto R = diagonalize_principal(cos_field(4, 1, 0.15), b2);
    CHECK(R.inverse_defect() < 1e-12);
    CHECK(R.conjugation_defect() < 1e-12);

    CHECK_THROWS_AS(diagonalize_principal(FourierField(2), FourierField::constant(2, 2.0)), SmallDataViolation);
}

TEST_CASE("order one corrector") {
    auto z = corrector_d1(FourierField(4), FourierField(4));
    CHECK(std::abs(z(0.3, 2.0)) == 0.0);

    double eps = 0.05;
    auto d1 = corrector_d1(FourierField::constant(2, eps), FourierField(2));
    CHECK(std::abs(d1(1.1, 2.0) - cplx(0, -eps / 4)) < 1e-15);

    auto b1 = sin_field(4, 1, 0.1);
    auto a2 = cos_field(4, 2, 0.2);
    auto d = corrector_d1(b1, a2);
    for (double x : {0.3, 1.9, 4.4})
        for (double xi : {0.7, 3.0, 11.0}) CHECK(std::abs(d(-x, -xi) - d(x, xi)) < 1e-14);
    CHECK(corrector_d1_defect(d, b1, a2) < 1e-12);
}

TEST_CASE("straightening") {
    auto c = straighten(FourierField::constant(4, 0.1));
    CHECK(c.a2_const == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(c.gamma_field.max_abs() < 1e-15);
    CHECK(c.beta_field.max_abs() < 1e-15);

    auto a2 = cos_field(6, 1, 0.1);
    auto s = straighten(a2);
    CHECK(straightening_defect(a2, s) < 1e-10);
    CHECK(inversion_defect(s) < 1e-12);
    CHECK(transported_constancy(a2, s) < 1e-10);
    CHECK(std::abs(s.integrand_mean) < 1e-14);
    // a2_const from a direct quadrature of (1 + a2)^{-1/2}
    int n = 400;
    double q = 0;
    for (int m = 0; m < n; ++m) q += 1.0 / std::sqrt(1 + 0.1 * std::cos(2 * kPi * m / n));
    q *= 2 * kPi / n;
    CHECK(s.a2_const == doctest::Approx(std::pow(2 * kPi / q, 2) - 1).epsilon(1e-13));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-1, 1);
    FourierField r(8);
    for (int j = 1; j <= 5; ++j) r[j] = r[-j] = 0.03 * U(rng) / j;
    CHECK(std::abs(straighten(r).integrand_mean) < 1e-14);

    CHECK_THROWS_AS(straighten(sin_field(4, 1, 0.1)), StructureError);
}

TEST_CASE("order one elimination") {
    CHECK(eliminate_order_one(FourierField(4), 0.0).max_abs() == 0.0);
    double eps = 0.07;
    auto s = eliminate_order_one(sin_field(4, 1, eps), 0.0);
    CHECK(max_abs_diff(s, cos_field(4, 1, eps / 2)) < 1e-15);

    auto a1 = sin_field(6, 1, 0.1) + sin_field(6, 3, 0.04);
    auto t = eliminate_order_one(a1, 0.2);
    CHECK(order_one_residual(a1, 0.2, t) < 1e-12);
    CHECK_THROWS_AS(eliminate_order_one(FourierField::constant(4, 0.3), 0.0), PreconditionError);
}

TEST_CASE("order zero step") {
    Symbol flat(FourierField::constant(2, 0.4), XiProfile());
    auto z = constant_coeff_step(flat, 0.0);
    CHECK(std::abs(z(0.5, 3.0)) < 1e-16);

    Symbol a0(cos_field(2, 1), XiProfile());
    auto n0 = constant_coeff_step(a0, 0.0);
    // n0 = d^{-1}(-cos x)/2 * 1/(i xi) at xi = 1
    for (double x : {0.4, 2.0, 5.1}) CHECK(std::abs(n0(x, 1.0) - cplx(0, 0.5 * std::sin(x))) < 1e-15);
    CHECK(constant_coeff_residual(a0, n0, 0.0) < 1e-13);

    Symbol r = Symbol(cos_field(4, 2, 0.3) + FourierField::constant(4, 0.1), XiProfile::japanese(-1.0)) +
               Symbol(sin_field(4, 1, 0.2), XiProfile::power(0));
    auto nr = constant_coeff_step(r, 0.15);
    CHECK(constant_coeff_residual(r, nr, 0.15) < 1e-11);
}

TEST_CASE("paracomposition flow") {
    CutoffConfig cfg{0.25};
    auto u = cos_field(16, 2) + cos_field(16, 5, 0.3);
    auto same = paracomposition_flow(FourierField(16), u, cfg, 8);
    CHECK(max_abs_diff(same, u) < 1e-15);

    // constant beta: the generator is frozen and the flow is its exponential
    double c = 0.01;
    auto beta = FourierField::constant(16, c);
    auto w = paracomposition_flow(beta, u, cfg, 16);
    auto G = flow_generator(beta, 0.0, cfg, 16);
    Eigen::MatrixXcd E = G.M.exp();
    OperatorMatrix X(16);
    X.M = E;
    CHECK(max_abs_diff(w, X.apply(u)) < 1e-10);
    // a translation by c in Fourier space
    for (int k = -16; k <= 16; ++k) CHECK(std::abs(w[k] - std::exp(cplx(0, k * c)) * u[k]) < 1e-10);
}

}
