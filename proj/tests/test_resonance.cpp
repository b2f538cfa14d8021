#include <doctest.h>

#include <random>

#include "paranls/errors.hpp"
#include "paranls/resonance.hpp"

using namespace paranls;

TEST_SUITE("resonance") {

TEST_CASE("small divisors") {
    PotentialParams p({0.3, -0.2});
    for (int n : {0, 3, 17}) CHECK(small_divisor(p, DivisorQuery{2, 1, {n, n}}) == 0.0);
    PotentialParams zero({0.0});
    CHECK(small_divisor(zero, DivisorQuery{3, 1, {3, 4, 5}}) == -9.0 + 16 + 25);
    CHECK(small_divisor(zero, DivisorQuery{3, 2, {3, 4, 5}}) == -9.0 - 16 + 25);
    // all entries on the minus side: -(lambda_0 + lambda_0)
    PotentialParams half({0.5});
    CHECK(small_divisor(half, DivisorQuery{2, 0, {0, 0}}) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(small_divisor(half, DivisorQuery{2, 2, {0, 0}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS(DivisorQuery{2, 3, {1, 2}}.validate());
    CHECK_THROWS(DivisorQuery{2, 1, {1, -2}}.validate());
}

TEST_CASE("pairing") {
    CHECK(pairing_excluded(DivisorQuery{4, 2, {3, 5, 5, 3}}));
    CHECK_FALSE(pairing_excluded(DivisorQuery{4, 2, {3, 5, 5, 5}}));
    CHECK_FALSE(pairing_excluded(DivisorQuery{3, 1, {2, 2, 2}}));
    CHECK_FALSE(pairing_excluded(DivisorQuery{4, 1, {2, 2, 2, 2}}));
}

TEST_CASE("vandermonde determinant") {
    CHECK(vandermonde_det({0}) == doctest::Approx(1.0));
    CHECK(vandermonde_det({0, 1}) == doctest::Approx(-1.0 / (4 * std::sqrt(2.0))).epsilon(1e-14));
    std::vector<int> n{1, 2, 4, 7, 9};
    Eigen::MatrixXd A(5, 5);
    for (int k = 1; k <= 5; ++k)
        for (int j = 0; j < 5; ++j) A(k - 1, j) = std::pow(japanese(n[j]), -(2 * k + 1));
    double lu = A.fullPivLu().determinant();
    CHECK(std::abs(vandermonde_det(n) - lu) <= 1e-10 * std::abs(lu));
    CHECK_THROWS_AS(vandermonde_det({2, 2}), PreconditionError);
}

TEST_CASE("unperturbed scan finds integer resonances") {
    auto r = scan_nonresonance(PotentialParams({0.0}), 3, 10, 12);
    CHECK(r.gamma_hat == 0.0);
    CHECK(r.zero_divisors > 0);
    bool any = false;
    scan_nonresonance(PotentialParams({0.0}), 3, 10, 12, 10'000'000, [&](const DivisorQuery& q, double psi, double) {
        std::vector<int> s = q.n;
        std::sort(s.begin(), s.end());
        if (psi == 0.0 && s == std::vector<int>{3, 4, 5}) any = true;
    });
    CHECK(any);
}

TEST_CASE("generic potential scan") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    std::vector<double> m(5);
    for (auto& v : m) v = U(rng);
    auto r = scan_nonresonance(PotentialParams(m), 2, 50, 12);
    CHECK(r.gamma_hat > 0.0);
    CHECK(r.excluded_paired == paired_count(2, 50));
    CHECK(paired_count(2, 50) == 51);
    CHECK(paired_count(4, 10) == 66);
    CHECK(paired_count(3, 10) == 0);
    auto r4 = scan_nonresonance(PotentialParams(m), 4, 10, 12);
    CHECK(r4.excluded_paired == paired_count(4, 10));
    CHECK_THROWS_AS(scan_nonresonance(PotentialParams(m), 4, 40, 12, 1000), BudgetError);
}

TEST_CASE("bad set measure") {
    // integer part 9 + 16 - 25 vanishes, the divisor is p(3) + p(4) - p(5)
    DivisorQuery q{3, 2, {3, 4, 5}};
    auto z = bad_set_measure_mc(q, 0.0, 1, 2000, 3);
    CHECK(z.fraction == 0.0);
    auto paired = bad_set_measure_mc(DivisorQuery{2, 1, {3, 3}}, 0.1, 1, 2000, 3);
    CHECK(paired.fraction == 1.0);
    auto s = bad_set_scaling(q, {0.005, 0.01, 0.02}, 1, 40000, 5);
    REQUIRE(s.estimates.size() == 3);
    double r = s.estimates[2].fraction / s.estimates[1].fraction;
    CHECK(r > 1.7);
    CHECK(r < 2.3);
    CHECK(s.linear_within_ci);
}

TEST_CASE("homological equation") {
    PotentialParams p({0.2, -0.3, 0.1});
    TupleTable zero{{DivisorQuery{3, 1, {1, 2, 3}}, 0.0}};
    auto z = solve_homological(zero, p, 12);
    for (auto& e : z.f) CHECK(e.value == cplx(0.0));

    PotentialParams flat({0.0});
    // m = 0, (0,2 | 1,1): 0 - 4 + 1 + 1 = -2
    TupleTable one{{DivisorQuery{4, 2, {0, 2, 1, 1}}, 1.0}};
    auto s = solve_homological(one, flat, 12);
    REQUIRE(s.f.size() == 1);
    CHECK(s.f[0].value == cplx(0.5));  // psi = -2, f = -mp/psi

    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    TupleTable t;
    for (int a = 0; a <= 20; a += 3)
        for (int b = 0; b <= 20; b += 4)
            for (int c = b; c <= 20; c += 5) t.push_back({DivisorQuery{3, 1, {a, b, c}}, cplx(g(rng), g(rng))});
    TupleTable k{{DivisorQuery{2, 1, {4, 4}}, cplx(0.3, 0.1)}};
    t.insert(t.end(), k.begin(), k.end());
    auto h = solve_homological(t, PotentialParams({0.31, -0.17, 0.05, 0.22, -0.4}), 12);
    CHECK(h.max_residual <= 1e-12);
    REQUIRE(h.kernel.size() == 1);
    CHECK(h.kernel[0].value == cplx(0.3, 0.1));

    TupleTable res{{DivisorQuery{3, 1, {5, 3, 4}}, 1.0}};
    CHECK_THROWS_AS(solve_homological(res, flat, 12), SmallDivisorError);
}

TEST_CASE("kernel projection") {
    TupleTable odd{{DivisorQuery{3, 1, {1, 1, 1}}, 1.0}, {DivisorQuery{3, 2, {2, 1, 1}}, 2.0}};
    CHECK(kernel_project(odd).empty());
    TupleTable two{{DivisorQuery{2, 1, {3, 3}}, 1.0}, {DivisorQuery{2, 1, {3, 4}}, 2.0}};
    auto k = kernel_project(two);
    REQUIRE(k.size() == 1);
    CHECK(k[0].q.n == std::vector<int>{3, 3});
}

TEST_CASE("tuple tables") {
    // mean of |u|^4 for u = a cos(x)/sqrt(pi): a^2 conj(a)^2 (3/8)(2 pi)/pi^2
    Polynomial g{Monomial{{2, 0, 0}, {2, 0, 0}, 1.0}};
    auto t = tuple_table(g, 3);
    std::vector<cplx> amp{0.0, cplx(0.2, 0.1), 0.0, 0.0};
    double a2 = std::norm(amp[1]);
    cplx expect = a2 * a2 * 0.375 / (kPi * kPi);
    // mean of |u|^4 for u = a cos(x)/sqrt(pi) is |a|^4 (3/8) / pi^2

    // against a direct quadrature of mean g(u) for a mixed state
    std::vector<cplx> b{cplx(0.1, 0.05), cplx(0.2, -0.1), cplx(0.0, 0.07), cplx(-0.04, 0.0)};
    int n = 64;
    cplx q = 0;
    for (int m = 0; m < n; ++m) {
        double x = 2 * kPi * m / n;
        cplx u = b[0] / kSqrt2Pi;
        for (int k = 1; k <= 3; ++k) u += b[k] * std::cos(k * x) / std::sqrt(kPi);
        q += u * u * std::conj(u) * std::conj(u);
    }
    q /= double(n);
    CHECK(std::abs(evaluate_table(t, b) - q) < 1e-14);
    CHECK_THROWS(tuple_table(Polynomial{Monomial{{2, 0, 0}, {1, 0, 0}, 1.0}, Monomial{{1, 0, 0}, {1, 0, 0}, 1.0}}, 3));
}

}
