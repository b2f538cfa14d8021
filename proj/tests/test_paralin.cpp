#include <doctest.h>

#include <random>

#include "paranls/paralin.hpp"

using namespace paranls;

namespace {

FourierField cos_field(int J, int n) {
    FourierField c(J);
    c[n] = c[-n] = kSqrt2Pi / 2;
    return c;
}

FourierField random_field(std::mt19937_64& rng, int J, int Jc) {
    std::normal_distribution<double> g;
    FourierField u(J);
    for (int j = -Jc; j <= Jc; ++j) u[j] = 0.2 * cplx(g(rng), g(rng)) / (1.0 + j * j);
    return u;
}

FourierField random_even(std::mt19937_64& rng, int J, int Jc) {
    return even_projection(random_field(rng, J, Jc));
}

}  // namespace

TEST_SUITE("paralin") {

TEST_CASE("theta cutoff") {
    CutoffConfig cfg{0.25};
    CHECK(theta_cutoff(3, {100, 1, 1}, cfg) == 0.0);
    CHECK(theta_cutoff(3, {5, 5, 5}, cfg) == 1.0);
    // at the origin every factor shares the weight
    CHECK(para_weight(0, {0, 0, 0}, cfg) == doctest::Approx(1.0 / 3));
    CHECK(theta_cutoff(3, {0, 0, 0}, cfg) == doctest::Approx(0.0));
    bool found = false;
    for (int a = 1; a < 60 && !found; ++a) {
        std::vector<int> n{a, 2, 1};
        double th = theta_cutoff(3, n, cfg);
        double sum = th;
        for (int i = 0; i < 3; ++i) sum += para_weight(i, n, cfg);
        CHECK(std::abs(sum - 1.0) < 1e-15);
        if (th > 0 && th < 1) found = true;
    }
    CHECK(found);
}

TEST_CASE("paraproduct split") {
    CutoffConfig cfg{0.25};
    int J = 40;
    std::mt19937_64 rng(8);
    auto u2 = random_field(rng, J, 12);
    auto one = ParaproductSplit{};
    auto s1 = paraproduct_split({FourierField::constant(J, 1.0), u2}, cfg);
    CHECK(max_abs_diff(s1.total(), u2) < 1e-13);

    auto s2 = paraproduct_split({cos_field(J, 1), cos_field(J, 32)}, cfg);
    auto prod = dealiased_product({cos_field(J, 1), cos_field(J, 32)});
    CHECK(s2.remainder_part.max_abs() < 1e-15);
    CHECK(max_abs_diff(s2.para_parts[1], prod) < 1e-13);

    std::vector<FourierField> u{random_field(rng, 24, 8), random_field(rng, 24, 8), random_field(rng, 24, 8)};
    auto s3 = paraproduct_split(u, cfg);
    CHECK(max_abs_diff(s3.total(), dealiased_product(u)) < 1e-12);
    (void)one;
}

TEST_CASE("remainder smoothing") {
    CutoffConfig cfg{0.25};
    auto r = remainder_smoothing(3, 24, cfg);
    CHECK(r.pass);
    CHECK(r.ratio_min >= (cfg.delta / 2) / 2);
    auto sep = remainder_smoothing(std::vector<std::vector<int>>{{1, 32}}, cfg);
    CHECK(sep.support == 0);
    auto bal = remainder_smoothing(std::vector<std::vector<int>>{{8, 8, 8}}, cfg);
    CHECK(bal.ratio_min == doctest::Approx(1.0));
}

TEST_CASE("cubic paralinearization") {
    CutoffConfig cfg{0.25};
    std::mt19937_64 rng(9);
    auto u = random_even(rng, 16, 4);
    auto U = PairField::realified(u);
    auto P = paralinearize(Nonlinearity::cubic(), U, cfg);
    CHECK(P.a[2].max_abs() == 0.0);
    CHECK(P.a[1].max_abs() == 0.0);
    auto uu = exact_product(u, u.conj());
    auto usq = exact_product(u, u);
    CHECK(max_abs_diff(P.a[0], 2.0 * uu.resized(P.a[0].J())) < 1e-13);
    CHECK(max_abs_diff(P.b[0], usq.resized(P.b[0].J())) < 1e-13);
    CHECK(reconstruction_residual(Nonlinearity::cubic(), U, P) < 1e-12);
}

TEST_CASE("quasilinear principal coefficient") {
    CutoffConfig cfg{0.25};
    std::mt19937_64 rng(10);
    auto u = random_even(rng, 16, 4);
    auto U = PairField::realified(u);
    auto P = paralinearize(Nonlinearity::cubic_uxx(), U, cfg);
    auto uu = exact_product(u, u.conj());
    CHECK(max_abs_diff(P.a[2], uu.resized(P.a[2].J())) < 1e-13);
    auto s = inverse_transform(P.a[2], 2 * P.a[2].J() + 1);
    double im = 0;
    for (auto z : s) im = std::max(im, std::abs(z.imag()));
    CHECK(im < 1e-13);
    CHECK(reconstruction_residual(Nonlinearity::cubic_uxx(), U, P) < 1e-11);
}

TEST_CASE("zero state") {
    PairField Z{FourierField(8), FourierField(8)};
    auto P = paralinearize(Nonlinearity::cubic_uxx(), Z, CutoffConfig{});
    for (int d = 0; d < 3; ++d) {
        CHECK(P.a[d].max_abs() == 0.0);
        CHECK(P.b[d].max_abs() == 0.0);
    }
    CHECK(P.remainder_part.plus.max_abs() == 0.0);
}

TEST_CASE("structure of the paralinearized symbol") {
    CutoffConfig cfg{0.25};
    std::mt19937_64 rng(12);
    auto U = PairField::realified(random_even(rng, 12, 3));
    auto f = Nonlinearity::cubic_uxx();
    auto P = paralinearize(f, U, cfg);
    auto PS = paralinearize(f, apply_involution(U), cfg);
    auto d = structure_defects(P, PS);
    CHECK(d.a2_imag < 1e-13);
    CHECK(d.parity < 1e-13);
    CHECK(d.reversibility < 1e-13);
}

}
