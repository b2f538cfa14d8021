#include <doctest.h>

#include "paranls/calculus.hpp"

using namespace paranls;

namespace {

FourierField cos_field(int J, int n) {
    FourierField c(J);
    c[n] = c[-n] = kSqrt2Pi / 2;
    return c;
}

FourierField sin_field(int J, int n) {
    FourierField s(J);
    s[n] = kSqrt2Pi / cplx(0, 2);
    s[-n] = -s[n];
    return s;
}

double max_pointwise(const Symbol& a, const Symbol& b) {
    double w = 0;
    for (double x = 0; x < 6.28; x += 0.37)
        for (double xi = -9; xi <= 9; xi += 0.75) w = std::max(w, std::abs(a(x, xi) - b(x, xi)));
    return w;
}

}  // namespace

TEST_SUITE("calculus") {

TEST_CASE("x-independent composition is exact") {
    Symbol d(FourierField::constant(1, 1.0), XiProfile::power(1));
    Symbol d2(FourierField::constant(1, 1.0), XiProfile::power(2));
    for (int rho : {1, 2, 3}) CHECK(max_pointwise(compose_expansion(d, d, rho), d2) < 1e-13);
}

TEST_CASE("first order terms") {
    FourierField f = cos_field(3, 1) + 0.5 * cos_field(3, 2);
    Symbol F(f, XiProfile());
    Symbol d(FourierField::constant(3, 1.0), XiProfile::power(1));
    Symbol left = Symbol(f, XiProfile::power(1)) - 0.5 * Symbol(f.derivative(), XiProfile());
    Symbol right = Symbol(f, XiProfile::power(1)) + 0.5 * Symbol(f.derivative(), XiProfile());
    CHECK(max_pointwise(compose_expansion(F, d, 1), left) < 1e-13);
    CHECK(max_pointwise(compose_expansion(d, F, 1), right) < 1e-13);

    // and against the operator product, with no cutoff involved
    int J = 24;
    auto lhs = quantize(F, 0.5, J) * quantize(d, 0.5, J);
    auto rhs = quantize(left, 0.5, J);
    // the product leaves the truncation near the edges, compare the interior
    double w = 0;
    for (int k = -J + 3; k <= J - 3; ++k)
        for (int j = -J + 3; j <= J - 3; ++j) w = std::max(w, std::abs(lhs(k, j) - rhs(k, j)));
    CHECK(w < 1e-12);
}

TEST_CASE("remainder of commuting multipliers vanishes") {
    Symbol a(FourierField::constant(1, 1.0), XiProfile::japanese(1.0));
    Symbol b(FourierField::constant(1, 2.0), XiProfile::power(2));
    auto r = remainder_order(a, b, 2, CutoffConfig{0.25}, 32);
    // only rounding differences between the two matrix paths
    CHECK(r.remainder.max_abs() <= 1e-14 * quantize(b, 0.5, 32).max_abs() * 32);
    CHECK(std::isinf(r.fit.order));
    CHECK(r.pass);
}

TEST_CASE("remainder decay for smooth multiplications") {
    Symbol a(cos_field(2, 1), XiProfile());
    Symbol b(sin_field(2, 1), XiProfile());
    auto r = remainder_order(a, b, 2, CutoffConfig{0.25}, 64);
    CHECK(r.fit.order >= 1.0);
}

TEST_CASE("cutoff independence") {
    Symbol flat(FourierField::constant(1, 1.0), XiProfile::power(2));
    auto r = cutoff_independence(flat, CutoffConfig{0.25}, CutoffConfig{0.125}, 32);
    CHECK(r.identical);

    Symbol high(cos_field(32, 32), XiProfile());
    auto h = cutoff_independence(high, CutoffConfig{0.5}, CutoffConfig{0.25}, 300);
    CHECK_FALSE(h.identical);
    CHECK(h.band_lo >= 64.0 * 0.99);
    CHECK(h.band_hi <= 256.0 * 1.01);
}

}
