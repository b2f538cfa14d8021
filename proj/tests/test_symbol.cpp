#include <doctest.h>

#include "paranls/errors.hpp"
#include "paranls/symbol.hpp"

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

}  // namespace

TEST_SUITE("symbol") {

TEST_CASE("cutoff plateau and symmetry") {
    Cutoff chi(CutoffConfig{0.25});
    for (double xi : {0.0, 1.0, 7.5, -40.0}) CHECK(chi(0.0, xi) == 1.0);
    for (double xip = -6; xip <= 6; xip += 0.5)
        for (double xi = -30; xi <= 30; xi += 1.5) CHECK(chi(xip, xi) == chi(-xip, xi));
    // (delta/2) <xi> >= 1 exactly when <xi> >= 8
    double edge = std::sqrt(63.0);
    CHECK(chi(1.0, edge + 1e-9) == 1.0);
    CHECK(chi(1.0, std::sqrt(48.0)) < 1.0);
    CHECK(chi(1.0, 2.0) == 0.0);
    double mid = chi(1.0, 6.0);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    CHECK_THROWS_AS(Cutoff(CutoffConfig{0.7}), ConfigError);
}

TEST_CASE("regularization") {
    CutoffConfig cfg{0.25};
    Cutoff chi(cfg);
    Symbol flat(FourierField::constant(4, 1.0), XiProfile::power(2));
    auto r = regularize(flat, cfg);
    for (double xi : {0.0, 1.0, 5.0}) CHECK(std::abs(r.hat(0, xi) - flat.hat(0, xi)) < 1e-15);

    Symbol a(cos_field(4, 1), XiProfile::power(2));
    auto ra = regularize(a, cfg);
    for (double xi : {0.5, 6.0, 9.0, 20.0}) {
        cplx expect = a.hat(1, xi) * chi(1.0, xi);
        CHECK(std::abs(ra.hat(1, xi) - expect) < 1e-14);
    }
    CHECK(std::abs(ra.hat(1, 9.0) - a.hat(1, 9.0)) < 1e-14);

    Symbol high(cos_field(4, 3), XiProfile());
    auto rh = regularize(high, cfg);
    CHECK(std::abs(rh(0.3, 0.0)) == 0.0);
}

TEST_CASE("structure predicates") {
    Symbol d2(FourierField::constant(2, 1.0), XiProfile::power(2));
    SymbolMatrix2 A{d2, Symbol()};
    CHECK(is_reality_preserving(A.fn()));
    CHECK(is_parity_preserving(A.fn()));

    Symbol sx(sin_field(2, 1), XiProfile::power(1));
    SymbolMatrix2 B{sx, Symbol()};
    CHECK(is_parity_preserving(B.fn()));
    Symbol cx(cos_field(2, 1), XiProfile::power(1));
    CHECK_FALSE(is_parity_preserving(SymbolMatrix2{cx, Symbol()}.fn()));

    auto builder = [](const PairField& U) {
        auto m = exact_product(U.plus, U.minus);
        return SymbolMatrix2{Symbol(m, XiProfile()), Symbol()}.fn();
    };
    FourierField u(3);
    u[0] = 0.3;
    u[2] = u[-2] = cplx(0.1, 0.2);
    auto U = PairField::realified(u);
    CHECK(is_reversibility_preserving(builder, U));
}

TEST_CASE("symbol arithmetic") {
    Symbol a(cos_field(3, 1), XiProfile::power(1));
    Symbol b(sin_field(3, 2), XiProfile::japanese(0.5));
    auto c = a + cplx(2.0) * b;
    for (double x : {0.2, 2.0})
        for (double xi : {-3.0, 0.4, 7.0})
            CHECK(std::abs(c(x, xi) - a(x, xi) - 2.0 * b(x, xi)) < 1e-14);
    CHECK(c.order() == 1.0);
    auto ca = conj(a);
    CHECK(std::abs(ca(0.7, 1.3) - std::conj(a(0.7, 1.3))) < 1e-15);
    auto ra = reflect_xi(a);
    CHECK(std::abs(ra(0.7, 1.3) - a(0.7, -1.3)) < 1e-15);
}

TEST_CASE("profiles") {
    auto g = XiProfile::gamma();
    for (double xi : {0.5, 1.0, -3.0, 40.0}) CHECK(std::abs(g(xi) - 1.0 / cplx(0, xi)) < 1e-15);
    CHECK(std::abs(g(0.0)) < 1e-15);
    CHECK(std::abs(g(0.2) + g(-0.2)) < 1e-15);
    auto j = XiProfile::japanese(1.0);
    // d/dxi <xi> = xi / <xi>
    CHECK(std::abs(j.derivative(2.0, 1) - 2.0 / std::sqrt(5.0)) < 1e-14);
    auto p = XiProfile::power(3);
    CHECK(std::abs(p.derivative(1.5, 2) - cplx(0, -1) * 6.0 * 1.5) < 1e-13);
    auto back = XiProfile::from_json(XiProfile::product(j, g).to_json());
    CHECK(std::abs(back(3.0) - j(3.0) * g(3.0)) < 1e-15);
}

TEST_CASE("symbol json round trip") {
    Symbol a(cos_field(3, 1), XiProfile::power(1));
    a = regularize(a, CutoffConfig{0.25});
    nlohmann::json js = a;
    Symbol b = js.get<Symbol>();
    CHECK(std::abs(a(0.4, 9.0) - b(0.4, 9.0)) < 1e-15);
}

}
