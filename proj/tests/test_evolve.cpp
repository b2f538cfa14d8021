#include <doctest.h>

#include <random>
#include <sstream>

#include "paranls/errors.hpp"
#include "paranls/evolve.hpp"

using namespace paranls;

namespace {

PairField even_state(uint64_t seed, int J, int Jc, double eps) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    FourierField u(J);
    for (int j = 0; j <= Jc; ++j) u[j] = u[-j] = eps * cplx(g(rng), g(rng)) / (1.0 + j * j);
    return PairField::realified(u);
}

}  // namespace

TEST_SUITE("evolve") {

TEST_CASE("linear steps are exact") {
    PotentialParams p({0.2, -0.1, 0.3});
    auto U = even_state(1, 16, 10, 1.0);
    auto V = step_lawson(U, 0.3, p, Nonlinearity::zero());
    auto W = linear_flow(U, p, 0.3);
    CHECK(max_abs_diff(V.plus, W.plus) < 1e-13);
    CHECK(max_abs_diff(V.minus, W.minus) < 1e-13);

    auto e1 = PairField::realified(FourierField::mode(8, 1, 0.4));
    auto E = propagate(e1, p, Nonlinearity::zero(), 0.1, 10);
    CHECK(std::abs(E.plus[1] - std::exp(cplx(0, frequency(p, 1))) * 0.4) < 1e-12);
}

TEST_CASE("fourth order convergence") {
    PotentialParams p({0.1, 0.2});
    auto U = even_state(2, 16, 5, 0.5);
    double order = observed_order(U, p, Nonlinearity::cubic(), 1.0, 0.025);
    CHECK(order >= 3.7);
}

TEST_CASE("linear isometry") {
    PotentialParams p({0.4, -0.3});
    auto U = even_state(3, 32, 20, 1.0);
    IntegrateOptions o;
    o.s_list = {0.0, 2.0, 4.0};
    o.t_max = 20.0;
    o.adaptive = false;
    o.dt = 0.37;
    auto rec = integrate(U, p, Nonlinearity::zero(), o);
    for (size_t s = 0; s < 3; ++s) {
        double n0 = rec.sobolev_norms.front()[s];
        for (const auto& row : rec.sobolev_norms) CHECK(std::abs(row[s] - n0) <= 1e-11 * n0);
    }
    CHECK(rec.terminal_reason == TerminalReason::t_max);
}

TEST_CASE("small data stays small") {
    PotentialParams p({0.3, 0.1});
    double eps = 0.1;
    auto U = even_state(4, 32, 4, eps);
    IntegrateOptions o;
    o.s_list = {4.0};
    o.t_max = 1.0 / eps;
    o.norm_factor = 2.0;
    auto rec = integrate(U, p, Nonlinearity::cubic(), o);
    double n0 = rec.sobolev_norms.front()[0];
    for (const auto& row : rec.sobolev_norms) CHECK(std::abs(row[0] / n0 - 1) < 0.1);
    CHECK(rec.max_parity_defect <= 1e-10);
    CHECK(rec.terminal_reason == TerminalReason::t_max);
    CHECK(rec.terminal_time == doctest::Approx(o.t_max));
}

TEST_CASE("integrate rejects odd data") {
    FourierField s(8);
    s[1] = 0.1;
    s[-1] = -0.1;
    IntegrateOptions o;
    CHECK_THROWS_AS(integrate(PairField::realified(s), PotentialParams({0.0}), Nonlinearity::cubic(), o),
                    StructureError);
}

TEST_CASE("reversibility") {
    PotentialParams p({0.1, -0.2});
    auto U = even_state(5, 32, 4, 0.05);
    CHECK(reversibility_test(U, p, Nonlinearity::zero(), 5.0, 1e-2) <= 1e-11);
    CHECK(reversibility_test(U, p, Nonlinearity::cubic(), 2.0, 2e-3) <= 1e-6);

    Nonlinearity bad(Polynomial{Monomial{{2, 0, 0}, {1, 0, 0}, cplx(0.0, 1.0)}});
    StepOptions so;
    so.override_hypothesis = true;
    auto V = even_state(6, 16, 3, 0.3);
    double d = reversibility_test(V, p, bad, 1.0, 1e-2, so);
    CHECK(d > 1e-2 * sobolev_norm(V, 0.0));
    CHECK_THROWS_AS(reversibility_test(V, p, bad, 1.0, 1e-2), HypothesisViolation);
}

TEST_CASE("step size guard for derivative nonlinearities") {
    auto U = even_state(7, 32, 3, 0.01);
    CHECK_THROWS_AS(step_lawson(U, 0.5, PotentialParams({0.0}), Nonlinearity::cubic_uxx()), RangeError);
    CHECK_NOTHROW(step_lawson(U, 1e-3, PotentialParams({0.0}), Nonlinearity::cubic_uxx()));
}

TEST_CASE("linear model energy") {
    PotentialParams p({0.2});
    auto Z = even_state(8, 32, 12, 1.0);
    SymbolMatrix2 zero;
    auto r0 = linear_model_energy(Z, 0.1, zero, 10.0, p, 2.0);
    CHECK(r0.drift <= 1e-12);

    // imaginary diagonal part 0.01: the squared norm grows like e^{0.02 T}
    SymbolMatrix2 damp{Symbol(FourierField::constant(1, cplx(0.3, -0.01)), XiProfile()), Symbol()};
    auto r = linear_model_energy(Z, 0.1, damp, 10.0, p, 0.0);
    CHECK(r.drift == doctest::Approx(std::exp(0.2) - 1).epsilon(1e-6));

    SymbolMatrix2 xdep{Symbol(FourierField::mode(2, 1, 1.0), XiProfile()), Symbol()};
    CHECK_THROWS_AS(linear_model_energy(Z, 0.1, xdep, 1.0, p), PreconditionError);
}

TEST_CASE("trajectory output") {
    auto U = even_state(9, 16, 3, 0.05);
    IntegrateOptions o;
    o.s_list = {0.0, 1.0};
    o.t_max = 0.5;
    o.max_records = 6;
    auto rec = integrate(U, PotentialParams({0.1}), Nonlinearity::cubic(), o);
    CHECK(rec.times.size() <= 7);
    CHECK(rec.times.front() == 0.0);
    CHECK(rec.times.back() == doctest::Approx(0.5));
    std::ostringstream os;
    write_trajectory_csv(os, rec);
    auto text = os.str();
    CHECK(text.find("t,") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') >= static_cast<long>(rec.times.size()));
    nlohmann::json j;
    to_json(j, rec);
    CHECK(j["terminal_reason"] == "t_max");
}

}
