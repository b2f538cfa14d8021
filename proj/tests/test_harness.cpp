#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "paranls/errors.hpp"
#include "paranls/harness.hpp"

using namespace paranls;
using nlohmann::json;

namespace {

std::string error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("defaults and resolution") {
    auto cfg = parse_config(json::object());
    CHECK(cfg.J == 64);
    CHECK(cfg.s == 4.0);
    CHECK(cfg.resolved["J"] == 64);
    auto again = parse_config(cfg.resolved);
    CHECK(config_hash(again.resolved) == config_hash(cfg.resolved));
    auto other = parse_config(json{{"J", 32}});
    CHECK(config_hash(other.resolved) != config_hash(cfg.resolved));
    CHECK(config_hash(cfg.resolved).size() == 16);
    auto moved = parse_config(json{{"output", {{"dir", "elsewhere"}}}});
    CHECK(config_hash(moved.resolved) == config_hash(cfg.resolved));
}

TEST_CASE("schema errors name the offending key") {
    CHECK(error_of(json{{"nonlinearty", "cubic"}}).find("/nonlinearty") != std::string::npos);
    CHECK(error_of(json{{"J", -3}}).find("/J") != std::string::npos);
    CHECK(error_of(json{{"stop", {{"t_max", -1.0}}}}).find("/stop/t_max") != std::string::npos);
    CHECK(error_of(json{{"params", {{"m", {0.9}}}}}).find("/params") != std::string::npos);
    CHECK(error_of(json{{"nonlinearity", "quintic"}}).find("/nonlinearity") != std::string::npos);
    CHECK(error_of(json{{"dt", {{"policy", "sometimes"}}}}).find("/dt/policy") != std::string::npos);
}

TEST_CASE("file errors carry a line number") {
    auto dir = std::filesystem::temp_directory_path() / "paranls_unit_cfg";
    std::filesystem::create_directories(dir);
    auto p = (dir / "bad.json").string();
    {
        std::ofstream f(p);
        f << "{\n  \"J\": 32,\n  \"eps\": \"big\"\n}\n";
    }
    try {
        load_config(p);
        FAIL("no error raised");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad.json:3") != std::string::npos);
    }
    {
        std::ofstream f(p);
        f << "{\n  \"J\": 32,\n";
    }
    CHECK_THROWS_AS(load_config(p), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("nonlinearity forms") {
    auto a = parse_config(json{{"nonlinearity", "cubic_uxx"}});
    CHECK(json(a.f) == json(Nonlinearity::cubic_uxx()));
    json mono = json::array({json{{"alpha", {2, 0, 0}}, {"beta", {1, 0, 0}}, {"C", 1.0}}});
    auto b = parse_config(json{{"nonlinearity", mono}});
    CHECK(json(b.f) == json(Nonlinearity::cubic()));
}

TEST_CASE("parameters and initial data") {
    auto cfg = parse_config(json{{"params", {{"source", "random"}, {"M", 5}, {"seed", 11}}}});
    auto p1 = make_params(cfg), p2 = make_params(cfg);
    REQUIRE(p1.M() == 5);
    CHECK(p1.m == p2.m);
    for (double v : p1.m) CHECK(std::abs(v) < 0.5);
    auto fixed = parse_config(json{{"params", {{"m", {0.1, -0.2}}}}});
    CHECK(make_params(fixed).m == std::vector<double>{0.1, -0.2});

    auto U = initial_state(cfg, 0.1);
    CHECK(parity_defect(U) == 0.0);
    CHECK(U.realification_defect() == 0.0);
    // eps (cos x + 0.5 cos 2x)
    CHECK(std::abs(U.plus.eval(0.0) - 0.15) < 1e-15);
}

TEST_CASE("linear lifespan runs are censored") {
    auto cfg = parse_config(json{{"J", 16}, {"nonlinearity", "zero"}, {"eps_grid", {0.1, 0.05}}, {"stop", {{"t_max", 5.0}}}});
    auto fit = lifespan_scan(cfg, make_params(cfg));
    CHECK(fit.status == "inconclusive");
    for (const auto& r : fit.runs) {
        CHECK(r.censored);
        CHECK(r.max_ratio == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("acceptance table") {
    const auto& c = acceptance_criteria();
    REQUIRE(c.size() == 13);
    for (size_t i = 0; i < c.size(); ++i) CHECK(c[i].id == static_cast<int>(i) + 1);
    AcceptanceOptions opt;
    auto r = run_criterion(c[0], opt);
    CHECK(r.pass);
    CHECK(format_line(r).rfind("PASS  1 ", 0) == 0);
}

TEST_CASE("mutated weyl shift is caught") {
    AcceptanceOptions opt;
    opt.to_weyl = [](const Symbol& a) {
        Symbol b = std_to_weyl(a);
        for (auto& t : b.terms) t.shift += 1.0;  // -n/2 turned into +n/2
        return b;
    };
    auto r = run_criterion(acceptance_criteria()[0], opt);
    CHECK_FALSE(r.pass);
}

}
