#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "paranls/errors.hpp"
#include "paranls/harness.hpp"

#ifndef PARANLS_VERSION
#define PARANLS_VERSION "0.0.0"
#endif

namespace paranls {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(path.empty() ? "/" : path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(path + "/" + it.key(), "unknown key");
}

double get_number(const json& j, const std::string& key, const std::string& path, double def) {
    if (!j.contains(key)) return def;
    if (!j[key].is_number()) fail(path + "/" + key, "expected a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& path, int def) {
    if (!j.contains(key)) return def;
    if (!j[key].is_number_integer()) fail(path + "/" + key, "expected an integer");
    return j[key].get<int>();
}

std::vector<double> get_numbers(const json& j, const std::string& key, const std::string& path,
                                std::vector<double> def) {
    if (!j.contains(key)) return def;
    const json& a = j[key];
    if (!a.is_array()) fail(path + "/" + key, "expected an array of numbers");
    std::vector<double> r;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) fail(path + "/" + key + "/" + std::to_string(i), "expected a number");
        r.push_back(a[i].get<double>());
    }
    return r;
}

Nonlinearity parse_nonlinearity(const json& j, const std::string& path) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "cubic") return Nonlinearity::cubic();
        if (name == "cubic_uxx") return Nonlinearity::cubic_uxx();
        if (name == "zero") return Nonlinearity::zero();
        fail(path, "unknown nonlinearity '" + name + "' (cubic, cubic_uxx, zero, or a monomial list)");
    }
    if (j.is_object()) {
        only_keys(j, path, {"file"});
        if (!j.contains("file") || !j["file"].is_string()) fail(path + "/file", "expected a path");
        std::ifstream in(j["file"].get<std::string>());
        if (!in) fail(path + "/file", "cannot open " + j["file"].get<std::string>());
        json k;
        try {
            k = json::parse(in);
        } catch (const json::parse_error& e) {
            fail(path + "/file", e.what());
        }
        return parse_nonlinearity(k, path + "/file");
    }
    if (!j.is_array()) fail(path, "expected a name, a file reference or a monomial list");
    Polynomial poly;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "/" + std::to_string(i);
        only_keys(j[i], p, {"alpha", "beta", "C"});
        try {
            poly.push_back(j[i].get<Monomial>());
        } catch (const json::exception& e) {
            fail(p, e.what());
        }
    }
    try {
        return Nonlinearity(poly);
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

int line_of(const std::string& text, const std::string& message) {
    // last key of the json pointer at the head of the message
    const auto colon = message.find(':');
    if (colon == std::string::npos) return 0;
    const std::string ptr = message.substr(0, colon);
    const auto slash = ptr.find_last_of('/');
    if (slash == std::string::npos) return 0;
    std::string key = ptr.substr(slash + 1);
    if (key.empty()) return 0;
    size_t pos = text.find("\"" + key + "\"");
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig c;
    only_keys(j, "", {"J", "s", "delta", "dt", "params", "nonlinearity", "initial", "eps", "eps_grid", "stop",
                      "compare_unperturbed", "resonance", "output", "seed", "quick"});
    c.J = get_int(j, "J", "", c.J);
    if (c.J < 4 || c.J > 512) fail("/J", "must lie in [4, 512]");
    c.s = get_number(j, "s", "", c.s);
    if (c.s < 0) fail("/s", "must be nonnegative");
    c.cutoff.delta = get_number(j, "delta", "", c.cutoff.delta);
    try {
        c.cutoff.validate();
    } catch (const Error& e) {
        fail("/delta", e.what());
    }
    c.seed = static_cast<uint64_t>(get_int(j, "seed", "", static_cast<int>(c.seed)));
    if (j.contains("quick")) {
        if (!j["quick"].is_boolean()) fail("/quick", "expected a boolean");
        c.quick = j["quick"].get<bool>();
    }

    if (j.contains("dt")) {
        const json& d = j["dt"];
        only_keys(d, "/dt", {"policy", "dt", "tol", "dt_max"});
        if (d.contains("policy")) {
            if (!d["policy"].is_string()) fail("/dt/policy", "expected \"adaptive\" or \"fixed\"");
            const auto p = d["policy"].get<std::string>();
            if (p != "adaptive" && p != "fixed") fail("/dt/policy", "expected \"adaptive\" or \"fixed\"");
            c.adaptive = p == "adaptive";
        }
        c.dt = get_number(d, "dt", "/dt", c.dt);
        c.tol = get_number(d, "tol", "/dt", c.tol);
        c.dt_max = get_number(d, "dt_max", "/dt", c.dt_max);
        if (!(c.dt > 0)) fail("/dt/dt", "must be positive");
        if (!(c.tol > 0)) fail("/dt/tol", "must be positive");
        if (!(c.dt_max > 0)) fail("/dt/dt_max", "must be positive");
    }

    if (j.contains("params")) {
        const json& p = j["params"];
        only_keys(p, "/params", {"source", "m", "M", "seed"});
        if (p.contains("source")) {
            if (!p["source"].is_string()) fail("/params/source", "expected \"fixed\" or \"random\"");
            c.params_source = p["source"].get<std::string>();
            if (c.params_source != "fixed" && c.params_source != "random")
                fail("/params/source", "expected \"fixed\" or \"random\"");
        }
        c.m = get_numbers(p, "m", "/params", c.m);
        c.M = get_int(p, "M", "/params", c.M);
        if (c.M < 1) fail("/params/M", "must be at least 1");
        if (p.contains("seed")) c.seed = static_cast<uint64_t>(get_int(p, "seed", "/params", 0));
        try {
            PotentialParams check(c.m);
        } catch (const Error& e) {
            fail("/params/m", e.what());
        }
    }

    if (j.contains("nonlinearity")) c.f = parse_nonlinearity(j["nonlinearity"], "/nonlinearity");

    if (j.contains("initial")) {
        const json& in = j["initial"];
        only_keys(in, "/initial", {"modes"});
        if (in.contains("modes")) {
            const json& m = in["modes"];
            if (!m.is_array() || m.empty()) fail("/initial/modes", "expected a nonempty list of [n, amplitude]");
            c.initial.modes.clear();
            for (size_t i = 0; i < m.size(); ++i) {
                const std::string p = "/initial/modes/" + std::to_string(i);
                if (!m[i].is_array() || m[i].size() != 2 || !m[i][0].is_number_integer() || !m[i][1].is_number())
                    fail(p, "expected [n, amplitude]");
                const int n = m[i][0].get<int>();
                if (n < 0 || n > c.J) fail(p, "mode outside [0, J]");
                c.initial.modes.push_back({n, m[i][1].get<double>()});
            }
        }
    }

    c.eps = get_number(j, "eps", "", c.eps);
    if (!(c.eps > 0)) fail("/eps", "must be positive");
    c.eps_grid = get_numbers(j, "eps_grid", "", c.eps_grid);
    for (size_t i = 0; i < c.eps_grid.size(); ++i)
        if (!(c.eps_grid[i] > 0)) fail("/eps_grid/" + std::to_string(i), "must be positive");

    if (j.contains("stop")) {
        const json& s = j["stop"];
        only_keys(s, "/stop", {"t_max", "t_max_scale", "norm_factor"});
        c.t_max = get_number(s, "t_max", "/stop", c.t_max);
        c.t_max_scale = get_number(s, "t_max_scale", "/stop", c.t_max_scale);
        c.norm_factor = get_number(s, "norm_factor", "/stop", c.norm_factor);
        if (!(c.t_max > 0)) fail("/stop/t_max", "must be positive");
        if (c.t_max_scale < 0) fail("/stop/t_max_scale", "must be nonnegative");
        if (c.norm_factor != 0 && !(c.norm_factor > 1)) fail("/stop/norm_factor", "must be 0 (off) or above 1");
    }
    if (j.contains("compare_unperturbed")) {
        if (!j["compare_unperturbed"].is_boolean()) fail("/compare_unperturbed", "expected a boolean");
        c.compare_unperturbed = j["compare_unperturbed"].get<bool>();
    }
    if (j.contains("resonance")) {
        const json& r = j["resonance"];
        only_keys(r, "/resonance", {"N", "n_max", "N0"});
        c.N = get_int(r, "N", "/resonance", c.N);
        c.n_max = get_int(r, "n_max", "/resonance", c.n_max);
        c.N0 = get_int(r, "N0", "/resonance", c.N0);
        if (c.N < 1) fail("/resonance/N", "must be at least 1");
        if (c.n_max < 0) fail("/resonance/n_max", "must be nonnegative");
        if (c.N0 < 0) fail("/resonance/N0", "must be nonnegative");
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        only_keys(o, "/output", {"dir"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) fail("/output/dir", "expected a path");
            c.out_dir = o["dir"].get<std::string>();
        }
    }
    c.resolved = resolve(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    try {
        return parse_config(j);
    } catch (const ConfigError& e) {
        const int line = line_of(text, e.what());
        throw ConfigError(path + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + e.what());
    }
}

json resolve(const ExperimentConfig& c) {
    json modes = json::array();
    for (auto& [n, a] : c.initial.modes) modes.push_back({n, a});
    return {{"J", c.J},
            {"s", c.s},
            {"delta", c.cutoff.delta},
            {"dt", {{"policy", c.adaptive ? "adaptive" : "fixed"}, {"dt", c.dt}, {"tol", c.tol}, {"dt_max", c.dt_max}}},
            {"params", {{"source", c.params_source}, {"m", c.m}, {"M", c.M}, {"seed", c.seed}}},
            {"nonlinearity", c.f},
            {"initial", {{"modes", modes}}},
            {"eps", c.eps},
            {"eps_grid", c.eps_grid},
            {"stop", {{"t_max", c.t_max}, {"t_max_scale", c.t_max_scale}, {"norm_factor", c.norm_factor}}},
            {"compare_unperturbed", c.compare_unperturbed},
            {"resonance", {{"N", c.N}, {"n_max", c.n_max}, {"N0", c.N0}}},
            {"output", {{"dir", c.out_dir}}},
            {"seed", c.seed},
            {"quick", c.quick}};
}

std::string config_hash(const json& resolved) {
    // FNV-1a 64; where the outputs go does not change the run
    json keyed = resolved;
    if (keyed.is_object()) keyed.erase("output");
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : keyed.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string code_version() { return PARANLS_VERSION; }

PotentialParams make_params(const ExperimentConfig& cfg) {
    if (cfg.params_source == "fixed") return PotentialParams(cfg.m);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    std::vector<double> m(cfg.M);
    for (auto& v : m) v = U(rng);
    return PotentialParams(m);
}

PairField initial_state(const ExperimentConfig& cfg, double eps) {
    FourierField u(cfg.J);
    for (auto& [n, a] : cfg.initial.modes) {
        if (n == 0)
            u[0] += eps * a * kSqrt2Pi;
        else {
            u[n] += eps * a * kSqrt2Pi / 2;
            u[-n] += eps * a * kSqrt2Pi / 2;
        }
    }
    return PairField::realified(u);
}

}  // namespace paranls
