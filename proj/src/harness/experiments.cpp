#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "paranls/calculus.hpp"
#include "paranls/errors.hpp"
#include "paranls/harness.hpp"
#include "paranls/paralin.hpp"
#include "paranls/reduce.hpp"

namespace paranls {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

fs::path prepare(const ExperimentConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

json stamp(const ExperimentConfig& cfg) {
    return {{"code_version", code_version()}, {"config_hash", config_hash(cfg.resolved)}, {"config", cfg.resolved}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path);
    os << j.dump(2) << '\n';
}

std::ofstream open_csv(const fs::path& path, const ExperimentConfig& cfg) {
    std::ofstream os(path);
    os << "# paranls " << code_version() << " config " << config_hash(cfg.resolved) << '\n';
    os.precision(17);
    return os;
}

double horizon(const ExperimentConfig& cfg, double eps) {
    return cfg.t_max_scale > 0 ? cfg.t_max_scale / (eps * eps) : cfg.t_max;
}

IntegrateOptions integrate_options(const ExperimentConfig& cfg, double eps) {
    IntegrateOptions o;
    o.s_list = {0.0, cfg.s};
    o.stop_s_index = 1;
    o.t_max = horizon(cfg, eps);
    o.norm_factor = cfg.norm_factor;
    o.adaptive = cfg.adaptive;
    o.dt = cfg.dt;
    o.tol = cfg.tol;
    o.dt_max = cfg.dt_max;
    return o;
}

LifespanRun lifespan_run(const ExperimentConfig& cfg, const PotentialParams& params, double eps) {
    IntegrateOptions o = integrate_options(cfg, eps);
    o.s_list = {cfg.s};
    o.stop_s_index = 0;
    o.max_records = 2000;
    TrajectoryRecord rec = integrate(initial_state(cfg, eps), params, cfg.f, o);
    LifespanRun run;
    run.eps = eps;
    run.t_max = o.t_max;
    run.terminal_reason = to_string(rec.terminal_reason);
    run.censored = rec.terminal_reason != TerminalReason::norm_threshold;
    run.t_double = run.censored ? 0.0 : rec.terminal_time;
    for (const auto& row : rec.sobolev_norms) run.max_ratio = std::max(run.max_ratio, row[0] / rec.sobolev_norms[0][0]);
    return run;
}

}  // namespace

LifespanFit lifespan_scan(const ExperimentConfig& cfg, const PotentialParams& params) {
    LifespanFit out;
    std::vector<std::future<LifespanRun>> jobs;
    for (double eps : cfg.eps_grid)
        jobs.push_back(std::async(std::launch::async, lifespan_run, std::cref(cfg), std::cref(params), eps));
    for (auto& j : jobs) out.runs.push_back(j.get());
    std::vector<double> lx, ly;
    for (const auto& r : out.runs)
        if (!r.censored) {
            out.eps_values.push_back(r.eps);
            out.t_double.push_back(r.t_double);
            lx.push_back(std::log(r.eps));
            ly.push_back(std::log(r.t_double));
        }
    if (lx.empty())
        out.status = "inconclusive";
    else if (lx.size() < 4)
        out.status = "insufficient";
    else {
        out.fit = fit_line(lx, ly);
        out.status = "ok";
    }
    return out;
}

json to_json(const LifespanFit& f) {
    json runs = json::array();
    for (const auto& r : f.runs)
        runs.push_back({{"eps", r.eps}, {"t_max", r.t_max}, {"t_double", r.censored ? json(nullptr) : json(r.t_double)},
                        {"censored", r.censored}, {"terminal_reason", r.terminal_reason}, {"max_ratio", r.max_ratio}});
    json j = {{"status", f.status}, {"runs", runs}, {"eps_values", f.eps_values}, {"t_double", f.t_double}};
    if (f.fit) {
        j["slope"] = f.fit->slope;
        j["slope_se"] = f.fit->slope_se;
        j["intercept"] = f.fit->intercept;
        j["intercept_se"] = f.fit->intercept_se;
        const double lo = *std::min_element(f.eps_values.begin(), f.eps_values.end());
        const double hi = *std::max_element(f.eps_values.begin(), f.eps_values.end());
        j["eps_span_decades"] = std::log10(hi / lo);
    }
    return j;
}

RunOutput cmd_simulate(const ExperimentConfig& cfg) {
    const PotentialParams params = make_params(cfg);
    const fs::path dir = prepare(cfg);
    TrajectoryRecord rec = integrate(initial_state(cfg, cfg.eps), params, cfg.f, integrate_options(cfg, cfg.eps));
    {
        auto os = open_csv(dir / "trajectory.csv", cfg);
        write_trajectory_csv(os, rec);
    }
    RunOutput out;
    out.summary = stamp(cfg);
    out.summary["params"] = params;
    out.summary["trajectory"] = rec;
    out.summary["integrator"] = "interaction-picture RK4 with exact linear phases";
    write_json(dir / "summary.json", out.summary);
    out.status = rec.terminal_reason == TerminalReason::step_failure ? 1 : 0;
    return out;
}

RunOutput cmd_lifespan_scan(const ExperimentConfig& cfg) {
    if (cfg.eps_grid.size() < 4) std::cerr << "warning: fewer than 4 eps values, the fit will not be valid\n";
    const PotentialParams params = make_params(cfg);
    const fs::path dir = prepare(cfg);
    LifespanFit fit = lifespan_scan(cfg, params);
    RunOutput out;
    out.summary = stamp(cfg);
    out.summary["params"] = params;
    out.summary["lifespan"] = to_json(fit);
    std::optional<LifespanFit> flat;
    if (cfg.compare_unperturbed) {
        flat = lifespan_scan(cfg, PotentialParams({0.0}));
        out.summary["unperturbed"] = to_json(*flat);
    }
    {
        auto os = open_csv(dir / "lifespan.csv", cfg);
        os << "potential,eps,t_max,t_double,censored,max_ratio\n";
        auto rows = [&](const LifespanFit& f, const char* label) {
            for (const auto& r : f.runs)
                os << label << ',' << r.eps << ',' << r.t_max << ',' << (r.censored ? std::string("") : std::to_string(r.t_double))
                   << ',' << (r.censored ? 1 : 0) << ',' << r.max_ratio << '\n';
        };
        rows(fit, "configured");
        if (flat) rows(*flat, "unperturbed");
    }
    write_json(dir / "lifespan.json", out.summary);
    out.status = fit.status == "ok" ? 0 : 1;
    return out;
}

RunOutput cmd_resonance_scan(const ExperimentConfig& cfg) {
    const PotentialParams params = make_params(cfg);
    const fs::path dir = prepare(cfg);
    NonresonanceReport rep;
    {
        auto os = open_csv(dir / "resonance.csv", cfg);
        os << "N,ell";
        for (int i = 0; i < cfg.N; ++i) os << ",n" << i + 1;
        os << ",psi,scaled\n";
        rep = scan_nonresonance(params, cfg.N, cfg.n_max, cfg.N0, 10'000'000,
                                [&](const DivisorQuery& q, double psi, double g) {
                                    os << q.N << ',' << q.ell;
                                    for (int v : q.n) os << ',' << v;
                                    os << ',' << psi << ',' << g << '\n';
                                });
    }
    RunOutput out;
    out.summary = stamp(cfg);
    out.summary["params"] = params;
    out.summary["report"] = rep;
    out.summary["paired_closed_form"] = paired_count(cfg.N, cfg.n_max);
    write_json(dir / "resonance.json", out.summary);
    out.status = rep.gamma_hat > 0 ? 0 : 1;
    return out;
}

RunOutput cmd_calculus_verify(const ExperimentConfig& cfg) {
    const fs::path dir = prepare(cfg);
    AcceptanceOptions opt;
    opt.quick = cfg.quick;
    opt.seed = cfg.seed;
    RunOutput out;
    out.summary = stamp(cfg);
    json checks = json::array();
    for (const auto& c : acceptance_criteria()) {
        if (c.id > 4) continue;
        CriterionResult r = run_criterion(c, opt);
        std::cout << format_line(r) << '\n';
        checks.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
        if (!r.pass) out.status = 1;
    }
    FourierField c(1);
    c[1] = c[-1] = kSqrt2Pi / 2;
    Symbol a(c, XiProfile::power(1));
    out.summary["checks"] = checks;
    out.summary["composition_at_config"] = to_json(remainder_order(a, a, 3, cfg.cutoff, cfg.J));
    write_json(dir / "calculus.json", out.summary);
    return out;
}

RunOutput cmd_paralinearize_check(const ExperimentConfig& cfg) {
    const fs::path dir = prepare(cfg);
    const PairField U = initial_state(cfg, cfg.eps);
    Paralinearization P = paralinearize(cfg.f, U, cfg.cutoff);
    Paralinearization Ps = paralinearize(cfg.f, apply_involution(U), cfg.cutoff);
    const double res = reconstruction_residual(cfg.f, U, P);
    SymmetrizationLog log = symmetrize(P, Ps);
    RunOutput out;
    out.summary = stamp(cfg);
    out.summary["reconstruction_residual"] = res;
    auto defects = [](const StructureDefects& d) {
        return json{{"a2_imag", d.a2_imag}, {"reversibility", d.reversibility}, {"parity", d.parity}};
    };
    out.summary["defects_before"] = defects(log.before);
    out.summary["defects_after"] = defects(log.after);
    out.summary["symmetrized"] = log.applied;
    out.summary["symbol"] = to_json(P);
    write_json(dir / "paralinearize.json", out.summary);
    out.status = res <= 1e-11 && log.before.a2_imag <= 1e-12 ? 0 : 1;
    std::cout << "reconstruction residual " << res << ", Im a2 " << log.before.a2_imag << ", reversibility "
              << log.before.reversibility << ", parity " << log.before.parity << '\n';
    return out;
}

RunOutput cmd_reduce_demo(const ExperimentConfig& cfg) {
    const fs::path dir = prepare(cfg);
    const PairField U = initial_state(cfg, cfg.eps);
    Paralinearization P = paralinearize(cfg.f, U, cfg.cutoff);
    const FourierField a2 = 0.5 * (P.a[2] + P.a[2].conj());
    const FourierField a1 = 0.5 * (P.a[1] + P.a[1].conj());
    json steps = json::array();
    bool ok = true;
    auto note = [&](const std::string& name, const json& values, bool pass) {
        steps.push_back({{"step", name}, {"values", values}, {"pass", pass}});
        ok = ok && pass;
        std::cout << (pass ? "ok   " : "FAIL ") << name << ' ' << values.dump() << '\n';
    };
    DiagonalizationResult D = diagonalize_principal(a2, P.b[2]);
    note("diagonalize", {{"conjugation_defect", D.conjugation_defect()}, {"inverse_defect", D.inverse_defect()}},
         D.conjugation_defect() <= 1e-12);
    Symbol d1 = corrector_d1(P.b[1], a2);
    const double d1_def = corrector_d1_defect(d1, P.b[1], a2);
    note("corrector_d1", {{"defect", d1_def}}, d1_def <= 1e-11);
    StraighteningResult S = straighten(a2);
    const double sd = straightening_defect(a2, S), tc = transported_constancy(a2, S);
    note("straighten",
         {{"a2_const", S.a2_const}, {"defect", sd}, {"endpoint_defect", S.endpoint_defect},
          {"inversion_defect", inversion_defect(S)}, {"transported_constancy", tc}, {"newton_iterations", S.newton_iterations}},
         sd <= 1e-10 && S.endpoint_defect <= 1e-12 && tc <= 1e-9);
    FourierField s = eliminate_order_one(a1, S.a2_const);
    const double r1 = order_one_residual(a1, S.a2_const, s);
    note("order_one", {{"residual", r1}}, r1 <= 1e-11);
    Symbol a0(P.a[0], XiProfile());
    Symbol n0 = constant_coeff_step(a0, S.a2_const);
    const double r0 = constant_coeff_residual(a0, n0, S.a2_const);
    note("order_zero", {{"residual", r0}, {"mean_a0", {a0.terms[0].coeff.mean().real(), a0.terms[0].coeff.mean().imag()}}},
         r0 <= 1e-11);
    RunOutput out;
    out.summary = stamp(cfg);
    out.summary["steps"] = steps;
    write_json(dir / "reduce.json", out.summary);
    out.status = ok ? 0 : 1;
    return out;
}

RunOutput cmd_verify(const ExperimentConfig& cfg) {
    const fs::path dir = prepare(cfg);
    AcceptanceOptions opt;
    opt.quick = cfg.quick;
    opt.seed = cfg.seed;
    std::vector<CriterionResult> results;
    for (const auto& c : acceptance_criteria()) {
        results.push_back(run_criterion(c, opt));
        std::cout << format_line(results.back()) << std::endl;
    }
    RunOutput out;
    out.summary = stamp(cfg);
    out.summary["acceptance"] = junit_json(results);
    write_json(dir / "verify.json", out.summary);
    out.status = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; }) ? 0 : 1;
    return out;
}

}  // namespace paranls
