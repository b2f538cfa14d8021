#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "paranls/evolve.hpp"
#include "paranls/fit.hpp"
#include "paranls/resonance.hpp"

namespace paranls {

struct InitialData {
    // u0 = eps * sum_k amp_k cos(n_k x)
    std::vector<std::pair<int, double>> modes{{1, 1.0}, {2, 0.5}};
};

struct ExperimentConfig {
    int J = 64;
    double s = 4.0;
    CutoffConfig cutoff;

    // dt policy
    bool adaptive = true;
    double dt = 0.02;
    double tol = 1e-9;
    double dt_max = 0.5;

    // potential: "fixed" uses m, "random" draws M entries from the seed
    std::string params_source = "fixed";
    std::vector<double> m{0.0};
    int M = 5;
    uint64_t seed = 20240601;

    Nonlinearity f = Nonlinearity::cubic();
    InitialData initial;

    double eps = 0.05;
    std::vector<double> eps_grid{0.1, 0.05, 0.025, 0.0125};
    double t_max = 10.0;
    double t_max_scale = 0.0;  // when positive, t_max = t_max_scale / eps^2
    double norm_factor = 2.0;
    bool compare_unperturbed = true;

    int N = 3;
    int n_max = 30;
    int N0 = 12;

    std::string out_dir = "out";
    bool quick = false;

    nlohmann::json resolved;  // full config after defaults, embedded in every output
};

// Throws ConfigError with the offending key path or the parse position.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json resolve(const ExperimentConfig& cfg);

std::string config_hash(const nlohmann::json& resolved);
std::string code_version();

PotentialParams make_params(const ExperimentConfig& cfg);
PairField initial_state(const ExperimentConfig& cfg, double eps);

struct LifespanRun {
    double eps = 0.0;
    double t_max = 0.0;
    double t_double = 0.0;
    bool censored = true;
    std::string terminal_reason;
    double max_ratio = 0.0;  // max recorded ||u||_s / ||u0||_s
};

struct LifespanFit {
    std::vector<LifespanRun> runs;
    std::vector<double> eps_values, t_double;
    std::optional<LinearFit> fit;  // log T_double against log eps
    std::string status;            // "ok", "inconclusive" or "insufficient"
};

LifespanFit lifespan_scan(const ExperimentConfig& cfg, const PotentialParams& params);
nlohmann::json to_json(const LifespanFit& f);

// Experiment drivers. Each writes its files into out_dir and returns the exit status.
struct RunOutput {
    int status = 0;
    nlohmann::json summary;
};

RunOutput cmd_simulate(const ExperimentConfig& cfg);
RunOutput cmd_lifespan_scan(const ExperimentConfig& cfg);
RunOutput cmd_resonance_scan(const ExperimentConfig& cfg);
RunOutput cmd_calculus_verify(const ExperimentConfig& cfg);
RunOutput cmd_paralinearize_check(const ExperimentConfig& cfg);
RunOutput cmd_reduce_demo(const ExperimentConfig& cfg);
RunOutput cmd_verify(const ExperimentConfig& cfg);

// Acceptance suite.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    double budget = 0.0;
    std::string message;
    nlohmann::json details;
};

struct AcceptanceOptions {
    bool quick = false;
    uint64_t seed = 20240601;
    std::function<Symbol(const Symbol&)> to_weyl = std_to_weyl;  // swapped out by the mutation test
};

using Criterion = std::function<CriterionResult(const AcceptanceOptions&)>;
struct CriterionEntry {
    int id;
    std::string name;
    double budget;
    Criterion run;
};
const std::vector<CriterionEntry>& acceptance_criteria();

CriterionResult run_criterion(const CriterionEntry& c, const AcceptanceOptions& opt);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& only = {});
std::string format_line(const CriterionResult& r);
nlohmann::json junit_json(const std::vector<CriterionResult>& results);

}  // namespace paranls
