#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "paranls/model.hpp"
#include "paranls/quantize.hpp"

namespace paranls {

struct StepOptions {
    bool dealias = true;
    bool override_hypothesis = false;
    // |dt| <= cfl / J^d when f contains derivatives of order d >= 1; 0 disables the guard
    double cfl = 4.0;
};

// Phases exp(i lambda_j t) on the plus slot and their conjugates on the minus slot.
PairField linear_flow(const PairField& U, const PotentialParams& params, double t);

// One interaction-picture RK4 step. dt may be negative (backward runs).
// The result is not re-symmetrized.
PairField step_lawson(const PairField& U, double dt, const PotentialParams& params, const Nonlinearity& f,
                      const StepOptions& opt = {});

// (u+ + conj u-)/2 in the plus slot and its conjugate in the minus slot.
PairField resymmetrize(const PairField& U);

enum class TerminalReason { t_max, norm_threshold, step_failure };
std::string to_string(TerminalReason r);

struct TrajectoryRecord {
    std::vector<double> s_list;
    std::vector<double> times;
    std::vector<std::vector<double>> sobolev_norms;  // [record][s index]
    std::vector<double> parity_defects;
    std::vector<double> realification_defects;  // before re-symmetrization
    TerminalReason terminal_reason = TerminalReason::t_max;
    double terminal_time = 0.0;
    long long steps = 0;
    long long rejected = 0;
    double max_parity_defect = 0.0;
    double max_realification_defect = 0.0;
    std::string failure;
    PairField final_state;
};

struct IntegrateOptions {
    std::vector<double> s_list{0.0};
    double t_max = 1.0;
    double norm_factor = 0.0;  // 0 disables the doubling stop
    int stop_s_index = 0;      // which entry of s_list the stop rule watches
    bool adaptive = true;
    double dt = 1e-2;          // fixed step, or the initial step when adaptive
    double tol = 1e-9;         // relative step-doubling tolerance
    double dt_min = 1e-8;
    double dt_max = 0.5;
    int max_records = 10000;
    StepOptions step;
};

// Step failures are recorded in the result, never thrown.
TrajectoryRecord integrate(const PairField& U0, const PotentialParams& params, const Nonlinearity& f,
                           const IntegrateOptions& opt);

// Fixed-step propagation with re-symmetrization after every step.
PairField propagate(const PairField& U0, const PotentialParams& params, const Nonlinearity& f, double dt,
                    long long steps, const StepOptions& opt = {});

// |conj(u backward at -T) - v forward at T|_{H^0}, v started from S U0.
double reversibility_test(const PairField& U0, const PotentialParams& params, const Nonlinearity& f, double T,
                          double dt, const StepOptions& opt = {});

// log2 of successive step-halving differences at the final time.
double observed_order(const PairField& U0, const PotentialParams& params, const Nonlinearity& f, double T,
                      double dt, const StepOptions& opt = {});

struct LinearEnergyResult {
    double energy0 = 0.0;  // squared H^s norm
    double energyT = 0.0;
    double drift = 0.0;    // |energyT - energy0| / energy0
};

// Exact flow of i E (Lambda + m2 (i xi)^2 + Op(A)) for an x-independent A.
LinearEnergyResult linear_model_energy(const PairField& Z0, double m2, const SymbolMatrix2& A, double T,
                                       const PotentialParams& params, double s = 0.0,
                                       const CutoffConfig& cfg = {});

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec);
void to_json(nlohmann::json& j, const TrajectoryRecord& rec);  // summary only

}  // namespace paranls
