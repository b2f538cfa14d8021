#include "paranls/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <unsupported/Eigen/MatrixFunctions>

#include "paranls/errors.hpp"

namespace paranls {

namespace {

const cplx I(0.0, 1.0);

struct Phases {
    std::vector<cplx> half, full;  // exp(i lambda_j h/2), exp(i lambda_j h)
};

std::vector<double> frequencies(const PotentialParams& params, int J) {
    std::vector<double> lam(2 * J + 1);
    for (int j = 0; j <= J; ++j) lam[J + j] = lam[J - j] = frequency(params, j);
    return lam;
}

Phases make_phases(const std::vector<double>& lam, double h) {
    Phases p;
    p.half.reserve(lam.size());
    p.full.reserve(lam.size());
    for (double l : lam) {
        p.half.push_back(std::polar(1.0, l * 0.5 * h));
        p.full.push_back(std::polar(1.0, l * h));
    }
    return p;
}

Phases make_phases(const PotentialParams& params, int J, double h) { return make_phases(frequencies(params, J), h); }

PairField apply_phases(const PairField& U, const std::vector<cplx>& ph) {
    PairField r = U;
    const int J = U.J();
    for (int j = -J; j <= J; ++j) {
        r.plus[j] *= ph[j + J];
        r.minus[j] *= std::conj(ph[j + J]);
    }
    return r;
}

// i E F(U)
PairField nonlinear_part(const PairField& U, const Nonlinearity& f, bool dealias) {
    PairField F = nonlinear_term(U, f, dealias);
    F.plus *= I;
    F.minus *= -I;
    return F;
}

void check_step(const PairField& U, double dt, const Nonlinearity& f, const StepOptions& opt) {
    if (dt == 0.0 || !std::isfinite(dt)) throw RangeError("step_lawson: dt must be finite and nonzero");
    if (!opt.override_hypothesis) {
        auto rep = validate_hypothesis(f);
        if (!rep.ok()) throw HypothesisViolation("step_lawson: " + rep.violations.front());
    }
    const int d = f.max_derivative();
    if (opt.cfl > 0.0 && d >= 1 && std::abs(dt) > opt.cfl / std::pow(U.J(), d))
        throw RangeError("step_lawson: |dt| exceeds the cfl / J^d guard");
}

bool finite(const PairField& U) { return U.plus.is_finite() && U.minus.is_finite(); }

double max_abs(const PairField& U) { return std::max(U.plus.max_abs(), U.minus.max_abs()); }

double max_abs_diff(const PairField& a, const PairField& b) {
    return std::max(paranls::max_abs_diff(a.plus, b.plus), paranls::max_abs_diff(a.minus, b.minus));
}

PairField lawson(const PairField& U, double h, const Phases& ph, const Nonlinearity& f, bool dealias) {
    if (f.empty()) return apply_phases(U, ph.full);
    PairField k1 = nonlinear_part(U, f, dealias);
    PairField k2 = nonlinear_part(apply_phases(U + (0.5 * h) * k1, ph.half), f, dealias);
    PairField Uh = apply_phases(U, ph.half);
    PairField k3 = nonlinear_part(Uh + (0.5 * h) * k2, f, dealias);
    PairField k4 = nonlinear_part(apply_phases(U, ph.full) + h * apply_phases(k3, ph.half), f, dealias);
    PairField out = apply_phases(U, ph.full);
    out = out + (h / 6.0) * (apply_phases(k1, ph.full) + 2.0 * apply_phases(k2 + k3, ph.half) + k4);
    return out;
}

}  // namespace

PairField linear_flow(const PairField& U, const PotentialParams& params, double t) {
    return apply_phases(U, make_phases(params, U.J(), t).full);
}

PairField step_lawson(const PairField& U, double dt, const PotentialParams& params, const Nonlinearity& f,
                      const StepOptions& opt) {
    check_step(U, dt, f, opt);
    PairField r = lawson(U, dt, make_phases(params, U.J(), dt), f, opt.dealias);
    if (!finite(r)) throw StepFailure("step_lawson: non-finite values");
    return r;
}

PairField resymmetrize(const PairField& U) {
    FourierField p = 0.5 * (U.plus + U.minus.conj());
    return PairField::realified(p);
}

std::string to_string(TerminalReason r) {
    switch (r) {
        case TerminalReason::t_max: return "t_max";
        case TerminalReason::norm_threshold: return "norm_threshold";
        case TerminalReason::step_failure: return "step_failure";
    }
    return "unknown";
}

TrajectoryRecord integrate(const PairField& U0, const PotentialParams& params, const Nonlinearity& f,
                           const IntegrateOptions& opt) {
    if (!(opt.t_max > 0.0)) throw RangeError("integrate: t_max must be positive");
    if (opt.s_list.empty()) throw RangeError("integrate: s_list is empty");
    if (opt.stop_s_index < 0 || opt.stop_s_index >= static_cast<int>(opt.s_list.size()))
        throw RangeError("integrate: stop_s_index outside s_list");
    if (opt.max_records < 2) throw RangeError("integrate: max_records must be at least 2");
    if (parity_defect(U0) > 1e-10 * std::max(1.0, max_abs(U0))) throw StructureError("integrate: U0 is not even");
    if (U0.realification_defect() > 1e-10 * std::max(1.0, max_abs(U0)))
        throw StructureError("integrate: U0 is not realified");

    TrajectoryRecord rec;
    rec.s_list = opt.s_list;
    const double spacing = opt.t_max / (opt.max_records - 1);
    double next_sample = 0.0;
    auto record = [&](double t, const PairField& U, double rdef) {
        std::vector<double> norms;
        for (double s : opt.s_list) norms.push_back(sobolev_norm(U.plus, s));
        const double pdef = parity_defect(U);
        rec.max_parity_defect = std::max(rec.max_parity_defect, pdef);
        rec.max_realification_defect = std::max(rec.max_realification_defect, rdef);
        if (t < next_sample && t < opt.t_max) return;
        if (!rec.times.empty() && t <= rec.times.back()) return;
        rec.times.push_back(t);
        rec.sobolev_norms.push_back(norms);
        rec.parity_defects.push_back(pdef);
        rec.realification_defects.push_back(rdef);
        while (next_sample <= t) next_sample += spacing;
    };

    PairField U = U0;
    double t = 0.0;
    record(0.0, U, U.realification_defect());
    const double n0 = sobolev_norm(U.plus, opt.s_list[opt.stop_s_index]);
    double h = opt.adaptive ? std::min(opt.dt, opt.dt_max) : opt.dt;
    const std::vector<double> lam = frequencies(params, U.J());
    const Phases fixed = opt.adaptive ? Phases{} : make_phases(lam, h);
    try {
        check_step(U, h, f, opt.step);
        while (t < opt.t_max) {
            PairField next;
            double taken;
            if (opt.adaptive) {
                h = std::min(h, opt.t_max - t);
                PairField big = lawson(U, h, make_phases(lam, h), f, opt.step.dealias);
                Phases hp = make_phases(lam, 0.5 * h);
                PairField small = lawson(lawson(U, 0.5 * h, hp, f, opt.step.dealias), 0.5 * h, hp, f, opt.step.dealias);
                if (!finite(big) || !finite(small)) throw StepFailure("integrate: non-finite values");
                const double err = max_abs_diff(big, small) / std::max(max_abs(U), 1e-300);
                const double grow = err > 0.0 ? 0.9 * std::pow(opt.tol / err, 0.2) : 2.0;
                if (err > opt.tol) {
                    ++rec.rejected;
                    h *= std::max(0.2, grow);
                    if (h < opt.dt_min) throw StepFailure("integrate: step size fell below dt_min");
                    continue;
                }
                taken = h;
                next = small;
                h = std::min(opt.dt_max, h * std::clamp(grow, 0.2, 2.0));
                if (opt.step.cfl > 0.0 && f.max_derivative() >= 1)
                    h = std::min(h, opt.step.cfl / std::pow(U.J(), f.max_derivative()));
            } else {
                const bool last = t + h > opt.t_max;
                taken = last ? opt.t_max - t : h;
                next = last ? lawson(U, taken, make_phases(lam, taken), f, opt.step.dealias)
                            : lawson(U, h, fixed, f, opt.step.dealias);
                if (!finite(next)) throw StepFailure("integrate: non-finite values");
            }
            const double rdef = next.realification_defect();
            U = resymmetrize(next);
            t = (opt.t_max - t - taken < 1e-12 * opt.t_max) ? opt.t_max : t + taken;
            ++rec.steps;
            const double nrm = sobolev_norm(U.plus, opt.s_list[opt.stop_s_index]);
            const bool stop = opt.norm_factor > 0.0 && nrm >= opt.norm_factor * n0;
            if (stop) next_sample = t;
            record(t, U, rdef);
            if (stop) {
                rec.terminal_reason = TerminalReason::norm_threshold;
                break;
            }
        }
    } catch (const Error& e) {
        rec.terminal_reason = TerminalReason::step_failure;
        rec.failure = e.what();
    }
    rec.terminal_time = t;
    rec.final_state = U;
    return rec;
}

PairField propagate(const PairField& U0, const PotentialParams& params, const Nonlinearity& f, double dt,
                    long long steps, const StepOptions& opt) {
    check_step(U0, dt, f, opt);
    const Phases ph = make_phases(params, U0.J(), dt);
    PairField U = U0;
    for (long long k = 0; k < steps; ++k) {
        U = resymmetrize(lawson(U, dt, ph, f, opt.dealias));
        if (!finite(U)) throw StepFailure("propagate: non-finite values");
    }
    return U;
}

double reversibility_test(const PairField& U0, const PotentialParams& params, const Nonlinearity& f, double T,
                          double dt, const StepOptions& opt) {
    if (!(T > 0.0) || !(dt > 0.0)) throw RangeError("reversibility_test: T and dt must be positive");
    const long long steps = std::llround(T / dt);
    PairField back = propagate(U0, params, f, -dt, steps, opt);
    PairField fwd = propagate(apply_involution(U0), params, f, dt, steps, opt);
    return sobolev_norm(back.plus.conj() - fwd.plus, 0.0);
}

double observed_order(const PairField& U0, const PotentialParams& params, const Nonlinearity& f, double T,
                      double dt, const StepOptions& opt) {
    const long long n = std::llround(T / dt);
    PairField a = propagate(U0, params, f, dt, n, opt);
    PairField b = propagate(U0, params, f, dt / 2, 2 * n, opt);
    PairField c = propagate(U0, params, f, dt / 4, 4 * n, opt);
    const double e1 = sobolev_norm(a - b, 0.0), e2 = sobolev_norm(b - c, 0.0);
    if (!(e1 > 0.0) || !(e2 > 0.0)) throw MeasurementError("observed_order: differences vanish");
    return std::log2(e1 / e2);
}

LinearEnergyResult linear_model_energy(const PairField& Z0, double m2, const SymbolMatrix2& A, double T,
                                       const PotentialParams& params, double s, const CutoffConfig& cfg) {
    auto x_dependent = [](const Symbol& a) {
        for (const auto& t : a.terms)
            for (int n = 1; n <= t.coeff.J(); ++n)
                if (t.coeff[n] != 0.0 || t.coeff[-n] != 0.0) return true;
        return false;
    };
    if (x_dependent(A.a) || x_dependent(A.b))
        throw PreconditionError("linear_model_energy: the symbol must be x-independent");
    const int J = Z0.J();
    OperatorMatrix Ta = bony_weyl(A.a, cfg, J), Tb = bony_weyl(A.b, cfg, J);
    OperatorMatrix Tbb = bony_weyl(conj(reflect_xi(A.b)), cfg, J), Taa = bony_weyl(conj(reflect_xi(A.a)), cfg, J);
    PairField Z = Z0;
    for (int j = -J; j <= J; ++j) {
        const double d = frequency(params, j) - m2 * double(j) * j;
        Eigen::Matrix2cd K;
        K << I * (d + Ta(j, j)), I * Tb(j, j), -I * Tbb(j, j), -I * (d + Taa(j, j));
        Eigen::Matrix2cd P = (K * T).exp();
        Eigen::Vector2cd z(Z0.plus[j], Z0.minus[j]);
        Eigen::Vector2cd w = P * z;
        Z.plus[j] = w(0);
        Z.minus[j] = w(1);
    }
    LinearEnergyResult r;
    r.energy0 = std::pow(sobolev_norm(Z0, s), 2);
    r.energyT = std::pow(sobolev_norm(Z, s), 2);
    r.drift = r.energy0 > 0.0 ? std::abs(r.energyT - r.energy0) / r.energy0 : 0.0;
    return r;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
    os << "t";
    for (double s : rec.s_list) os << ",norm_H" << s;
    os << ",parity_defect,realification_defect\n";
    os.precision(17);
    for (size_t i = 0; i < rec.times.size(); ++i) {
        os << rec.times[i];
        for (double v : rec.sobolev_norms[i]) os << ',' << v;
        os << ',' << rec.parity_defects[i] << ',' << rec.realification_defects[i] << '\n';
    }
}

void to_json(nlohmann::json& j, const TrajectoryRecord& rec) {
    j = {{"terminal_reason", to_string(rec.terminal_reason)},
         {"terminal_time", rec.terminal_time},
         {"steps", rec.steps},
         {"rejected", rec.rejected},
         {"records", rec.times.size()},
         {"max_parity_defect", rec.max_parity_defect},
         {"max_realification_defect", rec.max_realification_defect},
         {"s_list", rec.s_list}};
    if (!rec.sobolev_norms.empty()) {
        j["initial_norms"] = rec.sobolev_norms.front();
        j["final_norms"] = rec.sobolev_norms.back();
    }
    if (!rec.failure.empty()) j["failure"] = rec.failure;
}

}  // namespace paranls
