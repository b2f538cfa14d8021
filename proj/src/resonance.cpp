#include "paranls/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "paranls/errors.hpp"

namespace paranls {

namespace {

double max_japanese(const DivisorQuery& q) { return japanese(q.max_mode()); }

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<long long>(std::llround(r));
}

// Calls visit on every nondecreasing k-tuple with entries in [0, n_max].
template <class F>
void sorted_tuples(int k, int n_max, F&& visit) {
    std::vector<int> t(k, 0);
    if (k == 0) {
        visit(t);
        return;
    }
    while (true) {
        visit(t);
        int i = k - 1;
        while (i >= 0 && t[i] == n_max) --i;
        if (i < 0) return;
        ++t[i];
        for (int j = i + 1; j < k; ++j) t[j] = t[i];
    }
}

std::vector<int> first_half(const DivisorQuery& q) { return {q.n.begin(), q.n.begin() + q.ell}; }
std::vector<int> second_half(const DivisorQuery& q) { return {q.n.begin() + q.ell, q.n.end()}; }

}  // namespace

void DivisorQuery::validate() const {
    if (N < 1) throw RangeError("DivisorQuery: N must be >= 1");
    if (ell < 0 || ell > N) throw RangeError("DivisorQuery: ell outside [0, N]");
    if (static_cast<int>(n.size()) != N) throw DimensionError("DivisorQuery: tuple length differs from N");
    for (int v : n)
        if (v < 0) throw RangeError("DivisorQuery: modes must be nonnegative");
}

int DivisorQuery::max_mode() const { return n.empty() ? 0 : *std::max_element(n.begin(), n.end()); }

bool operator==(const DivisorQuery& a, const DivisorQuery& b) { return a.N == b.N && a.ell == b.ell && a.n == b.n; }

double small_divisor(const PotentialParams& params, const DivisorQuery& q) {
    q.validate();
    // integer and potential parts are summed separately so the m = 0 case stays exact
    long long ip = 0;
    double pp = 0.0;
    for (int j = 0; j < q.N; ++j) {
        const long long n2 = static_cast<long long>(q.n[j]) * q.n[j];
        const int sgn = j < q.ell ? 1 : -1;
        ip -= sgn * n2;
        pp += sgn * potential_coeff(params, q.n[j]);
    }
    return static_cast<double>(ip) + pp;
}

bool pairing_excluded(const DivisorQuery& q) {
    q.validate();
    if (q.N % 2 != 0 || 2 * q.ell != q.N) return false;
    auto a = first_half(q), b = second_half(q);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

double vandermonde_det(const std::vector<int>& nvals) {
    const int q = static_cast<int>(nvals.size());
    if (q < 1) throw RangeError("vandermonde_det: empty tuple");
    for (int i = 0; i < q; ++i)
        for (int k = i + 1; k < q; ++k)
            if (nvals[i] == nvals[k]) throw PreconditionError("vandermonde_det: entries must be distinct");
    std::vector<double> x(q);
    double r = 1.0;
    for (int i = 0; i < q; ++i) {
        const double w = japanese(nvals[i]);
        r /= w * w * w;
        x[i] = 1.0 / (w * w);
    }
    for (int i = 0; i < q; ++i)
        for (int k = i + 1; k < q; ++k) r *= x[k] - x[i];
    return r;
}

long long paired_count(int N, int n_max) {
    if (N % 2 != 0) return 0;
    return binom(n_max + N / 2, N / 2);
}

NonresonanceReport scan_nonresonance(const PotentialParams& params, int N, int n_max, int N0, long long budget,
                                     const ScanVisitor& visit) {
    if (N < 1 || n_max < 0) throw RangeError("scan_nonresonance: need N >= 1 and n_max >= 0");
    long long total = 0;
    for (int ell = 0; ell <= N; ++ell) total += binom(n_max + ell, ell) * binom(n_max + N - ell, N - ell);
    if (total > budget) throw BudgetError("scan_nonresonance: " + std::to_string(total) + " tuples exceed budget");

    NonresonanceReport rep;
    rep.N = N;
    rep.n_max = n_max;
    rep.N0 = N0;
    rep.gamma_hat = std::numeric_limits<double>::infinity();
    for (int ell = 0; ell <= N; ++ell) {
        sorted_tuples(ell, n_max, [&](const std::vector<int>& a) {
            sorted_tuples(N - ell, n_max, [&](const std::vector<int>& b) {
                DivisorQuery q{N, ell, a};
                q.n.insert(q.n.end(), b.begin(), b.end());
                if (pairing_excluded(q)) {
                    ++rep.excluded_paired;
                    return;
                }
                ++rep.scanned;
                const double psi = small_divisor(params, q);
                const double g = std::abs(psi) * std::pow(max_japanese(q), N0);
                if (psi == 0.0) ++rep.zero_divisors;
                if (visit) visit(q, psi, g);
                if (g < rep.gamma_hat) {
                    rep.gamma_hat = g;
                    rep.worst_tuple = q;
                    rep.worst_divisor = psi;
                }
            });
        });
    }
    if (rep.scanned == 0) rep.gamma_hat = 0.0;
    return rep;
}

BadSetEstimate bad_set_measure_mc(const DivisorQuery& q, double gamma, int N0, long long samples, uint64_t seed,
                                  int M) {
    q.validate();
    if (samples < 1000) throw RangeError("bad_set_measure_mc: need at least 1000 samples");
    if (M < 1) throw RangeError("bad_set_measure_mc: M must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    const double thr = gamma * std::pow(max_japanese(q), -N0);
    BadSetEstimate e;
    e.gamma = gamma;
    e.samples = samples;
    std::vector<double> m(M);
    for (long long s = 0; s < samples; ++s) {
        for (auto& v : m) v = U(rng);
        if (std::abs(small_divisor(PotentialParams(m), q)) < thr) ++e.hits;
    }
    const double n = static_cast<double>(samples), z = 1.959963984540054;
    const double p = e.hits / n;
    e.fraction = p;
    const double den = 1.0 + z * z / n;
    const double c = (p + z * z / (2 * n)) / den;
    const double h = z / den * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    e.ci_lo = std::max(0.0, c - h);
    e.ci_hi = std::min(1.0, c + h);
    return e;
}

BadSetScaling bad_set_scaling(const DivisorQuery& q, const std::vector<double>& gammas, int N0, long long samples,
                              uint64_t seed, int M) {
    if (gammas.size() < 3) throw RangeError("bad_set_scaling: need at least three gamma values");
    BadSetScaling r;
    std::vector<double> g, f;
    double width = 0.0;
    for (double gamma : gammas) {
        r.estimates.push_back(bad_set_measure_mc(q, gamma, N0, samples, seed, M));
        g.push_back(gamma);
        f.push_back(r.estimates.back().fraction);
        width = std::max(width, r.estimates.back().ci_hi - r.estimates.back().ci_lo);
    }
    r.fit = fit_line(g, f);
    r.linear_within_ci = std::abs(r.fit.intercept) <= width;
    for (const auto& e : r.estimates) {
        const double pred = r.fit.intercept + r.fit.slope * e.gamma;
        if (pred < e.ci_lo - width / 2 || pred > e.ci_hi + width / 2) r.linear_within_ci = false;
    }
    return r;
}

TupleTable kernel_project(const TupleTable& table) {
    TupleTable r;
    for (const auto& e : table)
        if (pairing_excluded(e.q)) r.push_back(e);
    return r;
}

HomologicalSolution solve_homological(const TupleTable& mp, const PotentialParams& params, int N0) {
    HomologicalSolution sol;
    sol.f = mp;
    sol.kernel = kernel_project(mp);
    for (auto& e : sol.f) {
        if (pairing_excluded(e.q)) {
            e.value = 0.0;
            continue;
        }
        const cplx rhs = e.value;
        if (rhs == 0.0) {
            e.value = 0.0;
            continue;
        }
        const double psi = small_divisor(params, e.q);
        const double floor = 1e-10 * std::pow(max_japanese(e.q), -N0);
        if (std::abs(psi) < floor) {
            nlohmann::json jq = e.q;
            throw SmallDivisorError("solve_homological: |psi| = " + std::to_string(std::abs(psi)) +
                                    " below floor at tuple " + jq.dump());
        }
        e.value = -rhs / psi;
        sol.max_residual = std::max(sol.max_residual, std::abs(psi * e.value + rhs) / std::abs(rhs));
        ++sol.solved;
    }
    return sol;
}

TupleTable tuple_table(const Polynomial& g, int n_max) {
    if (g.empty()) return {};
    const int p = g.front().degree();
    for (const auto& mono : g)
        if (mono.degree() != p) throw StructureError("tuple_table: polynomial must be homogeneous");
    if (p < 1) throw StructureError("tuple_table: degree must be positive");

    // phi_n^{(d)} on a grid that integrates trigonometric polynomials of degree p n_max exactly
    const int nq = p * n_max + 1;
    const auto x = grid_points(nq);
    std::vector<std::array<std::vector<double>, 3>> phi(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        for (int d = 0; d < 3; ++d) {
            phi[n][d].resize(nq);
            for (int m = 0; m < nq; ++m) {
                double v;
                if (n == 0) v = d == 0 ? 1.0 / kSqrt2Pi : 0.0;
                else if (d == 0) v = std::cos(n * x[m]) / std::sqrt(kPi);
                else if (d == 1) v = -n * std::sin(n * x[m]) / std::sqrt(kPi);
                else v = -double(n) * n * std::cos(n * x[m]) / std::sqrt(kPi);
                phi[n][d][m] = v;
            }
        }

    std::map<std::pair<int, std::vector<int>>, cplx> acc;
    for (const auto& mono : g) {
        std::vector<int> du, dc;
        for (int d = 0; d < 3; ++d) {
            du.insert(du.end(), mono.alpha[d], d);
            dc.insert(dc.end(), mono.beta[d], d);
        }
        const int ell = static_cast<int>(du.size());
        sorted_tuples(ell, n_max, [&](const std::vector<int>& a) {
            sorted_tuples(p - ell, n_max, [&](const std::vector<int>& b) {
                double sum = 0.0;
                std::vector<int> pa = a;
                do {
                    std::vector<int> pb = b;
                    do {
                        double mean = 0.0;
                        for (int m = 0; m < nq; ++m) {
                            double v = 1.0;
                            for (int i = 0; i < ell; ++i) v *= phi[pa[i]][du[i]][m];
                            for (int i = 0; i < p - ell; ++i) v *= phi[pb[i]][dc[i]][m];
                            mean += v;
                        }
                        sum += mean / nq;
                    } while (std::next_permutation(pb.begin(), pb.end()));
                } while (std::next_permutation(pa.begin(), pa.end()));
                if (sum == 0.0) return;
                std::vector<int> key = a;
                key.insert(key.end(), b.begin(), b.end());
                acc[{ell, key}] += mono.C * sum;
            });
        });
    }
    TupleTable t;
    for (auto& [k, v] : acc) t.push_back({DivisorQuery{p, k.first, k.second}, v});
    return t;
}

cplx evaluate_table(const TupleTable& table, const std::vector<cplx>& amp) {
    cplx s = 0.0;
    for (const auto& e : table) {
        cplx v = e.value;
        for (int j = 0; j < e.q.N; ++j) {
            if (e.q.n[j] >= static_cast<int>(amp.size())) throw RangeError("evaluate_table: amplitude missing");
            v *= j < e.q.ell ? amp[e.q.n[j]] : std::conj(amp[e.q.n[j]]);
        }
        s += v;
    }
    return s;
}

double energy_form(const PairField& Z, const SymbolMatrix2& A, double s, const CutoffConfig& cfg) {
    const int J = Z.plus.J();
    const Symbol bb = conj(reflect_xi(A.b)), aa = conj(reflect_xi(A.a));
    OperatorMatrix Ta = bony_weyl(A.a, cfg, J), Tb = bony_weyl(A.b, cfg, J);
    OperatorMatrix Tbb = bony_weyl(bb, cfg, J), Taa = bony_weyl(aa, cfg, J);
    FourierField wp(J), wm(J);
    for (int j = -J; j <= J; ++j) {
        wp[j] = std::pow(japanese(j), s) * Z.plus[j];
        wm[j] = std::pow(japanese(j), s) * Z.minus[j];
    }
    // d/dt |W|^2 along W' = i E Op(A) W
    FourierField gp = Ta.apply(wp) + Tb.apply(wm);
    FourierField gm = Tbb.apply(wp) + Taa.apply(wm);
    cplx acc = 0.0;
    for (int j = -J; j <= J; ++j)
        acc += std::conj(wp[j]) * cplx(0, 1) * gp[j] - std::conj(wm[j]) * cplx(0, 1) * gm[j];
    return 2.0 * acc.real();
}

void to_json(nlohmann::json& j, const DivisorQuery& q) { j = {{"N", q.N}, {"ell", q.ell}, {"n", q.n}}; }

void to_json(nlohmann::json& j, const NonresonanceReport& r) {
    j = {{"N", r.N},
         {"n_max", r.n_max},
         {"N0", r.N0},
         {"gamma_hat", r.gamma_hat},
         {"worst_tuple", r.worst_tuple},
         {"worst_divisor", r.worst_divisor},
         {"excluded_paired", r.excluded_paired},
         {"scanned", r.scanned},
         {"zero_divisors", r.zero_divisors}};
}

void to_json(nlohmann::json& j, const BadSetEstimate& e) {
    j = {{"gamma", e.gamma}, {"fraction", e.fraction}, {"ci_lo", e.ci_lo},
         {"ci_hi", e.ci_hi}, {"hits", e.hits},         {"samples", e.samples}};
}

}  // namespace paranls
