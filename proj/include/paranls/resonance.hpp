#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "paranls/fit.hpp"
#include "paranls/model.hpp"
#include "paranls/quantize.hpp"

namespace paranls {

// The first ell entries of n carry a plus sign, the remaining N - ell a minus sign.
struct DivisorQuery {
    int N = 1;
    int ell = 0;
    std::vector<int> n;
    void validate() const;
    int max_mode() const;
};

bool operator==(const DivisorQuery& a, const DivisorQuery& b);

// psi = sum_{j <= ell} lambda_{n_j} - sum_{j > ell} lambda_{n_j}
double small_divisor(const PotentialParams& params, const DivisorQuery& q);
bool pairing_excluded(const DivisorQuery& q);

// Determinant of the q x q matrix with rows <n_j>^{-(2k+1)}, k = 1..q.
double vandermonde_det(const std::vector<int>& nvals);

struct NonresonanceReport {
    int N = 0;
    int n_max = 0;
    int N0 = 0;
    double gamma_hat = 0.0;
    DivisorQuery worst_tuple;
    double worst_divisor = 0.0;
    long long excluded_paired = 0;
    long long scanned = 0;
    long long zero_divisors = 0;
};

// Rows passed to the visitor: query, psi, |psi| * max<n>^N0.
using ScanVisitor = std::function<void(const DivisorQuery&, double, double)>;

// Tuples are enumerated with each half sorted. budget caps the tuple count.
NonresonanceReport scan_nonresonance(const PotentialParams& params, int N, int n_max, int N0,
                                     long long budget = 10'000'000, const ScanVisitor& visit = {});

// Number of sorted tuples with equal halves: C(n_max + N/2, N/2) for even N, else 0.
long long paired_count(int N, int n_max);

struct BadSetEstimate {
    double gamma = 0.0;
    double fraction = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long long hits = 0;
    long long samples = 0;
};

// Fraction of m in (-1/2, 1/2)^M with |psi| < gamma max<n>^{-N0}, with a 95% Wilson interval.
BadSetEstimate bad_set_measure_mc(const DivisorQuery& q, double gamma, int N0, long long samples, uint64_t seed,
                                  int M = 5);

struct BadSetScaling {
    std::vector<BadSetEstimate> estimates;
    LinearFit fit;  // fraction against gamma
    bool linear_within_ci = false;
};

BadSetScaling bad_set_scaling(const DivisorQuery& q, const std::vector<double>& gammas, int N0,
                              long long samples, uint64_t seed, int M = 5);

struct TupleEntry {
    DivisorQuery q;
    cplx value = 0.0;
};
using TupleTable = std::vector<TupleEntry>;

TupleTable kernel_project(const TupleTable& table);

struct HomologicalSolution {
    TupleTable f;           // zero on kernel tuples
    TupleTable kernel;      // kernel part of the input, copied untouched
    double max_residual = 0.0;  // max |psi f + mp| / |mp| over solved tuples
    long long solved = 0;
};

// f = -mp / psi off the kernel. Throws SmallDivisorError below 1e-10 max<n>^{-N0}.
HomologicalSolution solve_homological(const TupleTable& mp, const PotentialParams& params, int N0);

// Coefficients of mean_x g(u) for even u = sum_n u_n phi_n, phi_0 = 1/sqrt(2 pi),
// phi_n = cos(n x)/sqrt(pi), indexed by sorted tuples (n of the u factors | n of the conj u factors).
// Every monomial of g must have the same total degree.
TupleTable tuple_table(const Polynomial& g, int n_max);

// sum_T value * prod_{j <= ell} amp[n_j] * prod_{j > ell} conj(amp[n_j])
cplx evaluate_table(const TupleTable& table, const std::vector<cplx>& amp);

// Re i <D>^s Z . Op(A) E <D>^s Z summed over both slots, for an x-independent matrix symbol.
double energy_form(const PairField& Z, const SymbolMatrix2& A, double s, const CutoffConfig& cfg);

void to_json(nlohmann::json& j, const DivisorQuery& q);
void to_json(nlohmann::json& j, const NonresonanceReport& r);
void to_json(nlohmann::json& j, const BadSetEstimate& e);

}  // namespace paranls
