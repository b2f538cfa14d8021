#pragma once

#include <array>
#include <functional>
#include <vector>

#include "paranls/model.hpp"
#include "paranls/quantize.hpp"

namespace paranls {

// chi^{(i)}_{p-1}(n) = chi(|n without n_i|_2, n_i). At the all-zero tuple every
// factor qualifies, so the weight is shared equally (1/p) and Theta stays in [0, 1].
double para_weight(int i, const std::vector<int>& n, const CutoffConfig& cfg);
double theta_cutoff(int p, const std::vector<int>& n, const CutoffConfig& cfg);

struct ParaproductSplit {
    std::vector<FourierField> para_parts;  // M_i
    FourierField remainder_part;           // M^Theta
    int p = 0;
    int J = 0;
    CutoffConfig cfg;

    FourierField total() const;
};

// Pseudospectral product of the fields, de-aliased and truncated to the common J.
FourierField dealiased_product(const std::vector<FourierField>& u);

ParaproductSplit paraproduct_split(const std::vector<FourierField>& u, const CutoffConfig& cfg);

// Standard Bony quantization of b = prod(others) with the multilinear cutoff,
// as the operator acting on the remaining factor (slot index i among p = others + 1).
OperatorMatrix bony_multilinear(const std::vector<FourierField>& others, int J, const CutoffConfig& cfg);

struct SmoothingReport {
    double ratio_min = 0.0;  // min of <max_2>/<max> over the Theta support
    long support = 0;
    double threshold = 0.0;
    bool pass = false;
};

SmoothingReport remainder_smoothing(const std::vector<std::vector<int>>& tuples, const CutoffConfig& cfg);
SmoothingReport remainder_smoothing(int p, int n_max, const CutoffConfig& cfg);
SmoothingReport remainder_smoothing(const ParaproductSplit& split);

struct Paralinearization {
    // standard form: f = sum_d diag_std[d] d^d u + off_std[d] d^d conj(u) + remainder
    std::array<FourierField, 3> diag_std, off_std;
    // Weyl form: a(x, xi) = sum_d a[d](x) (i xi)^d, b likewise
    std::array<FourierField, 3> a, b;
    PairField para_part;       // Op^B(B)[U] via the multilinear matrices
    PairField remainder_part;  // sum of the Theta parts
    std::function<PairField(const PairField&)> remainder_apply;
    CutoffConfig cfg;

    SymbolMatrix2 weyl_symbol() const;
    Symbol std_symbol(bool off_diagonal) const;
};

Paralinearization paralinearize(const Nonlinearity& f, const PairField& U, const CutoffConfig& cfg);

// Pointwise defects of the Weyl coefficient fields.
struct StructureDefects {
    double a2_imag = 0.0;        // max |Im a_2(x)|
    double reversibility = 0.0;  // max |a_d(SU) - conj a_d(U)|, same for b_d
    double parity = 0.0;         // max |a_d(x) - (-1)^d a_d(-x)|, same for b_d
};

StructureDefects structure_defects(const Paralinearization& at_U, const Paralinearization& at_SU);

// 1/2 (A(U) + S A(SU) S) followed by the parity average; returns the defects
// measured before and after.
struct SymmetrizationLog {
    StructureDefects before, after;
    bool applied = false;
};
SymmetrizationLog symmetrize(Paralinearization& at_U, const Paralinearization& at_SU, double tol = 1e-12);

double reconstruction_residual(const Nonlinearity& f, const PairField& U, const Paralinearization& P);

nlohmann::json to_json(const Paralinearization& P);

}  // namespace paranls
