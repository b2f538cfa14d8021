#pragma once

#include "paranls/quantize.hpp"

namespace paranls {

// The k-th term of the composition expansion of two unregularized symbols.
Symbol expansion_term(const Symbol& a, const Symbol& b, int k);

// (a # b)_rho = sum_{k <= rho} expansion_term(a, b, k)
Symbol compose_expansion(const Symbol& a, const Symbol& b, int rho);

// Power-law fit of column norms of an operator over modes [J/8, J/2].
struct DecayFit {
    double order = 0.0;  // minus the fitted slope; +inf when the columns vanish
    double order_se = 0.0;
    bool exact = false;  // every column in range below the rounding floor
    int k_lo = 0, k_hi = 0;
    int last_nonzero = -1;
    std::vector<double> column_norms;
};

DecayFit fit_column_decay(const OperatorMatrix& R, const OperatorMatrix& scale);

struct CompositionReport {
    int rho = 0;
    double order_a = 0, order_b = 0;
    Symbol expansion;
    OperatorMatrix remainder;
    DecayFit fit;
    double threshold = 0;
    bool pass = false;
};

CompositionReport remainder_order(const Symbol& a, const Symbol& b, int rho, const CutoffConfig& cfg, int J);

struct CutoffIndependenceReport {
    DecayFit fit;
    double band_lo = 0, band_hi = 0;  // range of <xi> where the two quantizations differ
    bool identical = false;
};

CutoffIndependenceReport cutoff_independence(const Symbol& a, const CutoffConfig& c1, const CutoffConfig& c2, int J);

nlohmann::json to_json(const CompositionReport& r);

}  // namespace paranls
