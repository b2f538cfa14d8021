#pragma once

#include <array>
#include <functional>
#include <vector>

#include "paranls/profile.hpp"

namespace paranls {

struct CutoffConfig {
    double delta = 0.25;
    void validate() const;  // 0 < delta <= 1/2
};

// chi(xi', xi): 1 for |xi'| <= (delta/2)<xi>, 0 for |xi'| >= delta <xi>,
// exp(-1/s) partition of unity in between.
class Cutoff {
public:
    explicit Cutoff(CutoffConfig cfg = {});
    double operator()(double xip, double xi) const;
    double delta() const { return delta_; }

private:
    double delta_;
};

Cutoff admissible_cutoff(const CutoffConfig& cfg);

// chi applied to the x-mode n of a term at xi + shift * n.
struct CutoffFactor {
    double delta = 0.25;
    double shift = 0.0;
};

// coeff(x) * profile(xi + shift * n) on the x-mode n, times the cutoffs.
struct SymbolTerm {
    FourierField coeff;
    XiProfile profile;
    double shift = 0.0;
    std::vector<CutoffFactor> cutoffs;
};

class Symbol {
public:
    Symbol() = default;
    Symbol(FourierField coeff, XiProfile profile);

    std::vector<SymbolTerm> terms;
    int degree_tag = 0;  // homogeneity bookkeeping only

    double order() const;
    int coeff_J() const;
    bool empty() const { return terms.empty(); }

    // x-Fourier coefficient a^(n, xi)
    cplx hat(int n, double xi) const;
    cplx operator()(double x, double xi) const;

    Symbol& operator+=(const Symbol& o);
};

Symbol operator+(Symbol a, const Symbol& b);
Symbol operator-(Symbol a, const Symbol& b);
Symbol operator*(cplx s, Symbol a);

Symbol conj(const Symbol& a);            // conj(a(x, xi))
Symbol reflect_xi(const Symbol& a);      // a(x, -xi)
Symbol regularize(const Symbol& a, const CutoffConfig& cfg);
bool has_cutoff_or_shift(const Symbol& a);

// 2x2 matrix symbols, row major.
using Mat2 = std::array<cplx, 4>;
using MatrixSymbol = std::function<Mat2(double x, double xi)>;

// [[a, b], [conj b(x,-xi), conj a(x,-xi)]]; the second row is never stored.
struct SymbolMatrix2 {
    Symbol a;
    Symbol b;

    Mat2 operator()(double x, double xi) const;
    MatrixSymbol fn() const;
};

struct GeneralSymbolMatrix {
    std::array<Symbol, 4> e;
    MatrixSymbol fn() const;
};

struct PredicateGrid {
    int nx = 16;
    double xi_max = 12.0;
    int nxi = 49;
};

double reality_defect(const MatrixSymbol& A, const PredicateGrid& g = {});
double parity_defect(const MatrixSymbol& A, const PredicateGrid& g = {});
double reversibility_defect(const std::function<MatrixSymbol(const PairField&)>& builder, const PairField& U,
                            const PredicateGrid& g = {});

bool is_reality_preserving(const MatrixSymbol& A, double tol = 1e-10);
bool is_parity_preserving(const MatrixSymbol& A, double tol = 1e-10);
bool is_reversibility_preserving(const std::function<MatrixSymbol(const PairField&)>& builder, const PairField& U,
                                 double tol = 1e-10);

void to_json(nlohmann::json& j, const Symbol& a);
void from_json(const nlohmann::json& j, Symbol& a);

}  // namespace paranls
