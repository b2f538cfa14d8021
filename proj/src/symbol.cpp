#include "paranls/symbol.hpp"

#include <algorithm>
#include <cmath>

#include "paranls/errors.hpp"

namespace paranls {

void CutoffConfig::validate() const {
    if (!(delta > 0.0 && delta <= 0.5)) throw ConfigError("cutoff delta must lie in (0, 1/2]");
}

namespace {

double step(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

Cutoff::Cutoff(CutoffConfig cfg) : delta_(cfg.delta) { cfg.validate(); }

double Cutoff::operator()(double xip, double xi) const {
    const double r = std::abs(xip) / japanese(xi);
    const double lo = delta_ / 2, hi = delta_;
    if (r <= lo) return 1.0;
    if (r >= hi) return 0.0;
    // rescale the transition to (0, 1) so the partition does not degenerate for small delta
    const double s = (r - lo) / (hi - lo);
    const double a = step(1.0 - s), b = step(s);
    return a / (a + b);
}

Cutoff admissible_cutoff(const CutoffConfig& cfg) { return Cutoff(cfg); }

Symbol::Symbol(FourierField coeff, XiProfile profile) {
    terms.push_back(SymbolTerm{std::move(coeff), std::move(profile), 0.0, {}});
}

double Symbol::order() const {
    double m = -1e300;
    for (const auto& t : terms)
        if (!t.profile.is_zero()) m = std::max(m, t.profile.order());
    return m;
}

int Symbol::coeff_J() const {
    int J = 0;
    for (const auto& t : terms) J = std::max(J, t.coeff.J());
    return J;
}

cplx Symbol::hat(int n, double xi) const {
    cplx s = 0.0;
    for (const auto& t : terms) {
        const cplx c = t.coeff.at(n);
        if (c == 0.0) continue;
        double w = 1.0;
        for (const auto& cf : t.cutoffs) {
            w *= Cutoff(CutoffConfig{cf.delta})(n, xi + cf.shift * n);
            if (w == 0.0) break;
        }
        if (w == 0.0) continue;
        s += c * w * t.profile(xi + t.shift * n);
    }
    return s;
}

cplx Symbol::operator()(double x, double xi) const {
    const int J = coeff_J();
    cplx s = 0.0;
    for (int n = -J; n <= J; ++n) s += hat(n, xi) * std::polar(1.0, n * x);
    return s / kSqrt2Pi;
}

Symbol& Symbol::operator+=(const Symbol& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
}

Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
Symbol operator-(Symbol a, const Symbol& b) { return a += (-1.0) * b; }

Symbol operator*(cplx s, Symbol a) {
    for (auto& t : a.terms) t.coeff *= s;
    return a;
}

Symbol conj(const Symbol& a) {
    Symbol r = a;
    for (auto& t : r.terms) {
        t.coeff = t.coeff.conj();
        t.profile = t.profile.conj();
        // conj of coefficient mode n sits at -n; the shift and cutoffs depend on |n| and n
        // through xi + shift * n, so they flip with the mode index.
        t.shift = -t.shift;
        for (auto& c : t.cutoffs) c.shift = -c.shift;
    }
    return r;
}

Symbol reflect_xi(const Symbol& a) {
    Symbol r = a;
    for (auto& t : r.terms) {
        t.profile = t.profile.reflect();
        t.shift = -t.shift;
        for (auto& c : t.cutoffs) c.shift = -c.shift;
    }
    return r;
}

Symbol regularize(const Symbol& a, const CutoffConfig& cfg) {
    cfg.validate();
    Symbol r = a;
    for (auto& t : r.terms)
        if (t.coeff.J() > 0) t.cutoffs.push_back(CutoffFactor{cfg.delta, 0.0});
    return r;
}

bool has_cutoff_or_shift(const Symbol& a) {
    for (const auto& t : a.terms)
        if (t.shift != 0.0 || !t.cutoffs.empty()) return true;
    return false;
}

Mat2 SymbolMatrix2::operator()(double x, double xi) const {
    return {a(x, xi), b(x, xi), std::conj(b(x, -xi)), std::conj(a(x, -xi))};
}

MatrixSymbol SymbolMatrix2::fn() const {
    SymbolMatrix2 self = *this;
    return [self](double x, double xi) { return self(x, xi); };
}

MatrixSymbol GeneralSymbolMatrix::fn() const {
    auto self = e;
    return [self](double x, double xi) {
        return Mat2{self[0](x, xi), self[1](x, xi), self[2](x, xi), self[3](x, xi)};
    };
}

namespace {

Mat2 swap_conj(const Mat2& m) {  // S m S
    return {m[3], m[2], m[1], m[0]};
}

template <class F>
double sample_max(const PredicateGrid& g, F&& f) {
    double worst = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double x = 2 * kPi * (ix + 0.37) / g.nx;
        for (int k = 0; k < g.nxi; ++k) {
            const double xi = -g.xi_max + 2 * g.xi_max * k / (g.nxi - 1);
            worst = std::max(worst, f(x, xi));
        }
    }
    return worst;
}

double mat_diff(const Mat2& a, const Mat2& b) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

double reality_defect(const MatrixSymbol& A, const PredicateGrid& g) {
    return sample_max(g, [&](double x, double xi) {
        Mat2 l = A(x, -xi);
        for (auto& z : l) z = std::conj(z);
        return mat_diff(l, swap_conj(A(x, xi)));
    });
}

double parity_defect(const MatrixSymbol& A, const PredicateGrid& g) {
    return sample_max(g, [&](double x, double xi) { return mat_diff(A(x, xi), A(-x, -xi)); });
}

// S A(U; x, xi) = A(SU; x, xi) S, entrywise.
double reversibility_defect(const std::function<MatrixSymbol(const PairField&)>& builder, const PairField& U,
                            const PredicateGrid& g) {
    MatrixSymbol A = builder(U);
    MatrixSymbol B = builder(apply_involution(U));
    return sample_max(g, [&](double x, double xi) {
        Mat2 a = A(x, xi), b = B(x, xi);
        Mat2 sa = {a[2], a[3], a[0], a[1]};
        Mat2 bs = {b[1], b[0], b[3], b[2]};
        return mat_diff(sa, bs);
    });
}

bool is_reality_preserving(const MatrixSymbol& A, double tol) { return reality_defect(A) <= tol; }
bool is_parity_preserving(const MatrixSymbol& A, double tol) { return parity_defect(A) <= tol; }
bool is_reversibility_preserving(const std::function<MatrixSymbol(const PairField&)>& builder, const PairField& U,
                                 double tol) {
    return reversibility_defect(builder, U) <= tol;
}

void to_json(nlohmann::json& j, const Symbol& a) {
    j = nlohmann::json::array();
    for (const auto& t : a.terms) {
        nlohmann::json cut = nlohmann::json::array();
        for (const auto& c : t.cutoffs) cut.push_back({{"delta", c.delta}, {"shift", c.shift}});
        j.push_back({{"coeff_modes", t.coeff}, {"profile", t.profile.to_json()}, {"shift", t.shift}, {"cutoffs", cut}});
    }
}

void from_json(const nlohmann::json& j, Symbol& a) {
    a = Symbol();
    for (const auto& t : j) {
        SymbolTerm term{t.at("coeff_modes").get<FourierField>(), XiProfile::from_json(t.at("profile")),
                        t.value("shift", 0.0), {}};
        if (t.contains("cutoffs"))
            for (const auto& c : t["cutoffs"]) term.cutoffs.push_back({c.at("delta").get<double>(), c.value("shift", 0.0)});
        a.terms.push_back(std::move(term));
    }
}

}  // namespace paranls
