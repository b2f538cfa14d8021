#include "paranls/calculus.hpp"

#include <cmath>
#include <limits>

#include "paranls/errors.hpp"
#include "paranls/fit.hpp"

namespace paranls {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

cplx ipow(int k) {
    static const cplx v[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    return v[((k % 4) + 4) % 4];
}

}  // namespace

// (1/k!)(i/2)^k sum_l C(k,l)(-1)^{k-l} (D_xi^l D_x^{k-l} a)(D_x^l D_xi^{k-l} b), D = -i d.
Symbol expansion_term(const Symbol& a, const Symbol& b, int k) {
    if (has_cutoff_or_shift(a) || has_cutoff_or_shift(b))
        throw CapabilityError("compose_expansion needs unregularized standard-form terms");
    Symbol out;
    out.degree_tag = a.degree_tag + b.degree_tag;
    const cplx pre = ipow(-k) / (std::pow(2.0, k) * factorial(k));
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms)
            for (int l = 0; l <= k; ++l) {
                XiProfile pa = ta.profile.differentiate(l);
                XiProfile pb = tb.profile.differentiate(k - l);
                if (pa.is_zero() || pb.is_zero()) continue;
                FourierField ca = ta.coeff.derivative(k - l);
                FourierField cb = tb.coeff.derivative(l);
                if (ca.max_abs() == 0.0 || cb.max_abs() == 0.0) continue;
                const double sgn = ((k - l) % 2 == 0) ? 1.0 : -1.0;
                FourierField c = exact_product(ca, cb);
                c *= pre * binom(k, l) * sgn;
                out.terms.push_back(SymbolTerm{std::move(c), XiProfile::product(pa, pb), 0.0, {}});
            }
    return out;
}

Symbol compose_expansion(const Symbol& a, const Symbol& b, int rho) {
    if (rho < 0) throw RangeError("compose_expansion: rho must be nonnegative");
    Symbol out;
    out.degree_tag = a.degree_tag + b.degree_tag;
    for (int k = 0; k <= rho; ++k) out += expansion_term(a, b, k);
    return out;
}

DecayFit fit_column_decay(const OperatorMatrix& R, const OperatorMatrix& scale) {
    const int J = R.J;
    DecayFit f;
    f.k_lo = std::max(1, J / 8);
    f.k_hi = J / 2;
    if (f.k_hi < 2 * f.k_lo || f.k_hi - f.k_lo < 2) throw MeasurementError("decay fit: mode range below one dyadic decade");
    std::vector<double> lx, ly;
    for (int k = f.k_lo; k <= f.k_hi; ++k) {
        const double v = R.M.col(k + J).norm();
        const double floor = 1e-13 * std::max(1.0, scale.M.col(k + J).norm());
        f.column_norms.push_back(v);
        if (v > floor) {
            f.last_nonzero = k;
            lx.push_back(std::log(japanese(k)));
            ly.push_back(std::log(v));
        }
    }
    const double inf = std::numeric_limits<double>::infinity();
    if (lx.empty()) {
        f.exact = true;
        f.order = inf;
        return f;
    }
    // columns vanishing inside the range: decay is faster than any fitted power unless the
    // nonzero part alone spans a dyadic decade
    const double span = std::exp(lx.back() - lx.front());
    if (lx.size() < 3 || span < 2.0) {
        f.order = inf;
        return f;
    }
    LinearFit lf = fit_line(lx, ly);
    f.order = -lf.slope;
    f.order_se = lf.slope_se;
    return f;
}

CompositionReport remainder_order(const Symbol& a, const Symbol& b, int rho, const CutoffConfig& cfg, int J) {
    CompositionReport r;
    r.rho = rho;
    r.order_a = a.order();
    r.order_b = b.order();
    r.expansion = compose_expansion(a, b, rho);
    OperatorMatrix P = bony_weyl(a, cfg, J) * bony_weyl(b, cfg, J);
    r.remainder = P - bony_weyl(r.expansion, cfg, J);
    r.fit = fit_column_decay(r.remainder, P);
    r.threshold = rho - r.order_a - r.order_b - 1;
    r.pass = r.fit.order >= r.threshold;
    return r;
}

CutoffIndependenceReport cutoff_independence(const Symbol& a, const CutoffConfig& c1, const CutoffConfig& c2, int J) {
    if (c1.delta == c2.delta) throw PreconditionError("cutoff_independence: the two cutoffs coincide");
    CutoffIndependenceReport rep;
    OperatorMatrix A1 = bony_weyl(a, c1, J), A2 = bony_weyl(a, c2, J);
    OperatorMatrix D = A1 - A2;
    const double floor = 1e-14 * std::max(1.0, A1.max_abs());
    rep.band_lo = std::numeric_limits<double>::infinity();
    rep.band_hi = 0;
    for (int k = -J; k <= J; ++k)
        for (int j = -J; j <= J; ++j)
            if (std::abs(D(k, j)) > floor) {
                const double w = japanese(0.5 * (k + j));
                rep.band_lo = std::min(rep.band_lo, w);
                rep.band_hi = std::max(rep.band_hi, w);
            }
    rep.identical = rep.band_hi == 0;
    rep.fit = fit_column_decay(D, A1);
    return rep;
}

nlohmann::json to_json(const CompositionReport& r) {
    nlohmann::json j;
    j["rho"] = r.rho;
    j["orders"] = {r.order_a, r.order_b};
    if (std::isfinite(r.fit.order))
        j["measured_order"] = r.fit.order;
    else
        j["measured_order"] = "inf";
    j["exact"] = r.fit.exact;
    j["fit_range"] = {r.fit.k_lo, r.fit.k_hi};
    j["threshold"] = r.threshold;
    j["pass"] = r.pass;
    return j;
}

}  // namespace paranls
