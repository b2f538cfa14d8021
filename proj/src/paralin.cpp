#include "paranls/paralin.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "paranls/errors.hpp"

namespace paranls {

namespace {

bool all_zero(const std::vector<int>& n) {
    return std::all_of(n.begin(), n.end(), [](int v) { return v == 0; });
}

// Calls f(n) for every n in [0, nmax]^p.
template <class F>
void for_each_tuple(int p, int nmax, F&& f) {
    std::vector<int> n(p, 0);
    while (true) {
        f(n);
        int i = 0;
        while (i < p && ++n[i] > nmax) n[i++] = 0;
        if (i == p) return;
    }
}

// chi(sqrt(s2), n) tabulated for integer s2 and shell n.
class ChiTable {
public:
    ChiTable(int s2max, int nmax, const CutoffConfig& cfg) : nmax_(nmax), t_((s2max + 1) * (nmax + 1)) {
        Cutoff chi(cfg);
        for (int s = 0; s <= s2max; ++s)
            for (int n = 0; n <= nmax; ++n) t_[s * (nmax + 1) + n] = chi(std::sqrt(double(s)), n);
    }
    double operator()(int s2, int n) const { return t_[s2 * (nmax_ + 1) + n]; }

private:
    int nmax_;
    std::vector<double> t_;
};

struct ModeValue {
    int mode;
    cplx value;
};

// Nonzero (mode, coefficient) pairs of prod_l Pi_{n_l} u_l, without the 1/sqrt(2pi) factors.
void shell_products(const std::vector<const FourierField*>& u, const std::vector<int>& n, std::vector<ModeValue>& out) {
    out.clear();
    out.push_back({0, 1.0});
    std::vector<ModeValue> next;
    for (size_t l = 0; l < u.size(); ++l) {
        next.clear();
        const int nl = n[l];
        for (const auto& mv : out) {
            const cplx a = (*u[l])[nl];
            if (a != 0.0) next.push_back({mv.mode + nl, mv.value * a});
            if (nl != 0) {
                const cplx b = (*u[l])[-nl];
                if (b != 0.0) next.push_back({mv.mode - nl, mv.value * b});
            }
        }
        out.swap(next);
        if (out.empty()) return;
    }
}

bool shell_empty(const FourierField& u, int n) { return u[n] == 0.0 && u[-n] == 0.0; }

}  // namespace

double para_weight(int i, const std::vector<int>& n, const CutoffConfig& cfg) {
    const int p = static_cast<int>(n.size());
    if (p < 2) throw RangeError("para_weight: p must be at least 2");
    if (all_zero(n)) return 1.0 / p;
    double s2 = 0.0;
    for (int j = 0; j < p; ++j)
        if (j != i) s2 += double(n[j]) * n[j];
    return Cutoff(cfg)(std::sqrt(s2), n[i]);
}

double theta_cutoff(int p, const std::vector<int>& n, const CutoffConfig& cfg) {
    if (p < 2 || static_cast<int>(n.size()) != p) throw RangeError("theta_cutoff: need p >= 2 entries");
    double s = 1.0;
    for (int i = 0; i < p; ++i) s -= para_weight(i, n, cfg);
    return s;
}

FourierField ParaproductSplit::total() const {
    FourierField t = remainder_part;
    for (const auto& m : para_parts) t += m;
    return t;
}

FourierField dealiased_product(const std::vector<FourierField>& u) {
    if (u.empty()) throw DimensionError("dealiased_product: no factors");
    const int J = u.front().J();
    const int n = dealiased_grid(J, static_cast<int>(u.size()));
    std::vector<cplx> prod(n, 1.0);
    for (const auto& f : u) {
        if (f.J() != J) throw DimensionError("dealiased_product: factors have different J");
        auto s = inverse_transform(f, n);
        for (int m = 0; m < n; ++m) prod[m] *= s[m];
    }
    return forward_transform(prod, J);
}

ParaproductSplit paraproduct_split(const std::vector<FourierField>& u, const CutoffConfig& cfg) {
    cfg.validate();
    const int p = static_cast<int>(u.size());
    if (p < 2) throw RangeError("paraproduct_split: need at least two factors");
    const int J = u.front().J();
    for (const auto& f : u)
        if (f.J() != J) throw DimensionError("paraproduct_split: factors have different J");

    ParaproductSplit out;
    out.p = p;
    out.J = J;
    out.cfg = cfg;
    out.para_parts.assign(p, FourierField(J));
    out.remainder_part = FourierField(J);

    ChiTable chi((p - 1) * J * J, J, cfg);
    std::vector<const FourierField*> ptr;
    for (const auto& f : u) ptr.push_back(&f);
    const double norm = std::pow(kSqrt2Pi, -(p - 1));
    std::vector<ModeValue> combos;
    std::vector<double> w(p);

    for_each_tuple(p, J, [&](const std::vector<int>& n) {
        for (int l = 0; l < p; ++l)
            if (shell_empty(u[l], n[l])) return;
        shell_products(ptr, n, combos);
        if (combos.empty()) return;
        double theta = 1.0;
        if (all_zero(n)) {
            std::fill(w.begin(), w.end(), 1.0 / p);
            theta = 0.0;
        } else {
            int s2all = 0;
            for (int v : n) s2all += v * v;
            for (int i = 0; i < p; ++i) {
                w[i] = chi(s2all - n[i] * n[i], n[i]);
                theta -= w[i];
            }
        }
        for (const auto& mv : combos) {
            if (std::abs(mv.mode) > J) continue;
            const cplx v = mv.value * norm;
            for (int i = 0; i < p; ++i)
                if (w[i] != 0.0) out.para_parts[i][mv.mode] += w[i] * v;
            if (theta != 0.0) out.remainder_part[mv.mode] += theta * v;
        }
    });
    return out;
}

OperatorMatrix bony_multilinear(const std::vector<FourierField>& others, int J, const CutoffConfig& cfg) {
    cfg.validate();
    const int q = static_cast<int>(others.size());
    const int p = q + 1;
    OperatorMatrix T(J);
    if (q == 0) throw RangeError("bony_multilinear: need at least one coefficient factor");
    std::vector<const FourierField*> ptr;
    for (const auto& f : others) ptr.push_back(&f);
    Cutoff chi(cfg);
    const double norm = std::pow(kSqrt2Pi, -q);
    std::vector<ModeValue> combos;
    std::vector<double> col_w(J + 1);
    for_each_tuple(q, J, [&](const std::vector<int>& n) {
        for (int l = 0; l < q; ++l)
            if (shell_empty(others[l], n[l])) return;
        shell_products(ptr, n, combos);
        if (combos.empty()) return;
        double s2 = 0.0;
        for (int v : n) s2 += double(v) * v;
        const bool zero = all_zero(n);
        for (int ni = 0; ni <= J; ++ni) col_w[ni] = (zero && ni == 0) ? 1.0 / p : chi(std::sqrt(s2), ni);
        for (const auto& mv : combos) {
            const cplx v = mv.value * norm;
            for (int j = -J; j <= J; ++j) {
                const int k = j + mv.mode;
                if (k < -J || k > J) continue;
                const double wj = col_w[std::abs(j)];
                if (wj != 0.0) T(k, j) += wj * v;
            }
        }
    });
    return T;
}

SmoothingReport remainder_smoothing(const std::vector<std::vector<int>>& tuples, const CutoffConfig& cfg) {
    SmoothingReport r;
    r.threshold = cfg.delta / 4;
    r.ratio_min = 1.0;
    for (const auto& n : tuples) {
        const int p = static_cast<int>(n.size());
        if (theta_cutoff(p, n, cfg) == 0.0) continue;
        std::vector<int> s = n;
        std::sort(s.begin(), s.end(), std::greater<int>());
        r.ratio_min = std::min(r.ratio_min, japanese(s[1]) / japanese(s[0]));
        ++r.support;
    }
    r.pass = r.ratio_min >= r.threshold;  // vacuous on an empty support
    return r;
}

SmoothingReport remainder_smoothing(int p, int n_max, const CutoffConfig& cfg) {
    std::vector<std::vector<int>> tuples;
    for_each_tuple(p, n_max, [&](const std::vector<int>& n) {
        if (std::is_sorted(n.begin(), n.end())) tuples.push_back(n);
    });
    return remainder_smoothing(tuples, cfg);
}

SmoothingReport remainder_smoothing(const ParaproductSplit& split) {
    return remainder_smoothing(split.p, split.J, split.cfg);
}

namespace {

// A factor of a monomial: derivative order d of the plus slot (bar = false) or minus slot.
struct Factor {
    int d;
    bool bar;
    bool operator<(const Factor& o) const { return std::tie(d, bar) < std::tie(o.d, o.bar); }
};

std::vector<Factor> factors_of(const Monomial& m) {
    std::vector<Factor> out;
    for (int d = 0; d < 3; ++d) {
        for (int r = 0; r < m.alpha[d]; ++r) out.push_back({d, false});
        for (int r = 0; r < m.beta[d]; ++r) out.push_back({d, true});
    }
    return out;
}

// Field carried by a factor; for the conjugate output the two slots trade places.
FourierField factor_field(const Factor& fa, const PairField& U, bool conj_output) {
    const bool use_minus = fa.bar != conj_output;
    return (use_minus ? U.minus : U.plus).derivative(fa.d);
}

struct MonomialParts {
    FourierField para, rem;
};

MonomialParts monomial_parts(const Monomial& m, const PairField& U, bool conj_output, const CutoffConfig& cfg,
                             bool with_para) {
    const int J = U.J();
    const auto fac = factors_of(m);
    std::vector<FourierField> fields;
    for (const auto& fa : fac) fields.push_back(factor_field(fa, U, conj_output));
    const cplx C = conj_output ? std::conj(m.C) : m.C;
    MonomialParts out{FourierField(J), FourierField(J)};
    out.rem = C * paraproduct_split(fields, cfg).remainder_part;
    if (!with_para) return out;
    std::map<Factor, int> mult;
    for (const auto& fa : fac) ++mult[fa];
    for (const auto& [fa, count] : mult) {
        std::vector<FourierField> others;
        bool skipped = false;
        for (size_t l = 0; l < fac.size(); ++l) {
            if (!skipped && !(fac[l] < fa) && !(fa < fac[l])) {
                skipped = true;
                continue;
            }
            others.push_back(fields[l]);
        }
        OperatorMatrix T = bony_multilinear(others, J, cfg);
        out.para += (C * double(count)) * T.apply(factor_field(fa, U, conj_output));
    }
    return out;
}

}  // namespace

SymbolMatrix2 Paralinearization::weyl_symbol() const {
    SymbolMatrix2 A;
    for (int d = 0; d < 3; ++d) {
        if (a[d].max_abs() > 0) A.a += Symbol(a[d], XiProfile::power(d));
        if (b[d].max_abs() > 0) A.b += Symbol(b[d], XiProfile::power(d));
    }
    return A;
}

Symbol Paralinearization::std_symbol(bool off_diagonal) const {
    Symbol s;
    const auto& f = off_diagonal ? off_std : diag_std;
    for (int d = 0; d < 3; ++d)
        if (f[d].max_abs() > 0) s += Symbol(f[d], XiProfile::power(d));
    return s;
}

Paralinearization paralinearize(const Nonlinearity& f, const PairField& U, const CutoffConfig& cfg) {
    auto rep = validate_hypothesis(f);
    if (!rep.ok()) throw HypothesisViolation("paralinearize: " + rep.violations.front());
    cfg.validate();
    const int J = U.J();
    Paralinearization P;
    P.cfg = cfg;
    const int q = std::max(f.degree_bound(), 2);
    const int Jc = (q - 1) * J;
    const int n = smooth_size(2 * Jc + 1);
    auto zp = derivative_samples(U.plus, n);
    auto zm = derivative_samples(U.minus, n);
    for (int d = 0; d < 3; ++d) {
        P.diag_std[d] = forward_transform(evaluate_polynomial(wirtinger(f.monomials(), d, false), zp, zm), Jc);
        P.off_std[d] = forward_transform(evaluate_polynomial(wirtinger(f.monomials(), d, true), zp, zm), Jc);
    }
    for (auto* fam : {&P.diag_std, &P.off_std}) {
        auto& s = *fam;
        auto& w = (fam == &P.diag_std) ? P.a : P.b;
        w[2] = s[2];
        w[1] = s[1] - s[2].derivative(1);
        w[0] = s[0] - 0.5 * s[1].derivative(1) + 0.25 * s[2].derivative(2);
    }

    P.para_part = {FourierField(J), FourierField(J)};
    P.remainder_part = {FourierField(J), FourierField(J)};
    for (const auto& m : f.monomials()) {
        auto plus = monomial_parts(m, U, false, cfg, true);
        auto minus = monomial_parts(m, U, true, cfg, true);
        P.para_part.plus += plus.para;
        P.para_part.minus += minus.para;
        P.remainder_part.plus += plus.rem;
        P.remainder_part.minus += minus.rem;
    }
    P.remainder_apply = [f, cfg](const PairField& V) {
        PairField r{FourierField(V.J()), FourierField(V.J())};
        for (const auto& m : f.monomials()) {
            r.plus += monomial_parts(m, V, false, cfg, false).rem;
            r.minus += monomial_parts(m, V, true, cfg, false).rem;
        }
        return r;
    };
    return P;
}

namespace {

double family_defects(const std::array<FourierField, 3>& u, const std::array<FourierField, 3>& s, double& parity) {
    double rev = 0.0;
    for (int d = 0; d < 3; ++d) {
        rev = std::max(rev, max_abs_diff(s[d], u[d].conj()));
        FourierField r = u[d].reflect();
        if (d % 2) r *= -1.0;
        parity = std::max(parity, max_abs_diff(u[d], r));
    }
    return rev;
}

}  // namespace

StructureDefects structure_defects(const Paralinearization& at_U, const Paralinearization& at_SU) {
    StructureDefects d;
    const int n = 2 * at_U.a[2].J() + 1;
    for (const auto& z : inverse_transform(at_U.a[2], n)) d.a2_imag = std::max(d.a2_imag, std::abs(z.imag()));
    d.reversibility = std::max(family_defects(at_U.a, at_SU.a, d.parity), family_defects(at_U.b, at_SU.b, d.parity));
    return d;
}

SymmetrizationLog symmetrize(Paralinearization& at_U, const Paralinearization& at_SU, double tol) {
    SymmetrizationLog log;
    log.before = structure_defects(at_U, at_SU);
    if (log.before.reversibility <= tol && log.before.parity <= tol) {
        log.after = log.before;
        return log;
    }
    log.applied = true;
    Paralinearization sym_SU = at_SU;
    for (int d = 0; d < 3; ++d) {
        for (auto [u, s, t] : {std::tuple{&at_U.a[d], &at_SU.a[d], &sym_SU.a[d]},
                               std::tuple{&at_U.b[d], &at_SU.b[d], &sym_SU.b[d]}}) {
            FourierField r = 0.5 * (*u + s->conj());
            FourierField refl = r.reflect();
            if (d % 2) refl *= -1.0;
            r = 0.5 * (r + refl);
            *t = r.conj();
            *u = r;
        }
    }
    log.after = structure_defects(at_U, sym_SU);
    return log;
}

double reconstruction_residual(const Nonlinearity& f, const PairField& U, const Paralinearization& P) {
    PairField F = nonlinear_term(U, f, true);
    PairField S = P.para_part + P.remainder_part;
    const double scale = std::max({F.plus.max_abs(), F.minus.max_abs(), 1e-300});
    return std::max(max_abs_diff(S.plus, F.plus), max_abs_diff(S.minus, F.minus)) / scale;
}

nlohmann::json to_json(const Paralinearization& P) {
    nlohmann::json j;
    for (int d = 0; d < 3; ++d) {
        j["a" + std::to_string(d)] = P.a[d];
        j["b" + std::to_string(d)] = P.b[d];
    }
    j["delta"] = P.cfg.delta;
    return j;
}

}  // namespace paranls
