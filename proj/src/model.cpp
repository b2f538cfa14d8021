#include "paranls/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "paranls/errors.hpp"

namespace paranls {

PotentialParams::PotentialParams(std::vector<double> m_) : m(std::move(m_)) {
    if (m.empty()) throw ConfigError("PotentialParams: M must be at least 1");
    for (double v : m)
        if (!(v >= -0.5 && v <= 0.5)) throw ConfigError("PotentialParams: entries must lie in [-1/2, 1/2]");
}

double potential_coeff(const PotentialParams& params, double j) {
    const double w = 1.0 / japanese(j);
    double pk = w * w * w, sum = 0.0;
    for (double mk : params.m) {
        sum += mk * pk;
        pk *= w * w;
    }
    return sum;
}

double frequency(const PotentialParams& params, double j) { return -j * j + potential_coeff(params, j); }

int Monomial::degree() const {
    int d = 0;
    for (int i = 0; i < 3; ++i) d += alpha[i] + beta[i];
    return d;
}

Polynomial wirtinger(const Polynomial& f, int d, bool bar) {
    Polynomial out;
    for (const auto& mono : f) {
        int e = bar ? mono.beta[d] : mono.alpha[d];
        if (e == 0) continue;
        Monomial m = mono;
        (bar ? m.beta[d] : m.alpha[d]) -= 1;
        m.C *= double(e);
        out.push_back(m);
    }
    return out;
}

std::vector<cplx> evaluate_polynomial(const Polynomial& f, const std::array<std::vector<cplx>, 3>& z,
                                      const std::array<std::vector<cplx>, 3>& zb, bool conj_coeffs) {
    const size_t n = z[0].size();
    std::vector<cplx> out(n, 0.0);
    const auto& A = conj_coeffs ? zb : z;
    const auto& B = conj_coeffs ? z : zb;
    for (const auto& mono : f) {
        const cplx C = conj_coeffs ? std::conj(mono.C) : mono.C;
        for (size_t i = 0; i < n; ++i) {
            cplx v = C;
            for (int d = 0; d < 3; ++d) {
                for (int r = 0; r < mono.alpha[d]; ++r) v *= A[d][i];
                for (int r = 0; r < mono.beta[d]; ++r) v *= B[d][i];
            }
            out[i] += v;
        }
    }
    return out;
}

Nonlinearity::Nonlinearity(Polynomial monomials) : mono_(std::move(monomials)) {
    for (const auto& m : mono_) {
        for (int i = 0; i < 3; ++i)
            if (m.alpha[i] < 0 || m.beta[i] < 0) throw ConfigError("Nonlinearity: negative exponent");
        if (m.degree() < 2) throw ConfigError("Nonlinearity: every monomial needs degree at least 2");
        if (!std::isfinite(m.C.real()) || !std::isfinite(m.C.imag()))
            throw ConfigError("Nonlinearity: non-finite coefficient");
    }
}

Nonlinearity Nonlinearity::cubic() { return Nonlinearity({Monomial{{2, 0, 0}, {1, 0, 0}, 1.0}}); }
Nonlinearity Nonlinearity::cubic_uxx() { return Nonlinearity({Monomial{{1, 0, 1}, {1, 0, 0}, 1.0}}); }

int Nonlinearity::degree_bound() const {
    int q = 0;
    for (const auto& m : mono_) q = std::max(q, m.degree());
    return q;
}

int Nonlinearity::max_derivative() const {
    int d = 0;
    for (const auto& m : mono_)
        for (int i = 0; i < 3; ++i)
            if (m.alpha[i] + m.beta[i] > 0) d = std::max(d, i);
    return d;
}

namespace {

std::string describe(const Monomial& m) {
    std::ostringstream os;
    os << "alpha=(" << m.alpha[0] << "," << m.alpha[1] << "," << m.alpha[2] << ") beta=(" << m.beta[0] << ","
       << m.beta[1] << "," << m.beta[2] << ")";
    return os.str();
}

using Key = std::pair<std::array<int, 3>, std::array<int, 3>>;

}  // namespace

HypothesisReport validate_hypothesis(const Nonlinearity& f) {
    HypothesisReport rep;
    for (const auto& m : f.monomials()) {
        if ((m.alpha[1] + m.beta[1]) % 2 != 0) {
            rep.item1 = false;
            rep.violations.push_back("odd in u_x: " + describe(m));
        }
        if (m.C.imag() != 0.0) {
            rep.item3 = false;
            rep.violations.push_back("complex coefficient: " + describe(m));
        }
    }
    // d f / d z2 must equal its own conjugate: the coefficient of z^a zb^b must be
    // the conjugate of the coefficient of z^b zb^a.
    std::map<Key, cplx> coef;
    for (const auto& m : wirtinger(f.monomials(), 2, false)) coef[{m.alpha, m.beta}] += m.C;
    for (const auto& [key, c] : coef) {
        auto it = coef.find({key.second, key.first});
        cplx partner = it == coef.end() ? cplx(0.0) : it->second;
        if (std::abs(c - std::conj(partner)) > 1e-14) {
            rep.item2 = false;
            Monomial m{key.first, key.second, c};
            rep.violations.push_back("d f/d u_xx not real at " + describe(m));
        }
    }
    return rep;
}

std::array<std::vector<cplx>, 3> derivative_samples(const FourierField& u, int n, int max_order) {
    std::array<std::vector<cplx>, 3> z;
    for (int d = 0; d < 3; ++d)
        if (d == 0 || d <= max_order) z[d] = inverse_transform(d == 0 ? u : u.derivative(d), n);
    return z;
}

PairField nonlinear_term(const PairField& U, const Nonlinearity& f, bool dealias) {
    const int J = U.J();
    if (U.minus.J() != J) throw DimensionError("nonlinear_term: slots have different J");
    if (f.empty()) return {FourierField(J), FourierField(J)};
    const int n = dealias ? dealiased_grid(J, f.degree_bound()) : 2 * J + 1;
    auto zp = derivative_samples(U.plus, n, f.max_derivative());
    auto zm = derivative_samples(U.minus, n, f.max_derivative());
    auto fp = evaluate_polynomial(f.monomials(), zp, zm, false);
    auto fm = evaluate_polynomial(f.monomials(), zp, zm, true);
    return {forward_transform(fp, J), forward_transform(fm, J)};
}

PairField rhs(const PairField& U, const PotentialParams& params, const Nonlinearity& f, const RhsOptions& opt) {
    if (!opt.override_hypothesis) {
        auto rep = validate_hypothesis(f);
        if (!rep.ok()) throw HypothesisViolation("rhs: " + rep.violations.front());
    }
    PairField F = nonlinear_term(U, f, opt.dealias);
    const int J = U.J();
    const cplx I(0.0, 1.0);
    for (int j = -J; j <= J; ++j) {
        const double lam = frequency(params, j);
        F.plus[j] = I * (lam * U.plus[j] + F.plus[j]);
        F.minus[j] = -I * (lam * U.minus[j] + F.minus[j]);
    }
    return F;
}

void to_json(nlohmann::json& j, const Monomial& m) {
    j = {{"alpha", m.alpha}, {"beta", m.beta}};
    if (m.C.imag() == 0.0)
        j["C"] = m.C.real();
    else
        j["C"] = {m.C.real(), m.C.imag()};
}

void from_json(const nlohmann::json& j, Monomial& m) {
    m.alpha = j.at("alpha").get<std::array<int, 3>>();
    m.beta = j.at("beta").get<std::array<int, 3>>();
    const auto& c = j.at("C");
    if (c.is_array())
        m.C = cplx(c.at(0).get<double>(), c.at(1).get<double>());
    else
        m.C = c.get<double>();
}

void to_json(nlohmann::json& j, const Nonlinearity& f) { j = f.monomials(); }
void from_json(const nlohmann::json& j, Nonlinearity& f) { f = Nonlinearity(j.get<Polynomial>()); }
void to_json(nlohmann::json& j, const PotentialParams& p) { j = p.m; }
void from_json(const nlohmann::json& j, PotentialParams& p) { p = PotentialParams(j.get<std::vector<double>>()); }

}  // namespace paranls
