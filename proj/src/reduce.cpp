#include "paranls/reduce.hpp"

#include <algorithm>
#include <cmath>

#include "paranls/errors.hpp"

namespace paranls {

namespace {

std::vector<double> real_samples(const FourierField& u, int n, const char* what) {
    auto s = inverse_transform(u, n);
    std::vector<double> r(n);
    double scale = 1.0, imag = 0.0;
    for (int m = 0; m < n; ++m) {
        r[m] = s[m].real();
        scale = std::max(scale, std::abs(s[m]));
        imag = std::max(imag, std::abs(s[m].imag()));
    }
    if (imag > 1e-10 * scale) throw StructureError(std::string(what) + ": field is not real valued");
    return r;
}

const std::vector<double>& xi_samples() {
    static const std::vector<double> xs = {-10, -5, -2, -1, -0.75, -0.5, 0.5, 0.75, 1, 1.5, 2, 3.5, 5, 10, 37.5};
    return xs;
}

}  // namespace

double DiagonalizationResult::inverse_defect() const {
    double worst = 0.0;
    for (size_t m = 0; m < M.size(); ++m) {
        const Mat2 &A = M[m], &B = M_inv[m];
        Mat2 P = {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3], A[2] * B[0] + A[3] * B[2],
                  A[2] * B[1] + A[3] * B[3]};
        worst = std::max({worst, std::abs(P[0] - 1.0), std::abs(P[1]), std::abs(P[2]), std::abs(P[3] - 1.0)});
    }
    return worst;
}

double DiagonalizationResult::conjugation_defect() const {
    double worst = 0.0;
    for (size_t m = 0; m < M.size(); ++m) {
        const double a = a2[m];
        const cplx b = b2[m];
        // E (1 + A2) with A2 = [[a, b], [conj b, a]]
        Mat2 K = {1.0 + a, b, -std::conj(b), -(1.0 + a)};
        const Mat2 &L = M_inv[m], &R = M[m];
        Mat2 KR = {K[0] * R[0] + K[1] * R[2], K[0] * R[1] + K[1] * R[3], K[2] * R[0] + K[3] * R[2],
                   K[2] * R[1] + K[3] * R[3]};
        Mat2 P = {L[0] * KR[0] + L[1] * KR[2], L[0] * KR[1] + L[1] * KR[3], L[2] * KR[0] + L[3] * KR[2],
                  L[2] * KR[1] + L[3] * KR[3]};
        const double lam = lambda_plus[m];
        worst = std::max({worst, std::abs(P[0] - lam), std::abs(P[1]), std::abs(P[2]), std::abs(P[3] + lam)});
    }
    return worst;
}

DiagonalizationResult diagonalize_principal(const FourierField& a2, const FourierField& b2, int n_grid) {
    const int J = std::max(a2.J(), b2.J());
    const int n = n_grid > 0 ? n_grid : 2 * J + 1;
    DiagonalizationResult r;
    r.x = grid_points(n);
    r.a2 = real_samples(a2, n, "diagonalize_principal");
    r.b2 = inverse_transform(b2.resized(std::max(b2.J(), 0)), n);
    for (int m = 0; m < n; ++m) {
        const double a = r.a2[m];
        const cplx b = r.b2[m];
        const double rad = (1.0 + a) * (1.0 + a) - std::norm(b);
        if (!(rad > 0.0) || 1.0 + a <= 0.0) throw SmallDataViolation("diagonalize_principal: (1+a2)^2 - |b2|^2 <= 0");
        const double lam = std::sqrt(rad);
        const double d = lam * (lam + 1.0 + a);
        r.lambda_plus.push_back(lam);
        r.b2_abs.push_back(std::abs(b));
        r.M.push_back({0.5 * (1.0 + a + lam), -0.5 * b, -0.5 * std::conj(b), 0.5 * (1.0 + a + lam)});
        r.M_inv.push_back({1.0 / lam, b / d, std::conj(b) / d, 1.0 / lam});
    }
    return r;
}

Symbol corrector_d1(const FourierField& b1, const FourierField& a2) {
    const int K = std::max({2 * b1.J(), 2 * a2.J(), 8});
    const int n = 2 * K + 1;
    auto a = real_samples(a2, n, "corrector_d1");
    auto b = inverse_transform(b1, n);
    std::vector<cplx> q(n);
    for (int m = 0; m < n; ++m) {
        if (1.0 + a[m] <= 0.0) throw SmallDataViolation("corrector_d1: 1 + a2 <= 0");
        q[m] = b[m] / (2.0 * (1.0 + a[m]));
    }
    Symbol d1(forward_transform(q, K), XiProfile::gamma());
    return d1;
}

double corrector_d1_defect(const Symbol& d1, const FourierField& b1, const FourierField& a2) {
    const int n = 2 * std::max({d1.coeff_J(), b1.J(), a2.J()}) + 1;
    auto x = grid_points(n);
    auto a = inverse_transform(a2, n);
    auto b = inverse_transform(b1, n);
    double worst = 0.0;
    for (int m = 0; m < n; ++m)
        for (double xi : xi_samples()) {
            const cplx ix(0.0, xi);
            const cplx lhs = 2.0 * d1(x[m], xi) * (1.0 + a[m]) * ix * ix;
            worst = std::max(worst, std::abs(lhs - b[m] * ix) / japanese(xi));
        }
    return worst;
}

StraighteningResult straighten(const FourierField& a2) {
    if (parity_defect(a2) > 1e-10 * std::max(1.0, a2.max_abs()))
        throw StructureError("straighten: a2 must be even");
    const int K = std::max(2 * a2.J(), 16);
    const int n = 2 * K + 1;
    auto a = real_samples(a2, n, "straighten");
    double integral = 0.0;
    for (int m = 0; m < n; ++m) {
        if (1.0 + a[m] <= 0.0) throw SmallDataViolation("straighten: 1 + a2 <= 0");
        integral += 1.0 / std::sqrt(1.0 + a[m]);
    }
    integral *= 2 * kPi / n;
    StraighteningResult r;
    r.a2_const = std::pow(2 * kPi / integral, 2) - 1.0;
    std::vector<cplx> g(n);
    double mean = 0.0;
    for (int m = 0; m < n; ++m) {
        g[m] = std::sqrt((1.0 + r.a2_const) / (1.0 + a[m])) - 1.0;
        mean += g[m].real();
    }
    mean /= n;
    r.integrand_mean = mean;
    r.endpoint_defect = std::abs(2 * kPi * mean);
    r.gamma_field = inverse_derivative(forward_transform(g, K));
    for (int m = 0; m < n; ++m)
        if (std::abs(g[m].real() - mean) >= 1.0) throw SmallDataViolation("straighten: |gamma'| >= 1, diffeomorphism not invertible");

    const FourierField dg = r.gamma_field.derivative(1);
    auto x = grid_points(n);
    auto gam = inverse_transform(r.gamma_field, n);
    std::vector<cplx> beta(n);
    for (int m = 0; m < n; ++m) {
        double y = x[m] - gam[m].real();
        int it = 0;
        for (; it < 30; ++it) {
            const double F = y + r.gamma_field.eval(y).real() - x[m];
            if (std::abs(F) <= 1e-13) break;
            y -= F / (1.0 + dg.eval(y).real());
        }
        r.newton_iterations = std::max(r.newton_iterations, it);
        beta[m] = y - x[m];
    }
    r.beta_field = forward_transform(beta, K);
    return r;
}

double straightening_defect(const FourierField& a2, const StraighteningResult& s) {
    const int n = 2 * s.gamma_field.J() + 1;
    const FourierField dg = s.gamma_field.derivative(1);
    double worst = 0.0;
    for (int m = 0; m < 2 * n; ++m) {
        const double y = kPi * m / n;
        const double v = (1.0 + a2.eval(y).real()) * std::pow(1.0 + dg.eval(y).real(), 2);
        worst = std::max(worst, std::abs(v - (1.0 + s.a2_const)));
    }
    return worst;
}

double inversion_defect(const StraighteningResult& s) {
    const int n = 2 * s.beta_field.J() + 1;
    auto x = grid_points(n);
    double worst = 0.0;
    for (int m = 0; m < n; ++m) {
        const double b = s.beta_field.eval(x[m]).real();
        worst = std::max(worst, std::abs(b + s.gamma_field.eval(x[m] + b).real()));
    }
    return worst;
}

double transported_constancy(const FourierField& a2, const StraighteningResult& s) {
    const int n = 2 * s.beta_field.J() + 1;
    auto x = grid_points(n);
    const FourierField dg = s.gamma_field.derivative(1);
    double lo = 1e300, hi = -1e300;
    for (int m = 0; m < n; ++m) {
        const double y = x[m] + s.beta_field.eval(x[m]).real();
        const double v = (1.0 + a2.eval(y).real()) * std::pow(1.0 + dg.eval(y).real(), 2);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

FourierField eliminate_order_one(const FourierField& a1, double a2_const) {
    if (!(a2_const > -1.0)) throw SmallDataViolation("eliminate_order_one: 1 + a2_const <= 0");
    if (std::abs(a1.mean()) > 1e-10 * std::max(1.0, a1.max_abs()))
        throw PreconditionError("eliminate_order_one: a1 must have zero mean");
    FourierField s = inverse_derivative(a1);
    s *= -1.0 / (2.0 * (1.0 + a2_const));
    return s;
}

double order_one_residual(const FourierField& a1, double a2_const, const FourierField& s) {
    FourierField r = (2.0 * (1.0 + a2_const)) * s.derivative(1) + a1;
    return r.max_abs();
}

Symbol constant_coeff_step(const Symbol& a0, double a2_const) {
    if (!(a2_const > -1.0)) throw SmallDataViolation("constant_coeff_step: 1 + a2_const <= 0");
    if (has_cutoff_or_shift(a0)) throw CapabilityError("constant_coeff_step: needs unregularized terms");
    Symbol n0;
    n0.degree_tag = a0.degree_tag;
    for (const auto& t : a0.terms) {
        FourierField c = t.coeff;
        c[0] = 0.0;
        if (c.max_abs() == 0.0) continue;
        FourierField nc = inverse_derivative(c);
        nc *= -1.0 / (2.0 * (1.0 + a2_const));
        n0.terms.push_back(SymbolTerm{std::move(nc), XiProfile::product(t.profile, XiProfile::gamma()), 0.0, {}});
    }
    return n0;
}

double constant_coeff_residual(const Symbol& a0, const Symbol& n0, double a2_const) {
    Symbol dn = n0;
    for (auto& t : dn.terms) t.coeff = t.coeff.derivative(1);
    const int n = 2 * std::max({a0.coeff_J(), n0.coeff_J(), 4}) + 1;
    auto x = grid_points(n);
    double worst = 0.0;
    for (double xi : xi_samples()) {
        cplx mean = 0.0;
        for (const auto& t : a0.terms) mean += t.coeff.mean() * t.profile(xi);
        for (int m = 0; m < n; ++m) {
            const cplx r = 2.0 * dn(x[m], xi) * (1.0 + a2_const) * cplx(0.0, xi) + a0(x[m], xi) - mean;
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

OperatorMatrix flow_generator(const FourierField& beta, double tau, const CutoffConfig& cfg, int J) {
    const int K = std::max(4 * beta.J(), 16);
    const int n = 2 * K + 1;
    auto b = inverse_transform(beta, n);
    auto bx = inverse_transform(beta.derivative(1), n);
    std::vector<cplx> g(n);
    for (int m = 0; m < n; ++m) {
        const double den = 1.0 + tau * bx[m].real();
        if (den <= 0.0) throw SmallDataViolation("flow_generator: 1 + tau beta_x <= 0");
        g[m] = b[m] / den;
    }
    return bony_weyl(Symbol(forward_transform(g, K), XiProfile::power(1)), cfg, J);
}

FourierField paracomposition_flow(const FourierField& beta, const FourierField& u, const CutoffConfig& cfg, int steps) {
    if (steps < 1) throw RangeError("paracomposition_flow: steps must be positive");
    const int J = u.J();
    const double h = 1.0 / steps;
    FourierField w = u;
    OperatorMatrix G0 = flow_generator(beta, 0.0, cfg, J);
    for (int s = 0; s < steps; ++s) {
        const double tau = s * h;
        OperatorMatrix Gh = flow_generator(beta, tau + 0.5 * h, cfg, J);
        OperatorMatrix G1 = flow_generator(beta, tau + h, cfg, J);
        FourierField k1 = G0.apply(w);
        FourierField k2 = Gh.apply(w + (0.5 * h) * k1);
        FourierField k3 = Gh.apply(w + (0.5 * h) * k2);
        FourierField k4 = G1.apply(w + h * k3);
        w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        G0 = std::move(G1);
    }
    return w;
}

}  // namespace paranls
