#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/LU>

#include "paranls/calculus.hpp"
#include "paranls/errors.hpp"
#include "paranls/harness.hpp"
#include "paranls/paralin.hpp"
#include "paranls/reduce.hpp"

namespace paranls {

namespace {

using json = nlohmann::json;
using Rng = std::mt19937_64;

double gauss(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

// Random coefficients on |n| <= Jc with geometric decay. real_valued makes the
// function real, even makes it even in x.
FourierField random_field(Rng& rng, int J, int Jc, double decay, bool real_valued, bool even) {
    FourierField u(J);
    for (int n = 0; n <= Jc; ++n) {
        const double w = std::exp(-decay * n);
        cplx c(gauss(rng) * w, gauss(rng) * w);
        if (n == 0) {
            u[0] = real_valued ? cplx(c.real()) : c;
            continue;
        }
        const cplx d = even ? c : cplx(gauss(rng) * w, gauss(rng) * w);
        u[n] = c;
        u[-n] = real_valued ? std::conj(c) : d;
        if (real_valued && even) u[n] = u[-n] = cplx(c.real());
        else if (even) u[-n] = c;
    }
    return u;
}

XiProfile random_profile(Rng& rng) {
    switch (std::uniform_int_distribution<int>(0, 6)(rng)) {
        case 0: return XiProfile::power(0);
        case 1: return XiProfile::power(1);
        case 2: return XiProfile::power(2);
        case 3: return XiProfile::japanese(std::uniform_real_distribution<double>(-1.5, 1.5)(rng));
        case 4: return XiProfile::gamma();
        case 5: return XiProfile::potential({0.3, -0.2});
        default: return XiProfile::product(XiProfile::power(1), XiProfile::japanese(-0.5));
    }
}

XiProfile random_real_profile(Rng& rng) {
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0: return XiProfile::power(0);
        case 1: return XiProfile::power(2);
        case 2: return XiProfile::japanese(std::uniform_real_distribution<double>(-1.0, 2.0)(rng));
        default: return XiProfile::potential({0.4, 0.1, -0.3});
    }
}

Symbol random_symbol(Rng& rng, bool real_valued) {
    Symbol a;
    const int terms = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int t = 0; t < terms; ++t) {
        const int Jc = std::uniform_int_distribution<int>(0, 10)(rng);
        a += Symbol(random_field(rng, Jc, Jc, 0.3, real_valued, false),
                    real_valued ? random_real_profile(rng) : random_profile(rng));
    }
    return a;
}

PairField random_even_state(Rng& rng, int J, int Jc, double amp) {
    FourierField u = random_field(rng, J, Jc, 0.4, false, true);
    u *= amp;
    return PairField::realified(u);
}

double symbol_max_diff(const Symbol& a, const Symbol& b, int nx, const std::vector<double>& xis) {
    double d = 0.0;
    for (int m = 0; m < nx; ++m)
        for (double xi : xis) {
            const double x = 2 * kPi * m / nx;
            d = std::max(d, std::abs(a(x, xi) - b(x, xi)));
        }
    return d;
}

std::vector<double> xi_line(double lo, double hi, int n) {
    std::vector<double> r;
    for (int i = 0; i < n; ++i) r.push_back(lo + (hi - lo) * i / (n - 1));
    return r;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// ---- criteria ----

CriterionResult quantization_identity(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 1);
    const int J = 64;
    double worst = 0.0, worst_rel = 0.0;
    for (int t = 0; t < 20; ++t) {
        Symbol a = random_symbol(rng, false);
        OperatorMatrix S = quantize(a, 1.0, J);
        OperatorMatrix W = quantize(opt.to_weyl(a), 0.5, J);
        const double d = max_abs_diff(S, W);
        worst = std::max(worst, d);
        worst_rel = std::max(worst_rel, d / std::max(1.0, S.max_abs()));
    }
    r.pass = worst <= 1e-13;
    r.details = {{"max_entry_defect", worst}, {"max_relative_defect", worst_rel}, {"symbols", 20}, {"J", J}};
    r.message = "std vs Weyl entrywise " + sci(worst);
    if (!r.pass) r.message += " (std_to_weyl)";
    return r;
}

CriterionResult self_adjointness(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 2);
    const int J = 64;
    CutoffConfig cfg;
    double worst_real = 0.0, min_control = 1e300;
    for (int t = 0; t < 20; ++t) {
        Symbol a = random_symbol(rng, true);
        worst_real = std::max(worst_real, hermitian_defect(a, cfg, J));
        Symbol c = a + cplx(0.0, 1.0) * random_symbol(rng, true);
        min_control = std::min(min_control, hermitian_defect(c, cfg, J));
    }
    r.pass = worst_real <= 1e-12 && min_control > 1e-6;
    r.details = {{"max_hermitian_defect_real", worst_real}, {"min_hermitian_defect_complex", min_control}};
    r.message = "real " + sci(worst_real) + ", complex control " + sci(min_control);
    return r;
}

CriterionResult moyal_exactness(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 3);
    const int J = 64;
    FourierField f = random_field(rng, 12, 12, 0.3, false, false);
    Symbol a(f, XiProfile()), b(FourierField::constant(0, 1.0), XiProfile::power(1));
    Symbol e = compose_expansion(a, b, 1);
    Symbol oracle = Symbol(f, XiProfile::power(1)) + Symbol(-0.5 * f.derivative(1), XiProfile());
    OperatorMatrix Te = quantize(e, 0.5, J), To = quantize(oracle, 0.5, J);
    OperatorMatrix Tp = quantize(a, 0.5, J) * quantize(b, 0.5, J);
    const double scale = std::max(1.0, Tp.max_abs());
    const double vs_oracle = max_abs_diff(Te, To) / scale, vs_product = max_abs_diff(Te, Tp) / scale;

    Symbol p(random_field(rng, 6, 6, 0.3, true, false), XiProfile::japanese(1.0));
    Symbol q(random_field(rng, 6, 6, 0.3, true, false), XiProfile::power(2));
    double anti = 0.0, anti_scale = 1.0;
    const auto xis = xi_line(-20.0, 20.0, 17);
    for (int k = 0; k <= 4; ++k) {
        Symbol pq = expansion_term(p, q, k), qp = expansion_term(q, p, k);
        Symbol diff = pq - ((k % 2) ? cplx(-1.0) : cplx(1.0)) * qp;
        anti = std::max(anti, symbol_max_diff(diff, Symbol(), 16, xis));
        anti_scale = std::max(anti_scale, symbol_max_diff(pq, Symbol(), 16, xis));
    }
    anti /= anti_scale;
    r.pass = vs_oracle <= 1e-12 && vs_product <= 1e-12 && anti <= 1e-12;
    r.details = {{"residual_vs_closed_form", vs_oracle},
                 {"residual_vs_operator_product", vs_product},
                 {"termwise_antisymmetry_defect", anti}};
    r.message = "closed form " + sci(vs_oracle) + ", product " + sci(vs_product) + ", antisymmetry " + sci(anti);
    return r;
}

CriterionResult composition_smoothing(const AcceptanceOptions& opt) {
    CriterionResult r;
    const int J = opt.quick ? 64 : 128;
    FourierField c(1);
    c[1] = c[-1] = kSqrt2Pi / 2;  // cos x
    Symbol a(c, XiProfile::power(1));
    CutoffConfig cfg;
    cfg.delta = 0.25;
    CompositionReport rep = remainder_order(a, a, 3, cfg, J);
    r.pass = rep.fit.order >= rep.threshold;
    r.details = to_json(rep);
    r.details["J"] = J;
    r.details["meets_expected_order_1"] = rep.fit.order >= 1.0;
    r.message = "decay order " + (std::isinf(rep.fit.order) ? std::string("inf (remainder vanishes)") : sci(rep.fit.order)) +
                " vs threshold " + sci(rep.threshold);
    return r;
}

CriterionResult paraproduct_exactness(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 5);
    const int J = 64;
    CutoffConfig cfg;
    double worst = 0.0, worst_exact = 0.0;
    for (int p = 2; p <= 4; ++p) {
        const int Jc = J / p;  // band limit keeps the product alias free on the J grid
        std::vector<FourierField> u;
        for (int i = 0; i < p; ++i) u.push_back(random_field(rng, J, Jc, 0.1, false, false));
        ParaproductSplit split = paraproduct_split(u, cfg);
        FourierField prod = dealiased_product(u);
        FourierField exact = u[0];
        for (int i = 1; i < p; ++i) exact = exact_product(exact, u[i]);
        exact = exact.resized(J);
        const double scale = std::max(prod.max_abs(), 1e-300);
        worst = std::max(worst, max_abs_diff(split.total(), prod) / scale);
        worst_exact = std::max(worst_exact, max_abs_diff(split.total(), exact) / scale);
    }
    r.pass = worst <= 1e-12 && worst_exact <= 1e-12;
    r.details = {{"max_relative_vs_pseudospectral", worst}, {"max_relative_vs_convolution", worst_exact}};
    r.message = "split vs product " + sci(worst) + ", vs convolution " + sci(worst_exact);
    return r;
}

CriterionResult paralinearization_reconstruction(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 6);
    const int J = opt.quick ? 32 : 64;
    CutoffConfig cfg;
    PairField U = random_even_state(rng, J, J / 4, 0.2);
    double worst_res = 0.0, worst_imag = 0.0, worst_a2 = 0.0;
    json per;
    for (const auto& [name, f] : {std::pair{"cubic", Nonlinearity::cubic()}, std::pair{"cubic_uxx", Nonlinearity::cubic_uxx()}}) {
        Paralinearization P = paralinearize(f, U, cfg);
        const double res = reconstruction_residual(f, U, P);
        const int n = smooth_size(2 * P.a[2].J() + 1);
        auto a2 = inverse_transform(P.a[2], n);
        auto zp = derivative_samples(U.plus, n), zm = derivative_samples(U.minus, n);
        auto oracle = evaluate_polynomial(wirtinger(f.monomials(), 2, false), zp, zm);
        double imag = 0.0, diff = 0.0, scale = 1e-300;
        for (int m = 0; m < n; ++m) {
            imag = std::max(imag, std::abs(a2[m].imag()));
            diff = std::max(diff, std::abs(a2[m] - oracle[m]));
            scale = std::max(scale, std::abs(oracle[m]));
        }
        worst_res = std::max(worst_res, res);
        worst_imag = std::max(worst_imag, imag);
        worst_a2 = std::max(worst_a2, diff);
        per[name] = {{"reconstruction_residual", res}, {"a2_max_imag", imag}, {"a2_vs_derivative", diff}};
    }
    r.pass = worst_res <= 1e-11 && worst_imag <= 1e-12 && worst_a2 <= 1e-12;
    r.details = per;
    r.details["J"] = J;
    r.message = "reconstruction " + sci(worst_res) + ", Im a2 " + sci(worst_imag) + ", a2 vs df/du_xx " + sci(worst_a2);
    return r;
}

CriterionResult reduction_formulas(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 7);
    const int J = 32;
    CutoffConfig cfg;
    PairField U = random_even_state(rng, J, 6, 0.15);
    // |u|^2 u_xx + u^2 conj(u_xx): real principal part and a nonzero off-diagonal b2
    Monomial m1, m2;
    m1.alpha = {1, 0, 1};
    m1.beta = {1, 0, 0};
    m2.alpha = {2, 0, 0};
    m2.beta = {0, 0, 1};
    Nonlinearity f({m1, m2});
    Paralinearization P = paralinearize(f, U, cfg);
    // a2, a1 are real valued up to rounding
    FourierField a2r = 0.5 * (P.a[2] + P.a[2].conj());

    DiagonalizationResult D = diagonalize_principal(a2r, P.b[2]);
    const double conj_def = D.conjugation_defect(), inv_def = D.inverse_defect();
    Symbol d1 = corrector_d1(P.b[1], a2r);
    const double d1_def = corrector_d1_defect(d1, P.b[1], a2r);

    StraighteningResult S = straighten(a2r);
    const double str_def = straightening_defect(a2r, S);
    const double inv = inversion_defect(S);
    const double transported = transported_constancy(a2r, S);

    FourierField a1r = 0.5 * (P.a[1] + P.a[1].conj());
    FourierField s = eliminate_order_one(a1r, S.a2_const);
    const double one_res = order_one_residual(a1r, S.a2_const, s);

    Symbol a0(P.a[0], XiProfile());
    Symbol n0 = constant_coeff_step(a0, S.a2_const);
    const double zero_res = constant_coeff_residual(a0, n0, S.a2_const);

    r.pass = conj_def <= 1e-12 && str_def <= 1e-10 && S.endpoint_defect <= 1e-12 && one_res <= 1e-11 &&
             zero_res <= 1e-11;
    r.details = {{"conjugation_defect", conj_def},   {"inverse_defect", inv_def},
                 {"d1_defect", d1_def},             {"straightening_defect", str_def},
                 {"endpoint_defect", S.endpoint_defect}, {"inversion_defect", inv},
                 {"transported_constancy", transported}, {"a2_const", S.a2_const},
                 {"order_one_residual", one_res},   {"order_zero_residual", zero_res}};
    r.message = "diag " + sci(conj_def) + ", straighten " + sci(str_def) + ", endpoint " + sci(S.endpoint_defect) +
                ", order one " + sci(one_res) + ", order zero " + sci(zero_res);
    return r;
}

// det of the matrix <n_j>^{-(2k+1)} by Gaussian elimination in quad precision. Row j
// carries the factor <n_j>^{-1}; the rest, (1 + n_j^2)^{-k}, is formed by division only.
double quad_determinant(const std::vector<int>& n) {
    using quad = __float128;
    const int q = static_cast<int>(n.size());
    std::vector<std::vector<quad>> A(q, std::vector<quad>(q));
    long double scale = 1.0L;
    for (int j = 0; j < q; ++j) {
        const quad w = quad(1) / quad(1 + n[j] * n[j]);
        quad p = 1;
        for (int k = 0; k < q; ++k) A[j][k] = (p *= w);
        scale /= std::sqrt(1.0L + (long double)n[j] * n[j]);
    }
    auto mag = [](quad v) { return v < 0 ? -v : v; };
    quad det = 1;
    for (int c = 0; c < q; ++c) {
        int piv = c;
        for (int i = c + 1; i < q; ++i)
            if (mag(A[i][c]) > mag(A[piv][c])) piv = i;
        if (piv != c) {
            std::swap(A[piv], A[c]);
            det = -det;
        }
        det *= A[c][c];
        for (int i = c + 1; i < q; ++i) {
            const quad f = A[i][c] / A[c][c];
            for (int k = c; k < q; ++k) A[i][k] -= f * A[c][k];
        }
    }
    return double((long double)det * scale);
}

CriterionResult vandermonde(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 8);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int q = 1 + t % 6;
        std::vector<int> pool(21);
        for (int i = 0; i <= 20; ++i) pool[i] = i;
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> n(pool.begin(), pool.begin() + q);
        const double lu = quad_determinant(n);
        const double closed = vandermonde_det(n);
        worst = std::max(worst, std::abs((closed - lu) / lu));
    }
    r.pass = worst <= 1e-10;
    r.details = {{"max_relative_defect", worst}, {"tuples", 100}};
    r.message = "closed form vs LU " + sci(worst);
    return r;
}

CriterionResult nonresonance(const AcceptanceOptions& opt) {
    CriterionResult r;
    const int n_max = opt.quick ? 15 : 30;
    double min_gamma = 1e300;
    json draws = json::array();
    for (int k = 0; k < 20; ++k) {
        Rng rng(opt.seed + 900 + k);
        std::uniform_real_distribution<double> U(-0.5, 0.5);
        std::vector<double> m(5);
        for (auto& v : m) v = U(rng);
        NonresonanceReport rep = scan_nonresonance(PotentialParams(m), 3, n_max, 12);
        min_gamma = std::min(min_gamma, rep.gamma_hat);
        draws.push_back({{"m", m}, {"gamma_hat", rep.gamma_hat}});
    }
    json pythagorean;
    NonresonanceReport zero = scan_nonresonance(PotentialParams({0.0}), 3, n_max, 12, 10'000'000,
                                                [&](const DivisorQuery& q, double psi, double) {
                                                    if (psi != 0.0 || !pythagorean.is_null()) return;
                                                    if (q.ell == 0 || q.ell == 3) return;
                                                    if (std::count(q.n.begin(), q.n.end(), 0) > 0) return;
                                                    pythagorean = q;
                                                });
    r.pass = min_gamma > 0.0 && zero.gamma_hat == 0.0 && !pythagorean.is_null();
    r.details = {{"min_gamma_hat", min_gamma}, {"draws", draws}, {"unperturbed", zero}, {"pythagorean_tuple", pythagorean}};
    r.message = "min gamma_hat " + sci(min_gamma) + ", m = 0 zero divisors " + std::to_string(zero.zero_divisors) +
                (pythagorean.is_null() ? "" : ", e.g. " + pythagorean["n"].dump());
    return r;
}

TupleTable random_table(Rng& rng, int N, int n_max) {
    TupleTable t;
    scan_nonresonance(PotentialParams({0.0}), N, n_max, 0, 10'000'000, [&](const DivisorQuery& q, double, double) {
        t.push_back({q, cplx(gauss(rng), gauss(rng))});
    });
    // the scan skips paired tuples; add them back so the kernel is populated
    if (N % 2 == 0) {
        std::vector<int> h(N / 2, 0);
        while (true) {
            DivisorQuery q{N, N / 2, h};
            q.n.insert(q.n.end(), h.begin(), h.end());
            t.push_back({q, cplx(gauss(rng), gauss(rng))});
            int i = N / 2 - 1;
            while (i >= 0 && h[i] == n_max) --i;
            if (i < 0) break;
            ++h[i];
            for (int j = i + 1; j < N / 2; ++j) h[j] = h[i];
        }
    }
    return t;
}

CriterionResult homological(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 10);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    std::vector<double> m(5);
    for (auto& v : m) v = U(rng);
    PotentialParams params(m);

    double worst = 0.0;
    bool kernel_ok = true;
    long long kernel_entries = 0, solved = 0;
    for (int N : {3, 4}) {
        TupleTable mp = random_table(rng, N, N == 3 ? 20 : (opt.quick ? 6 : 10));
        HomologicalSolution sol = solve_homological(mp, params, 12);
        worst = std::max(worst, sol.max_residual);
        solved += sol.solved;
        size_t k = 0;
        for (size_t i = 0; i < mp.size(); ++i) {
            if (!pairing_excluded(mp[i].q)) continue;
            ++kernel_entries;
            if (k >= sol.kernel.size() || !(sol.kernel[k].q == mp[i].q) || sol.kernel[k].value != mp[i].value ||
                sol.f[i].value != 0.0)
                kernel_ok = false;
            ++k;
        }
        if (k != sol.kernel.size()) kernel_ok = false;
    }

    // kernel projection of tables from real, reversible polynomial symbols
    Monomial q22, q31, q13;
    q22.alpha = {2, 0, 0}; q22.beta = {2, 0, 0};
    q31.alpha = {3, 0, 0}; q31.beta = {1, 0, 0};
    q13.alpha = {1, 0, 0}; q13.beta = {3, 0, 0}; q13.C = 0.5;
    const int n_amp = 6;
    std::vector<cplx> amp(n_amp + 1);
    for (auto& a : amp) a = cplx(gauss(rng), gauss(rng)) * 0.5;
    double kernel_imag = 0.0, control_imag = 0.0;
    for (const Polynomial& g : {wirtinger(Nonlinearity::cubic().monomials(), 0, false), Polynomial{q22, q31, q13}}) {
        TupleTable t = tuple_table(g, n_amp);
        const cplx kv = evaluate_table(kernel_project(t), amp);
        const cplx full = evaluate_table(t, amp);
        kernel_imag = std::max(kernel_imag, std::abs(kv.imag()) / std::max(1.0, std::abs(kv)));
        control_imag = std::max(control_imag, std::abs(full.imag()) / std::max(1.0, std::abs(full)));
    }
    r.pass = worst <= 1e-12 && kernel_ok && kernel_entries > 0 && kernel_imag <= 1e-12;
    r.details = {{"max_residual", worst},           {"solved", solved},
                 {"kernel_entries", kernel_entries}, {"kernel_preserved", kernel_ok},
                 {"kernel_value_imag", kernel_imag}, {"unprojected_value_imag", control_imag}};
    r.message = "residual " + sci(worst) + ", kernel " + (kernel_ok ? "preserved" : "modified") + ", Im <A> " +
                sci(kernel_imag) + " (unprojected " + sci(control_imag) + ")";
    return r;
}

CriterionResult energy_cancellation(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 11);
    const int J = opt.quick ? 32 : 64;
    const double T = 10.0, s = 2.0;
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    std::vector<double> m(5);
    for (auto& v : m) v = U(rng);
    PotentialParams params(m);
    PairField Z = random_even_state(rng, J, J / 2, 1.0);

    Monomial q22, q31;
    q22.alpha = {2, 0, 0}; q22.beta = {2, 0, 0};
    q31.alpha = {3, 0, 0}; q31.beta = {1, 0, 0};
    TupleTable t = tuple_table({q22, q31}, 4);
    std::vector<cplx> amp(5);
    for (auto& a : amp) a = cplx(gauss(rng), gauss(rng)) * 0.3;
    const cplx projected = evaluate_table(kernel_project(t), amp);
    const cplx full = evaluate_table(t, amp);

    auto constant_matrix = [](cplx v) {
        SymbolMatrix2 A;
        A.a = Symbol(FourierField::constant(0, v), XiProfile());
        return A;
    };
    const double m2 = 0.1;
    auto drift_proj = linear_model_energy(Z, m2, constant_matrix(projected), T, params, s);
    auto drift_full = linear_model_energy(Z, m2, constant_matrix(full), T, params, s);
    auto drift_zero = linear_model_energy(Z, m2, SymbolMatrix2{}, T, params, s);
    auto drift_ctrl = linear_model_energy(Z, m2, constant_matrix(cplx(0.3, -0.01)), T, params, s);
    const double expect_full = std::abs(std::exp(-2.0 * full.imag() * T) - 1.0);
    const double expect_ctrl = std::exp(0.02 * T) - 1.0;
    const double ctrl_err = std::abs(drift_ctrl.drift - expect_ctrl) / expect_ctrl;
    r.pass = drift_proj.drift <= 1e-9 && drift_zero.drift <= 1e-12 && drift_full.drift > 1e-6 && ctrl_err <= 1e-6;
    r.details = {{"drift_projected", drift_proj.drift}, {"drift_unprojected", drift_full.drift},
                 {"expected_unprojected", expect_full},  {"drift_zero", drift_zero.drift},
                 {"drift_imag_0.01", drift_ctrl.drift},  {"expected_imag_0.01", expect_ctrl},
                 {"projected_value", {projected.real(), projected.imag()}},
                 {"unprojected_value", {full.real(), full.imag()}},
                 {"J", J}, {"s", s}, {"T", T}};
    r.message = "projected drift " + sci(drift_proj.drift) + ", unprojected " + sci(drift_full.drift) +
                ", Im 0.01 control " + sci(drift_ctrl.drift) + " vs " + sci(expect_ctrl);
    return r;
}

CriterionResult evolution_sanity(const AcceptanceOptions& opt) {
    CriterionResult r;
    Rng rng(opt.seed + 12);
    const int J = opt.quick ? 32 : 64;
    std::uniform_real_distribution<double> Ud(-0.5, 0.5);
    std::vector<double> m(5);
    for (auto& v : m) v = Ud(rng);
    PotentialParams params(m);

    // linear flow
    PairField U0 = random_even_state(rng, J, J / 2, 1.0);
    IntegrateOptions lin;
    lin.s_list = {0.0, 4.0};
    lin.t_max = 10.0;
    lin.dt = 0.37;
    lin.adaptive = false;
    TrajectoryRecord L = integrate(U0, params, Nonlinearity::zero(), lin);
    double iso = 0.0;
    for (const auto& row : L.sobolev_norms)
        for (size_t k = 0; k < row.size(); ++k)
            iso = std::max(iso, std::abs(row[k] - L.sobolev_norms[0][k]) / L.sobolev_norms[0][k]);

    // nonlinear structure defects
    ExperimentConfig cfg;
    cfg.J = J;
    PairField V0 = initial_state(cfg, 0.05) + random_even_state(rng, J, 8, 0.002);
    IntegrateOptions nl;
    nl.s_list = {0.0, 4.0};
    nl.t_max = 10.0;
    TrajectoryRecord N = integrate(V0, params, Nonlinearity::cubic(), nl);
    const bool nl_ok = N.terminal_reason == TerminalReason::t_max;

    const double dt = opt.quick ? 2e-3 : 1e-3;
    const double rev = reversibility_test(initial_state(cfg, 0.05), params, Nonlinearity::cubic(), 5.0, dt);

    r.pass = iso <= 1e-11 && nl_ok && N.max_parity_defect <= 1e-9 && N.max_realification_defect <= 1e-9 && rev <= 1e-6;
    r.details = {{"linear_isometry_defect", iso},
                 {"nonlinear_terminal_reason", to_string(N.terminal_reason)},
                 {"max_parity_defect", N.max_parity_defect},
                 {"max_realification_defect", N.max_realification_defect},
                 {"reversibility_defect", rev},
                 {"J", J},
                 {"dt_reversibility", dt}};
    r.message = "isometry " + sci(iso) + ", parity " + sci(N.max_parity_defect) + ", realification " +
                sci(N.max_realification_defect) + ", reversibility " + sci(rev);
    return r;
}

CriterionResult lifespan(const AcceptanceOptions& opt) {
    CriterionResult r;
    ExperimentConfig cfg;
    cfg.J = 64;
    cfg.s = 4.0;
    cfg.f = Nonlinearity::cubic();
    cfg.tol = 1e-8;
    cfg.t_max_scale = opt.quick ? 0.5 : 4.0;
    cfg.norm_factor = 2.0;
    cfg.eps_grid = opt.quick ? std::vector<double>{0.1, 0.05} : std::vector<double>{0.1, 0.05, 0.025, 0.0125};
    cfg.params_source = "random";
    cfg.seed = opt.seed + 13;
    LifespanFit generic = lifespan_scan(cfg, make_params(cfg));
    LifespanFit flat = lifespan_scan(cfg, PotentialParams({0.0}));
    r.pass = generic.status == "ok" && generic.fit && generic.fit->slope <= -1.5;
    r.details = {{"generic", to_json(generic)}, {"unperturbed", to_json(flat)}, {"t_max_scale", cfg.t_max_scale}};
    if (generic.fit)
        r.message = "slope " + sci(generic.fit->slope) + " +- " + sci(generic.fit->slope_se);
    else
        r.message = "status " + generic.status;
    double worst_ratio = 0.0;
    for (const auto& run : generic.runs) worst_ratio = std::max(worst_ratio, run.max_ratio);
    r.message += ", largest H^s growth factor 1 + " + sci(worst_ratio - 1.0) + " (m = 0: " + flat.status + ")";
    return r;
}

}  // namespace

const std::vector<CriterionEntry>& acceptance_criteria() {
    static const std::vector<CriterionEntry> list = {
        {1, "quantization identities", 10, quantization_identity},
        {2, "self-adjointness", 10, self_adjointness},
        {3, "Moyal expansion exactness", 5, moyal_exactness},
        {4, "composition remainder smoothing", 60, composition_smoothing},
        {5, "paraproduct exactness", 10, paraproduct_exactness},
        {6, "paralinearization reconstruction", 10, paralinearization_reconstruction},
        {7, "reduction formulas", 10, reduction_formulas},
        {8, "Vandermonde determinant", 5, vandermonde},
        {9, "non-resonance scan", 120, nonresonance},
        {10, "homological solver", 30, homological},
        {11, "energy cancellation", 60, energy_cancellation},
        {12, "evolution sanity", 120, evolution_sanity},
        {13, "lifespan scaling", 900, lifespan},
    };
    return list;
}

CriterionResult run_criterion(const CriterionEntry& c, const AcceptanceOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = c.run(opt);
    } catch (const std::exception& e) {
        r.pass = false;
        r.message = std::string("error: ") + e.what();
    }
    r.id = c.id;
    r.name = c.name;
    r.budget = c.budget;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.budget) {
        r.pass = false;
        r.message += " (over the time budget)";
    }
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& only) {
    std::vector<CriterionResult> out;
    for (const auto& c : acceptance_criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        out.push_back(run_criterion(c, opt));
    }
    return out;
}

std::string format_line(const CriterionResult& r) {
    char head[128];
    std::snprintf(head, sizeof head, "%s %2d %-34s %7.2f s / %4.0f s  ", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds, r.budget);
    return head + r.message;
}

json junit_json(const std::vector<CriterionResult>& results) {
    json cases = json::array();
    int failures = 0;
    for (const auto& r : results) {
        json c = {{"id", r.id}, {"name", r.name}, {"status", r.pass ? "passed" : "failed"},
                  {"budget", r.budget}, {"message", r.message}, {"details", r.details}};
        cases.push_back(c);
        if (!r.pass) ++failures;
    }
    return {{"testsuite", {{"name", "acceptance"}, {"tests", results.size()}, {"failures", failures}, {"testcases", cases}}}};
}

}  // namespace paranls
