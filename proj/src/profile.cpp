#include "paranls/profile.hpp"

#include <cmath>

#include "paranls/errors.hpp"

namespace paranls {

Taylor Taylor::variable(int n, double x0) {
    Taylor t(n, x0);
    if (n >= 1) t.c[1] = 1.0;
    return t;
}

Taylor operator+(const Taylor& a, const Taylor& b) {
    Taylor r = a;
    for (int k = 0; k <= r.order(); ++k) r.c[k] += b.c[k];
    return r;
}

Taylor operator-(const Taylor& a, const Taylor& b) {
    Taylor r = a;
    for (int k = 0; k <= r.order(); ++k) r.c[k] -= b.c[k];
    return r;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
    const int n = a.order();
    Taylor r(n);
    for (int i = 0; i <= n; ++i) {
        if (a.c[i] == 0.0) continue;
        for (int j = 0; i + j <= n; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}

Taylor operator/(const Taylor& a, const Taylor& b) {
    const int n = a.order();
    Taylor r(n);
    for (int k = 0; k <= n; ++k) {
        cplx s = a.c[k];
        for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
        r.c[k] = s / b.c[0];
    }
    return r;
}

Taylor operator*(cplx s, Taylor a) {
    for (auto& z : a.c) z *= s;
    return a;
}

Taylor operator+(cplx s, Taylor a) {
    a.c[0] += s;
    return a;
}

Taylor exp(const Taylor& a) {
    const int n = a.order();
    Taylor r(n, std::exp(a.c[0]));
    for (int k = 1; k <= n; ++k) {
        cplx s = 0.0;
        for (int j = 1; j <= k; ++j) s += double(j) * a.c[j] * r.c[k - j];
        r.c[k] = s / double(k);
    }
    return r;
}

Taylor pow(const Taylor& a, double p) {
    const int n = a.order();
    Taylor r(n, std::pow(a.c[0], p));
    for (int k = 1; k <= n; ++k) {
        cplx s = 0.0;
        for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * a.c[j] * r.c[k - j];
        r.c[k] = s / (double(k) * a.c[0]);
    }
    return r;
}

Taylor smooth_step(const Taylor& t) {
    if (t.c[0].real() <= 0.0) return Taylor(t.order());
    Taylor one(t.order(), 1.0);
    return exp(-1.0 * (one / t));
}

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial_ratio(int top, int bottom) {  // top! / bottom!
    double r = 1.0;
    for (int i = bottom + 1; i <= top; ++i) r *= i;
    return r;
}

cplx ipow(int k) {
    static const cplx v[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    return v[((k % 4) + 4) % 4];
}

using json = nlohmann::json;

struct Zero : XiProfile::Impl {
    std::vector<cplx> taylor(double, int n) const override { return std::vector<cplx>(n + 1, 0.0); }
    double order() const override { return -1e300; }
    int depth() const override { return 1 << 20; }
    json to_json() const override { return {{"kind", "zero"}}; }
    bool is_zero() const override { return true; }
};

struct Power : XiProfile::Impl {
    int k;
    explicit Power(int k_) : k(k_) {}
    std::vector<cplx> taylor(double xi, int n) const override {
        std::vector<cplx> c(n + 1, 0.0);
        for (int r = 0; r <= std::min(n, k); ++r) c[r] = ipow(k) * binom(k, r) * std::pow(xi, k - r);
        return c;
    }
    double order() const override { return k; }
    int depth() const override { return 1 << 20; }
    json to_json() const override { return {{"kind", "power"}, {"k", k}}; }
    bool is_unit() const override { return k == 0; }
};

struct Japanese : XiProfile::Impl {
    double m;
    explicit Japanese(double m_) : m(m_) {}
    std::vector<cplx> taylor(double xi, int n) const override {
        Taylor x = Taylor::variable(n, xi);
        return pow(1.0 + x * x, m / 2).c;
    }
    double order() const override { return m; }
    json to_json() const override { return {{"kind", "japanese"}, {"m", m}}; }
};

struct Gamma : XiProfile::Impl {
    std::vector<cplx> taylor(double xi, int n) const override {
        Taylor x = Taylor::variable(n, xi);
        static const double norm = std::exp(-4.0);
        Taylor w = (1.0 / norm) * smooth_step(0.25 + (-1.0) * (x * x));
        return (cplx(0, -1) * x / (x * x + w)).c;
    }
    double order() const override { return -1; }
    json to_json() const override { return {{"kind", "gamma"}}; }
};

struct Potential : XiProfile::Impl {
    std::vector<double> m;
    explicit Potential(std::vector<double> m_) : m(std::move(m_)) {}
    std::vector<cplx> taylor(double xi, int n) const override {
        Taylor x = Taylor::variable(n, xi);
        Taylor base = 1.0 + x * x, sum(n);
        for (size_t k = 0; k < m.size(); ++k) sum = sum + m[k] * pow(base, -(2.0 * (k + 1) + 1.0) / 2);
        return sum.c;
    }
    double order() const override { return -3; }
    json to_json() const override { return {{"kind", "potential"}, {"m", m}}; }
};

struct Scaled : XiProfile::Impl {
    XiProfile base;
    cplx s;
    Scaled(XiProfile b, cplx s_) : base(std::move(b)), s(s_) {}
    std::vector<cplx> taylor(double xi, int n) const override {
        auto c = base.taylor(xi, n);
        for (auto& z : c) z *= s;
        return c;
    }
    double order() const override { return base.order(); }
    int depth() const override { return base.depth(); }
    json to_json() const override {
        return {{"kind", "scaled"}, {"s", {s.real(), s.imag()}}, {"base", base.to_json()}};
    }
};

struct Product : XiProfile::Impl {
    XiProfile a, b;
    Product(XiProfile a_, XiProfile b_) : a(std::move(a_)), b(std::move(b_)) {}
    std::vector<cplx> taylor(double xi, int n) const override {
        Taylor ta(n), tb(n);
        ta.c = a.taylor(xi, n);
        tb.c = b.taylor(xi, n);
        return (ta * tb).c;
    }
    double order() const override { return a.order() + b.order(); }
    int depth() const override { return std::min(a.depth(), b.depth()); }
    json to_json() const override { return {{"kind", "product"}, {"factors", {a.to_json(), b.to_json()}}}; }
};

struct Derivative : XiProfile::Impl {
    XiProfile base;
    int d;
    Derivative(XiProfile b, int d_) : base(std::move(b)), d(d_) {}
    std::vector<cplx> taylor(double xi, int n) const override {
        auto c = base.taylor(xi, n + d);
        std::vector<cplx> out(n + 1);
        for (int k = 0; k <= n; ++k) out[k] = c[k + d] * factorial_ratio(k + d, k);
        return out;
    }
    double order() const override { return base.order() - d; }
    int depth() const override { return base.depth() - d; }
    json to_json() const override { return {{"kind", "derivative"}, {"d", d}, {"base", base.to_json()}}; }
};

struct Conj : XiProfile::Impl {
    XiProfile base;
    explicit Conj(XiProfile b) : base(std::move(b)) {}
    std::vector<cplx> taylor(double xi, int n) const override {
        auto c = base.taylor(xi, n);
        for (auto& z : c) z = std::conj(z);
        return c;
    }
    double order() const override { return base.order(); }
    int depth() const override { return base.depth(); }
    json to_json() const override { return {{"kind", "conj"}, {"base", base.to_json()}}; }
};

struct Reflect : XiProfile::Impl {
    XiProfile base;
    explicit Reflect(XiProfile b) : base(std::move(b)) {}
    std::vector<cplx> taylor(double xi, int n) const override {
        auto c = base.taylor(-xi, n);
        for (int k = 1; k <= n; k += 2) c[k] = -c[k];
        return c;
    }
    double order() const override { return base.order(); }
    int depth() const override { return base.depth(); }
    json to_json() const override { return {{"kind", "reflect"}, {"base", base.to_json()}}; }
};

}  // namespace

XiProfile::XiProfile() : impl_(std::make_shared<Power>(0)) {}

XiProfile XiProfile::power(int k) {
    if (k < 0) throw RepresentationError("power profile needs k >= 0");
    return XiProfile(std::make_shared<Power>(k));
}
XiProfile XiProfile::japanese(double m) { return XiProfile(std::make_shared<Japanese>(m)); }
XiProfile XiProfile::gamma() { return XiProfile(std::make_shared<Gamma>()); }
XiProfile XiProfile::potential(std::vector<double> m) { return XiProfile(std::make_shared<Potential>(std::move(m))); }

XiProfile XiProfile::product(const XiProfile& a, const XiProfile& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    if (a.is_unit()) return b;
    if (b.is_unit()) return a;
    return XiProfile(std::make_shared<Product>(a, b));
}

cplx XiProfile::operator()(double xi) const { return impl_->taylor(xi, 0)[0]; }

cplx XiProfile::derivative(double xi, int d) const {
    if (d > depth()) throw CapabilityError("profile derivative beyond registered depth");
    return impl_->taylor(xi, d)[d] * factorial_ratio(d, 0);
}

XiProfile XiProfile::differentiate(int d) const {
    if (d == 0) return *this;
    if (d > depth()) throw CapabilityError("profile derivative beyond registered depth");
    if (is_zero()) return *this;
    if (auto p = std::dynamic_pointer_cast<const Power>(impl_)) {
        if (d > p->k) return XiProfile(std::make_shared<Zero>());
        return XiProfile(std::make_shared<Scaled>(power(p->k - d), ipow(d) * factorial_ratio(p->k, p->k - d)));
    }
    return XiProfile(std::make_shared<Derivative>(*this, d));
}

XiProfile XiProfile::conj() const {
    if (is_zero() || is_unit()) return *this;
    return XiProfile(std::make_shared<Conj>(*this));
}

XiProfile XiProfile::reflect() const {
    if (is_zero() || is_unit()) return *this;
    return XiProfile(std::make_shared<Reflect>(*this));
}

XiProfile XiProfile::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return XiProfile(std::make_shared<Zero>());
    if (kind == "power") return power(j.at("k").get<int>());
    if (kind == "japanese") return japanese(j.at("m").get<double>());
    if (kind == "gamma") return gamma();
    if (kind == "potential") return potential(j.at("m").get<std::vector<double>>());
    if (kind == "product") return product(from_json(j.at("factors").at(0)), from_json(j.at("factors").at(1)));
    if (kind == "derivative") return from_json(j.at("base")).differentiate(j.at("d").get<int>());
    if (kind == "conj") return from_json(j.at("base")).conj();
    if (kind == "reflect") return from_json(j.at("base")).reflect();
    if (kind == "scaled") {
        cplx s(j.at("s").at(0).get<double>(), j.at("s").at(1).get<double>());
        return XiProfile(std::make_shared<Scaled>(from_json(j.at("base")), s));
    }
    throw RepresentationError("unknown profile kind: " + kind);
}

}  // namespace paranls
