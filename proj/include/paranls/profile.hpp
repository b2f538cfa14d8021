#pragma once

#include <memory>
#include <string>
#include <vector>

#include "paranls/spectral.hpp"

namespace paranls {

// Truncated Taylor series sum_k c[k] h^k, used to get exact xi-derivatives of
// profiles to any depth.
class Taylor {
public:
    explicit Taylor(int n, cplx c0 = 0.0) : c(n + 1, 0.0) { c[0] = c0; }
    static Taylor variable(int n, double x0);

    int order() const { return static_cast<int>(c.size()) - 1; }
    cplx operator[](int k) const { return c[k]; }

    std::vector<cplx> c;
};

Taylor operator+(const Taylor& a, const Taylor& b);
Taylor operator-(const Taylor& a, const Taylor& b);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator/(const Taylor& a, const Taylor& b);
Taylor operator*(cplx s, Taylor a);
Taylor operator+(cplx s, Taylor a);
Taylor exp(const Taylor& a);
Taylor pow(const Taylor& a, double r);  // requires a[0] != 0

// exp(-1/t) for t > 0, zero otherwise, with its Taylor jet.
Taylor smooth_step(const Taylor& t);

// The xi-dependence of one separable symbol term.
class XiProfile {
public:
    struct Impl {
        virtual ~Impl() = default;
        virtual std::vector<cplx> taylor(double xi, int n) const = 0;
        virtual double order() const = 0;
        virtual int depth() const { return 24; }
        virtual nlohmann::json to_json() const = 0;
        virtual bool is_unit() const { return false; }
        virtual bool is_zero() const { return false; }
    };

    XiProfile();  // the constant profile 1
    explicit XiProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    static XiProfile power(int k);               // (i xi)^k
    static XiProfile japanese(double m);         // <xi>^m
    static XiProfile gamma();                    // 1/(i xi) for |xi| >= 1/2, odd smooth inside
    static XiProfile potential(std::vector<double> m);  // sum m_k <xi>^{-(2k+1)}
    static XiProfile product(const XiProfile& a, const XiProfile& b);

    cplx operator()(double xi) const;
    cplx derivative(double xi, int d) const;  // d-th derivative
    std::vector<cplx> taylor(double xi, int n) const { return impl_->taylor(xi, n); }

    double order() const { return impl_->order(); }
    int depth() const { return impl_->depth(); }
    bool is_unit() const { return impl_->is_unit(); }
    bool is_zero() const { return impl_->is_zero(); }

    XiProfile differentiate(int d) const;  // capability error beyond depth()
    XiProfile conj() const;                // conj(p(xi)) for real xi
    XiProfile reflect() const;             // p(-xi)

    nlohmann::json to_json() const { return impl_->to_json(); }
    static XiProfile from_json(const nlohmann::json& j);

private:
    std::shared_ptr<const Impl> impl_;
};

}  // namespace paranls
