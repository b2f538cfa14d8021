#pragma once

#include <array>
#include <string>
#include <vector>

#include "paranls/spectral.hpp"

namespace paranls {

struct PotentialParams {
    std::vector<double> m;

    PotentialParams() = default;
    explicit PotentialParams(std::vector<double> m_);  // validates the box [-1/2, 1/2]^M
    int M() const { return static_cast<int>(m.size()); }
};

// p^(j) = sum_k m_k / <j>^{2k+1}
double potential_coeff(const PotentialParams& params, double j);
// lambda_j = -j^2 + p^(j)
double frequency(const PotentialParams& params, double j);

// C * z0^a0 zb0^b0 z1^a1 zb1^b1 z2^a2 zb2^b2 with z0 = u, z1 = u_x, z2 = u_xx.
struct Monomial {
    std::array<int, 3> alpha{};
    std::array<int, 3> beta{};
    cplx C = 1.0;

    int degree() const;
};

using Polynomial = std::vector<Monomial>;

// Wirtinger derivative with respect to z_d (bar = false) or its conjugate.
Polynomial wirtinger(const Polynomial& f, int d, bool bar);

// Evaluates sum C z^alpha zb^beta pointwise. z[d] and zb[d] hold samples of
// the d-th derivative of the two slots. With conj_coeffs the roles of z and zb
// are exchanged and C is conjugated, which gives conj(f) on realified data.
std::vector<cplx> evaluate_polynomial(const Polynomial& f,
                                      const std::array<std::vector<cplx>, 3>& z,
                                      const std::array<std::vector<cplx>, 3>& zb,
                                      bool conj_coeffs = false);

class Nonlinearity {
public:
    Nonlinearity() = default;
    explicit Nonlinearity(Polynomial monomials);

    static Nonlinearity zero() { return Nonlinearity(); }
    static Nonlinearity cubic();      // |u|^2 u
    static Nonlinearity cubic_uxx();  // |u|^2 u_xx

    const Polynomial& monomials() const { return mono_; }
    bool empty() const { return mono_.empty(); }
    int degree_bound() const;
    int max_derivative() const;

private:
    Polynomial mono_;
};

struct HypothesisReport {
    bool item1 = true;  // even in u_x
    bool item2 = true;  // d f / d u_xx real
    bool item3 = true;  // real coefficients
    std::vector<std::string> violations;

    bool ok() const { return item1 && item2 && item3; }
};

HypothesisReport validate_hypothesis(const Nonlinearity& f);

struct RhsOptions {
    bool dealias = true;
    bool override_hypothesis = false;
};

// Samples of u, u_x, u_xx of a field on an n-point grid. Orders above max_order
// are left empty.
std::array<std::vector<cplx>, 3> derivative_samples(const FourierField& u, int n, int max_order = 2);

// F(U) = (f(u,...), conj f) in the two-slot form, truncated to the J of U.
PairField nonlinear_term(const PairField& U, const Nonlinearity& f, bool dealias = true);

// i E (Lambda U + F(U))
PairField rhs(const PairField& U, const PotentialParams& params, const Nonlinearity& f,
              const RhsOptions& opt = {});

void to_json(nlohmann::json& j, const Monomial& m);
void from_json(const nlohmann::json& j, Monomial& m);
void to_json(nlohmann::json& j, const Nonlinearity& f);
void from_json(const nlohmann::json& j, Nonlinearity& f);
void to_json(nlohmann::json& j, const PotentialParams& p);
void from_json(const nlohmann::json& j, PotentialParams& p);

}  // namespace paranls
