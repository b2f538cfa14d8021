#pragma once

#include <vector>

#include "paranls/quantize.hpp"

namespace paranls {

struct DiagonalizationResult {
    std::vector<double> x;             // grid points
    std::vector<double> lambda_plus;   // sqrt((1+a2)^2 - |b2|^2)
    std::vector<Mat2> M, M_inv;        // row major 2x2 per grid point
    std::vector<double> a2, b2_abs;    // samples used
    std::vector<cplx> b2;

    // max |M M^{-1} - I| and max |M^{-1} E (1 + A2) M - E diag(lambda, lambda)|
    double inverse_defect() const;
    double conjugation_defect() const;
};

DiagonalizationResult diagonalize_principal(const FourierField& a2, const FourierField& b2, int n_grid = 0);

// d1 = b1 / (2 (1 + a2)) gamma(xi), coefficient resolved on a grid of 2K+1 points.
Symbol corrector_d1(const FourierField& b1, const FourierField& a2);
// max over grid x and |xi| >= 1/2 samples of |2 d1 (1+a2)(i xi)^2 - b1 (i xi)| / <xi>
double corrector_d1_defect(const Symbol& d1, const FourierField& b1, const FourierField& a2);

struct StraighteningResult {
    double a2_const = 0.0;
    FourierField gamma_field;  // gamma(y), zero mean
    FourierField beta_field;   // beta(x), x = y + gamma(y) <=> y = x + beta(x)
    double integrand_mean = 0.0;  // mean of gamma', zero by the normalization
    double endpoint_defect = 0.0; // |gamma(2 pi) - gamma(0)| of the true primitive
    int newton_iterations = 0;
};

StraighteningResult straighten(const FourierField& a2);
// max over grid and half-shifted grid of |(1+a2)(1+gamma')^2 - (1 + a2_const)|
double straightening_defect(const FourierField& a2, const StraighteningResult& s);
// max |beta(x) + gamma(x + beta(x))| over the grid
double inversion_defect(const StraighteningResult& s);
// spread of (1+a2)(1+gamma')^2 evaluated at y = x + beta(x)
double transported_constancy(const FourierField& a2, const StraighteningResult& s);

// s = -d^{-1}(a1 / (2 (1 + a2_const)))
FourierField eliminate_order_one(const FourierField& a1, double a2_const);
double order_one_residual(const FourierField& a1, double a2_const, const FourierField& s);

// n0 = d^{-1}(mean a0 - a0) / (2 (1 + a2_const)) gamma(xi), termwise.
Symbol constant_coeff_step(const Symbol& a0, double a2_const);
// max over x grid and |xi| >= 1/2 of |2 d_x n0 (1+a2c)(i xi) + a0 - mean_x a0|
double constant_coeff_residual(const Symbol& a0, const Symbol& n0, double a2_const);

// Generator of the paracomposition flow at time tau: Op^BW(b(tau) (i xi)),
// b(tau) = beta / (1 + tau beta_x).
OperatorMatrix flow_generator(const FourierField& beta, double tau, const CutoffConfig& cfg, int J);
FourierField paracomposition_flow(const FourierField& beta, const FourierField& u, const CutoffConfig& cfg, int steps);

}  // namespace paranls
