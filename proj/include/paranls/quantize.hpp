#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "paranls/symbol.hpp"

namespace paranls {

// Dense operator on the modes -J..J; row/column k+J holds mode k.
struct OperatorMatrix {
    int J = 0;
    Eigen::MatrixXcd M;

    OperatorMatrix() = default;
    explicit OperatorMatrix(int J_) : J(J_), M(Eigen::MatrixXcd::Zero(2 * J_ + 1, 2 * J_ + 1)) {}

    cplx& operator()(int k, int j) { return M(k + J, j + J); }
    cplx operator()(int k, int j) const { return M(k + J, j + J); }

    FourierField apply(const FourierField& u) const;
    double max_abs() const { return M.cwiseAbs().maxCoeff(); }
};

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b);

// entry (k, j) = a^(k - j, (1 - sigma) k + sigma j) / sqrt(2 pi)
OperatorMatrix quantize(const Symbol& a, double sigma, int J);

// Standard symbol to Weyl symbol: b^(n, xi) = a^(n, xi - n/2).
Symbol std_to_weyl(const Symbol& a);
Symbol weyl_to_std(const Symbol& a);

OperatorMatrix bony_weyl(const Symbol& a, const CutoffConfig& cfg, int J);
OperatorMatrix bony_standard(const Symbol& a, const CutoffConfig& cfg, int J);

double hermitian_defect(const Symbol& a, const CutoffConfig& cfg, int J);
double adjoint_defect(const Symbol& a, const CutoffConfig& cfg, int J);
double conjugation_defect(const Symbol& a, const CutoffConfig& cfg, int J, uint64_t seed = 1, int trials = 4);

// Operator norm H^s -> H^{s-m}.
double action_norm(const Symbol& a, const CutoffConfig& cfg, double s, double m, int J);
double action_norm(const OperatorMatrix& T, double s, double m);

// Binary row-major complex float64 plus a JSON header next to it.
void export_matrix(const OperatorMatrix& T, const std::string& path_stem, const nlohmann::json& header);

}  // namespace paranls
