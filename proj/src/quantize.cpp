#include "paranls/quantize.hpp"

#include <fstream>
#include <random>

#include "paranls/errors.hpp"

namespace paranls {

FourierField OperatorMatrix::apply(const FourierField& u) const {
    FourierField v = u.resized(J);
    Eigen::Map<const Eigen::VectorXcd> x(v.coeffs().data(), 2 * J + 1);
    Eigen::VectorXcd y = M * x;
    FourierField out(J);
    for (int k = 0; k < 2 * J + 1; ++k) out.coeffs()[k] = y(k);
    return out;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.J != b.J) throw DimensionError("operator product: J mismatch");
    OperatorMatrix r(a.J);
    r.M.noalias() = a.M * b.M;
    return r;
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.J != b.J) throw DimensionError("operator difference: J mismatch");
    OperatorMatrix r(a.J);
    r.M = a.M - b.M;
    return r;
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.J != b.J) throw DimensionError("operator sum: J mismatch");
    OperatorMatrix r(a.J);
    r.M = a.M + b.M;
    return r;
}

double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b) { return (a - b).max_abs(); }

OperatorMatrix quantize(const Symbol& a, double sigma, int J) {
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw RangeError("quantize: sigma outside [0, 1]");
    OperatorMatrix T(J);
    const int Jc = a.coeff_J();
    for (int k = -J; k <= J; ++k)
        for (int j = std::max(-J, k - Jc); j <= std::min(J, k + Jc); ++j)
            T(k, j) = a.hat(k - j, (1.0 - sigma) * k + sigma * j) / kSqrt2Pi;
    return T;
}

namespace {

Symbol shift_all(const Symbol& a, double d) {
    Symbol r = a;
    for (auto& t : r.terms) {
        t.shift += d;
        for (auto& c : t.cutoffs) c.shift += d;
    }
    return r;
}

}  // namespace

Symbol std_to_weyl(const Symbol& a) { return shift_all(a, -0.5); }
Symbol weyl_to_std(const Symbol& a) { return shift_all(a, 0.5); }

OperatorMatrix bony_weyl(const Symbol& a, const CutoffConfig& cfg, int J) { return quantize(regularize(a, cfg), 0.5, J); }
OperatorMatrix bony_standard(const Symbol& a, const CutoffConfig& cfg, int J) {
    return quantize(regularize(a, cfg), 1.0, J);
}

double hermitian_defect(const Symbol& a, const CutoffConfig& cfg, int J) {
    OperatorMatrix T = bony_weyl(a, cfg, J);
    return (T.M.adjoint() - T.M).cwiseAbs().maxCoeff();
}

double adjoint_defect(const Symbol& a, const CutoffConfig& cfg, int J) {
    OperatorMatrix T = bony_weyl(a, cfg, J);
    OperatorMatrix Tc = bony_weyl(conj(a), cfg, J);
    return (T.M.adjoint() - Tc.M).cwiseAbs().maxCoeff();
}

double conjugation_defect(const Symbol& a, const CutoffConfig& cfg, int J, uint64_t seed, int trials) {
    OperatorMatrix T = bony_weyl(a, cfg, J);
    OperatorMatrix Tb = bony_weyl(conj(reflect_xi(a)), cfg, J);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        FourierField v(J);
        for (auto& z : v.coeffs()) z = cplx(g(rng), g(rng));
        FourierField lhs = T.apply(v).conj();
        FourierField rhs = Tb.apply(v.conj());
        worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
    return worst;
}

double action_norm(const OperatorMatrix& T, double s, double m) {
    const int J = T.J;
    Eigen::MatrixXcd W = T.M;
    for (int k = -J; k <= J; ++k)
        for (int j = -J; j <= J; ++j)
            W(k + J, j + J) *= std::pow(japanese(k), s - m) * std::pow(japanese(j), -s);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(W);
    return svd.singularValues()(0);
}

double action_norm(const Symbol& a, const CutoffConfig& cfg, double s, double m, int J) {
    return action_norm(bony_weyl(a, cfg, J), s, m);
}

void export_matrix(const OperatorMatrix& T, const std::string& path_stem, const nlohmann::json& header) {
    std::ofstream bin(path_stem + ".bin", std::ios::binary);
    if (!bin) throw ConfigError("cannot write " + path_stem + ".bin");
    const int n = 2 * T.J + 1;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const cplx z = T.M(r, c);
            double v[2] = {z.real(), z.imag()};
            bin.write(reinterpret_cast<const char*>(v), sizeof v);
        }
    nlohmann::json h = header;
    h["J"] = T.J;
    h["rows"] = n;
    h["layout"] = "row-major complex float64 little-endian";
    std::ofstream js(path_stem + ".json");
    js << h.dump(2) << "\n";
}

}  // namespace paranls
