#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <json.hpp>

namespace paranls {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;

// <j> = sqrt(1 + j^2)
inline double japanese(double j) { return std::sqrt(1.0 + j * j); }

// Truncated Fourier coefficients u^(j), j = -J..J, with
//   u(x) = sum_j u^(j) e^{ijx} / sqrt(2 pi).
class FourierField {
public:
    FourierField() = default;
    explicit FourierField(int J);
    FourierField(int J, std::vector<cplx> coeffs);

    static FourierField constant(int J, cplx value);  // the function u(x) = value
    static FourierField mode(int J, int j, cplx amplitude = 1.0);

    int J() const { return J_; }
    int size() const { return 2 * J_ + 1; }

    cplx& operator[](int j) { return c_[j + J_]; }
    const cplx& operator[](int j) const { return c_[j + J_]; }
    // Coefficient of mode j, zero outside the stored range.
    cplx at(int j) const { return (j < -J_ || j > J_) ? cplx(0.0) : c_[j + J_]; }

    const std::vector<cplx>& coeffs() const { return c_; }
    std::vector<cplx>& coeffs() { return c_; }

    FourierField resized(int J) const;  // zero pad or truncate
    FourierField conj() const;          // coefficients of the conjugate function
    FourierField reflect() const;       // u(-x)
    FourierField derivative(int k = 1) const;
    cplx mean() const { return c_[J_] / kSqrt2Pi; }
    cplx eval(double x) const;
    double max_abs() const;
    bool is_finite() const;

    FourierField& operator+=(const FourierField& o);
    FourierField& operator-=(const FourierField& o);
    FourierField& operator*=(cplx s);

private:
    int J_ = 0;
    std::vector<cplx> c_;
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator-(FourierField a, const FourierField& b);
FourierField operator*(cplx s, FourierField a);
double max_abs_diff(const FourierField& a, const FourierField& b);

struct PairField {
    FourierField plus;
    FourierField minus;

    static PairField realified(const FourierField& u) { return {u, u.conj()}; }
    int J() const { return plus.J(); }
    double realification_defect() const;
};

PairField operator+(const PairField& a, const PairField& b);
PairField operator-(const PairField& a, const PairField& b);
PairField operator*(cplx s, const PairField& a);

// Grid transforms on x_m = 2 pi m / n.
FourierField forward_transform(const std::vector<cplx>& samples, int J);
std::vector<cplx> inverse_transform(const FourierField& u, int n);
std::vector<double> grid_points(int n);

double sobolev_norm(const FourierField& u, double s);
double sobolev_norm(const PairField& U, double s);

FourierField project(const FourierField& u, int n);
enum class Sign { plus, minus };
PairField project_signed(const PairField& U, int n, Sign sign, double tol = 1e-10);

PairField apply_involution(const PairField& U);
double parity_defect(const FourierField& u);
double parity_defect(const PairField& U);
FourierField even_projection(const FourierField& u);

// Fourier multiplier 1/(ij) on nonzero modes, zero on the mean.
FourierField inverse_derivative(const FourierField& u);

// Exact product of two truncated fields (discrete convolution, no truncation).
FourierField exact_product(const FourierField& a, const FourierField& b);

// Grid size used for de-aliased products of degree q: ceil((q+1)/2) copies of
// the 2J+1 base grid, rounded up to a size with small prime factors.
int dealiased_grid(int J, int degree);
int smooth_size(int n);

void to_json(nlohmann::json& j, const FourierField& u);
void from_json(const nlohmann::json& j, FourierField& u);
void write_binary(std::ostream& os, const FourierField& u);

}  // namespace paranls
