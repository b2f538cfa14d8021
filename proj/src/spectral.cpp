#include "paranls/spectral.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>

#include <fftw3.h>

#include "paranls/errors.hpp"

namespace paranls {

namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
class Plan {
public:
    Plan(int n, int dir) {
        std::vector<cplx> tmp(n);
        auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
        plan_ = fftw_plan_dft_1d(n, p, p, dir, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~Plan() { fftw_destroy_plan(plan_); }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void run(std::vector<cplx>& data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(plan_, p, p);
    }

private:
    fftw_plan plan_;
};

const Plan& plan_for(int n, int dir) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Plan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, dir}];
    if (!slot) slot = std::make_unique<Plan>(n, dir);
    return *slot;
}

int wrap(int j, int n) {
    int r = j % n;
    return r < 0 ? r + n : r;
}

}  // namespace

FourierField::FourierField(int J) : J_(J), c_(2 * J + 1, 0.0) {
    if (J < 0) throw DimensionError("FourierField: negative truncation");
}

FourierField::FourierField(int J, std::vector<cplx> coeffs) : J_(J), c_(std::move(coeffs)) {
    if (J < 0 || static_cast<int>(c_.size()) != 2 * J + 1)
        throw DimensionError("FourierField: coefficient count must be 2J+1");
}

FourierField FourierField::constant(int J, cplx value) {
    FourierField u(J);
    u[0] = value * kSqrt2Pi;
    return u;
}

FourierField FourierField::mode(int J, int j, cplx amplitude) {
    if (std::abs(j) > J) throw RangeError("FourierField::mode: |j| > J");
    FourierField u(J);
    u[j] = amplitude;
    return u;
}

FourierField FourierField::resized(int J) const {
    FourierField out(J);
    int m = std::min(J, J_);
    for (int j = -m; j <= m; ++j) out[j] = (*this)[j];
    return out;
}

FourierField FourierField::conj() const {
    FourierField out(J_);
    for (int j = -J_; j <= J_; ++j) out[j] = std::conj((*this)[-j]);
    return out;
}

FourierField FourierField::reflect() const {
    FourierField out(J_);
    for (int j = -J_; j <= J_; ++j) out[j] = (*this)[-j];
    return out;
}

FourierField FourierField::derivative(int k) const {
    FourierField out(J_);
    for (int j = -J_; j <= J_; ++j) {
        cplx f = 1.0;
        for (int r = 0; r < k; ++r) f *= cplx(0.0, j);
        out[j] = f * (*this)[j];
    }
    return out;
}

cplx FourierField::eval(double x) const {
    cplx s = 0.0;
    for (int j = -J_; j <= J_; ++j) s += (*this)[j] * std::polar(1.0, j * x);
    return s / kSqrt2Pi;
}

double FourierField::max_abs() const {
    double m = 0.0;
    for (const auto& z : c_) m = std::max(m, std::abs(z));
    return m;
}

bool FourierField::is_finite() const {
    for (const auto& z : c_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

FourierField& FourierField::operator+=(const FourierField& o) {
    if (o.J_ > J_) *this = resized(o.J_);
    for (int j = -o.J_; j <= o.J_; ++j) (*this)[j] += o[j];
    return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
    if (o.J_ > J_) *this = resized(o.J_);
    for (int j = -o.J_; j <= o.J_; ++j) (*this)[j] -= o[j];
    return *this;
}

FourierField& FourierField::operator*=(cplx s) {
    for (auto& z : c_) z *= s;
    return *this;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
FourierField operator*(cplx s, FourierField a) { return a *= s; }

double max_abs_diff(const FourierField& a, const FourierField& b) {
    int J = std::max(a.J(), b.J());
    double m = 0.0;
    for (int j = -J; j <= J; ++j) m = std::max(m, std::abs(a.at(j) - b.at(j)));
    return m;
}

double PairField::realification_defect() const { return max_abs_diff(minus, plus.conj()); }

PairField operator+(const PairField& a, const PairField& b) { return {a.plus + b.plus, a.minus + b.minus}; }
PairField operator-(const PairField& a, const PairField& b) { return {a.plus - b.plus, a.minus - b.minus}; }
PairField operator*(cplx s, const PairField& a) { return {s * a.plus, s * a.minus}; }

FourierField forward_transform(const std::vector<cplx>& samples, int J) {
    int n = static_cast<int>(samples.size());
    if (n < 2 * J + 1) throw DimensionError("forward_transform: grid smaller than 2J+1");
    std::vector<cplx> buf(samples);
    plan_for(n, FFTW_FORWARD).run(buf);
    FourierField u(J);
    const double scale = kSqrt2Pi / n;
    for (int j = -J; j <= J; ++j) u[j] = scale * buf[wrap(j, n)];
    return u;
}

std::vector<cplx> inverse_transform(const FourierField& u, int n) {
    const int J = u.J();
    if (n < 2 * J + 1) throw DimensionError("inverse_transform: grid smaller than 2J+1");
    std::vector<cplx> buf(n, 0.0);
    for (int j = -J; j <= J; ++j) buf[wrap(j, n)] = u[j] / kSqrt2Pi;
    plan_for(n, FFTW_BACKWARD).run(buf);
    return buf;
}

std::vector<double> grid_points(int n) {
    std::vector<double> x(n);
    for (int m = 0; m < n; ++m) x[m] = 2.0 * kPi * m / n;
    return x;
}

double sobolev_norm(const FourierField& u, double s) {
    if (s < 0) throw RangeError("sobolev_norm: s must be nonnegative");
    double sum = 0.0;
    for (int j = -u.J(); j <= u.J(); ++j) sum += std::norm(u[j]) * std::pow(1.0 + double(j) * j, s);
    return std::sqrt(sum);
}

double sobolev_norm(const PairField& U, double s) {
    double a = sobolev_norm(U.plus, s), b = sobolev_norm(U.minus, s);
    return std::sqrt(a * a + b * b);
}

FourierField project(const FourierField& u, int n) {
    if (n < 0 || n > u.J()) throw RangeError("project: n outside [0, J]");
    FourierField out(u.J());
    out[n] = u[n];
    out[-n] = u[-n];
    return out;
}

PairField project_signed(const PairField& U, int n, Sign sign, double tol) {
    if (parity_defect(U) > tol) throw StructureError("project_signed: field is not even");
    if (sign == Sign::plus) return {project(U.plus, n), FourierField(U.J())};
    return {FourierField(U.J()), project(U.minus, n)};
}

PairField apply_involution(const PairField& U) { return {U.minus, U.plus}; }

double parity_defect(const FourierField& u) {
    double m = 0.0;
    for (int j = 1; j <= u.J(); ++j) m = std::max(m, std::abs(u[j] - u[-j]));
    return m;
}

double parity_defect(const PairField& U) { return std::max(parity_defect(U.plus), parity_defect(U.minus)); }

FourierField even_projection(const FourierField& u) {
    FourierField out(u.J());
    for (int j = -u.J(); j <= u.J(); ++j) out[j] = 0.5 * (u[j] + u[-j]);
    return out;
}

FourierField inverse_derivative(const FourierField& u) {
    FourierField out(u.J());
    for (int j = -u.J(); j <= u.J(); ++j)
        if (j != 0) out[j] = u[j] / cplx(0.0, j);
    return out;
}

FourierField exact_product(const FourierField& a, const FourierField& b) {
    const int Ja = a.J(), Jb = b.J();
    FourierField out(Ja + Jb);
    for (int m = -Ja; m <= Ja; ++m) {
        if (a[m] == 0.0) continue;
        for (int k = -Jb; k <= Jb; ++k) out[m + k] += a[m] * b[k];
    }
    out *= 1.0 / kSqrt2Pi;
    return out;
}

int smooth_size(int n) {
    for (int m = std::max(n, 1);; ++m) {
        int r = m;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

int dealiased_grid(int J, int degree) {
    int factor = (std::max(degree, 1) + 2) / 2;  // ceil((q+1)/2)
    return smooth_size(factor * (2 * J + 1));
}

void to_json(nlohmann::json& j, const FourierField& u) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& z : u.coeffs()) arr.push_back({z.real(), z.imag()});
    j = {{"J", u.J()}, {"coeffs", arr}};
}

void from_json(const nlohmann::json& j, FourierField& u) {
    int J = j.at("J").get<int>();
    const auto& arr = j.at("coeffs");
    if (!arr.is_array() || static_cast<int>(arr.size()) != 2 * J + 1)
        throw DimensionError("FourierField json: coeffs must hold 2J+1 entries");
    std::vector<cplx> c;
    c.reserve(arr.size());
    for (const auto& p : arr) c.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    u = FourierField(J, std::move(c));
}

void write_binary(std::ostream& os, const FourierField& u) {
    // x86 is little endian; complex<double> is stored as interleaved re, im.
    os.write(reinterpret_cast<const char*>(u.coeffs().data()),
             static_cast<std::streamsize>(u.coeffs().size() * sizeof(cplx)));
}

}  // namespace paranls
