#include "ffb/cyc.hpp"

#include <cmath>
#include <numbers>

namespace ffb {

CycInt CycInt::integer(std::uint32_t p, std::int64_t n) {
    CycInt c(p);
    c.coeffs_[0] = n;
    return c;
}

CycInt CycInt::root_power(std::uint32_t p, std::uint32_t j) {
    CycInt c(p);
    c.coeffs_[j % p] = 1;
    return c;
}

CycInt CycInt::operator+(const CycInt& rhs) const {
    CycInt out(p());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) out.coeffs_[j] = coeffs_[j] + rhs.coeffs_[j];
    return out;
}

CycInt CycInt::operator-(const CycInt& rhs) const {
    CycInt out(p());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) out.coeffs_[j] = coeffs_[j] - rhs.coeffs_[j];
    return out;
}

CycInt CycInt::operator*(const CycInt& rhs) const {
    const std::uint32_t n = p();
    CycInt out(n);
    std::vector<__int128> acc(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!coeffs_[i]) continue;
        for (std::uint32_t j = 0; j < n; ++j) {
            std::uint32_t k = i + j;
            if (k >= n) k -= n;
            acc[k] += __int128(coeffs_[i]) * rhs.coeffs_[j];
        }
    }
    for (std::uint32_t k = 0; k < n; ++k) {
        if (acc[k] > __int128(INT64_MAX) || acc[k] < __int128(INT64_MIN))
            throw Error(ErrorCode::BudgetExceeded, "cyclotomic product overflow");
        out.coeffs_[k] = std::int64_t(acc[k]);
    }
    return out;
}

CycInt CycInt::scaled(std::int64_t n) const {
    CycInt out(p());
    for (std::size_t j = 0; j < coeffs_.size(); ++j) out.coeffs_[j] = coeffs_[j] * n;
    return out;
}

CycInt CycInt::shifted(std::uint32_t j) const {
    const std::uint32_t n = p();
    CycInt out(n);
    for (std::uint32_t i = 0; i < n; ++i) out.coeffs_[(i + j) % n] = coeffs_[i];
    return out;
}

bool CycInt::equals(const CycInt& rhs) const {
    if (p() != rhs.p()) return false;
    std::int64_t d = coeffs_[0] - rhs.coeffs_[0];
    for (std::size_t j = 1; j < coeffs_.size(); ++j)
        if (coeffs_[j] - rhs.coeffs_[j] != d) return false;
    return true;
}

bool CycInt::is_zero() const { return equals(CycInt(p())); }

long double CycInt::magnitude_squared() const {
    const std::uint32_t n = p();
    // exact integer autocorrelation, then one cosine dot product
    std::vector<__int128> a(n, 0);
    for (std::uint32_t d = 0; d < n; ++d)
        for (std::uint32_t j = 0; j < n; ++j) a[d] += __int128(coeffs_[j]) * coeffs_[(j + d) % n];
    long double s = 0;
    for (std::uint32_t d = 0; d < n; ++d)
        s += static_cast<long double>(a[d]) *
             std::cos(2.0L * std::numbers::pi_v<long double> * d / n);
    return s > 0 ? s : 0;
}

long double CycInt::magnitude() const { return std::sqrt(magnitude_squared()); }

CycInt gauss_sum(const Field& field, elem a) {
    CycInt out(field.p());
    for (elem x = 0; x < field.q(); ++x) ++out[field.char_class(field.mul(a, field.mul(x, x)))];
    return out;
}

}  // namespace ffb
