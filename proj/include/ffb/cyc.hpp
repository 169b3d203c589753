#ifndef FFB_CYC_HPP
#define FFB_CYC_HPP

#include <cstdint>
#include <vector>

#include "ffb/field.hpp"

namespace ffb {

/// Element of Z[zeta_p] stored as an integer vector (c_0,...,c_{p-1}) meaning
/// sum c_j zeta^j.  The representation is unique up to adding a multiple of
/// (1,...,1), since sum_j zeta^j = 0 is the only relation; equality tests use
/// that quotient.  All arithmetic is exact.
class CycInt {
  public:
    CycInt() = default;
    explicit CycInt(std::uint32_t p) : coeffs_(p, 0) {}
    static CycInt integer(std::uint32_t p, std::int64_t n);
    static CycInt root_power(std::uint32_t p, std::uint32_t j);  // zeta^j

    std::uint32_t p() const noexcept { return std::uint32_t(coeffs_.size()); }
    std::int64_t& operator[](std::size_t j) { return coeffs_[j]; }
    std::int64_t operator[](std::size_t j) const { return coeffs_[j]; }
    const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }

    CycInt operator+(const CycInt& rhs) const;
    CycInt operator-(const CycInt& rhs) const;
    CycInt operator*(const CycInt& rhs) const;  // cyclic convolution
    CycInt scaled(std::int64_t n) const;
    CycInt shifted(std::uint32_t j) const;  // multiply by zeta^j

    /// Equal as algebraic numbers (difference is a constant vector).
    bool equals(const CycInt& rhs) const;
    bool is_zero() const;

    /// |value| computed through the exact integer autocorrelation
    /// A(d) = sum_j c_j c_{j+d}:  |value|^2 = sum_d A(d) cos(2 pi d / p).
    long double magnitude() const;
    long double magnitude_squared() const;

  private:
    std::vector<std::int64_t> coeffs_;
};

/// Quadratic Gauss sum over a field: sum over x in F of zeta^{class(a x^2)}.
CycInt gauss_sum(const Field& field, elem a);

}  // namespace ffb

#endif
