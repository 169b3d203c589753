#ifndef FFB_QUADRATIC_HPP
#define FFB_QUADRATIC_HPP

#include <optional>

#include "ffb/char_sum.hpp"
#include "ffb/linalg.hpp"
#include "ffb/poly.hpp"

namespace ffb {

/// Quadratic form Q(v) = sum_{i<=j} a_ij v_i v_j over an odd-characteristic
/// field, stored upper-triangular.  The Gram matrix G has G_ij = a_ij off the
/// diagonal and G_ii = 2 a_ii, so that the polarization identity
/// B(u,v) = Q(u+v) - Q(u) - Q(v) = u^T G v holds.
class QuadraticForm {
  public:
    QuadraticForm() = default;
    QuadraticForm(FieldPtr field, std::uint32_t n);

    /// Requires a homogeneous polynomial of degree 2 (or the zero polynomial).
    static QuadraticForm from_poly(const MultiPoly& P);
    MultiPoly to_poly() const;

    const FieldPtr& field() const noexcept { return field_; }
    std::uint32_t dim() const noexcept { return n_; }

    elem coeff(std::uint32_t i, std::uint32_t j) const;  // i <= j
    void set_coeff(std::uint32_t i, std::uint32_t j, elem c);
    void add_coeff(std::uint32_t i, std::uint32_t j, elem c);

    elem eval(std::span<const elem> v) const;
    elem bilinear(std::span<const elem> u, std::span<const elem> v) const;  // u^T G v
    Mat gram() const;

    bool is_zero() const;
    QuadraticForm scaled(elem c) const;
    QuadraticForm plus_scaled(const QuadraticForm& other, elem c) const;  // this + c*other
    /// Q'(v) = Q(T v); T must have dim() rows.
    QuadraticForm transformed(const Mat& T) const;

    bool operator==(const QuadraticForm& rhs) const {
        return n_ == rhs.n_ && coeffs_ == rhs.coeffs_;
    }

  private:
    FieldPtr field_;
    std::uint32_t n_ = 0;
    std::vector<elem> coeffs_;  // packed upper triangle, row-major
};

/// Radical P-perp = {v : Q(v + v') = Q(v') for all v'}; in odd characteristic
/// this is the null space of the Gram matrix.
struct Radical {
    Mat basis;           // columns span the radical, deterministic order
    std::uint32_t rank;  // N - dim(radical)
};
Radical radical(const QuadraticForm& Q);

/// Canonical shape Q(T v) = sum_{i=1}^t v_i v_{t+i} (+ alpha v_{2t+1}^2)
/// (+ beta v_{2t+2}^2).  An odd-rank form leaves one diagonal term; an
/// even-rank form leaves either none (split) or two (anisotropic plane, which
/// no change of basis can turn into a hyperbolic pair).  alpha is normalized
/// to 1 or the field's non-square witness nu; the anisotropic pair is
/// normalized to (1, -nu), the norm form of the quadratic extension.
struct CanonicalQuadratic {
    std::uint32_t t = 0;
    std::optional<elem> alpha, beta;
    Mat T;  // invertible; columns are the new basis
    std::uint32_t rank = 0;

    /// The canonical expression evaluated directly at a point.
    elem eval_canonical(const Field& F, std::span<const elem> v) const;
};
CanonicalQuadratic canonicalize(const QuadraticForm& Q);

/// Exact closed form of sum_v psi(Q(v) + l(v)).  When l does not vanish on the
/// radical the sum is exactly zero; otherwise its magnitude is exactly
/// q^{twice_exponent / 2} with twice_exponent = 2N - rank.  The full value in
/// Z[zeta_p] is assembled on request from the canonical pieces: q per
/// hyperbolic pair, a Gauss sum per diagonal term, q per radical dimension,
/// and a root of unity from completing the square in l.
struct ClosedFormSum {
    bool zero = false;
    int twice_exponent = 0;
    std::optional<CycInt> value;

    long double magnitude(const Field& F) const;
};
ClosedFormSum closed_form_sum(const QuadraticForm& Q, std::span<const elem> l,
                              bool with_value = false);

/// b_n(Q) = rank(Q) for every level, with |a_n| = q^{n (N - rank/2)} exactly;
/// no enumeration involved.
struct QuadraticBias {
    std::uint32_t rank = 0;  // = b_n exactly, at every level
    BiasTriple triple;
};
QuadraticBias quadratic_bias(const QuadraticForm& Q, std::uint32_t level);

}  // namespace ffb

#endif
