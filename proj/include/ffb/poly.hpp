#ifndef FFB_POLY_HPP
#define FFB_POLY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ffb/field.hpp"
#include "ffb/linalg.hpp"

namespace ffb {

/// Total-degree guard for desk-scale cost; nothing in scope needs more than 4.
constexpr std::uint32_t kDegreeCap = 8;

struct Term {
    std::vector<std::uint8_t> exps;  // length nvars
    elem coeff;                      // nonzero
    std::uint32_t degree() const {
        std::uint32_t d = 0;
        for (auto e : exps) d += e;
        return d;
    }
};

/// Sparse multivariate polynomial over a Field.  Formal object: exponents are
/// never reduced via x^q = x, and terms are kept in graded-lexicographic order
/// (highest degree first) with no duplicates and no zero coefficients, so the
/// text form is canonical.
class MultiPoly {
  public:
    MultiPoly() = default;
    static MultiPoly zero(FieldPtr field, std::uint32_t nvars);
    static MultiPoly constant(FieldPtr field, std::uint32_t nvars, elem c);
    static MultiPoly monomial(FieldPtr field, std::uint32_t nvars, std::vector<std::uint8_t> exps, elem c);
    static MultiPoly from_terms(FieldPtr field, std::uint32_t nvars, std::vector<Term> terms);

    const FieldPtr& field() const noexcept { return field_; }
    std::uint32_t nvars() const noexcept { return nvars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Total degree; nullopt for the zero polynomial.
    std::optional<std::uint32_t> total_degree() const;
    /// Zero polynomial counts as homogeneous by convention.
    bool is_homogeneous() const;

    MultiPoly operator+(const MultiPoly& rhs) const;
    MultiPoly operator-(const MultiPoly& rhs) const;
    MultiPoly operator*(const MultiPoly& rhs) const;
    MultiPoly operator-() const;
    MultiPoly scaled(elem c) const;
    bool operator==(const MultiPoly& rhs) const {
        return nvars_ == rhs.nvars_ && terms_equal(rhs);
    }
    bool operator!=(const MultiPoly& rhs) const { return !(*this == rhs); }

    elem evaluate(std::span<const elem> point) const;
    /// Evaluate over the top field of a tower: coefficients are embedded first.
    elem evaluate(std::span<const elem> point, const TowerEmbedding& emb) const;

    /// Substitute variable `var` (0-based) by the constant c; remaining
    /// variables are renumbered to close the gap.
    MultiPoly specialize(std::uint32_t var, elem c) const;
    /// Q(w) = P(A w); A has nvars rows and any number of columns.
    MultiPoly linear_substitute(const Mat& A) const;
    /// Q(w) = P(A w + shift).
    MultiPoly compose_affine(const Mat& A, std::span<const elem> shift) const;
    /// Coefficients mapped through the embedding; exponents unchanged.
    MultiPoly base_change(const TowerEmbedding& emb) const;

    std::string format() const;

  private:
    bool terms_equal(const MultiPoly& rhs) const;
    void normalize();
    FieldPtr field_;
    std::uint32_t nvars_ = 0;
    std::vector<Term> terms_;
};

/// Grammar: terms joined by + or -; term = [coefficient *] factor (* factor)*
/// or a bare coefficient; factor = xK or xK^e (1-based variable index);
/// coefficient = integer, g, g^k (power-basis generator) or [c0,c1,...].
/// Whitespace is insignificant.
MultiPoly parse_poly(const std::string& text, const FieldPtr& field, std::uint32_t nvars);

/// (total degree with sentinel for zero, homogeneity flag)
struct DegreeInfo {
    std::optional<std::uint32_t> degree;
    bool homogeneous;
};
DegreeInfo degree_check(const MultiPoly& p);

}  // namespace ffb

#endif
