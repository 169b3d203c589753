#ifndef FFB_FIELD_HPP
#define FFB_FIELD_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ffb/error.hpp"

namespace ffb {

/// Element of a Field, stored as its rank in the canonical enumeration:
/// the power-basis coefficient vector (c_0,...,c_{m-1}) read as the base-p
/// integer sum c_j * p^j.  Enumeration order is therefore the coefficient
/// odometer with the least-significant coefficient fastest, 0 first, 1 second.
using elem = std::uint32_t;

/// An explicit finite field F_{p^m}, p an odd prime, with a monic irreducible
/// modulus over F_p (coefficients constant-term first).  Immutable after
/// construction; all operations are pure, so instances may be shared freely
/// across threads.
///
/// When no modulus is supplied the lexicographically smallest monic
/// irreducible of degree m is chosen (coefficient lists compared low-degree
/// first), so a field is reproducible from (p, m) alone.
class Field : public std::enable_shared_from_this<Field> {
  public:
    static std::shared_ptr<const Field> make(std::uint32_t p, std::uint32_t m,
                                             std::vector<std::uint32_t> modulus = {});

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t m() const noexcept { return m_; }
    std::uint32_t q() const noexcept { return q_; }
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    bool same_spec(const Field& other) const noexcept {
        return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
    }
    bool is_prime_field() const noexcept { return m_ == 1; }

    /// Text form "p" or "p^m".
    std::string descriptor() const;

    // Arithmetic on element indices.  All inputs must be < q.
    elem add(elem a, elem b) const {
        if (add_table_) return add_table_[std::size_t(a) * q_ + b];
        return add_fallback(a, b);
    }
    elem sub(elem a, elem b) const { return add(a, neg(b)); }
    elem neg(elem a) const { return neg_table_[a]; }
    elem mul(elem a, elem b) const {
        if (mul_table_) return mul_table_[std::size_t(a) * q_ + b];
        if (a == 0 || b == 0) return 0;
        return exp_table_[std::size_t(log_table_[a]) + log_table_[b]];
    }
    elem inv(elem a) const {
        if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
        return inv_table_[a];
    }
    elem div(elem a, elem b) const { return mul(a, inv(b)); }
    elem pow(elem a, std::uint64_t e) const;

    elem from_int(std::int64_t value) const;  // reduce into the prime subfield
    elem from_coeffs(std::span<const std::uint32_t> coeffs) const;
    std::vector<std::uint32_t> coeffs(elem a) const;

    /// x^p, the Frobenius of the prime subfield.
    elem frobenius(elem a) const { return pow(a, p_); }

    /// Trace down to F_p, returned as a residue in [0, p).  The canonical
    /// additive character is psi(x) = zeta_p^{char_class(x)}; every character
    /// sum in this project is tallied by this class.
    std::uint32_t char_class(elem a) const noexcept { return class_table_[a]; }
    const std::vector<std::uint16_t>& char_class_table() const noexcept { return class_table_; }

    bool is_square(elem a) const noexcept { return a == 0 || sqrt_table_[a] != kNoSqrt; }
    /// Smallest square root in enumeration order; error if a is a non-square.
    elem sqrt(elem a) const;
    /// Smallest non-square in enumeration order.
    elem nonsquare_witness() const noexcept { return nonsquare_; }
    /// Smallest multiplicative generator in enumeration order.
    elem generator() const noexcept { return generator_; }

  private:
    Field() = default;
    void build_tables();
    elem add_fallback(elem a, elem b) const;
    elem raw_mul(elem a, elem b) const;  // table-free, used during construction
    elem raw_pow(elem a, std::uint64_t e) const;

    static constexpr elem kNoSqrt = 0xffffffffu;

    std::uint32_t p_ = 0, m_ = 0, q_ = 0;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> reduction_;  // alpha^{m+k} reduced, k = 0..m-2, row-major
    std::vector<elem> neg_table_, inv_table_, sqrt_table_;
    std::vector<elem> exp_table_;  // length 2(q-1), doubled to skip the modular reduction
    std::vector<std::uint32_t> log_table_;
    std::vector<std::uint16_t> class_table_;
    std::unique_ptr<elem[]> add_table_, mul_table_;  // q x q, only for small q
    elem generator_ = 0, nonsquare_ = 0;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Convenience value type with operator overloads; checks spec compatibility.
/// Heavy loops should use Field's index-level operations instead.
class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(FieldPtr field, elem value) : field_(std::move(field)), value_(value) {}

    const FieldPtr& field() const noexcept { return field_; }
    elem value() const noexcept { return value_; }
    std::vector<std::uint32_t> coeffs() const { return field_->coeffs(value_); }
    std::uint32_t char_class() const noexcept { return field_->char_class(value_); }
    bool is_zero() const noexcept { return value_ == 0; }

    FieldElement operator+(const FieldElement& rhs) const { return with(field_->add(value_, check(rhs))); }
    FieldElement operator-(const FieldElement& rhs) const { return with(field_->sub(value_, check(rhs))); }
    FieldElement operator*(const FieldElement& rhs) const { return with(field_->mul(value_, check(rhs))); }
    FieldElement operator/(const FieldElement& rhs) const { return with(field_->div(value_, check(rhs))); }
    FieldElement operator-() const { return with(field_->neg(value_)); }
    FieldElement inv() const { return with(field_->inv(value_)); }
    FieldElement pow(std::uint64_t e) const { return with(field_->pow(value_, e)); }
    bool operator==(const FieldElement& rhs) const { return check(rhs) == value_; }
    bool operator!=(const FieldElement& rhs) const { return !(*this == rhs); }

  private:
    FieldElement with(elem v) const { return FieldElement(field_, v); }
    elem check(const FieldElement& rhs) const {
        if (!field_ || !rhs.field_ || !field_->same_spec(*rhs.field_))
            throw Error(ErrorCode::FieldMismatch, "elements of different fields");
        return rhs.value_;
    }
    FieldPtr field_;
    elem value_ = 0;
};

/// Deterministic embedding of a base field k into the top field k_n of an
/// extension tower, realized as F_{p^{mn}} over the prime field.  The image of
/// the base power-basis generator is the first root (in the top field's
/// enumeration order) of the base modulus.
class TowerEmbedding {
  public:
    const FieldPtr& base() const noexcept { return base_; }
    const FieldPtr& top() const noexcept { return top_; }
    std::uint32_t degree() const noexcept { return n_; }
    elem generator_image() const noexcept { return gen_image_; }

    elem embed(elem base_value) const { return embed_table_[base_value]; }
    /// Inverse of embed on its image; nullopt off the image.
    std::optional<elem> project(elem top_value) const;
    /// tr_{k_n/k}: sum of x^{q^j}, j = 0..n-1, pulled back to the base field.
    elem trace_to_base(elem top_value) const;

    bool is_identity() const noexcept { return n_ == 1; }

  private:
    friend TowerEmbedding build_tower(const FieldPtr& base, std::uint32_t n);
    FieldPtr base_, top_;
    std::uint32_t n_ = 1;
    elem gen_image_ = 0;
    std::vector<elem> embed_table_;
    std::unordered_map<elem, elem> project_table_;
};

/// top = Field::make(p, m*n) with its default modulus; deterministic.
TowerEmbedding build_tower(const FieldPtr& base, std::uint32_t n);

/// Parse "p", "p^m" or "p^m:c0,c1,...,cm" (custom modulus, constant term first).
FieldPtr parse_field_descriptor(const std::string& text);

}  // namespace ffb

#endif
