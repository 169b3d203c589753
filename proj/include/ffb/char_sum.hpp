#ifndef FFB_CHAR_SUM_HPP
#define FFB_CHAR_SUM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ffb/cyc.hpp"
#include "ffb/poly.hpp"

namespace ffb {

/// The character sum a_n(P) as an exact object: counts[j] is the number of
/// points v with char_class(P(v)) = j, so a_n(P) = sum_j counts[j] zeta_p^j.
/// Floating point enters only through magnitude().
struct CharacterSum {
    std::uint32_t p = 0;
    std::uint64_t base_q = 0;   // |k|, the base field of the tower
    std::uint32_t level = 1;    // n
    std::uint32_t nvars = 0;    // arity of P
    std::uint32_t dim = 0;      // dimension of the enumerated domain (nvars, or fewer when restricted)
    std::vector<std::uint64_t> counts;  // length p; sums to q^{level*dim}

    std::uint64_t domain_size() const;
    CycInt as_cyc() const;
    bool exact_zero() const;  // a_n = 0 exactly, i.e. all counts equal
    long double magnitude() const { return as_cyc().magnitude(); }
    long double magnitude_squared() const { return as_cyc().magnitude_squared(); }
    /// Reported bound on |magnitude error|; the cosine dot product is the only
    /// inexact step and is carried in extended precision.
    long double magnitude_error_bound() const;
};

struct BiasTriple {
    double magnitude = 0;
    double btilde = 0;       // |a_n| / q^{n dim}
    double b = 0;            // -2 log_{q^n} btilde
    bool b_infinite = false;
};

/// Execution knobs shared by the enumeration entry points.  The kernel is a
/// pure map over first-coordinate blocks followed by integer vector addition,
/// so the result is identical for every jobs setting.
struct EnumOptions {
    std::uint64_t budget = 1'000'000'000;  // maximum number of points
    std::uint32_t jobs = 1;
    bool collapse_constants = true;  // tally constant subtrees in one step
};

/// Exact count vector of P over k_n; q^{n nvars} points.
CharacterSum count_vector(const MultiPoly& P, std::uint32_t level, const EnumOptions& opt = {});

BiasTriple bias(const CharacterSum& cs);

struct ProfileEntry {
    std::uint32_t level;
    CharacterSum sum;
    BiasTriple triple;
};
struct BiasProfile {
    std::vector<ProfileEntry> entries;
    double min_b = 0;        // running minimum over the computed levels
    bool min_b_infinite = true;
    std::optional<std::uint32_t> truncated_at;  // first level over budget, if any
};
/// Levels 1..n_max; on budget exhaustion the profile is truncated, not an error.
BiasProfile bias_profile(const MultiPoly& P, std::uint32_t n_max, const EnumOptions& opt = {});

/// One linear constraint l(v) = c.  The form has base-field coefficients
/// (embedded into the tower); the value is an element of the top field k_n,
/// so that the fibers over all q^n values partition the level-n domain.
/// At level 1 the two fields coincide.
struct LinearConstraint {
    std::vector<elem> form;
    elem value;
};

/// Count vector of P over the affine subspace cut by the constraints inside
/// k_n^{nvars}; the subspace is parameterized by a deterministic kernel basis
/// plus a particular solution, giving q^{n (nvars - #constraints)} points.
CharacterSum restricted_count(const MultiPoly& P, const std::vector<LinearConstraint>& constraints,
                              std::uint32_t level, const EnumOptions& opt = {});

/// Histogram of the values of P over its owner field (level 1): out[v] is the
/// number of points where P equals the field element v.
std::vector<std::uint64_t> value_histogram(const MultiPoly& P, const EnumOptions& opt = {});

/// Joint histogram of (P1(v), P2(v)) over the owner field, flattened row-major
/// as out[v1 * q + v2].
std::vector<std::uint64_t> joint_value_histogram(const MultiPoly& P1, const MultiPoly& P2,
                                                 const EnumOptions& opt = {});

}  // namespace ffb

#endif
