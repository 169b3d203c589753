#ifndef FFB_CUBIC_SLICE_HPP
#define FFB_CUBIC_SLICE_HPP

#include <optional>

#include "ffb/quadratic.hpp"

namespace ffb {

/// Slice presentation of a cubic: P(x, y) = sum_{i<r} x_i R^i(x, y) with
/// R^i = c^i(x) + x^T M^i y + Q^i(y), where x runs over the first r
/// coordinates and y over the remaining W = k^{N-r}.  Monomials divisible by
/// several slicing variables belong to the lowest eligible index, which fixes
/// a canonical decomposition.
struct SliceForm {
    FieldPtr field;
    std::uint32_t r = 0;
    std::uint32_t total = 0;            // N
    std::vector<QuadraticForm> c;       // r quadratic forms on k^r
    std::vector<Mat> M;                 // r matrices of shape r x (N - r)
    std::vector<QuadraticForm> Q;       // r quadratic forms on W

    std::uint32_t w_dim() const noexcept { return total - r; }

    MultiPoly to_poly() const;

    /// Pencil member Q^x = sum_i x_i Q^i; direction must be nonzero.
    QuadraticForm pencil(std::span<const elem> dir) const;
    /// Covector L_x on W with P(x, y) = C(x) + L_x(y) + Q^x(y).
    std::vector<elem> linear_part(std::span<const elem> dir) const;
    /// Constant C(x) = sum_i x_i c^i(x).
    elem constant_part(std::span<const elem> dir) const;
};

/// Requires homogeneous degree 3, every term divisible by one of the first r
/// variables, and p > 3.
SliceForm slice_decompose(const MultiPoly& P, std::uint32_t r);

struct DirectionRank {
    std::vector<elem> dir;  // projective representative, first nonzero = 1
    std::uint32_t rank;
};
struct ThresholdSet {
    std::uint32_t theta;
    std::vector<std::vector<elem>> members;  // directions with rank <= theta
    std::uint32_t span_dim;
};
struct PencilReport {
    std::vector<DirectionRank> ranks;
    std::vector<ThresholdSet> thresholds;
};
/// Ranks over all (q^r - 1)/(q - 1) projective directions; rank is constant
/// on scalar classes, so representatives are lossless.
PencilReport pencil_scan(const SliceForm& S, std::span<const std::uint32_t> thetas,
                         std::uint64_t budget = 1'000'000);

enum class CaseLabel { Case0, Case1, Case2, SpanOnly };

struct CaseReport {
    CaseLabel label = CaseLabel::SpanOnly;
    std::uint32_t theta = 0;
    std::uint32_t span_dim = 0;
    std::vector<std::vector<elem>> threshold_set;

    // Case0: every direction has rank > theta, so each slice obeys
    // |r_x| <= q^{bound_twice_exponent / 2} exactly.
    std::optional<int> bound_twice_exponent;

    // Case2: shift-invariance subspaces and the reduced polynomial.
    std::optional<std::vector<elem>> u, u2;  // the chosen independent directions
    Mat w_prime;                             // columns: basis of W' inside W
    Mat w_dprime;                            // columns: basis of W''
    Mat projection;                          // coordinates of W/W'' (rows act on W)
    std::optional<MultiPoly> reduced;        // on k^r x (W/W'')
    std::uint32_t reduced_dim = 0;

    // Case1: rotation moving the line to the second axis, the restriction to
    // {x_1 = 0}, and its reduction.
    Mat rotation;                        // r x r
    std::optional<MultiPoly> restricted; // N-1 variables
    std::optional<MultiPoly> reduced1;   // 1 + dim(W) - dim(W'') variables

    // optional single refinement round for Case1
    std::optional<std::uint32_t> refine_u, theta1, span1_dim;
    std::optional<double> a1_difference;       // |a_1(P) - a_1(P')|
    std::optional<double> a1_reference_scale;  // q^{N - u - 1}
};

/// Span of the threshold set selects the case.  The full Case1/Case2 payloads
/// are produced for r = 2 (Case0 for any r); other r report the span only,
/// unless require_full is set, which then raises UnsupportedR.
CaseReport classify_case(const SliceForm& S, std::uint32_t theta,
                         std::optional<std::uint32_t> refine_u = std::nullopt,
                         bool require_full = false, std::uint64_t budget = 1'000'000);

enum class DichotomyKind { RankBound, ZeroSlices, ThreeVarReduction };

/// Outcome of the r = 1 analysis of P = x_1 R.  Exactly one branch applies:
/// either every slice sum is bounded (rank of the y-part >= 3), or every slice
/// sum vanishes (low rank, linear part alive on the radical), or P factors
/// through three linear forms.
struct SliceDichotomy {
    DichotomyKind kind = DichotomyKind::RankBound;
    std::uint32_t y_rank = 0;

    struct SliceValue {
        elem x;               // nonzero slice coordinate
        bool zero;            // exact-zero slice sum
        int twice_exponent;   // |r_x| = q^{twice_exponent/2} when nonzero
        CycInt value;         // exact slice sum in Z[zeta_p]
    };
    std::vector<SliceValue> slice_values;  // empty for ThreeVarReduction
    int bound_twice_exponent = 0;          // 2(N-1) - 3
    bool bound_holds = false;

    Mat t_forms;                     // 3 x N; rows are t_1, t_2, t_3
    std::optional<MultiPoly> qhat;   // cubic on k^3 with P = qhat(t_1, t_2, t_3)
};
SliceDichotomy slice_rank_one_dichotomy(const MultiPoly& P);

struct DirectionCheck {
    std::vector<elem> dir;
    bool law_exact;       // restricted sum equals the closed-form value in Z[zeta_p]
    bool zero;
    int twice_exponent;   // of |r_x| when nonzero
    std::uint32_t pencil_rank;
};
struct SliceIdentityReport {
    bool identity_exact = false;       // full counts = componentwise sum over slices
    bool per_direction_law = false;    // every direction passed
    std::vector<DirectionCheck> directions;
    CharacterSum full;
};
/// Verifies a_1(P) = q^{N-r} + sum_{x != 0} r_x as an exact count-vector
/// identity, and the per-direction magnitude law from the closed form.
SliceIdentityReport slice_identity_check(const SliceForm& S, const EnumOptions& opt = {});

}  // namespace ffb

#endif
