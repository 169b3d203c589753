#ifndef FFB_RANK_SEARCH_HPP
#define FFB_RANK_SEARCH_HPP

#include <functional>
#include <optional>

#include "ffb/poly.hpp"

namespace ffb {

using LinearForm = std::vector<elem>;

/// Scans all (q^N - 1)/(q - 1) projective linear forms in deterministic order
/// (leading coefficient 1, earlier pivots first) and returns the first l with
/// P = l * R, found by checking that P vanishes formally on {l = 0} and
/// extracting the quotient in coordinates where l is the first variable.
std::optional<std::pair<LinearForm, MultiPoly>> linear_divisor(const MultiPoly& P);

/// Witness for a decomposition P = sum l_i R_i found over an extension field:
/// a codimension-r subspace with P identically zero on it, and the extracted
/// formal decomposition.  The doubled value is the algebraic rank convention.
struct RankCertificate {
    std::uint32_t r = 0;
    std::uint32_t algebraic_rank = 0;  // 2r
    std::uint32_t ext_level = 1;
    FieldPtr cert_field;               // k_{ext_level}
    Mat forms;                         // r x N; rows are the l_i (echelon)
    Mat subspace;                      // N x (N - r); columns span the vanishing set
    std::vector<std::pair<LinearForm, MultiPoly>> decomposition;  // over cert_field
};

/// Searches r = 1, 2, ..., max_r over k_{ext_level}; subspaces of linear
/// forms are enumerated as reduced-echelon row spaces (pivot sets in
/// lexicographic order, free entries in odometer order), and the first
/// success wins.  The result is an upper bound for the rank over the
/// algebraic closure.
///
/// Membership in the ideal (l_1, ..., l_r) is equivalent to formal vanishing
/// on the common kernel: in coordinates where the l_i are the first r
/// variables, restricting to the kernel deletes exactly the monomials that
/// contain one of them, so the restriction is the zero polynomial iff every
/// monomial does, iff P = sum l_i R_i.
std::optional<RankCertificate> min_vanishing_codim(const MultiPoly& P, std::uint32_t max_r,
                                                   std::uint32_t ext_level = 1,
                                                   std::uint64_t budget = 10'000'000);

/// Given independent forms with P formally zero on their common kernel,
/// change coordinates so l_i = x_i, assign each monomial to its lowest
/// dividing index, and transform back.  Reconstruction is exact.
std::vector<std::pair<LinearForm, MultiPoly>> decompose_on_certificate(const MultiPoly& P,
                                                                       const Mat& forms);

/// Walks every reduced-echelon r x N matrix over the field, in the order used
/// by min_vanishing_codim.  fn may return false to stop early.
void for_each_echelon_matrix(const FieldPtr& field, std::uint32_t r, std::uint32_t n,
                             const std::function<bool(const Mat&)>& fn);

}  // namespace ffb

#endif
