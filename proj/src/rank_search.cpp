#include "ffb/rank_search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ffb {

namespace {

void require_cubic(const MultiPoly& P) {
    auto info = degree_check(P);
    if (!info.degree || *info.degree != 3 || !info.homogeneous)
        throw Error(ErrorCode::NotCubic, "rank search is specified for homogeneous cubics");
}

/// Invertible matrix whose first rows are the given echelon forms, completed
/// by standard basis vectors at the non-pivot columns.
Mat completion(const Mat& forms) {
    const FieldPtr& f = forms.field();
    Mat red = forms;
    auto pivots = red.rref();
    if (pivots.size() != forms.rows())
        throw Error(ErrorCode::InvalidArgument, "forms are not linearly independent");
    std::vector<bool> is_pivot(forms.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<elem>> rows;
    for (std::size_t i = 0; i < forms.rows(); ++i) rows.push_back(forms.row(i));
    for (std::size_t j = 0; j < forms.cols(); ++j) {
        if (is_pivot[j]) continue;
        std::vector<elem> e(forms.cols(), 0);
        e[j] = 1;
        rows.push_back(std::move(e));
    }
    Mat B = Mat::from_rows(f, rows);
    if (B.rank() != B.rows()) throw Error(ErrorCode::InvalidArgument, "completion failed");
    return B;
}

}  // namespace

void for_each_echelon_matrix(const FieldPtr& field, std::uint32_t r, std::uint32_t n,
                             const std::function<bool(const Mat&)>& fn) {
    const Field& F = *field;
    std::vector<std::uint32_t> pivots(r);
    for (std::uint32_t i = 0; i < r; ++i) pivots[i] = i;

    auto next_combination = [&]() {
        // lexicographically next r-subset of {0..n-1}
        int i = int(r) - 1;
        while (i >= 0 && pivots[i] == n - r + i) --i;
        if (i < 0) return false;
        ++pivots[i];
        for (std::uint32_t j = i + 1; j < r; ++j) pivots[j] = pivots[j - 1] + 1;
        return true;
    };

    do {
        // free positions: (row i, col j) with j > pivots[i] and j not a pivot
        std::vector<std::pair<std::uint32_t, std::uint32_t>> free_pos;
        std::vector<bool> is_pivot(n, false);
        for (auto p : pivots) is_pivot[p] = true;
        for (std::uint32_t i = 0; i < r; ++i)
            for (std::uint32_t j = pivots[i] + 1; j < n; ++j)
                if (!is_pivot[j]) free_pos.emplace_back(i, j);

        std::vector<elem> vals(free_pos.size(), 0);
        while (true) {
            Mat m(field, r, n);
            for (std::uint32_t i = 0; i < r; ++i) m.at(i, pivots[i]) = 1;
            for (std::size_t k = 0; k < free_pos.size(); ++k)
                m.at(free_pos[k].first, free_pos[k].second) = vals[k];
            if (!fn(m)) return;
            // odometer, last free position fastest
            std::size_t k = free_pos.size();
            while (k > 0 && ++vals[k - 1] == F.q()) vals[--k] = 0;
            if (k == 0) break;
        }
    } while (next_combination());
}

std::vector<std::pair<LinearForm, MultiPoly>> decompose_on_certificate(const MultiPoly& P,
                                                                       const Mat& forms) {
    const FieldPtr& f = P.field();
    if (!forms.field()->same_spec(*f))
        throw Error(ErrorCode::FieldMismatch, "forms over a different field");
    if (forms.cols() != P.nvars())
        throw Error(ErrorCode::ShapeMismatch, "form length must match the variable count");
    const std::uint32_t r = std::uint32_t(forms.rows());

    // verify vanishing on the common kernel, formally
    Mat kernel = forms.nullspace();
    if (!P.linear_substitute(kernel).is_zero())
        throw Error(ErrorCode::DoesNotVanish, "P does not vanish on the certificate subspace");

    Mat B = completion(forms);
    Mat Binv = B.inverse();
    MultiPoly in_new_coords = P.linear_substitute(Binv);  // P(B^{-1} w)

    // greedy split: each term goes to its lowest dividing index
    std::vector<std::vector<Term>> buckets(r);
    for (const auto& t : in_new_coords.terms()) {
        std::uint32_t lead = r;
        for (std::uint32_t i = 0; i < r; ++i)
            if (t.exps[i]) {
                lead = i;
                break;
            }
        if (lead == r) throw Error(ErrorCode::DoesNotVanish, "residual term misses all forms");
        Term nt = t;
        nt.exps[lead] -= 1;
        buckets[lead].push_back(std::move(nt));
    }

    std::vector<std::pair<LinearForm, MultiPoly>> out;
    for (std::uint32_t i = 0; i < r; ++i) {
        MultiPoly Ri_new = MultiPoly::from_terms(f, P.nvars(), std::move(buckets[i]));
        MultiPoly Ri = Ri_new.linear_substitute(B);  // back to the original coordinates
        out.emplace_back(forms.row(i), std::move(Ri));
    }

    // exact reconstruction check
    MultiPoly rebuilt = MultiPoly::zero(f, P.nvars());
    for (const auto& [l, R] : out) {
        std::vector<Term> lterms;
        for (std::uint32_t v = 0; v < P.nvars(); ++v)
            if (l[v]) {
                Term t;
                t.exps.assign(P.nvars(), 0);
                t.exps[v] = 1;
                t.coeff = l[v];
                lterms.push_back(std::move(t));
            }
        rebuilt = rebuilt + MultiPoly::from_terms(f, P.nvars(), std::move(lterms)) * R;
    }
    if (rebuilt != P) throw Error(ErrorCode::DoesNotVanish, "decomposition failed to reconstruct P");
    return out;
}

std::optional<std::pair<LinearForm, MultiPoly>> linear_divisor(const MultiPoly& P) {
    require_cubic(P);
    const FieldPtr& f = P.field();
    std::optional<std::pair<LinearForm, MultiPoly>> result;
    for_each_echelon_matrix(f, 1, P.nvars(), [&](const Mat& m) {
        Mat kernel = m.nullspace();
        if (!P.linear_substitute(kernel).is_zero()) return true;
        auto dec = decompose_on_certificate(P, m);
        result = {dec.front().first, dec.front().second};
        return false;
    });
    return result;
}

std::optional<RankCertificate> min_vanishing_codim(const MultiPoly& P, std::uint32_t max_r,
                                                   std::uint32_t ext_level, std::uint64_t budget) {
    require_cubic(P);
    if (max_r > P.nvars()) max_r = P.nvars();

    auto tower = build_tower(P.field(), ext_level);
    MultiPoly Pext = P.base_change(tower);
    const FieldPtr& fe = tower.top();
    const std::uint32_t N = P.nvars();

    for (std::uint32_t r = 1; r <= max_r; ++r) {
        // Gaussian binomial count of echelon row spaces
        long double count = 1;
        for (std::uint32_t i = 0; i < r; ++i)
            count *= (std::pow((long double)fe->q(), (long double)(N - i)) - 1) /
                     (std::pow((long double)fe->q(), (long double)(i + 1)) - 1);
        if (count > (long double)budget)
            throw Error(ErrorCode::BudgetExceeded, "too many subspaces at codimension " +
                                                       std::to_string(r));

        std::optional<RankCertificate> found;
        for_each_echelon_matrix(fe, r, N, [&](const Mat& m) {
            Mat kernel = m.nullspace();
            if (!Pext.linear_substitute(kernel).is_zero()) return true;
            RankCertificate cert;
            cert.r = r;
            cert.algebraic_rank = 2 * r;
            cert.ext_level = ext_level;
            cert.cert_field = fe;
            cert.forms = m;
            cert.subspace = kernel;
            cert.decomposition = decompose_on_certificate(Pext, m);
            found = std::move(cert);
            return false;
        });
        if (found) return found;
    }
    return std::nullopt;
}

}  // namespace ffb
