#include "ffb/cubic_slice.hpp"

#include <algorithm>
#include <cmath>

namespace ffb {

namespace {

SliceForm decompose_impl(const MultiPoly& P, std::uint32_t r, bool check_characteristic) {
    const FieldPtr& f = P.field();
    const std::uint32_t N = P.nvars();
    if (r == 0 || r > N) throw Error(ErrorCode::InvalidArgument, "slice count out of range");
    auto info = degree_check(P);
    if (!info.degree || *info.degree != 3 || !info.homogeneous)
        throw Error(ErrorCode::NotCubic, "slice decomposition needs a homogeneous cubic");
    if (check_characteristic && f->p() <= 3)
        throw Error(ErrorCode::CharacteristicTooSmall, "degree 3 analysis needs p > 3");

    SliceForm S;
    S.field = f;
    S.r = r;
    S.total = N;
    const std::uint32_t w = N - r;
    for (std::uint32_t i = 0; i < r; ++i) {
        S.c.emplace_back(f, r);
        S.M.emplace_back(f, r, w);
        S.Q.emplace_back(f, w);
    }

    for (const auto& t : P.terms()) {
        std::uint32_t lead = r;
        for (std::uint32_t i = 0; i < r; ++i)
            if (t.exps[i]) {
                lead = i;
                break;
            }
        if (lead == r)
            throw Error(ErrorCode::NotInSliceIdeal, "a term avoids all slicing variables");
        // divide by x_lead, then split the degree-2 residual by y-degree
        std::vector<std::uint8_t> rest = t.exps;
        rest[lead] -= 1;
        std::vector<std::uint32_t> xs, ys;
        for (std::uint32_t v = 0; v < N; ++v)
            for (std::uint8_t k = 0; k < rest[v]; ++k) (v < r ? xs : ys).push_back(v);
        if (xs.size() + ys.size() != 2) throw Error(ErrorCode::NotCubic, "term degree mismatch");
        if (ys.empty()) {
            S.c[lead].add_coeff(xs[0], xs[1], t.coeff);
        } else if (ys.size() == 1) {
            S.M[lead].at(xs[0], ys[0] - r) = f->add(S.M[lead].at(xs[0], ys[0] - r), t.coeff);
        } else {
            S.Q[lead].add_coeff(ys[0] - r, ys[1] - r, t.coeff);
        }
    }
    return S;
}

/// Projective representatives of k^r - 0: leading coordinate 1, earlier
/// pivot positions first, trailing coordinates in odometer order.
std::vector<std::vector<elem>> projective_directions(const Field& F, std::uint32_t r) {
    std::vector<std::vector<elem>> dirs;
    for (std::uint32_t pivot = 0; pivot < r; ++pivot) {
        std::uint32_t free = r - pivot - 1;
        std::uint64_t count = 1;
        for (std::uint32_t i = 0; i < free; ++i) count *= F.q();
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<elem> d(r, 0);
            d[pivot] = 1;
            std::uint64_t v = idx;
            for (std::uint32_t i = 0; i < free; ++i) {
                d[pivot + 1 + i] = elem(v % F.q());
                v /= F.q();
            }
            dirs.push_back(std::move(d));
        }
    }
    return dirs;
}

/// Complement coordinates for a subspace given by basis columns: returns the
/// complement basis (standard vectors at non-pivot positions) and the
/// projection matrix S with S(C z + B w) = z.
std::pair<Mat, Mat> complement_and_projection(const Mat& basis, const FieldPtr& f,
                                              std::size_t ambient) {
    Mat bt = basis.transpose();
    auto pivots = bt.rref();
    std::vector<bool> is_pivot(ambient, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<elem>> comp;
    for (std::size_t j = 0; j < ambient; ++j) {
        if (is_pivot[j]) continue;
        std::vector<elem> e(ambient, 0);
        e[j] = 1;
        comp.push_back(std::move(e));
    }
    Mat C = comp.empty() ? Mat(f, ambient, 0) : Mat::from_columns(f, comp);
    Mat full = C.hstack(basis);
    if (full.cols() != ambient)
        throw Error(ErrorCode::InvalidArgument, "complement construction failed");
    Mat inv = full.inverse();
    Mat proj(f, C.cols(), ambient);
    for (std::size_t i = 0; i < C.cols(); ++i)
        for (std::size_t j = 0; j < ambient; ++j) proj.at(i, j) = inv.at(i, j);
    return {C, proj};
}

Mat block_diag(const Mat& A, const Mat& B) {
    const FieldPtr& f = A.field();
    Mat out(f, A.rows() + B.rows(), A.cols() + B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) out.at(i, j) = A.at(i, j);
    for (std::size_t i = 0; i < B.rows(); ++i)
        for (std::size_t j = 0; j < B.cols(); ++j) out.at(A.rows() + i, A.cols() + j) = B.at(i, j);
    return out;
}

}  // namespace

MultiPoly SliceForm::to_poly() const {
    std::vector<Term> terms;
    auto push = [&](std::uint32_t a, std::uint32_t b, std::uint32_t cc, elem coeff) {
        Term t;
        t.exps.assign(total, 0);
        ++t.exps[a];
        ++t.exps[b];
        ++t.exps[cc];
        t.coeff = coeff;
        terms.push_back(std::move(t));
    };
    for (std::uint32_t i = 0; i < r; ++i) {
        for (std::uint32_t j = 0; j < r; ++j)
            for (std::uint32_t k = j; k < r; ++k)
                if (elem a = c[i].coeff(j, k); a) push(i, j, k, a);
        for (std::uint32_t j = 0; j < r; ++j)
            for (std::uint32_t k = 0; k < w_dim(); ++k)
                if (elem a = M[i].at(j, k); a) push(i, j, r + k, a);
        for (std::uint32_t j = 0; j < w_dim(); ++j)
            for (std::uint32_t k = j; k < w_dim(); ++k)
                if (elem a = Q[i].coeff(j, k); a) push(i, r + j, r + k, a);
    }
    return MultiPoly::from_terms(field, total, std::move(terms));
}

QuadraticForm SliceForm::pencil(std::span<const elem> dir) const {
    if (dir.size() != r) throw Error(ErrorCode::ShapeMismatch, "direction length mismatch");
    if (std::all_of(dir.begin(), dir.end(), [](elem x) { return x == 0; }))
        throw Error(ErrorCode::ZeroDirection, "pencil direction must be nonzero");
    QuadraticForm out(field, w_dim());
    for (std::uint32_t i = 0; i < r; ++i)
        if (dir[i]) out = out.plus_scaled(Q[i], dir[i]);
    return out;
}

std::vector<elem> SliceForm::linear_part(std::span<const elem> dir) const {
    const Field& F = *field;
    std::vector<elem> l(w_dim(), 0);
    for (std::uint32_t i = 0; i < r; ++i) {
        if (!dir[i]) continue;
        for (std::uint32_t j = 0; j < r; ++j) {
            if (!dir[j]) continue;
            elem xij = F.mul(dir[i], dir[j]);
            for (std::uint32_t k = 0; k < w_dim(); ++k)
                l[k] = F.add(l[k], F.mul(xij, M[i].at(j, k)));
        }
    }
    return l;
}

elem SliceForm::constant_part(std::span<const elem> dir) const {
    const Field& F = *field;
    elem acc = 0;
    for (std::uint32_t i = 0; i < r; ++i)
        if (dir[i]) acc = F.add(acc, F.mul(dir[i], c[i].eval(dir)));
    return acc;
}

SliceForm slice_decompose(const MultiPoly& P, std::uint32_t r) {
    return decompose_impl(P, r, /*check_characteristic=*/true);
}

PencilReport pencil_scan(const SliceForm& S, std::span<const std::uint32_t> thetas,
                         std::uint64_t budget) {
    const Field& F = *S.field;
    std::uint64_t reps = 0;
    {
        std::uint64_t power = 1;
        for (std::uint32_t i = 0; i < S.r; ++i) {
            reps += power;
            power *= F.q();
        }
    }
    if (reps > budget)
        throw Error(ErrorCode::BudgetExceeded, "too many projective directions for the budget");

    PencilReport report;
    for (auto& dir : projective_directions(F, S.r)) {
        std::uint32_t rank = radical(S.pencil(dir)).rank;
        report.ranks.push_back({dir, rank});
    }
    for (auto theta : thetas) {
        ThresholdSet set;
        set.theta = theta;
        std::vector<std::vector<elem>> members;
        for (const auto& dr : report.ranks)
            if (dr.rank <= theta) members.push_back(dr.dir);
        set.span_dim = std::uint32_t(span_dimension(S.field, members));
        set.members = std::move(members);
        report.thresholds.push_back(std::move(set));
    }
    return report;
}

CaseReport classify_case(const SliceForm& S, std::uint32_t theta,
                         std::optional<std::uint32_t> refine_u, bool require_full,
                         std::uint64_t budget) {
    const Field& F = *S.field;
    const FieldPtr& f = S.field;
    const std::uint32_t r = S.r;
    const std::uint32_t w = S.w_dim();

    std::vector<std::uint32_t> thetas{theta};
    PencilReport scan = pencil_scan(S, thetas, budget);
    const ThresholdSet& U = scan.thresholds.front();

    CaseReport out;
    out.theta = theta;
    out.span_dim = U.span_dim;
    out.threshold_set = U.members;

    if (U.span_dim == 0) {
        out.label = CaseLabel::Case0;
        // every direction has rank >= theta + 1, so each slice is bounded by
        // q^{(N - r) - (theta + 1)/2}
        out.bound_twice_exponent = int(2 * w) - int(theta + 1);
        return out;
    }

    if (r != 2) {
        if (require_full)
            throw Error(ErrorCode::UnsupportedR,
                        "full case classification is specified for r = 2 only");
        out.label = CaseLabel::SpanOnly;
        return out;
    }

    // stack of all M^i rows; kernel(l) = joint null space of the stack
    Mat m_stack(f, 0, w);
    for (const auto& Mi : S.M) m_stack = m_stack.vstack(Mi);

    if (U.span_dim == 2) {
        out.label = CaseLabel::Case2;
        // first two independent members in scan order
        std::vector<elem> u = U.members.front();
        std::vector<elem> u2;
        for (std::size_t i = 1; i < U.members.size(); ++i) {
            if (span_dimension(f, {u, U.members[i]}) == 2) {
                u2 = U.members[i];
                break;
            }
        }
        out.u = u;
        out.u2 = u2;
        Mat gu = S.pencil(u).gram();
        Mat gu2 = S.pencil(u2).gram();
        out.w_prime = joint_nullspace({gu, gu2});
        // W'' = ker(l^1) cap ker(l^2) cap W'
        Mat constrained = m_stack * out.w_prime;
        Mat z = constrained.nullspace();
        out.w_dprime = out.w_prime * z;

        auto [comp, proj] = complement_and_projection(out.w_dprime, f, w);
        out.projection = proj;
        MultiPoly P = S.to_poly();
        Mat sub = block_diag(Mat::identity(f, r), comp);
        out.reduced = P.linear_substitute(sub);
        out.reduced_dim = r + std::uint32_t(comp.cols());
        // soundness: P == reduced o (id x proj), checked formally
        Mat back = block_diag(Mat::identity(f, r), proj);
        if (out.reduced->linear_substitute(back) != P)
            throw Error(ErrorCode::InvalidArgument, "reduction failed to reproduce P");
        return out;
    }

    // span is a line
    out.label = CaseLabel::Case1;
    std::vector<elem> u = U.members.front();
    // rotation: second column is u, first column a standard vector at the
    // lowest non-pivot position
    std::uint32_t pivot = u[0] ? 0 : 1;
    Mat R(f, 2, 2);
    R.at(pivot == 0 ? 1 : 0, 0) = 1;
    R.at(0, 1) = u[0];
    R.at(1, 1) = u[1];
    if (R.rank() != 2) throw Error(ErrorCode::InvalidArgument, "rotation construction failed");
    out.rotation = R;

    MultiPoly P = S.to_poly();
    Mat full_rot = block_diag(R, Mat::identity(f, w));
    MultiPoly P_rot = P.linear_substitute(full_rot);
    MultiPoly restricted = P_rot.specialize(0, 0);  // x_1' = 0
    out.restricted = restricted;

    // W' and W'' from the rotated slice data; the line is now the second axis
    SliceForm S_rot = decompose_impl(P_rot, 2, /*check_characteristic=*/false);
    Mat w_prime = radical(S_rot.Q[1]).basis;
    Mat m_stack_rot(f, 0, w);
    for (const auto& Mi : S_rot.M) m_stack_rot = m_stack_rot.vstack(Mi);
    Mat constrained = m_stack_rot * w_prime;
    Mat z = constrained.nullspace();
    out.w_prime = w_prime;
    out.w_dprime = w_prime * z;

    auto [comp, proj] = complement_and_projection(out.w_dprime, f, w);
    out.projection = proj;
    Mat sub = block_diag(Mat::identity(f, 1), comp);
    out.reduced1 = restricted.linear_substitute(sub);
    out.reduced_dim = 1 + std::uint32_t(comp.cols());
    Mat back = block_diag(Mat::identity(f, 1), proj);
    if (out.reduced1->linear_substitute(back) != restricted)
        throw Error(ErrorCode::InvalidArgument, "restricted reduction failed to reproduce P'");

    if (refine_u) {
        out.refine_u = refine_u;
        out.theta1 = 16 + 2 * *refine_u;
        std::vector<std::uint32_t> t1{*out.theta1};
        PencilReport scan1 = pencil_scan(S, t1, budget);
        out.span1_dim = scan1.thresholds.front().span_dim;
        EnumOptions opt;
        opt.budget = budget;
        try {
            auto a_full = count_vector(P, 1, opt);
            auto a_restricted = count_vector(restricted, 1, opt);
            CycInt diff = a_full.as_cyc() - a_restricted.as_cyc();
            out.a1_difference = double(diff.magnitude());
            out.a1_reference_scale =
                std::pow(double(F.q()), double(S.total) - double(*refine_u) - 1.0);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BudgetExceeded) throw;
        }
    }
    return out;
}

SliceDichotomy slice_rank_one_dichotomy(const MultiPoly& P) {
    const FieldPtr& f = P.field();
    const Field& F = *f;
    const std::uint32_t N = P.nvars();
    auto info = degree_check(P);
    if (!info.degree || *info.degree != 3 || !info.homogeneous || N < 1)
        throw Error(ErrorCode::NotSliceRankOne, "input is not a homogeneous cubic");
    for (const auto& t : P.terms())
        if (t.exps[0] == 0)
            throw Error(ErrorCode::NotSliceRankOne, "polynomial is not divisible by x1");

    // R = P / x1, split as alpha x1^2 + x1 l(y) + Q(y)
    const std::uint32_t w = N - 1;
    elem alpha = 0;
    std::vector<elem> l(w, 0);
    QuadraticForm Qy(f, w);
    for (const auto& t : P.terms()) {
        std::vector<std::uint8_t> rest = t.exps;
        rest[0] -= 1;
        std::uint32_t x_deg = rest[0];
        if (x_deg == 2) {
            alpha = F.add(alpha, t.coeff);
        } else if (x_deg == 1) {
            for (std::uint32_t v = 1; v < N; ++v)
                if (rest[v]) l[v - 1] = F.add(l[v - 1], t.coeff);
        } else {
            std::vector<std::uint32_t> ys;
            for (std::uint32_t v = 1; v < N; ++v)
                for (std::uint8_t k = 0; k < rest[v]; ++k) ys.push_back(v - 1);
            Qy.add_coeff(ys[0], ys[1], t.coeff);
        }
    }

    SliceDichotomy out;
    Radical rad = radical(Qy);
    out.y_rank = rad.rank;
    out.bound_twice_exponent = int(2 * w) - 3;

    auto fill_slice_values = [&] {
        out.bound_holds = true;
        for (elem x = 1; x < F.q(); ++x) {
            // r_x = psi(alpha x^3) * a(x Q, x^2 l)
            elem x2 = F.mul(x, x);
            std::vector<elem> lx(w);
            for (std::uint32_t i = 0; i < w; ++i) lx[i] = F.mul(x2, l[i]);
            auto cf = closed_form_sum(Qy.scaled(x), lx, /*with_value=*/true);
            SliceDichotomy::SliceValue sv;
            sv.x = x;
            sv.zero = cf.zero;
            sv.twice_exponent = cf.twice_exponent;
            elem shift = F.char_class(F.mul(alpha, F.mul(x2, x)));
            sv.value = cf.value->shifted(shift);
            if (!cf.zero && cf.twice_exponent > out.bound_twice_exponent) out.bound_holds = false;
            out.slice_values.push_back(std::move(sv));
        }
    };

    if (rad.rank >= 3) {
        out.kind = DichotomyKind::RankBound;
        fill_slice_values();
        return out;
    }

    // rank <= 2: does l vanish on the radical W' of Q?
    bool l_vanishes = true;
    for (std::size_t j = 0; j < rad.basis.cols() && l_vanishes; ++j) {
        elem acc = 0;
        for (std::uint32_t i = 0; i < w; ++i) acc = F.add(acc, F.mul(l[i], rad.basis.at(i, j)));
        if (acc) l_vanishes = false;
    }
    if (!l_vanishes) {
        out.kind = DichotomyKind::ZeroSlices;
        fill_slice_values();  // every entry comes out exactly zero
        return out;
    }

    // reduction: Q factors through the first rank coordinates of T^{-1}, and
    // l is a combination of the same covectors
    out.kind = DichotomyKind::ThreeVarReduction;
    CanonicalQuadratic canon = canonicalize(Qy);
    Mat t_inv = canon.T.inverse();
    std::vector<std::vector<elem>> zrows;
    for (std::uint32_t k = 0; k < canon.rank; ++k) zrows.push_back(t_inv.row(k));

    std::vector<elem> lambda(2, 0);
    if (!zrows.empty()) {
        Mat zt = Mat::from_rows(f, zrows).transpose();  // w x rank
        auto sol = zt.solve(l);
        if (!sol)
            throw Error(ErrorCode::InvalidArgument, "linear part not spanned by the canonical covectors");
        for (std::size_t k = 0; k < sol->size(); ++k) lambda[k] = (*sol)[k];
    } else {
        for (elem c : l)
            if (c) throw Error(ErrorCode::InvalidArgument, "nonzero linear part with empty covector span");
    }

    // t_1 = x1; t_2, t_3 = canonical covectors extended by zero over x1
    Mat t_forms(f, 3, N);
    t_forms.at(0, 0) = 1;
    for (std::uint32_t k = 0; k < 2; ++k) {
        if (k < zrows.size())
            for (std::uint32_t i = 0; i < w; ++i) t_forms.at(1 + k, 1 + i) = zrows[k][i];
    }
    out.t_forms = t_forms;

    // qhat(t1,t2,t3) = t1 (alpha t1^2 + lambda1 t1 t2 + lambda2 t1 t3 + Qbar(t2,t3))
    QuadraticForm qbar(f, 2);
    if (canon.t == 1) {
        qbar.set_coeff(0, 1, 1);
    } else {
        if (canon.alpha) qbar.set_coeff(0, 0, *canon.alpha);
        if (canon.beta) qbar.set_coeff(1, 1, *canon.beta);
    }
    std::vector<Term> inner;
    if (alpha) inner.push_back({{2, 0, 0}, alpha});
    if (lambda[0]) inner.push_back({{1, 1, 0}, lambda[0]});
    if (lambda[1]) inner.push_back({{1, 0, 1}, lambda[1]});
    for (std::uint32_t i = 0; i < 2; ++i)
        for (std::uint32_t j = i; j < 2; ++j)
            if (elem cq = qbar.coeff(i, j); cq) {
                Term t;
                t.exps = {0, 0, 0};
                ++t.exps[1 + i];
                ++t.exps[1 + j];
                t.coeff = cq;
                inner.push_back(std::move(t));
            }
    MultiPoly inner_poly = MultiPoly::from_terms(f, 3, std::move(inner));
    MultiPoly x1_poly = MultiPoly::monomial(f, 3, {1, 0, 0}, 1);
    out.qhat = x1_poly * inner_poly;

    if (out.qhat->linear_substitute(t_forms) != P)
        throw Error(ErrorCode::InvalidArgument, "three-variable reduction failed to reproduce P");
    return out;
}

SliceIdentityReport slice_identity_check(const SliceForm& S, const EnumOptions& opt) {
    const Field& F = *S.field;
    MultiPoly P = S.to_poly();
    SliceIdentityReport report;
    report.full = count_vector(P, 1, opt);

    std::vector<std::uint64_t> acc(F.p(), 0);
    const std::uint32_t r = S.r;
    std::vector<elem> dir(r, 0);
    bool all_laws = true;
    while (true) {
        MultiPoly slice = P;
        for (std::uint32_t i = 0; i < r; ++i) slice = slice.specialize(0, dir[i]);
        CharacterSum cs = count_vector(slice, 1, opt);
        for (std::uint32_t j = 0; j < F.p(); ++j) acc[j] += cs.counts[j];

        bool nonzero_dir = std::any_of(dir.begin(), dir.end(), [](elem x) { return x != 0; });
        if (nonzero_dir) {
            auto Qx = S.pencil(dir);
            auto Lx = S.linear_part(dir);
            auto cf = closed_form_sum(Qx, Lx, /*with_value=*/true);
            CycInt expected = cf.value->shifted(F.char_class(S.constant_part(dir)));
            DirectionCheck check;
            check.dir = dir;
            check.zero = cf.zero;
            check.twice_exponent = cf.twice_exponent;
            check.pencil_rank = radical(Qx).rank;
            check.law_exact = expected.equals(cs.as_cyc());
            if (!check.law_exact) all_laws = false;
            report.directions.push_back(std::move(check));
        }

        std::uint32_t i = 0;
        while (i < r && ++dir[i] == F.q()) dir[i++] = 0;
        if (i == r) break;
    }
    report.identity_exact = (acc == report.full.counts);
    report.per_direction_law = all_laws;
    return report;
}

}  // namespace ffb
