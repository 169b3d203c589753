#include "ffb/quadratic.hpp"

#include <algorithm>
#include <cmath>

namespace ffb {

namespace {

void require_odd(const FieldPtr& f) {
    if (!f || f->p() == 2)
        throw Error(ErrorCode::EvenCharacteristic, "quadratic theory needs odd characteristic");
}

}  // namespace

QuadraticForm::QuadraticForm(FieldPtr field, std::uint32_t n) : field_(std::move(field)), n_(n) {
    require_odd(field_);
    coeffs_.assign(std::size_t(n) * (n + 1) / 2, 0);
}

elem QuadraticForm::coeff(std::uint32_t i, std::uint32_t j) const {
    // packed upper triangle, row-major: row i starts after n + (n-1) + ... + (n-i+1)
    return coeffs_[std::size_t(i) * n_ - std::size_t(i) * (i - 1) / 2 - i + j];
}

void QuadraticForm::set_coeff(std::uint32_t i, std::uint32_t j, elem c) {
    coeffs_[std::size_t(i) * n_ - std::size_t(i) * (i - 1) / 2 - i + j] = c;
}

void QuadraticForm::add_coeff(std::uint32_t i, std::uint32_t j, elem c) {
    set_coeff(i, j, field_->add(coeff(i, j), c));
}

QuadraticForm QuadraticForm::from_poly(const MultiPoly& P) {
    require_odd(P.field());
    QuadraticForm Q(P.field(), P.nvars());
    for (const auto& t : P.terms()) {
        if (t.degree() != 2)
            throw Error(ErrorCode::InvalidArgument, "polynomial is not a homogeneous quadratic");
        std::uint32_t i = P.nvars(), j = P.nvars();
        for (std::uint32_t v = 0; v < P.nvars(); ++v) {
            if (t.exps[v] == 2) i = j = v;
            if (t.exps[v] == 1) {
                if (i == P.nvars())
                    i = v;
                else
                    j = v;
            }
        }
        Q.add_coeff(i, j, t.coeff);
    }
    return Q;
}

MultiPoly QuadraticForm::to_poly() const {
    std::vector<Term> terms;
    for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = i; j < n_; ++j) {
            elem c = coeff(i, j);
            if (!c) continue;
            Term t;
            t.exps.assign(n_, 0);
            t.exps[i] += 1;
            t.exps[j] += 1;
            t.coeff = c;
            terms.push_back(std::move(t));
        }
    return MultiPoly::from_terms(field_, n_, std::move(terms));
}

elem QuadraticForm::eval(std::span<const elem> v) const {
    if (v.size() != n_) throw Error(ErrorCode::ArityMismatch, "point arity mismatch");
    const Field& F = *field_;
    elem acc = 0;
    std::size_t idx = 0;
    for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = i; j < n_; ++j, ++idx) {
            elem c = coeffs_[idx];
            if (c) acc = F.add(acc, F.mul(c, F.mul(v[i], v[j])));
        }
    return acc;
}

Mat QuadraticForm::gram() const {
    const Field& F = *field_;
    Mat G(field_, n_, n_);
    for (std::uint32_t i = 0; i < n_; ++i) {
        elem d = coeff(i, i);
        G.at(i, i) = F.add(d, d);
        for (std::uint32_t j = i + 1; j < n_; ++j) {
            G.at(i, j) = coeff(i, j);
            G.at(j, i) = coeff(i, j);
        }
    }
    return G;
}

elem QuadraticForm::bilinear(std::span<const elem> u, std::span<const elem> v) const {
    const Field& F = *field_;
    std::vector<elem> sum(n_);
    for (std::uint32_t i = 0; i < n_; ++i) sum[i] = F.add(u[i], v[i]);
    return F.sub(F.sub(eval(sum), eval(u)), eval(v));
}

bool QuadraticForm::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](elem c) { return c == 0; });
}

QuadraticForm QuadraticForm::scaled(elem c) const {
    QuadraticForm out = *this;
    for (auto& a : out.coeffs_) a = field_->mul(a, c);
    return out;
}

QuadraticForm QuadraticForm::plus_scaled(const QuadraticForm& other, elem c) const {
    if (n_ != other.n_) throw Error(ErrorCode::ShapeMismatch, "form dimension mismatch");
    QuadraticForm out = *this;
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        out.coeffs_[k] = field_->add(out.coeffs_[k], field_->mul(c, other.coeffs_[k]));
    return out;
}

QuadraticForm QuadraticForm::transformed(const Mat& T) const {
    if (T.rows() != n_) throw Error(ErrorCode::ShapeMismatch, "transform must have one row per variable");
    const std::uint32_t m = std::uint32_t(T.cols());
    QuadraticForm out(field_, m);
    std::vector<std::vector<elem>> cols(m);
    for (std::uint32_t j = 0; j < m; ++j) cols[j] = T.column(j);
    for (std::uint32_t i = 0; i < m; ++i) {
        out.set_coeff(i, i, eval(cols[i]));
        for (std::uint32_t j = i + 1; j < m; ++j) out.set_coeff(i, j, bilinear(cols[i], cols[j]));
    }
    return out;
}

Radical radical(const QuadraticForm& Q) {
    Mat G = Q.gram();
    Mat basis = G.nullspace();
    return {basis, std::uint32_t(Q.dim() - basis.cols())};
}

elem CanonicalQuadratic::eval_canonical(const Field& F, std::span<const elem> v) const {
    elem acc = 0;
    for (std::uint32_t i = 0; i < t; ++i) acc = F.add(acc, F.mul(v[i], v[t + i]));
    std::uint32_t next = 2 * t;
    if (alpha) {
        acc = F.add(acc, F.mul(*alpha, F.mul(v[next], v[next])));
        ++next;
    }
    if (beta) acc = F.add(acc, F.mul(*beta, F.mul(v[next], v[next])));
    return acc;
}

namespace {

// Orthogonal split machinery for canonicalize; always picks the lowest-index
// usable pivot so the output basis is deterministic.
struct Splitter {
    const QuadraticForm& Q;
    const Field& F;
    std::vector<std::vector<elem>> work;  // basis of the unprocessed complement

    elem q(const std::vector<elem>& u) const { return Q.eval(u); }
    elem b(const std::vector<elem>& u, const std::vector<elem>& v) const { return Q.bilinear(u, v); }

    std::vector<elem> scale(const std::vector<elem>& u, elem c) const {
        std::vector<elem> out(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = F.mul(u[i], c);
        return out;
    }
    std::vector<elem> axpy(const std::vector<elem>& u, elem c, const std::vector<elem>& v) const {
        // u + c v
        std::vector<elem> out(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = F.add(u[i], F.mul(c, v[i]));
        return out;
    }

    // drop indices i < j and project the rest onto the orthogonal complement
    // of the hyperbolic plane span(a, bb), normalized so B(a, bb) = 1
    void project_out_pair(std::size_t i, std::size_t j, const std::vector<elem>& a,
                          const std::vector<elem>& bb) {
        std::vector<std::vector<elem>> next;
        for (std::size_t k = 0; k < work.size(); ++k) {
            if (k == i || k == j) continue;
            auto w = axpy(work[k], F.neg(b(work[k], bb)), a);
            w = axpy(w, F.neg(b(w, a)), bb);
            next.push_back(std::move(w));
        }
        work = std::move(next);
    }

    void project_out_vector(std::size_t i, const std::vector<elem>& a) {
        elem baa = b(a, a);  // 2 q(a), nonzero for a diagonal pivot
        std::vector<std::vector<elem>> next;
        for (std::size_t k = 0; k < work.size(); ++k) {
            if (k == i) continue;
            next.push_back(axpy(work[k], F.neg(F.div(b(work[k], a), baa)), a));
        }
        work = std::move(next);
    }
};

}  // namespace

CanonicalQuadratic canonicalize(const QuadraticForm& Q) {
    require_odd(Q.field());
    const Field& F = *Q.field();
    const std::uint32_t N = Q.dim();

    Splitter s{Q, F, {}};
    s.work.resize(N);
    for (std::uint32_t i = 0; i < N; ++i) {
        s.work[i].assign(N, 0);
        s.work[i][i] = 1;
    }

    std::vector<std::vector<elem>> hyper_a, hyper_b;
    std::vector<std::pair<std::vector<elem>, elem>> diag;

    while (!s.work.empty()) {
        bool progressed = false;
        // hyperbolic pivot first: lowest (i, j) with isotropic ends and a
        // nonzero pairing
        for (std::size_t i = 0; i < s.work.size() && !progressed; ++i) {
            if (s.q(s.work[i]) != 0) continue;
            for (std::size_t j = i + 1; j < s.work.size() && !progressed; ++j) {
                if (s.q(s.work[j]) != 0) continue;
                elem pairing = s.b(s.work[i], s.work[j]);
                if (!pairing) continue;
                auto a = s.work[i];
                auto bb = s.scale(s.work[j], F.inv(pairing));
                s.project_out_pair(i, j, a, bb);
                hyper_a.push_back(std::move(a));
                hyper_b.push_back(std::move(bb));
                progressed = true;
            }
        }
        if (progressed) continue;
        // diagonal pivot: lowest index with a nonzero value
        for (std::size_t i = 0; i < s.work.size() && !progressed; ++i) {
            elem d = s.q(s.work[i]);
            if (!d) continue;
            auto a = s.work[i];
            s.project_out_vector(i, a);
            diag.emplace_back(std::move(a), d);
            progressed = true;
        }
        if (!progressed) break;  // remainder is the radical
    }
    std::vector<std::vector<elem>> radical_basis = std::move(s.work);

    // first (x0, y0) in enumeration order with d1 x0^2 + d2 y0^2 = target;
    // exists whenever the binary form is nondegenerate (anisotropic binary
    // forms over a finite field represent every value)
    auto represent = [&](elem d1, elem d2, elem target) {
        for (elem x0 = 0; x0 < F.q(); ++x0) {
            elem rest = F.sub(target, F.mul(d1, F.mul(x0, x0)));
            elem ratio = F.div(rest, d2);
            if (F.is_square(ratio)) return std::make_pair(x0, F.sqrt(ratio));
        }
        throw Error(ErrorCode::InvalidArgument, "binary form failed to represent a value");
    };

    // Convert pairs of diagonal terms into hyperbolic planes.  A block
    // d1 x^2 + d2 y^2 splits iff -d1 d2 is a square; a non-splitting block
    // with a third entry available is regrouped through a vector of value
    // -d3, after which it pairs with the third entry.
    while (diag.size() >= 2) {
        auto [a, d1] = diag[0];
        auto [bb, d2] = diag[1];
        elem disc = F.neg(F.mul(d1, d2));
        if (F.is_square(disc)) {
            elem sc = F.sqrt(F.div(F.neg(d1), d2));
            auto u = s.axpy(a, sc, bb);
            auto w = s.axpy(a, F.neg(sc), bb);
            elem pairing = s.b(u, w);  // 4 d1, nonzero
            auto w1 = s.scale(w, F.inv(pairing));
            hyper_a.push_back(std::move(u));
            hyper_b.push_back(std::move(w1));
            diag.erase(diag.begin(), diag.begin() + 2);
        } else if (diag.size() >= 3) {
            elem d3 = diag[2].second;
            auto [x0, y0] = represent(d1, d2, F.neg(d3));
            std::vector<elem> u(a.size()), w(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                u[i] = F.add(F.mul(x0, a[i]), F.mul(y0, bb[i]));
                w[i] = F.add(F.mul(F.neg(F.mul(d2, y0)), a[i]), F.mul(F.mul(d1, x0), bb[i]));
            }
            // q(u) = -d3, q(w) = d1 d2 (-d3), B(u, w) = 0; order the list so
            // that (u, third entry) is the next pair examined
            auto third = diag[2];
            diag.erase(diag.begin(), diag.begin() + 3);
            diag.insert(diag.begin(), {w, F.mul(F.mul(d1, d2), F.neg(d3))});
            diag.insert(diag.begin(), third);
            diag.insert(diag.begin(), {u, F.neg(d3)});
        } else {
            break;  // anisotropic plane, rank even
        }
    }

    CanonicalQuadratic out;
    out.t = std::uint32_t(hyper_a.size());
    const elem nu = F.nonsquare_witness();
    std::vector<std::vector<elem>> columns;
    columns.insert(columns.end(), hyper_a.begin(), hyper_a.end());
    columns.insert(columns.end(), hyper_b.begin(), hyper_b.end());

    if (diag.size() == 1) {
        auto [a, d] = diag[0];
        elem target = F.is_square(d) ? 1 : nu;
        elem c = F.sqrt(F.div(target, d));  // square by the choice of target
        columns.push_back(s.scale(a, c));
        out.alpha = target;
    } else if (diag.size() == 2) {
        // normalize the anisotropic plane to x^2 - nu y^2
        auto [a, d1] = diag[0];
        auto [bb, d2] = diag[1];
        auto [x0, y0] = represent(d1, d2, 1);
        std::vector<elem> u(a.size()), w(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            u[i] = F.add(F.mul(x0, a[i]), F.mul(y0, bb[i]));
            w[i] = F.add(F.mul(F.neg(F.mul(d2, y0)), a[i]), F.mul(F.mul(d1, x0), bb[i]));
        }
        elem qw = F.mul(d1, d2);
        elem c = F.sqrt(F.div(F.neg(nu), qw));  // -nu/(d1 d2) is a square here
        columns.push_back(std::move(u));
        columns.push_back(s.scale(w, c));
        out.alpha = 1;
        out.beta = F.neg(nu);
    }
    out.rank = 2 * out.t + (out.alpha ? 1 : 0) + (out.beta ? 1 : 0);
    columns.insert(columns.end(), radical_basis.begin(), radical_basis.end());
    out.T = Mat::from_columns(Q.field(), columns);
    if (out.T.cols() != N) throw Error(ErrorCode::InvalidArgument, "canonical basis is incomplete");
    return out;
}

long double ClosedFormSum::magnitude(const Field& F) const {
    if (zero) return 0;
    return std::pow(static_cast<long double>(F.q()), static_cast<long double>(twice_exponent) / 2);
}

ClosedFormSum closed_form_sum(const QuadraticForm& Q, std::span<const elem> l, bool with_value) {
    require_odd(Q.field());
    const Field& F = *Q.field();
    const std::uint32_t N = Q.dim();
    if (l.size() != N) throw Error(ErrorCode::ShapeMismatch, "linear form length mismatch");

    Radical rad = radical(Q);
    for (std::size_t j = 0; j < rad.basis.cols(); ++j) {
        elem acc = 0;
        for (std::uint32_t i = 0; i < N; ++i) acc = F.add(acc, F.mul(l[i], rad.basis.at(i, j)));
        if (acc) {
            // l does not vanish on the radical: the sum is exactly zero
            ClosedFormSum out;
            out.zero = true;
            if (with_value) out.value = CycInt(F.p());
            return out;
        }
    }

    ClosedFormSum out;
    out.twice_exponent = int(2 * N) - int(rad.rank);
    if (!with_value) return out;

    // shift v -> v + v0 with G v0 = l absorbs the linear part, leaving the
    // constant C = -Q(v0)
    Mat G = Q.gram();
    auto v0 = G.solve(l);
    if (!v0) throw Error(ErrorCode::InvalidArgument, "linear part not in the Gram column space");
    elem C = F.neg(Q.eval(*v0));

    CanonicalQuadratic canon = canonicalize(Q);
    std::uint64_t scale = 1;
    for (std::uint32_t i = 0; i < canon.t + (N - canon.rank); ++i) scale *= F.q();
    CycInt value = CycInt::integer(F.p(), std::int64_t(scale));
    if (canon.alpha) value = value * gauss_sum(F, *canon.alpha);
    if (canon.beta) value = value * gauss_sum(F, *canon.beta);
    out.value = value.shifted(F.char_class(C));
    return out;
}

QuadraticBias quadratic_bias(const QuadraticForm& Q, std::uint32_t level) {
    require_odd(Q.field());
    const Field& F = *Q.field();
    Radical rad = radical(Q);
    QuadraticBias out;
    out.rank = rad.rank;
    const long double q = F.q();
    const long double exponent = level * (Q.dim() - rad.rank / 2.0L);
    out.triple.magnitude = double(std::pow(q, exponent));
    out.triple.btilde = double(std::pow(q, exponent - level * Q.dim()));
    out.triple.b = double(rad.rank);
    out.triple.b_infinite = false;
    return out;
}

}  // namespace ffb
