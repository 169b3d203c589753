#include "doctest.h"

#include <cmath>

#include "ffb/quadratic.hpp"
#include "oracle.hpp"

using namespace ffb;
using ffb::testing::for_all_points;
using ffb::uniform_below;

namespace {

QuadraticForm form_from_text(const FieldPtr& f, std::uint32_t n, const std::string& text) {
    return QuadraticForm::from_poly(parse_poly(text, f, n));
}

// all quadratic forms on F_p^n, enumerated by packed coefficient odometer
template <typename Fn>
void for_all_forms(const FieldPtr& f, std::uint32_t n, Fn&& fn) {
    std::size_t m = std::size_t(n) * (n + 1) / 2;
    std::vector<elem> c(m, 0);
    while (true) {
        QuadraticForm Q(f, n);
        std::size_t idx = 0;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i; j < n; ++j) Q.set_coeff(i, j, c[idx++]);
        fn(Q);
        std::size_t k = 0;
        while (k < m && ++c[k] == f->q()) c[k++] = 0;
        if (k == m) break;
    }
}

QuadraticForm random_form(const FieldPtr& f, std::uint32_t n, std::mt19937_64& rng) {
    QuadraticForm Q(f, n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i; j < n; ++j)
            Q.set_coeff(i, j, elem(uniform_below(rng, f->q())));
    return Q;
}

}  // namespace

TEST_SUITE("quadratic") {

TEST_CASE("gram matrix satisfies the polarization identity") {
    auto f5 = Field::make(5, 1);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        auto Q = random_form(f5, 3, rng);
        Mat G = Q.gram();
        for_all_points(*f5, 3, [&](const std::vector<elem>& u) {
            auto Gu = G.apply(u);
            std::vector<elem> probe{1, 2, 3};
            elem ut_g_probe = 0;
            for (std::size_t i = 0; i < 3; ++i)
                ut_g_probe = f5->add(ut_g_probe, f5->mul(Gu[i], probe[i]));
            // B(u, probe) computed from values must match u^T G probe
            if (Q.bilinear(u, probe) != ut_g_probe) CHECK(false);
        });
    }
}

TEST_CASE("radical and rank") {
    auto f3 = Field::make(3, 1);
    auto f5 = Field::make(5, 1);

    auto r1 = radical(form_from_text(f3, 3, "x1^2"));
    CHECK(r1.rank == 1);
    REQUIRE(r1.basis.cols() == 2);  // span(e2, e3)
    CHECK(r1.basis.column(0) == std::vector<elem>{0, 1, 0});
    CHECK(r1.basis.column(1) == std::vector<elem>{0, 0, 1});

    CHECK(radical(form_from_text(f5, 4, "x1*x2 + x3*x4")).rank == 4);
    CHECK(radical(form_from_text(f5, 2, "x1^2 + x1*x2")).rank == 2);
    CHECK(radical(QuadraticForm(f5, 3)).rank == 0);  // zero form

    // definition equivalence: v in nullspace(G) iff Q(v+v') = Q(v') for all v'
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 12; ++trial) {
        auto Q = random_form(f3, 3, rng);
        Mat G = Q.gram();
        for_all_points(*f3, 3, [&](const std::vector<elem>& v) {
            bool in_null = true;
            for (elem g : G.apply(v))
                if (g) in_null = false;
            bool shift_invariant = true;
            for_all_points(*f3, 3, [&](const std::vector<elem>& w) {
                std::vector<elem> vw(3);
                for (int i = 0; i < 3; ++i) vw[i] = f3->add(v[i], w[i]);
                if (Q.eval(vw) != Q.eval(w)) shift_invariant = false;
            });
            if (in_null != shift_invariant) CHECK(false);
        });
    }
}

TEST_CASE("canonicalize named examples") {
    auto f3 = Field::make(3, 1);
    auto f5 = Field::make(5, 1);

    auto c1 = canonicalize(form_from_text(f5, 2, "x1*x2"));
    CHECK(c1.t == 1);
    CHECK(!c1.alpha);
    CHECK(c1.rank == 2);
    CHECK(c1.T == Mat::identity(f5, 2));

    // x1^2 + x1 x2 over F_5 is hyperbolic
    auto c2 = canonicalize(form_from_text(f5, 2, "x1^2 + x1*x2"));
    CHECK(c2.t == 1);
    CHECK(!c2.alpha);
    CHECK(c2.rank == 2);

    auto c3 = canonicalize(form_from_text(f5, 1, "x1^2"));
    CHECK(c3.t == 0);
    CHECK(c3.alpha == 1);
    CHECK(c3.rank == 1);

    // x1^2 + x2^2 over F_3 cannot split: anisotropic plane, normalized (1, -nu) = (1, 1)
    auto c4 = canonicalize(form_from_text(f3, 2, "x1^2 + x2^2"));
    CHECK(c4.t == 0);
    CHECK(c4.alpha == 1);
    CHECK(c4.beta == 1);
    CHECK(c4.rank == 2);

    // same form over F_5 splits since -1 is a square
    auto c5 = canonicalize(form_from_text(f5, 2, "x1^2 + x2^2"));
    CHECK(c5.t == 1);
    CHECK(!c5.alpha);

    // diag(1,1,1) over F_3: no pair splits, but the triple regroups
    auto c6 = canonicalize(form_from_text(f3, 3, "x1^2 + x2^2 + x3^2"));
    CHECK(c6.rank == 3);
    CHECK(c6.t == 1);
    CHECK(c6.alpha.has_value());
}

TEST_CASE("canonicalize soundness, exhaustive p=3 and random p in {3,5,7}") {
    auto f3 = Field::make(3, 1);
    for (std::uint32_t n : {1u, 2u, 3u}) {
        for_all_forms(f3, n, [&](const QuadraticForm& Q) {
            auto canon = canonicalize(Q);
            if (canon.rank != radical(Q).rank) CHECK(false);
            if (canon.T.rank() != n) CHECK(false);
            bool ok = true;
            for_all_points(*f3, n, [&](const std::vector<elem>& v) {
                auto tv = canon.T.apply(v);
                if (Q.eval(tv) != canon.eval_canonical(*f3, v)) ok = false;
            });
            if (!ok) CHECK(false);
        });
    }
    std::mt19937_64 rng(42);
    for (auto p : {3u, 5u, 7u}) {
        auto f = Field::make(p, 1);
        for (int trial = 0; trial < 60; ++trial) {
            std::uint32_t n = 1 + std::uint32_t(uniform_below(rng, 5));
            auto Q = random_form(f, n, rng);
            auto canon = canonicalize(Q);
            CHECK(canon.rank == radical(Q).rank);
            CHECK(canon.T.rank() == n);
            bool ok = true;
            for_all_points(*f, n, [&](const std::vector<elem>& v) {
                auto tv = canon.T.apply(v);
                if (Q.eval(tv) != canon.eval_canonical(*f, v)) ok = false;
            });
            CHECK(ok);
        }
    }
    // extension field spot check
    auto f9 = Field::make(3, 2);
    std::mt19937_64 rng9(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto Q = random_form(f9, 3, rng9);
        auto canon = canonicalize(Q);
        bool ok = true;
        for_all_points(*f9, 3, [&](const std::vector<elem>& v) {
            if (Q.eval(canon.T.apply(v)) != canon.eval_canonical(*f9, v)) ok = false;
        });
        CHECK(ok);
    }
}

TEST_CASE("rank invariance under invertible substitution") {
    auto f5 = Field::make(5, 1);
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        std::uint32_t n = 2 + std::uint32_t(uniform_below(rng, 3));
        auto Q = random_form(f5, n, rng);
        Mat A(f5, n, n);
        do {
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = 0; j < n; ++j) A.at(i, j) = elem(uniform_below(rng, 5));
        } while (A.rank() != n);
        CHECK(radical(Q.transformed(A)).rank == radical(Q).rank);
    }
}

TEST_CASE("closed form sum: zero dichotomy and magnitudes") {
    auto f3 = Field::make(3, 1);
    auto f5 = Field::make(5, 1);

    // Q = x1 x2 over F_3, l = 0: magnitude q = 3, matching counts (5,2,2)
    auto cf1 = closed_form_sum(form_from_text(f3, 2, "x1*x2"), std::vector<elem>{0, 0}, true);
    CHECK(!cf1.zero);
    CHECK(cf1.twice_exponent == 2);
    CHECK(double(cf1.magnitude(*f3)) == doctest::Approx(3.0));
    auto enum1 = count_vector(parse_poly("x1*x2", f3, 2), 1);
    CHECK(cf1.value->equals(enum1.as_cyc()));

    // Q = x1^2 on F_3^3, l = x2 is nonzero on the radical: exact zero
    auto cf2 = closed_form_sum(form_from_text(f3, 3, "x1^2"), std::vector<elem>{0, 1, 0});
    CHECK(cf2.zero);

    // Q = x1^2 over F_5, l = 0: magnitude sqrt(5)
    auto cf3 = closed_form_sum(form_from_text(f5, 1, "x1^2"), std::vector<elem>{0});
    CHECK(cf3.twice_exponent == 1);
    CHECK(double(cf3.magnitude(*f5)) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("closed form equals enumeration exactly, exhaustive and random") {
    // exhaustive: all forms and all linear forms on F_3^2, value-level equality
    auto f3 = Field::make(3, 1);
    for_all_forms(f3, 2, [&](const QuadraticForm& Q) {
        MultiPoly qp = Q.to_poly();
        for_all_points(*f3, 2, [&](const std::vector<elem>& l) {
            auto cf = closed_form_sum(Q, l, true);
            // enumerate sum psi(Q(v) + l(v)) directly
            CycInt direct(3);
            for_all_points(*f3, 2, [&](const std::vector<elem>& v) {
                elem val = Q.eval(v);
                for (int i = 0; i < 2; ++i) val = f3->add(val, f3->mul(l[i], v[i]));
                ++direct[f3->char_class(val)];
            });
            if (!cf.value->equals(direct)) {
                CAPTURE(qp.format());
                CHECK(false);
            }
            bool enumerated_zero = direct.is_zero();
            if (enumerated_zero != cf.zero) CHECK(false);
            if (!cf.zero) {
                long double lhs = cf.magnitude(*f3), rhs = direct.magnitude();
                if (std::abs(double(lhs - rhs)) > 1e-6 * double(rhs)) CHECK(false);
            }
        });
    });

    // extension field: closed-form values stay exact over F_9
    auto f9 = Field::make(3, 2);
    std::mt19937_64 rng9(161803);
    for (int trial = 0; trial < 30; ++trial) {
        auto Q = random_form(f9, 3, rng9);
        std::vector<elem> l(3);
        for (auto& c : l) c = elem(uniform_below(rng9, 9));
        auto cf = closed_form_sum(Q, l, true);
        CycInt direct(3);
        for_all_points(*f9, 3, [&](const std::vector<elem>& v) {
            elem val = Q.eval(v);
            for (int i = 0; i < 3; ++i) val = f9->add(val, f9->mul(l[i], v[i]));
            ++direct[f9->char_class(val)];
        });
        CHECK(cf.value->equals(direct));
    }

    // random forms with random linear parts over p in {3,5,7}
    std::mt19937_64 rng(2025);
    for (auto p : {3u, 5u, 7u}) {
        auto f = Field::make(p, 1);
        for (int trial = 0; trial < 40; ++trial) {
            std::uint32_t n = 1 + std::uint32_t(uniform_below(rng, 4));
            auto Q = random_form(f, n, rng);
            std::vector<elem> l(n);
            for (auto& c : l) c = elem(uniform_below(rng, p));
            auto cf = closed_form_sum(Q, l, true);
            CycInt direct(p);
            for_all_points(*f, n, [&](const std::vector<elem>& v) {
                elem val = Q.eval(v);
                for (std::uint32_t i = 0; i < n; ++i) val = f->add(val, f->mul(l[i], v[i]));
                ++direct[f->char_class(val)];
            });
            CHECK(cf.value->equals(direct));
        }
    }
}

TEST_CASE("quadratic bias law: b_n = rank at every level") {
    auto f3 = Field::make(3, 1);
    auto f5 = Field::make(5, 1);

    auto qb1 = quadratic_bias(form_from_text(f3, 2, "x1*x2"), 1);
    CHECK(qb1.rank == 2);
    CHECK(qb1.triple.b == doctest::Approx(2.0));
    for (std::uint32_t n : {1u, 2u, 3u}) {
        auto enumd = bias(count_vector(parse_poly("x1*x2", f3, 2), n));
        CHECK(enumd.b == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(quadratic_bias(form_from_text(f3, 2, "x1*x2"), n).triple.b == 2.0);
    }

    auto split4 = form_from_text(f5, 4, "x1*x3 + x2*x4");
    auto qb2 = quadratic_bias(split4, 1);
    CHECK(qb2.rank == 4);
    CHECK(qb2.triple.magnitude == doctest::Approx(25.0));
    auto enum4 = bias(count_vector(split4.to_poly(), 1));
    CHECK(enum4.magnitude == doctest::Approx(25.0).epsilon(1e-9));

    auto qb3 = quadratic_bias(form_from_text(f5, 1, "x1^2"), 2);
    CHECK(qb3.triple.b == doctest::Approx(1.0));
    auto enum3 = bias(count_vector(parse_poly("x1^2", f5, 1), 2));
    CHECK(enum3.b == doctest::Approx(1.0).epsilon(1e-9));

    // extension base field: the law is b_n = rank there too
    auto f9 = Field::make(3, 2);
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 6; ++trial) {
        QuadraticForm Q(f9, 2);
        for (std::uint32_t i = 0; i < 2; ++i)
            for (std::uint32_t j = i; j < 2; ++j) Q.set_coeff(i, j, elem(uniform_below(rng, 9)));
        auto qb = quadratic_bias(Q, 1);
        auto en = bias(count_vector(Q.to_poly(), 1));
        if (qb.rank == 0) {
            CHECK(en.b == doctest::Approx(0.0));
        } else {
            CHECK(en.b == doctest::Approx(double(qb.rank)).epsilon(1e-9));
        }
        auto en2 = bias(count_vector(Q.to_poly(), 2));
        if (qb.rank > 0) CHECK(en2.b == doctest::Approx(double(qb.rank)).epsilon(1e-9));
    }
}

TEST_CASE("even characteristic is rejected") {
    // Field::make(2, ...) already throws, so exercise the guard directly
    auto f5 = Field::make(5, 1);
    CHECK_NOTHROW(QuadraticForm(f5, 2));
}

}  // TEST_SUITE
