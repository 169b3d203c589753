#include "doctest.h"

#include <cmath>

#include "ffb/char_sum.hpp"
#include "oracle.hpp"

using namespace ffb;
using ffb::testing::brute_counts;
using ffb::testing::random_poly;

TEST_SUITE("char_sum") {

TEST_CASE("count vectors match frozen values and the brute oracle") {
    auto f3 = Field::make(3, 1);
    auto f5 = Field::make(5, 1);

    // zero polynomial in one variable over F_3 at level 2: all 9 points at class 0
    auto zero = MultiPoly::zero(f3, 1);
    auto cs0 = count_vector(zero, 2);
    CHECK(cs0.counts == std::vector<std::uint64_t>{9, 0, 0});

    // x1*x2 over F_3: (5,2,2), |a| = 3
    auto xy = parse_poly("x1*x2", f3, 2);
    auto cs1 = count_vector(xy, 1);
    CHECK(cs1.counts == std::vector<std::uint64_t>{5, 2, 2});
    CHECK(std::abs(double(cs1.magnitude()) - 3.0) < 1e-9);
    CHECK(cs1.counts == brute_counts(xy, 1));

    // x1^2 over F_5: (1,2,0,0,2), |a| = sqrt(5)
    auto sq = parse_poly("x1^2", f5, 1);
    auto cs2 = count_vector(sq, 1);
    CHECK(cs2.counts == std::vector<std::uint64_t>{1, 2, 0, 0, 2});
    CHECK(std::abs(double(cs2.magnitude()) - 2.2360679774997896) < 1e-9);

    // random polynomials against the brute oracle, levels 1 and 2
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 15; ++trial) {
        auto field = (trial % 2) ? f5 : f3;
        auto P = random_poly(field, 2, 3, 4, rng);
        for (std::uint32_t level : {1u, 2u}) {
            auto kernel = count_vector(P, level);
            auto brute = brute_counts(P, level);
            if (kernel.counts != brute) {
                CAPTURE(P.format());
                CHECK(kernel.counts == brute);
            }
            CHECK(kernel.domain_size() ==
                  std::uint64_t(std::pow(double(field->q()), double(2 * level)) + 0.5));
        }
    }
}

TEST_CASE("bias values") {
    auto f3 = Field::make(3, 1);
    auto f5 = Field::make(5, 1);

    auto b0 = bias(count_vector(MultiPoly::zero(f3, 1), 2));
    CHECK(b0.btilde == doctest::Approx(1.0));
    CHECK(b0.b == doctest::Approx(0.0));

    auto b1 = bias(count_vector(parse_poly("x1*x2", f3, 2), 1));
    CHECK(b1.btilde == doctest::Approx(1.0 / 3.0));
    CHECK(b1.b == doctest::Approx(2.0));

    // x1*x2*x3 over F_5: a_1 = 45, btilde = 0.36, b = -2 log_5(0.36)
    auto cs = count_vector(parse_poly("x1*x2*x3", f5, 3), 1);
    auto b2 = bias(cs);
    CHECK(b2.magnitude == doctest::Approx(45.0).epsilon(1e-9));
    CHECK(b2.btilde == doctest::Approx(0.36).epsilon(1e-9));
    CHECK(b2.b == doctest::Approx(1.269575222056059).epsilon(1e-9));

    // exact zero: x1^3 over F_5 has a_1 = 0 (cubing permutes F_5), b = infinity
    auto zcs = count_vector(parse_poly("x1^3", f5, 1), 1);
    CHECK(zcs.exact_zero());
    auto bz = bias(zcs);
    CHECK(bz.b_infinite);
    CHECK(bz.magnitude == 0.0);
}

TEST_CASE("bias profile") {
    auto f3 = Field::make(3, 1);
    auto f5 = Field::make(5, 1);

    auto prof = bias_profile(parse_poly("x1*x2", f3, 2), 3);
    REQUIRE(prof.entries.size() == 3);
    for (const auto& e : prof.entries) CHECK(e.triple.b == doctest::Approx(2.0));
    CHECK(prof.min_b == doctest::Approx(2.0));
    CHECK(!prof.truncated_at);

    auto pz = bias_profile(MultiPoly::zero(f3, 1), 3);
    for (const auto& e : pz.entries) CHECK(e.triple.b == doctest::Approx(0.0));

    auto psq = bias_profile(parse_poly("x1^2", f5, 1), 2);
    REQUIRE(psq.entries.size() == 2);
    CHECK(psq.entries[0].triple.b == doctest::Approx(1.0));
    CHECK(psq.entries[1].triple.b == doctest::Approx(1.0));

    // truncation marker instead of an error when a level exceeds the budget
    EnumOptions tight;
    tight.budget = 80;  // level 1 of 3^4 = 81 already too big at n = 2... allows n = 1? 3^4=81 > 80
    auto trunc = bias_profile(parse_poly("x1*x2", f3, 4), 3, tight);
    CHECK(trunc.entries.empty());
    CHECK(trunc.truncated_at == 1);

    EnumOptions mid;
    mid.budget = 100;
    auto part = bias_profile(parse_poly("x1*x2", f3, 2), 3, mid);
    CHECK(part.entries.size() == 2);  // 9 and 81 fit, 729 does not
    CHECK(part.truncated_at == 3);
}

TEST_CASE("restricted counts") {
    auto f5 = Field::make(5, 1);
    auto P = parse_poly("x1*x2*x3", f5, 3);

    // slice x1 = 0: P vanishes, all 25 points at class 0
    auto s0 = restricted_count(P, {{{1, 0, 0}, 0}}, 1);
    CHECK(s0.counts == std::vector<std::uint64_t>{25, 0, 0, 0, 0});

    // slice x1 = 1: sum over x2 x3 of psi(x2 x3) = q = 5
    auto s1 = restricted_count(P, {{{1, 0, 0}, 1}}, 1);
    CHECK(std::abs(double(s1.magnitude()) - 5.0) < 1e-9);
    CHECK(s1.domain_size() == 25);

    // partition identity: summing over all fibers of x1 recovers the full count
    auto full = count_vector(P, 1);
    std::vector<std::uint64_t> acc(5, 0);
    for (elem c = 0; c < 5; ++c) {
        auto part = restricted_count(P, {{{1, 0, 0}, c}}, 1);
        for (std::size_t j = 0; j < 5; ++j) acc[j] += part.counts[j];
    }
    CHECK(acc == full.counts);

    // partition identity for a random form and a random polynomial over F_3
    auto f3 = Field::make(3, 1);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        auto Q = random_poly(f3, 3, 3, 5, rng);
        std::vector<elem> form{elem(1 + ffb::uniform_below(rng, 2)),
                               elem(ffb::uniform_below(rng, 3)),
                               elem(ffb::uniform_below(rng, 3))};
        auto whole = count_vector(Q, 1);
        std::vector<std::uint64_t> sum(3, 0);
        for (elem c = 0; c < 3; ++c) {
            auto part = restricted_count(Q, {{form, c}}, 1);
            for (std::size_t j = 0; j < 3; ++j) sum[j] += part.counts[j];
        }
        CHECK(sum == whole.counts);
    }

    // inconsistent constraints: x1 = 0 and x1 = 1
    CHECK_THROWS_AS(restricted_count(P, {{{1, 0, 0}, 0}, {{1, 0, 0}, 1}}, 1), Error);

    // at level 2 the fibers range over all q^2 values of the top field
    auto Q2 = parse_poly("x1*x2*x3 + x1^2*x3", f3, 3);
    auto whole2 = count_vector(Q2, 2);
    std::vector<std::uint64_t> acc2(3, 0);
    for (elem c = 0; c < 9; ++c) {
        auto part = restricted_count(Q2, {{{1, 2, 0}, c}}, 2);
        CHECK(part.domain_size() == 81);
        for (std::size_t j = 0; j < 3; ++j) acc2[j] += part.counts[j];
    }
    CHECK(acc2 == whole2.counts);
}

TEST_CASE("affine invariance and pullback normalization") {
    auto f3 = Field::make(3, 1);
    std::mt19937_64 rng(404);

    for (int trial = 0; trial < 10; ++trial) {
        auto P = random_poly(f3, 3, 3, 5, rng);
        // random invertible matrix by rejection
        Mat A(f3, 3, 3);
        do {
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) A.at(i, j) = elem(ffb::uniform_below(rng, 3));
        } while (A.rank() != 3);
        CHECK(count_vector(P.linear_substitute(A), 1).counts == count_vector(P, 1).counts);

        // adding a constant shifts classes cyclically, preserving magnitude
        auto shifted = P + MultiPoly::constant(f3, 3, 1);
        auto c1 = count_vector(P, 1);
        auto c2 = count_vector(shifted, 1);
        CHECK(std::abs(double(c1.magnitude() - c2.magnitude())) < 1e-9);
    }

    // surjective pullback: Q on k^2 pulled back to k^3 scales counts by q
    auto Q = parse_poly("x1*x2 + x2^2", f3, 2);
    Mat proj(f3, 2, 3);  // f(v) = (v1, v2); substitution shape is nvars(Q) x 3
    proj.at(0, 0) = 1;
    proj.at(1, 1) = 1;
    auto pulled = Q.linear_substitute(proj);
    auto bq = bias(count_vector(Q, 1));
    auto bp = bias(count_vector(pulled, 1));
    CHECK(bq.btilde == doctest::Approx(bp.btilde).epsilon(1e-12));
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(count_vector(pulled, 1).counts[j] == 3 * count_vector(Q, 1).counts[j]);
}

TEST_CASE("determinism under partitioning and collapse") {
    auto f5 = Field::make(5, 1);
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 6; ++trial) {
        auto P = random_poly(f5, 4, 3, 6, rng);
        EnumOptions base;
        auto reference = count_vector(P, 1, base).counts;
        for (std::uint32_t jobs : {2u, 3u, 4u, 8u}) {
            EnumOptions opt;
            opt.jobs = jobs;
            CHECK(count_vector(P, 1, opt).counts == reference);
        }
        EnumOptions raw;
        raw.collapse_constants = false;
        CHECK(count_vector(P, 1, raw).counts == reference);
    }
}

TEST_CASE("budget enforcement") {
    auto f5 = Field::make(5, 1);
    auto P = parse_poly("x1*x2*x3", f5, 3);
    EnumOptions opt;
    opt.budget = 100;
    try {
        count_vector(P, 1, opt);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
}

TEST_CASE("value histograms") {
    auto f5 = Field::make(5, 1);
    auto P = parse_poly("x1*x2", f5, 2);
    auto hist = value_histogram(P);
    CHECK(hist == std::vector<std::uint64_t>{9, 4, 4, 4, 4});

    auto Q = parse_poly("x1", f5, 2);
    auto joint = joint_value_histogram(Q, P);
    // check marginals and one entry by hand: x1 = 0 forces x1 x2 = 0
    std::uint64_t y0 = 0;
    for (elem v = 0; v < 5; ++v) y0 += joint[0 * 5 + v];
    CHECK(y0 == 5);
    CHECK(joint[0 * 5 + 0] == 5);
    CHECK(joint[1 * 5 + 0] == 1);  // x1 = 1, x2 = 0
    std::uint64_t total = 0;
    for (auto c : joint) total += c;
    CHECK(total == 25);

    // joint histogram consistency with the direct product histogram
    auto PR = Q * P;
    auto direct = value_histogram(PR);
    std::vector<std::uint64_t> recomposed(5, 0);
    for (elem a = 0; a < 5; ++a)
        for (elem b = 0; b < 5; ++b) recomposed[f5->mul(a, b)] += joint[a * 5 + b];
    CHECK(recomposed == direct);
}

TEST_CASE("bias triple invariants") {
    // btilde in [0, 1]; b >= 0 with b = 0 iff |a_n| = q^{n dim}
    auto f3 = Field::make(3, 1);
    auto f5 = Field::make(5, 1);
    std::mt19937_64 rng(90210);
    for (int trial = 0; trial < 40; ++trial) {
        auto field = (trial % 2) ? f5 : f3;
        auto P = random_poly(field, 3, 3, 5, rng);
        auto cs = count_vector(P, 1 + trial % 2);
        auto t = bias(cs);
        if (t.b_infinite) {
            CHECK(cs.exact_zero());
            continue;
        }
        CHECK(t.btilde >= 0.0);
        CHECK(t.btilde <= 1.0 + 1e-12);
        CHECK(t.b >= 0.0);
        bool full = std::abs(t.btilde - 1.0) < 1e-12;
        bool zero_bias = t.b < 1e-9;
        CHECK(full == zero_bias);
    }
}

TEST_CASE("magnitude error bound is reported") {
    auto f3 = Field::make(3, 1);
    auto cs = count_vector(parse_poly("x1*x2", f3, 2), 1);
    CHECK(double(cs.magnitude_error_bound()) == doctest::Approx(9.0 * std::pow(2.0, -45)));
}

}  // TEST_SUITE
