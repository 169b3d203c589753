#include "doctest.h"

#include <set>

#include "ffb/field.hpp"

using namespace ffb;

TEST_SUITE("field_tower") {

TEST_CASE("construction picks the smallest irreducible modulus") {
    auto f3 = Field::make(3, 1);
    CHECK(f3->q() == 3);
    CHECK(f3->modulus() == std::vector<std::uint32_t>{0, 1});  // x

    auto f9 = Field::make(3, 2);
    CHECK(f9->q() == 9);
    CHECK(f9->modulus() == std::vector<std::uint32_t>{1, 0, 1});  // x^2 + 1

    // independent scan: every monic quadratic before x^2+1 in low-degree-first
    // order has a root over F_3
    for (std::uint32_t c1 = 0; c1 < 3; ++c1) {
        bool has_root = false;
        for (std::uint32_t x = 0; x < 3; ++x)
            if ((0 + c1 * x + x * x) % 3 == 0) has_root = true;
        CHECK(has_root);
    }
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(Field::make(2, 1), Error);
    CHECK_THROWS_AS(Field::make(9, 1), Error);  // not prime
    CHECK_THROWS_AS(Field::make(1, 1), Error);
    // x^2 + 1 = (x+2)(x+3) over F_5 since 2^2 = -1
    try {
        Field::make(5, 2, {1, 0, 1});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ReducibleModulus);
    }
    try {
        Field::make(2, 3);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EvenCharacteristic);
    }
    CHECK_NOTHROW(Field::make(5, 2, {2, 0, 1}));  // x^2 + 2 is irreducible over F_5
}

TEST_CASE("element arithmetic basics") {
    auto f5 = Field::make(5, 1);
    CHECK(f5->inv(2) == 3);  // 2*3 = 6 = 1
    CHECK(f5->mul(2, f5->inv(2)) == 1);
    CHECK_THROWS_AS(f5->inv(0), Error);

    auto f9 = Field::make(3, 2);
    const elem alpha = 3;  // enumeration index of the power-basis generator
    CHECK(f9->mul(alpha, alpha) == 2);  // alpha^2 = -1 = 2
    for (elem x = 1; x < 9; ++x) CHECK(f9->pow(x, 8) == 1);
    CHECK(f9->pow(0, 0) == 1);
    CHECK(f9->pow(0, 5) == 0);
}

TEST_CASE("FieldElement wrapper enforces spec identity") {
    auto f5 = Field::make(5, 1);
    auto f7 = Field::make(7, 1);
    FieldElement a(f5, 2), b(f5, 4), c(f7, 1);
    CHECK((a * b).value() == 3);
    CHECK((a + b).value() == 1);
    CHECK_THROWS_AS((void)(a + c), Error);
    auto f5b = Field::make(5, 1);
    FieldElement d(f5b, 3);
    CHECK((a + d).value() == 0);  // same spec, different instance, still compatible
}

TEST_CASE("field axioms exhaustively for q <= 121") {
    for (auto [p, m] : {std::pair<int, int>{3, 1}, {5, 1}, {7, 1}, {11, 1}, {13, 1},
                        {3, 2}, {5, 2}, {7, 2}, {3, 3}, {3, 4}, {11, 2}}) {
        auto f = Field::make(p, m);
        const elem q = f->q();
        REQUIRE(q <= 121);
        for (elem a = 0; a < q; ++a) {
            CHECK(f->add(a, 0) == a);
            CHECK(f->mul(a, 1) == a);
            CHECK(f->add(a, f->neg(a)) == 0);
            if (a) CHECK(f->mul(a, f->inv(a)) == 1);
            for (elem b = 0; b < q; ++b) {
                if (f->add(a, b) != f->add(b, a)) CHECK(false);
                if (f->mul(a, b) != f->mul(b, a)) CHECK(false);
            }
        }
        // associativity + distributivity on the full cube
        for (elem a = 0; a < q; ++a)
            for (elem b = 0; b < q; ++b)
                for (elem c = 0; c < q; ++c) {
                    if (f->add(f->add(a, b), c) != f->add(a, f->add(b, c))) CHECK(false);
                    if (f->mul(f->mul(a, b), c) != f->mul(a, f->mul(b, c))) CHECK(false);
                    if (f->mul(a, f->add(b, c)) != f->add(f->mul(a, b), f->mul(a, c))) CHECK(false);
                }
    }
}

TEST_CASE("frobenius is additive and fixes exactly the prime subfield") {
    for (auto [p, m] : {std::pair<int, int>{3, 2}, {3, 3}, {5, 2}, {7, 2}, {3, 4}, {11, 2}}) {
        auto f = Field::make(p, m);
        std::size_t fixed = 0;
        for (elem a = 0; a < f->q(); ++a) {
            if (f->frobenius(a) == a) ++fixed;
            for (elem b = 0; b < f->q(); ++b)
                if (f->frobenius(f->add(a, b)) != f->add(f->frobenius(a), f->frobenius(b))) CHECK(false);
        }
        CHECK(fixed == f->p());
    }
}

TEST_CASE("enumeration order") {
    auto f3 = Field::make(3, 1);
    CHECK(f3->coeffs(0) == std::vector<std::uint32_t>{0});
    CHECK(f3->coeffs(2) == std::vector<std::uint32_t>{2});

    // F_9: 0, 1, 2, a, 1+a, 2+a, 2a, 1+2a, 2+2a
    auto f9 = Field::make(3, 2);
    CHECK(f9->coeffs(3) == std::vector<std::uint32_t>{0, 1});
    CHECK(f9->coeffs(4) == std::vector<std::uint32_t>{1, 1});
    CHECK(f9->coeffs(6) == std::vector<std::uint32_t>{0, 2});
    CHECK(f9->coeffs(8) == std::vector<std::uint32_t>{2, 2});
    CHECK(f9->from_coeffs(std::vector<std::uint32_t>{2, 1}) == 5);

    auto f25 = Field::make(5, 2);
    std::set<std::vector<std::uint32_t>> seen;
    for (elem a = 0; a < f25->q(); ++a) seen.insert(f25->coeffs(a));
    CHECK(seen.size() == 25);
}

TEST_CASE("towers and embeddings") {
    auto f3 = Field::make(3, 1);

    auto t1 = build_tower(f3, 1);
    CHECK(t1.top() == f3);
    for (elem x = 0; x < 3; ++x) CHECK(t1.embed(x) == x);

    auto t2 = build_tower(f3, 2);
    CHECK(t2.top()->q() == 9);
    for (elem x = 0; x < 3; ++x) CHECK(t2.embed(x) == x);  // prime subfield is fixed

    // F_9 -> F_81: the image of alpha is a root of x^2+1, so its square embeds 2
    auto f9 = Field::make(3, 2);
    auto t = build_tower(f9, 2);
    CHECK(t.top()->q() == 81);
    const Field& f81 = *t.top();
    elem ga = t.generator_image();
    CHECK(f81.mul(ga, ga) == t.embed(2));
    // injective ring homomorphism on all of F_9
    for (elem x = 0; x < 9; ++x)
        for (elem y = 0; y < 9; ++y) {
            CHECK(t.embed(f9->mul(x, y)) == f81.mul(t.embed(x), t.embed(y)));
            CHECK(t.embed(f9->add(x, y)) == f81.add(t.embed(x), t.embed(y)));
        }
    std::set<elem> image;
    for (elem x = 0; x < 9; ++x) image.insert(t.embed(x));
    CHECK(image.size() == 9);
}

TEST_CASE("traces") {
    auto f3 = Field::make(3, 1);
    auto t92 = build_tower(f3, 2);
    const elem alpha = 3;
    CHECK(t92.trace_to_base(t92.top()->from_int(1)) == 2);  // 1 + 1
    CHECK(t92.trace_to_base(alpha) == 0);                   // alpha + alpha^3 = 0

    // transitivity: tr_{81/3} = tr_{9/3} o tr_{81/9} pointwise
    auto f9 = Field::make(3, 2);
    auto t9 = build_tower(f9, 2);   // F_81 / F_9
    auto t81 = build_tower(f3, 4);  // F_81 / F_3, same default field
    REQUIRE(t9.top()->same_spec(*t81.top()));
    for (elem x = 0; x < 81; ++x) {
        elem via = t92.trace_to_base(t9.trace_to_base(x));
        // direct trace to F_3 = char class since the base is prime
        CHECK(via == t81.top()->char_class(x));
    }

    // tr_{k_n/k} is k-linear and surjective for q^n <= 729
    for (auto [p, m, n] : {std::tuple<int, int, int>{3, 1, 2}, {3, 1, 3}, {3, 2, 2}, {5, 1, 2}, {3, 1, 6}}) {
        auto base = Field::make(p, m);
        auto tw = build_tower(base, n);
        const Field& T = *tw.top();
        REQUIRE(T.q() <= 729);
        std::set<elem> values;
        for (elem x = 0; x < T.q(); ++x) values.insert(tw.trace_to_base(x));
        CHECK(values.size() == base->q());  // surjective
        for (elem x = 0; x < T.q(); ++x)
            for (elem c = 0; c < base->q(); ++c) {
                elem lhs = tw.trace_to_base(T.mul(tw.embed(c), x));
                elem rhs = base->mul(c, tw.trace_to_base(x));
                if (lhs != rhs) CHECK(false);
            }
    }
}

TEST_CASE("character classes") {
    auto f5 = Field::make(5, 1);
    CHECK(f5->char_class(3) == 3);  // prime field: trace is the identity

    auto f9 = Field::make(3, 2);
    CHECK(f9->char_class(3) == 0);  // class(alpha) = 0
    CHECK(f9->char_class(1) == 2);

    // additivity mod p
    for (auto f : {Field::make(3, 2), Field::make(5, 2), Field::make(7, 1)}) {
        for (elem a = 0; a < f->q(); ++a)
            for (elem b = 0; b < f->q(); ++b)
                if (f->char_class(f->add(a, b)) != (f->char_class(a) + f->char_class(b)) % f->p()) CHECK(false);
    }

    // compatibility along towers: class(embed(x)) = n * class(x) mod p
    auto f3 = Field::make(3, 1);
    for (std::uint32_t n : {2u, 3u, 4u}) {
        auto t = build_tower(f3, n);
        for (elem x = 0; x < 3; ++x)
            CHECK(t.top()->char_class(t.embed(x)) == (n * f3->char_class(x)) % 3);
    }
}

TEST_CASE("squares, witnesses, generators") {
    auto f5 = Field::make(5, 1);
    CHECK(f5->is_square(4));
    CHECK(f5->sqrt(4) == 2);
    CHECK(f5->nonsquare_witness() == 2);
    CHECK(f5->generator() == 2);

    auto f9 = Field::make(3, 2);
    // squares in F_9 computed by brute force agree with the table
    std::set<elem> squares;
    for (elem y = 0; y < 9; ++y) squares.insert(f9->mul(y, y));
    for (elem x = 0; x < 9; ++x) CHECK(f9->is_square(x) == (squares.count(x) > 0));
    CHECK(!f9->is_square(f9->nonsquare_witness()));
    CHECK(f9->nonsquare_witness() == 4);  // 1+a is the first non-square in enumeration order
}

TEST_CASE("descriptor parsing round trip") {
    CHECK(parse_field_descriptor("5")->descriptor() == "5");
    CHECK(parse_field_descriptor("3^2")->descriptor() == "3^2");
    auto f = parse_field_descriptor("5^2:2,0,1");
    CHECK(f->modulus() == std::vector<std::uint32_t>{2, 0, 1});
    CHECK_THROWS_AS(parse_field_descriptor("abc"), Error);
    CHECK_THROWS_AS(parse_field_descriptor("5^2:1,0,1"), Error);  // reducible
}

}  // TEST_SUITE
