#include "doctest.h"

#include <cmath>

#include "ffb/experiments.hpp"
#include "oracle.hpp"

using namespace ffb;

TEST_SUITE("experiments") {

TEST_CASE("probe finds the first level with a large sum") {
    auto f5 = Field::make(5, 1);

    auto rep = probe_min_level(parse_poly("x1*x2*x3", f5, 3), 4, 1.0);
    CHECK(rep.pass);
    CHECK(rep.measurements["found_n"] == 1);
    CHECK(rep.measurements["magnitude_at_found"] == doctest::Approx(45.0));

    auto rep0 = probe_min_level(MultiPoly::zero(f5, 2), 2, 1.0);
    CHECK(rep0.pass);
    CHECK(rep0.measurements["found_n"] == 1);
    CHECK(rep0.measurements["magnitude_at_found"] == doctest::Approx(25.0));

    // x1^3 over F_5 has a_1 = 0; the probe must move to level 2
    auto rep3 = probe_min_level(parse_poly("x1^3", f5, 1), 4, 1.0);
    CHECK(rep3.pass);
    CHECK(rep3.measurements["found_n"] == 2);
}

TEST_CASE("product experiment: worked example and identities") {
    auto f5 = Field::make(5, 1);
    auto rep = product_fiber_experiment(parse_poly("x1", f5, 3), parse_poly("x2*x3", f5, 3));
    CHECK(rep.pass);
    CHECK(rep.measurements["B"] == 61);  // q^3 - (q-1)^3
    CHECK(rep.measurements["A"] == 16);
    CHECK(rep.measurements["a1"] == 45.0);
    CHECK(rep.measurements["fibers_equal"] == true);
    CHECK(rep.measurements["inclusion_exclusion_exact"] == true);
    CHECK(rep.measurements["count_vector_shape"] == true);

    // gcd violations
    try {
        product_fiber_experiment(parse_poly("x1", f5, 2), parse_poly("x2", f5, 2));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GcdViolation);  // d = 2, q - 1 = 4
    }
    auto f7 = Field::make(7, 1);
    try {
        product_fiber_experiment(parse_poly("x1 + x2", f7, 2), parse_poly("x1*x2", f7, 2));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GcdViolation);  // d = 3, q - 1 = 6
    }
}

TEST_CASE("quartic square scan") {
    auto f5 = Field::make(5, 1);
    auto rep = quartic_square_scan(f5, {2, 4});
    CHECK(rep.pass);
    auto rows = rep.measurements["rows"];
    REQUIRE(rows.size() == 2);

    // N = 2: counts (9, 8, 0, 0, 8), |a_1| = 5 + 4 sqrt(5)
    CHECK(rows[0]["counts"] == std::vector<std::uint64_t>{9, 8, 0, 0, 8});
    CHECK(rows[0]["magnitude"] == doctest::Approx(5.0 + 4.0 * std::sqrt(5.0)).epsilon(1e-9));
    CHECK(rows[0]["closed_formula_matches"] == true);
    CHECK(rows[0]["fiber_recomposition_matches"] == true);
    CHECK(rep.measurements["assumption_violated"] == false);

    // N = 4: the measured exponent sits near N - 1/2, not N/2
    double measured = rows[1]["measured_exponent"];
    CHECK(std::abs(measured - 3.5) < 0.1);
    CHECK(rows[1]["closed_formula_matches"] == true);

    // F_3 runs too (degree 4 is not below p = 3), flagged not rejected
    auto f3 = Field::make(3, 1);
    auto rep3 = quartic_square_scan(f3, {2});
    CHECK(rep3.pass);
    CHECK(rep3.measurements["assumption_violated"] == true);
    CHECK(rep3.measurements["rows"][0]["counts"] == std::vector<std::uint64_t>{5, 4, 0});
    CHECK(rep3.measurements["rows"][0]["magnitude"] ==
          doctest::Approx(std::sqrt(21.0)).epsilon(1e-9));
    CHECK(rep3.measurements["rows"][0]["closed_formula_matches"] == true);
}

TEST_CASE("low rank bias scan asserts finiteness only") {
    auto f5 = Field::make(5, 1);
    ExperimentConfig cfg;
    cfg.seed = 7;
    cfg.budget = 1'000'000;
    auto rep = low_rank_bias_scan(f5, 4, 5, 2, cfg);
    CHECK(rep.pass);
    auto per_r = rep.measurements["per_r"];
    REQUIRE(per_r.size() == 2);
    CHECK(per_r[0]["finite"] == 5);
    CHECK(per_r[1]["finite"] == 5);
    CHECK(per_r[0]["max_min_b"].is_number());

    // bit-identical reruns with the same seed
    auto again = low_rank_bias_scan(f5, 4, 5, 2, cfg);
    CHECK(rep.measurements.dump() == again.measurements.dump());

    ExperimentConfig other = cfg;
    other.seed = 8;
    auto different = low_rank_bias_scan(f5, 4, 5, 2, other);
    CHECK(rep.measurements.dump() != different.measurements.dump());
}

TEST_CASE("suite runner plumbing") {
    ExperimentConfig cfg;
    CHECK(run_suites({}, cfg).empty());

    auto one = run_suites({"gauss-magnitude"}, cfg);
    REQUIRE(one.size() == 1);
    CHECK(one[0].id == "gauss-magnitude");
    CHECK(one[0].pass);

    // unknown suite becomes a recorded failure, not an abort
    auto bad = run_suites({"gauss-magnitude", "no-such-suite"}, cfg);
    REQUIRE(bad.size() == 2);
    CHECK(bad[0].pass);
    CHECK(!bad[1].pass);
    CHECK(bad[1].details.contains("error"));

    CHECK(acceptance_suite_ids().size() == 10);
}

TEST_CASE("seed derivation is deterministic and spread out") {
    CHECK(derive_seed(0, 0) == derive_seed(0, 0));
    CHECK(derive_seed(0, 0) != derive_seed(0, 1));
    CHECK(derive_seed(0, 0) != derive_seed(1, 0));
}

}  // TEST_SUITE
