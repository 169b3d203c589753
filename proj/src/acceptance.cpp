// The verification suites behind `ffbias verify` and the acceptance binary.
// Each suite pins its tolerances in code; identities are exact integer
// comparisons unless a tolerance is stated.

#include <chrono>
#include <cmath>
#include <functional>

#include "ffb/cli.hpp"
#include "ffb/experiments.hpp"
#include "ffb/jsonio.hpp"
#include "ffb/quadratic.hpp"
#include "ffb/rank_search.hpp"

namespace ffb {

using nlohmann::json;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

MultiPoly linear_form_poly(const FieldPtr& f, const std::vector<elem>& l) {
    std::vector<Term> ts;
    for (std::uint32_t v = 0; v < l.size(); ++v)
        if (l[v]) {
            Term t;
            t.exps.assign(std::uint32_t(l.size()), 0);
            t.exps[v] = 1;
            t.coeff = l[v];
            ts.push_back(std::move(t));
        }
    return MultiPoly::from_terms(f, std::uint32_t(l.size()), std::move(ts));
}

// walks all packed coefficient tuples of quadratic forms on F^n
void for_all_quadratic_forms(const FieldPtr& f, std::uint32_t n,
                             const std::function<void(const QuadraticForm&)>& fn) {
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

// ---------------------------------------------------------------------------
// criterion 1

SuiteResult quadratic_oracle_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "quadratic-oracle";
    std::uint64_t forms = 0, zero_cases = 0;
    double max_rel_err = 0;
    bool ok = true;

    auto check_pair = [&](const QuadraticForm& Q, const std::vector<elem>& l) {
        ++forms;
        auto cf = closed_form_sum(Q, l);
        MultiPoly probe = Q.to_poly() + linear_form_poly(Q.field(), l);
        EnumOptions opt;
        opt.budget = cfg.budget;
        auto cs = count_vector(probe, 1, opt);
        bool enumerated_zero = cs.exact_zero();
        if (enumerated_zero != cf.zero) {
            ok = false;
            return;
        }
        if (cf.zero) {
            ++zero_cases;
            return;
        }
        long double closed = cf.magnitude(*Q.field());
        long double brute = cs.magnitude();
        double rel = double(std::abs(closed - brute) / closed);
        max_rel_err = std::max(max_rel_err, rel);
        if (rel > 1e-6) ok = false;
    };

    auto f3 = Field::make(3, 1);
    for (std::uint32_t n : {1u, 2u, 3u}) {
        for_all_quadratic_forms(f3, n, [&](const QuadraticForm& Q) {
            if (n <= 2) {
                // exhaustive linear parts
                std::vector<elem> l(n, 0);
                while (true) {
                    check_pair(Q, l);
                    std::uint32_t i = 0;
                    while (i < n && ++l[i] == 3) l[i++] = 0;
                    if (i == n) break;
                }
            } else {
                std::mt19937_64 rng(derive_seed(cfg.seed, forms));
                check_pair(Q, std::vector<elem>(n, 0));
                for (int k = 0; k < 3; ++k) {
                    std::vector<elem> l(n);
                    for (auto& c : l) c = elem(uniform_below(rng, 3));
                    check_pair(Q, l);
                }
            }
        });
    }

    std::uint64_t counter = 0;
    for (std::uint32_t p : {3u, 5u, 7u}) {
        auto f = Field::make(p, 1);
        for (std::uint32_t n = 1; n <= 5; ++n) {
            for (int s = 0; s < 500; ++s) {
                std::mt19937_64 rng(derive_seed(cfg.seed ^ 0xabcdef, counter++));
                QuadraticForm Q(f, n);
                for (std::uint32_t i = 0; i < n; ++i)
                    for (std::uint32_t j = i; j < n; ++j)
                        Q.set_coeff(i, j, elem(uniform_below(rng, p)));
                std::vector<elem> l(n);
                for (auto& c : l) c = elem(uniform_below(rng, p));
                check_pair(Q, l);
            }
        }
    }

    res.details = {{"pairs_tested", forms},
                   {"zero_cases", zero_cases},
                   {"max_relative_error", max_rel_err},
                   {"tolerance", 1e-6}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// criterion 2

SuiteResult gauss_magnitude_suite(const ExperimentConfig&) {
    SuiteResult res;
    res.id = "gauss-magnitude";
    bool ok = true;
    double max_err = 0;
    for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
        auto f = Field::make(p, 1);
        for (elem a = 1; a < p; ++a) {
            long double mag = gauss_sum(*f, a).magnitude();
            double err = double(std::abs(mag - std::sqrt((long double)p)));
            max_err = std::max(max_err, err);
            if (err > 1e-9) ok = false;
        }
    }
    res.details = {{"primes", {3, 5, 7, 11, 13, 17, 19, 23}},
                   {"max_abs_error", max_err},
                   {"tolerance", 1e-9}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// criterion 3

SuiteResult quadratic_bias_law_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "quadratic-bias-law";
    bool ok = true;
    json rows = json::array();
    for (std::uint32_t p : {3u, 5u}) {
        auto f = Field::make(p, 1);
        struct Case {
            const char* text;
            std::uint32_t nvars;
        };
        for (auto [text, nvars] : {Case{"x1^2", 1}, Case{"x1*x3 + x2*x4", 4}, Case{"x1*x2", 2}}) {
            auto P = parse_poly(text, f, nvars);
            auto Q = QuadraticForm::from_poly(P);
            std::uint32_t rank = radical(Q).rank;
            auto cf = closed_form_sum(Q, std::vector<elem>(nvars, 0));
            bool exponent_exact = cf.twice_exponent == int(2 * nvars) - int(rank);
            if (!exponent_exact) ok = false;
            for (std::uint32_t n = 1; n <= 3; ++n) {
                long double points = std::pow((long double)p, (long double)(n * nvars));
                if (points > 1e7) continue;
                auto qb = quadratic_bias(Q, n);
                bool closed_exact = qb.triple.b == double(rank) && qb.rank == rank;
                EnumOptions opt;
                opt.budget = cfg.budget;
                auto enumerated = bias(count_vector(P, n, opt));
                double err = std::abs(enumerated.b - double(rank));
                bool enum_ok = err <= 1e-6;
                if (!closed_exact || !enum_ok) ok = false;
                json row = {{"field", f->descriptor()}, {"poly", text},      {"n", n},
                            {"rank", rank},             {"b_closed", qb.triple.b},
                            {"b_enumerated", enumerated.b}};
                if (rank % 2 == 1)
                    row["odd_rank_note"] =
                        "literature value rank - 1/2 = " + std::to_string(rank - 0.5) +
                        " is recorded as a discrepancy; both routes give rank";
                rows.push_back(std::move(row));
            }
        }
    }
    res.details = {{"rows", rows}, {"tolerance", 1e-6}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// criterion 4

SuiteResult known_sums_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "known-sums";
    bool ok = true;
    EnumOptions opt;
    opt.budget = cfg.budget;
    json rows = json::array();

    for (std::uint32_t p : {3u, 5u, 7u}) {
        auto f = Field::make(p, 1);
        auto cs = count_vector(parse_poly("x1*x2", f, 2), 1, opt);
        bool exact = cs.as_cyc().equals(CycInt::integer(p, std::int64_t(p)));
        if (!exact) ok = false;
        rows.push_back({{"sum", "a1(x1*x2)"}, {"field", f->descriptor()}, {"equals_q", exact}});
    }

    auto f5 = Field::make(5, 1);
    auto c2 = count_vector(parse_poly("x1*x2*x3", f5, 3), 1, opt);
    bool exact45 = c2.as_cyc().equals(CycInt::integer(5, 45));
    if (!exact45) ok = false;
    rows.push_back({{"sum", "a1(x1*x2*x3)"}, {"field", "5"}, {"equals_45", exact45}});

    auto c3 = count_vector(parse_poly("x1^2*x2^2", f5, 2), 1, opt);
    bool quartic_counts = c3.counts == std::vector<std::uint64_t>{9, 8, 0, 0, 8};
    if (!quartic_counts) ok = false;
    rows.push_back({{"sum", "a1((x1*x2)^2)"}, {"field", "5"}, {"counts_exact", quartic_counts}});

    res.details = {{"rows", rows}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// criterion 5

SuiteResult slice_identity_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "slice-identity";
    bool ok = true;
    std::uint32_t identity_failures = 0, law_failures = 0;
    json samples = json::array();

    for (std::uint32_t s = 0; s < 100; ++s) {
        std::mt19937_64 rng(derive_seed(cfg.seed, s));
        auto f = (s % 2) ? Field::make(5, 1) : Field::make(3, 1);
        std::uint32_t r = 1 + (s / 2) % 2;
        std::uint32_t nvars = r + 2 + std::uint32_t(s % 4);
        if (s % 10 == 9) nvars = (f->p() == 3) ? 12 : 8;  // exercise q^N near 10^6
        auto S = random_slice_form(f, r, nvars, rng);
        EnumOptions opt;
        opt.budget = cfg.budget;
        auto rep = slice_identity_check(S, opt);
        if (!rep.identity_exact) {
            ++identity_failures;
            ok = false;
        }
        if (!rep.per_direction_law) {
            ++law_failures;
            ok = false;
        }
    }
    res.details = {{"samples", 100},
                   {"identity_failures", identity_failures},
                   {"per_direction_law_failures", law_failures}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// criterion 6

SuiteResult rank_one_dichotomy_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "rank-one-dichotomy";
    bool ok = true;
    std::uint64_t bound_cases = 0, zero_cases = 0, reduction_cases = 0;

    auto verify_dichotomy = [&](const MultiPoly& P) {
        const FieldPtr& f = P.field();
        const Field& F = *f;
        const std::uint32_t N = P.nvars();
        SliceDichotomy d;
        try {
            d = slice_rank_one_dichotomy(P);
        } catch (const Error&) {
            ok = false;
            return;
        }
        switch (d.kind) {
            case DichotomyKind::RankBound: ++bound_cases; break;
            case DichotomyKind::ZeroSlices: ++zero_cases; break;
            case DichotomyKind::ThreeVarReduction: ++reduction_cases; break;
        }
        if (d.kind == DichotomyKind::ThreeVarReduction) {
            // exhaustive pointwise identity P(v) = qhat(t1, t2, t3)(v)
            std::vector<elem> v(N, 0);
            while (true) {
                auto tv = d.t_forms.apply(v);
                if (d.qhat->evaluate(tv) != P.evaluate(v)) {
                    ok = false;
                    break;
                }
                std::uint32_t i = 0;
                while (i < N && ++v[i] == F.q()) v[i++] = 0;
                if (i == N) break;
            }
        } else {
            if (d.slice_values.size() != F.q() - 1) ok = false;
            for (const auto& sv : d.slice_values) {
                std::vector<elem> e1(N, 0);
                e1[0] = 1;
                auto rc = restricted_count(P, {{e1, sv.x}}, 1);
                if (!sv.value.equals(rc.as_cyc())) ok = false;
                if (sv.zero != rc.exact_zero()) ok = false;
                if (d.kind == DichotomyKind::ZeroSlices && !sv.zero) ok = false;
            }
            if (d.kind == DichotomyKind::RankBound && !d.bound_holds) ok = false;
        }
    };

    // exhaustive corpus: P = x1 R over all quadratics R on F_3^3
    auto f3 = Field::make(3, 1);
    auto x1_f3 = MultiPoly::monomial(f3, 3, {1, 0, 0}, 1);
    std::uint64_t corpus = 0;
    for_all_quadratic_forms(f3, 3, [&](const QuadraticForm& R) {
        if (R.is_zero()) return;
        ++corpus;
        verify_dichotomy(x1_f3 * R.to_poly());
    });

    // 200 seeded random quadratics on F_5^4
    auto f5 = Field::make(5, 1);
    auto x1_f5 = MultiPoly::monomial(f5, 4, {1, 0, 0, 0}, 1);
    for (std::uint32_t s = 0; s < 200; ++s) {
        std::mt19937_64 rng(derive_seed(cfg.seed, 10'000 + s));
        QuadraticForm R(f5, 4);
        for (std::uint32_t i = 0; i < 4; ++i)
            for (std::uint32_t j = i; j < 4; ++j) R.set_coeff(i, j, elem(uniform_below(rng, 5)));
        if (R.is_zero()) continue;
        verify_dichotomy(x1_f5 * R.to_poly());
    }

    res.details = {{"exhaustive_corpus", corpus},
                   {"random_corpus", 200},
                   {"rank_bound_cases", bound_cases},
                   {"zero_slice_cases", zero_cases},
                   {"reduction_cases", reduction_cases}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// criterion 7

struct IdealOracle {
    // per subspace: reduced generator basis over the 10-dimensional cubic
    // coefficient space of F_3[x1,x2,x3]_3
    struct Entry {
        Mat reduced;                      // rref'd generator rows
        std::vector<std::size_t> pivots;
    };
    FieldPtr f;
    std::vector<std::vector<std::uint8_t>> monos;  // all 10 cubic monomials
    std::vector<std::vector<std::uint8_t>> quads;  // all 6 quadratic monomials
    std::vector<std::vector<Entry>> by_r;          // [r-1] -> entries in echelon order

    explicit IdealOracle(FieldPtr field) : f(std::move(field)) {
        std::vector<std::uint8_t> e(3, 0);
        std::function<void(std::uint32_t, std::uint32_t, std::vector<std::vector<std::uint8_t>>&)>
            gen = [&](std::uint32_t v, std::uint32_t left,
                      std::vector<std::vector<std::uint8_t>>& out) {
                if (v == 3) {
                    if (left == 0) out.push_back(e);
                    return;
                }
                for (std::uint32_t k = 0; k <= left; ++k) {
                    e[v] = std::uint8_t(k);
                    gen(v + 1, left - k, out);
                }
                e[v] = 0;
            };
        gen(0, 3, monos);
        gen(0, 2, quads);

        by_r.resize(2);
        for (std::uint32_t r = 1; r <= 2; ++r) {
            for_each_echelon_matrix(f, r, 3, [&](const Mat& m) {
                std::vector<std::vector<elem>> rows;
                for (std::size_t i = 0; i < r; ++i) {
                    MultiPoly l = linear_form_poly(f, m.row(i));
                    for (const auto& qm : quads) {
                        MultiPoly prod = l * MultiPoly::monomial(f, 3, qm, 1);
                        std::vector<elem> row(monos.size(), 0);
                        for (const auto& t : prod.terms()) row[index_of(t.exps)] = t.coeff;
                        rows.push_back(std::move(row));
                    }
                }
                Entry entry;
                entry.reduced = Mat::from_rows(f, rows);
                entry.pivots = entry.reduced.rref();
                by_r[r - 1].push_back(std::move(entry));
                return true;
            });
        }
    }

    std::size_t index_of(const std::vector<std::uint8_t>& m) const {
        return std::size_t(std::find(monos.begin(), monos.end(), m) - monos.begin());
    }

    bool member(const Entry& entry, std::vector<elem> target) const {
        const Field& F = *f;
        for (std::size_t k = 0; k < entry.pivots.size(); ++k) {
            elem c = target[entry.pivots[k]];
            if (!c) continue;
            for (std::size_t j = 0; j < target.size(); ++j)
                target[j] = F.sub(target[j], F.mul(c, entry.reduced.at(k, j)));
        }
        for (elem c : target)
            if (c) return false;
        return true;
    }

    std::uint32_t min_r(const MultiPoly& P) const {
        std::vector<elem> target(monos.size(), 0);
        for (const auto& t : P.terms()) target[index_of(t.exps)] = t.coeff;
        for (std::uint32_t r = 1; r <= 2; ++r)
            for (const auto& entry : by_r[r - 1])
                if (member(entry, target)) return r;
        return 3;  // every homogeneous cubic vanishes at the origin
    }
};

SuiteResult rank_search_oracle_suite(const ExperimentConfig&) {
    SuiteResult res;
    res.id = "rank-search-oracle";
    bool ok = true;
    auto f3 = Field::make(3, 1);
    IdealOracle oracle(f3);

    std::uint64_t tested = 0, disagreements = 0;
    std::vector<elem> coeffs(10, 0);
    while (true) {
        // canonical representative: first nonzero coefficient equals 1
        elem lead = 0;
        for (elem c : coeffs)
            if (c) {
                lead = c;
                break;
            }
        if (lead == 1) {
            std::vector<Term> terms;
            for (std::size_t i = 0; i < 10; ++i)
                if (coeffs[i]) terms.push_back({oracle.monos[i], coeffs[i]});
            auto P = MultiPoly::from_terms(f3, 3, std::move(terms));
            auto cert = min_vanishing_codim(P, 3);
            std::uint32_t route_a = cert ? cert->r : 0;
            std::uint32_t route_b = oracle.min_r(P);
            if (route_a != route_b) {
                ++disagreements;
                ok = false;
            }
            ++tested;
        }
        std::size_t k = 0;
        while (k < 10 && ++coeffs[k] == 3) coeffs[k++] = 0;
        if (k == 10) break;
    }

    // named examples
    auto f5 = Field::make(5, 1);
    auto f7 = Field::make(7, 1);
    auto e1 = min_vanishing_codim(parse_poly("x1*x2*x3", f5, 3), 3);
    bool named1 = e1 && e1->r == 1;
    auto e2 = min_vanishing_codim(parse_poly("x1^3 + x2^3 + x3^3", f7, 3), 3);
    bool named2 = e2 && e2->r == 2;
    if (!named1 || !named2) ok = false;

    res.details = {{"forms_tested", tested},
                   {"disagreements", disagreements},
                   {"monomial_product_example", named1},
                   {"fermat_example", named2}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// criterion 8

SuiteResult min_level_probe_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "min-level-probe";
    bool ok = true;
    auto f5 = Field::make(5, 1);
    EnumOptions opt;
    opt.budget = cfg.budget;

    std::uint64_t tested = 0, failures = 0;
    double measured_c = 0;
    bool measured_set = false;
    std::vector<std::uint64_t> level_histogram(5, 0);

    // all homogeneous cubics in 2 variables over F_5 (including zero)
    for (elem c30 = 0; c30 < 5; ++c30)
        for (elem c21 = 0; c21 < 5; ++c21)
            for (elem c12 = 0; c12 < 5; ++c12)
                for (elem c03 = 0; c03 < 5; ++c03) {
                    std::vector<Term> terms;
                    std::vector<std::pair<std::vector<std::uint8_t>, elem>> spec{
                        {{3, 0}, c30}, {{2, 1}, c21}, {{1, 2}, c12}, {{0, 3}, c03}};
                    for (auto& [e, c] : spec)
                        if (c) terms.push_back({e, c});
                    auto P = MultiPoly::from_terms(f5, 2, std::move(terms));
                    ++tested;
                    bool found = false;
                    for (std::uint32_t n = 1; n <= 4 && !found; ++n) {
                        auto cs = count_vector(P, n, opt);
                        long double mag = cs.magnitude();
                        if (mag >= 1.0L) {
                            found = true;
                            ++level_histogram[n];
                            if (!measured_set || double(mag) < measured_c) {
                                measured_c = double(mag);
                                measured_set = true;
                            }
                        }
                    }
                    if (!found) {
                        ++failures;
                        ok = false;
                    }
                }

    res.details = {{"forms", tested},
                   {"failures", failures},
                   {"threshold", 1.0},
                   {"levels_used", {level_histogram[1], level_histogram[2], level_histogram[3],
                                    level_histogram[4]}},
                   {"measured_c_2_3", measured_c}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// criterion 9

SuiteResult product_fibers_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "product-fibers";
    bool ok = true;
    std::uint32_t ran = 0;
    json rows = json::array();

    for (std::uint32_t s = 0; s < 50; ++s) {
        std::mt19937_64 rng(derive_seed(cfg.seed, 20'000 + s));
        FieldPtr f;
        std::uint32_t dq, dr;
        if (s % 2 == 0) {
            f = Field::make(5, 1);
            dq = 1;
            dr = 2;  // deg P = 3, gcd(3, 4) = 1
        } else {
            f = Field::make(7, 1);
            dq = 2;
            dr = 3;  // deg P = 5, gcd(5, 6) = 1
        }
        std::uint32_t nvars = 2 + s % 5;
        MultiPoly Q = MultiPoly::zero(f, nvars), R = Q;
        while (Q.is_zero()) Q = random_homogeneous_poly(f, nvars, dq, 3, rng);
        while (R.is_zero()) R = random_homogeneous_poly(f, nvars, dr, 4, rng);
        ExperimentConfig sub = cfg;
        sub.seed = derive_seed(cfg.seed, 30'000 + s);
        auto rep = product_fiber_experiment(Q, R, sub);
        if (!rep.pass) ok = false;
        ++ran;
        if (s < 5) rows.push_back(rep.measurements);
    }

    // the worked product: Q = x1, R = x2 x3 over F_5 gives B = 61, A = 16
    auto f5 = Field::make(5, 1);
    auto named = product_fiber_experiment(parse_poly("x1", f5, 3), parse_poly("x2*x3", f5, 3), cfg);
    bool named_ok = named.pass && named.measurements["B"] == 61 && named.measurements["A"] == 16 &&
                    named.measurements["a1"] == 45.0;
    if (!named_ok) ok = false;

    // preconditions reject gcd violations
    bool rejected = false;
    try {
        product_fiber_experiment(parse_poly("x1", f5, 2), parse_poly("x2", f5, 2), cfg);
    } catch (const Error& e) {
        rejected = e.code() == ErrorCode::GcdViolation;
    }
    auto f7 = Field::make(7, 1);
    bool rejected2 = false;
    try {
        product_fiber_experiment(parse_poly("x1 + x2", f7, 2), parse_poly("x1*x2", f7, 2), cfg);
    } catch (const Error& e) {
        rejected2 = e.code() == ErrorCode::GcdViolation;
    }
    if (!rejected || !rejected2) ok = false;

    res.details = {{"pairs", ran},
                   {"worked_example", named_ok},
                   {"gcd_violations_rejected", rejected && rejected2},
                   {"first_rows", rows}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// criterion 10

SuiteResult determinism_performance_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "determinism-performance";
    bool ok = true;
    auto f5 = Field::make(5, 1);

    // benchmark: x1 x2 x3 padded to nine variables, raw enumeration
    auto P = parse_poly("x1*x2*x3", f5, 9);
    EnumOptions raw;
    raw.collapse_constants = false;
    raw.jobs = 1;
    Timer bench;
    auto cs = count_vector(P, 1, raw);
    double seconds = bench.elapsed();
    const double points = 1953125.0;  // 5^9
    double throughput = points / std::max(seconds, 1e-9);
    bool fast_enough = throughput >= 1e7 && seconds < 1.0;
    if (!fast_enough) ok = false;
    if (cs.domain_size() != 1953125) ok = false;

    Timer bench2;
    auto cs_collapsed = count_vector(P, 1, {});
    double collapsed_seconds = bench2.elapsed();
    if (cs_collapsed.counts != cs.counts) ok = false;

    // the padded benchmark collapses its unused variables, so also time a
    // dense cubic where every point costs real work
    auto dense = parse_poly("x1*x2*x3 + x4*x5*x6 + x7*x8*x9", f5, 9);
    Timer bench3;
    auto cs_dense = count_vector(dense, 1, raw);
    double dense_seconds = bench3.elapsed();
    double dense_throughput = points / std::max(dense_seconds, 1e-9);
    if (dense_throughput < 1e7) ok = false;
    // a_1 of three independent blocks is the cube of the single block value
    if (!cs_dense.as_cyc().equals(CycInt::integer(5, 91125))) ok = false;

    // determinism across jobs and collapse settings
    std::mt19937_64 rng(derive_seed(cfg.seed, 40'000));
    bool jobs_identical = true;
    for (int trial = 0; trial < 4; ++trial) {
        auto Prand = random_homogeneous_poly(f5, 6, 3, 6, rng);
        EnumOptions base;
        auto reference = count_vector(Prand, 1, base).counts;
        for (std::uint32_t jobs : {2u, 4u, 8u}) {
            EnumOptions opt;
            opt.jobs = jobs;
            if (count_vector(Prand, 1, opt).counts != reference) jobs_identical = false;
        }
        EnumOptions nocollapse;
        nocollapse.collapse_constants = false;
        if (count_vector(Prand, 1, nocollapse).counts != reference) jobs_identical = false;
    }
    if (!jobs_identical) ok = false;

    // byte-identical reports: the same invocation dispatched twice, and a
    // seeded experiment serialized twice
    Invocation inv;
    inv.subcommand = "sum";
    inv.field = "5";
    inv.nvars = 3;
    inv.poly = "x1*x2*x3";
    inv.n = 1;
    auto out1 = dispatch(inv);
    auto out2 = dispatch(inv);
    bool bytes_identical = out1.output == out2.output && out1.exit_code == 0;

    // across --jobs the results must agree; only the echo block may differ
    Invocation inv_jobs = inv;
    inv_jobs.jobs = 4;
    auto out_jobs = dispatch(inv_jobs);
    auto strip_echo = [](const std::string& text) {
        json r = json::parse(text);
        r.erase("invocation");
        return r.dump();
    };
    if (strip_echo(out1.output) != strip_echo(out_jobs.output)) bytes_identical = false;

    ExperimentConfig scan_cfg = cfg;
    scan_cfg.budget = 1'000'000;
    auto repA = low_rank_bias_scan(f5, 4, 3, 2, scan_cfg);
    auto repB = low_rank_bias_scan(f5, 4, 3, 2, scan_cfg);
    if (repA.measurements.dump() != repB.measurements.dump()) bytes_identical = false;
    if (!bytes_identical) ok = false;

    res.details = {{"benchmark_points", 1953125},
                   {"benchmark_seconds", seconds},
                   {"throughput_points_per_sec", throughput},
                   {"collapsed_seconds", collapsed_seconds},
                   {"dense_benchmark_seconds", dense_seconds},
                   {"dense_throughput_points_per_sec", dense_throughput},
                   {"jobs_identical", jobs_identical},
                   {"reports_byte_identical", bytes_identical}};
    res.pass = ok;
    return res;
}

// ---------------------------------------------------------------------------
// extra report-only suites

SuiteResult quartic_square_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "quartic-square";
    auto r5 = quartic_square_scan(Field::make(5, 1), {2, 4}, cfg);
    auto r3 = quartic_square_scan(Field::make(3, 1), {2}, cfg);
    res.details = {{"f5", r5.measurements}, {"f3", r3.measurements}};
    res.pass = r5.pass && r3.pass;
    return res;
}

SuiteResult low_rank_bias_suite(const ExperimentConfig& cfg) {
    SuiteResult res;
    res.id = "low-rank-bias";
    ExperimentConfig sub = cfg;
    sub.budget = std::min<std::uint64_t>(cfg.budget, 10'000'000);
    auto rep = low_rank_bias_scan(Field::make(5, 1), 4, 25, 2, sub);
    res.details = rep.measurements;
    res.pass = rep.pass;
    return res;
}

}  // namespace

const std::vector<std::string>& acceptance_suite_ids() {
    static const std::vector<std::string> ids{
        "quadratic-oracle",    "gauss-magnitude", "quadratic-bias-law", "known-sums",
        "slice-identity",      "rank-one-dichotomy", "rank-search-oracle", "min-level-probe",
        "product-fibers",      "determinism-performance"};
    return ids;
}

const std::vector<std::string>& extra_suite_ids() {
    static const std::vector<std::string> ids{"quartic-square", "low-rank-bias"};
    return ids;
}

SuiteResult run_suite_by_id(const std::string& id, const ExperimentConfig& cfg) {
    Timer timer;
    SuiteResult res;
    if (id == "quadratic-oracle") res = quadratic_oracle_suite(cfg);
    else if (id == "gauss-magnitude") res = gauss_magnitude_suite(cfg);
    else if (id == "quadratic-bias-law") res = quadratic_bias_law_suite(cfg);
    else if (id == "known-sums") res = known_sums_suite(cfg);
    else if (id == "slice-identity") res = slice_identity_suite(cfg);
    else if (id == "rank-one-dichotomy") res = rank_one_dichotomy_suite(cfg);
    else if (id == "rank-search-oracle") res = rank_search_oracle_suite(cfg);
    else if (id == "min-level-probe") res = min_level_probe_suite(cfg);
    else if (id == "product-fibers") res = product_fibers_suite(cfg);
    else if (id == "determinism-performance") res = determinism_performance_suite(cfg);
    else if (id == "quartic-square") res = quartic_square_suite(cfg);
    else if (id == "low-rank-bias") res = low_rank_bias_suite(cfg);
    else throw Error(ErrorCode::InvalidArgument, "unknown suite '" + id + "'");
    res.runtime_sec = timer.elapsed();
    return res;
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& ids,
                                    const ExperimentConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const auto& id : ids) {
        try {
            out.push_back(run_suite_by_id(id, cfg));
        } catch (const std::exception& e) {
            SuiteResult failed;
            failed.id = id;
            failed.pass = false;
            failed.details = {{"error", e.what()}};
            out.push_back(std::move(failed));
        }
    }
    return out;
}

}  // namespace ffb
