#include "ffb/char_sum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace ffb {

namespace {

std::uint64_t checked_power(std::uint64_t base, std::uint32_t exp, std::uint64_t budget,
                            const char* what) {
    __int128 v = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        v *= base;
        if (v > __int128(budget))
            throw Error(ErrorCode::BudgetExceeded,
                        std::string(what) + ": domain of " + std::to_string(base) + "^" +
                            std::to_string(exp) + " points exceeds the budget of " +
                            std::to_string(budget));
    }
    return std::uint64_t(v);
}

/// Specialization plan: per depth, the list of residual monomials of P in the
/// remaining variables, with each slot mapping to (exponent of the current
/// variable, slot of the residual one level down).  Substituting one value is
/// then a single sparse pass, with no allocation below the top level.
struct Plan {
    struct Level {
        std::vector<std::uint32_t> exp;
        std::vector<std::uint32_t> target;
        std::uint32_t out_slots = 1;
        std::uint32_t out_const = 0;
        std::uint32_t max_exp = 0;
    };
    std::vector<Level> levels;
    std::vector<elem> init;
    std::uint32_t init_const = 0;
    std::uint32_t nvars = 0;

    explicit Plan(const MultiPoly& P) {
        nvars = P.nvars();
        using Mono = std::vector<std::uint8_t>;
        std::vector<Mono> monos;
        monos.push_back(Mono(nvars, 0));
        for (const auto& t : P.terms())
            if (t.exps != monos.front()) monos.push_back(t.exps);
        std::sort(monos.begin() + 1, monos.end());
        monos.erase(std::unique(monos.begin(), monos.end()), monos.end());

        init.assign(monos.size(), 0);
        for (const auto& t : P.terms()) {
            auto it = std::find(monos.begin(), monos.end(), t.exps);
            init[std::size_t(it - monos.begin())] = t.coeff;
        }
        init_const = 0;  // the zero monomial was inserted first and sorts first

        levels.resize(nvars);
        for (std::uint32_t depth = 0; depth < nvars; ++depth) {
            std::vector<Mono> next;
            next.push_back(Mono(nvars - depth - 1, 0));
            for (const auto& m : monos) next.push_back(Mono(m.begin() + 1, m.end()));
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());

            Level lvl;
            lvl.out_slots = std::uint32_t(next.size());
            lvl.out_const = std::uint32_t(
                std::lower_bound(next.begin(), next.end(), Mono(nvars - depth - 1, 0)) - next.begin());
            lvl.exp.resize(monos.size());
            lvl.target.resize(monos.size());
            for (std::size_t k = 0; k < monos.size(); ++k) {
                lvl.exp[k] = monos[k].empty() ? 0 : monos[k][0];
                lvl.max_exp = std::max(lvl.max_exp, lvl.exp[k]);
                Mono res(monos[k].begin() + (monos[k].empty() ? 0 : 1), monos[k].end());
                auto it = std::lower_bound(next.begin(), next.end(), res);
                lvl.target[k] = std::uint32_t(it - next.begin());
            }
            levels[depth] = std::move(lvl);
            monos = std::move(next);
        }
    }
};

/// One worker's state; Tally is called as tally(value, weight).
template <typename Tally>
struct Runner {
    const Plan& plan;
    const Field& F;
    bool collapse;
    Tally tally;
    std::vector<std::vector<elem>> stack;
    std::vector<std::uint64_t> remaining;  // q^{nvars - depth}
    std::vector<elem> powers;

    Runner(const Plan& plan_, const Field& field, bool collapse_, Tally tally_)
        : plan(plan_), F(field), collapse(collapse_), tally(std::move(tally_)) {
        stack.resize(plan.nvars + 1);
        stack[0] = plan.init;
        for (std::uint32_t d = 0; d < plan.nvars; ++d)
            stack[d + 1].assign(plan.levels[d].out_slots, 0);
        remaining.assign(plan.nvars + 1, 1);
        for (std::uint32_t d = plan.nvars; d-- > 0;) remaining[d] = remaining[d + 1] * F.q();
        std::uint32_t maxe = 0;
        for (const auto& l : plan.levels) maxe = std::max(maxe, l.max_exp);
        powers.assign(maxe + 1, 1);
    }

    // substitute value c for the variable at `depth`; returns true if the
    // result involves only the constant slot
    bool specialize(std::uint32_t depth, elem c) {
        const auto& lvl = plan.levels[depth];
        const auto& src = stack[depth];
        auto& dst = stack[depth + 1];
        std::fill(dst.begin(), dst.end(), 0);
        if (lvl.max_exp) {
            powers[0] = 1;
            for (std::uint32_t e = 1; e <= lvl.max_exp; ++e) powers[e] = F.mul(powers[e - 1], c);
        }
        for (std::size_t k = 0; k < src.size(); ++k) {
            elem ck = src[k];
            if (!ck) continue;
            std::uint32_t e = lvl.exp[k];
            elem v = e ? F.mul(ck, powers[e]) : ck;
            elem& slot = dst[lvl.target[k]];
            slot = F.add(slot, v);
        }
        for (std::size_t s = 0; s < dst.size(); ++s)
            if (s != lvl.out_const && dst[s]) return false;
        return true;
    }

    void descend(std::uint32_t depth, std::uint64_t weight) {
        if (depth == plan.nvars) {
            tally(stack[depth][0], weight);
            return;
        }
        const auto& lvl = plan.levels[depth];
        if (lvl.max_exp == 0) {
            // variable does not occur: one subtree covers all q branches
            bool constant = specialize(depth, 0);
            if (constant && collapse) {
                tally(stack[depth + 1][lvl.out_const], weight * remaining[depth]);
            } else {
                descend(depth + 1, weight * F.q());
            }
            return;
        }
        for (elem c = 0; c < F.q(); ++c) {
            bool constant = specialize(depth, c);
            if (constant && collapse) {
                tally(stack[depth + 1][lvl.out_const], weight * remaining[depth + 1]);
            } else {
                descend(depth + 1, weight);
            }
        }
    }

    // top-level entry covering first-coordinate values c = first, first+step, ...
    void run_strided(elem first, elem step) {
        if (plan.nvars == 0) {
            if (first == 0) tally(stack[0][plan.init_const], 1);
            return;
        }
        const auto& lvl = plan.levels[0];
        for (elem c = first; c < F.q(); c += step) {
            bool constant = specialize(0, c);
            if (constant && collapse) {
                tally(stack[1][lvl.out_const], remaining[1]);
            } else {
                descend(1, 1);
            }
        }
    }
};

/// Partitioned reduction over the first coordinate: pure map plus integer
/// vector merge, so every jobs setting produces identical bins.
std::vector<std::uint64_t> run_kernel(const MultiPoly& P, std::size_t bins, bool by_class,
                                      const EnumOptions& opt) {
    const Field& F = *P.field();
    checked_power(F.q(), P.nvars(), opt.budget, "enumeration");
    Plan plan(P);

    auto make_counts = [&] { return std::vector<std::uint64_t>(bins, 0); };
    auto worker = [&](elem first, elem step, std::vector<std::uint64_t>& counts) {
        if (by_class) {
            const auto& cls = F.char_class_table();
            Runner runner(plan, F, opt.collapse_constants,
                          [&](elem v, std::uint64_t w) { counts[cls[v]] += w; });
            runner.run_strided(first, step);
        } else {
            Runner runner(plan, F, opt.collapse_constants,
                          [&](elem v, std::uint64_t w) { counts[v] += w; });
            runner.run_strided(first, step);
        }
    };

    std::uint32_t jobs = std::max(1u, opt.jobs);
    if (P.nvars() == 0 || plan.levels[0].max_exp == 0) jobs = 1;
    if (jobs == 1) {
        auto counts = make_counts();
        worker(0, 1, counts);
        return counts;
    }
    jobs = std::min(jobs, F.q());
    std::vector<std::vector<std::uint64_t>> partial(jobs, make_counts());
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::uint32_t w = 0; w < jobs; ++w)
        threads.emplace_back([&, w] { worker(w, jobs, partial[w]); });
    for (auto& t : threads) t.join();
    auto counts = make_counts();
    for (const auto& part : partial)
        for (std::size_t i = 0; i < bins; ++i) counts[i] += part[i];
    return counts;
}

}  // namespace

std::uint64_t CharacterSum::domain_size() const {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

CycInt CharacterSum::as_cyc() const {
    CycInt c(p);
    for (std::uint32_t j = 0; j < p; ++j) c[j] = std::int64_t(counts[j]);
    return c;
}

bool CharacterSum::exact_zero() const {
    for (std::uint32_t j = 1; j < p; ++j)
        if (counts[j] != counts[0]) return false;
    return true;
}

long double CharacterSum::magnitude_error_bound() const {
    return static_cast<long double>(domain_size()) * std::exp2l(-45);
}

CharacterSum count_vector(const MultiPoly& P, std::uint32_t level, const EnumOptions& opt) {
    if (level == 0) throw Error(ErrorCode::InvalidArgument, "level must be positive");
    auto tower = build_tower(P.field(), level);
    MultiPoly top = P.base_change(tower);
    CharacterSum cs;
    cs.p = P.field()->p();
    cs.base_q = P.field()->q();
    cs.level = level;
    cs.nvars = P.nvars();
    cs.dim = P.nvars();
    cs.counts = run_kernel(top, cs.p, /*by_class=*/true, opt);
    return cs;
}

BiasTriple bias(const CharacterSum& cs) {
    BiasTriple out;
    const long double domain = static_cast<long double>(cs.domain_size());
    if (cs.exact_zero()) {
        out.magnitude = 0;
        out.btilde = 0;
        out.b = std::numeric_limits<double>::infinity();
        out.b_infinite = true;
        return out;
    }
    const long double mag2 = cs.magnitude_squared();
    const long double mag = std::sqrt(mag2);
    out.magnitude = double(mag);
    out.btilde = double(mag / domain);
    // b = 2 dim - log(|a|^2) / (n log q), from the exact autocorrelation;
    // |a| <= q^{n dim} always, so a negative value can only be rounding
    const long double lnq = std::log(static_cast<long double>(cs.base_q));
    out.b = double(2.0L * cs.dim - std::log(mag2) / (cs.level * lnq));
    if (out.b < 0) out.b = 0;
    return out;
}

BiasProfile bias_profile(const MultiPoly& P, std::uint32_t n_max, const EnumOptions& opt) {
    BiasProfile profile;
    for (std::uint32_t n = 1; n <= n_max; ++n) {
        CharacterSum cs;
        try {
            cs = count_vector(P, n, opt);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::BudgetExceeded) {
                profile.truncated_at = n;
                break;
            }
            throw;
        }
        BiasTriple t = bias(cs);
        if (!t.b_infinite && (profile.min_b_infinite || t.b < profile.min_b)) {
            profile.min_b = t.b;
            profile.min_b_infinite = false;
        }
        profile.entries.push_back({n, std::move(cs), t});
    }
    return profile;
}

CharacterSum restricted_count(const MultiPoly& P, const std::vector<LinearConstraint>& constraints,
                              std::uint32_t level, const EnumOptions& opt) {
    auto tower = build_tower(P.field(), level);
    const Field& T = *tower.top();
    MultiPoly top = P.base_change(tower);

    const std::uint32_t N = P.nvars();
    Mat A(tower.top(), constraints.size(), N);
    std::vector<elem> b(constraints.size());
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (constraints[i].form.size() != N)
            throw Error(ErrorCode::ShapeMismatch, "constraint form length mismatch");
        for (std::uint32_t j = 0; j < N; ++j) A.at(i, j) = tower.embed(constraints[i].form[j]);
        if (constraints[i].value >= T.q())
            throw Error(ErrorCode::FieldMismatch, "constraint value outside the level-n field");
        b[i] = constraints[i].value;
    }
    auto particular = A.solve(b);
    if (!particular) throw Error(ErrorCode::InconsistentConstraints, "constraints have no solution");
    Mat kernel = A.nullspace();

    MultiPoly restricted = top.compose_affine(kernel, *particular);
    CharacterSum cs;
    cs.p = T.p();
    cs.base_q = P.field()->q();
    cs.level = level;
    cs.nvars = N;
    cs.dim = std::uint32_t(kernel.cols());
    cs.counts = run_kernel(restricted, cs.p, /*by_class=*/true, opt);
    return cs;
}

std::vector<std::uint64_t> value_histogram(const MultiPoly& P, const EnumOptions& opt) {
    return run_kernel(P, P.field()->q(), /*by_class=*/false, opt);
}

std::vector<std::uint64_t> joint_value_histogram(const MultiPoly& P1, const MultiPoly& P2,
                                                 const EnumOptions& opt) {
    if (P1.nvars() != P2.nvars()) throw Error(ErrorCode::ArityMismatch, "joint histogram arity mismatch");
    if (!P1.field()->same_spec(*P2.field())) throw Error(ErrorCode::FieldMismatch, "joint histogram field mismatch");
    const Field& F = *P1.field();
    const std::uint32_t N = P1.nvars();
    const std::uint64_t q = F.q();
    checked_power(q, N, opt.budget, "enumeration");
    std::vector<std::uint64_t> hist(q * q, 0);

    // lockstep pair of specialization stacks; collapse only when both sides
    // have reduced to constants
    Plan p1(P1), p2(P2);
    std::vector<std::vector<elem>> s1(N + 1), s2(N + 1);
    s1[0] = p1.init;
    s2[0] = p2.init;
    for (std::uint32_t d = 0; d < N; ++d) {
        s1[d + 1].assign(p1.levels[d].out_slots, 0);
        s2[d + 1].assign(p2.levels[d].out_slots, 0);
    }
    std::vector<std::uint64_t> remaining(N + 1, 1);
    for (std::uint32_t d = N; d-- > 0;) remaining[d] = remaining[d + 1] * q;
    std::uint32_t maxe = 0;
    for (const auto& l : p1.levels) maxe = std::max(maxe, l.max_exp);
    for (const auto& l : p2.levels) maxe = std::max(maxe, l.max_exp);
    std::vector<elem> powers(maxe + 1, 1);

    auto specialize_one = [&](const Plan& plan, std::vector<std::vector<elem>>& st,
                              std::uint32_t depth) {
        const auto& lvl = plan.levels[depth];
        const auto& src = st[depth];
        auto& dst = st[depth + 1];
        std::fill(dst.begin(), dst.end(), 0);
        for (std::size_t k = 0; k < src.size(); ++k) {
            elem ck = src[k];
            if (!ck) continue;
            std::uint32_t e = lvl.exp[k];
            elem v = e ? F.mul(ck, powers[e]) : ck;
            elem& slot = dst[lvl.target[k]];
            slot = F.add(slot, v);
        }
        for (std::size_t s = 0; s < dst.size(); ++s)
            if (s != lvl.out_const && dst[s]) return false;
        return true;
    };

    auto descend = [&](auto&& self, std::uint32_t depth, std::uint64_t weight) -> void {
        if (depth == N) {
            hist[std::uint64_t(s1[depth][0]) * q + s2[depth][0]] += weight;
            return;
        }
        bool skip = p1.levels[depth].max_exp == 0 && p2.levels[depth].max_exp == 0;
        for (elem c = 0; c < (skip ? 1u : F.q()); ++c) {
            powers[0] = 1;
            for (std::uint32_t e = 1; e < powers.size(); ++e) powers[e] = F.mul(powers[e - 1], c);
            bool c1 = specialize_one(p1, s1, depth);
            bool c2 = specialize_one(p2, s2, depth);
            std::uint64_t w = skip ? weight * q : weight;
            if (c1 && c2 && opt.collapse_constants) {
                std::uint64_t pts = skip ? weight * remaining[depth] : weight * remaining[depth + 1];
                hist[std::uint64_t(s1[depth + 1][p1.levels[depth].out_const]) * q +
                     s2[depth + 1][p2.levels[depth].out_const]] += pts;
            } else {
                self(self, depth + 1, w);
            }
        }
    };
    if (N == 0) {
        hist[std::uint64_t(p1.init[p1.init_const]) * q + p2.init[p2.init_const]] += 1;
    } else {
        descend(descend, 0, 1);
    }
    return hist;
}

}  // namespace ffb
