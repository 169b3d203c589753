#ifndef FFB_EXPERIMENTS_HPP
#define FFB_EXPERIMENTS_HPP

#include <random>
#include <string>

#include "json.hpp"

#include "ffb/char_sum.hpp"
#include "ffb/cubic_slice.hpp"
#include "ffb/poly.hpp"

namespace ffb {

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::uint64_t budget = 1'000'000'000;
    std::uint32_t jobs = 1;
};

/// Result of one experiment.  Identities are asserted through `pass`;
/// measured constants are recorded in `measurements` and never asserted.
/// Reports are bit-identical across reruns with the same seed.
struct ExperimentReport {
    std::string id;
    nlohmann::json params;
    nlohmann::json measurements;
    bool pass = true;
    std::uint64_t seed = 0;
};

/// Deterministic per-task seed stream derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

/// Portable uniform draw in [0, n); mt19937_64 output with rejection, so the
/// stream is identical across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

MultiPoly random_homogeneous_poly(const FieldPtr& field, std::uint32_t nvars, std::uint32_t degree,
                                  std::size_t terms, std::mt19937_64& rng);

/// Uniform slice data: every entry of c^i, M^i, Q^i drawn independently.
SliceForm random_slice_form(const FieldPtr& field, std::uint32_t r, std::uint32_t nvars,
                            std::mt19937_64& rng);

/// Scans n = 1..n_max for the first level with |a_n| >= threshold; also
/// records the minimum of b_n over the scan.
ExperimentReport probe_min_level(const MultiPoly& P, std::uint32_t n_max, double threshold,
                                 const ExperimentConfig& cfg = {});

/// For P = Q R with gcd(deg P, q - 1) = 1: all nonzero fibers share one size
/// A, B = |P^{-1}(0)|, and a_1(P) = B - A exactly; B is cross-checked by
/// inclusion-exclusion over the zero sets of the factors.  The magnitude
/// bound is reported normalized, never asserted.
ExperimentReport product_fiber_experiment(const MultiPoly& Q, const MultiPoly& R,
                                          const ExperimentConfig& cfg = {});

/// For each even N, squares the split form sum x_i x_{t+i} and compares the
/// enumerated a_1 against two predictions: the closed formula
/// G q^{N-1} + q^{N/2-1}(q - G) and the fiber-count recomposition; the
/// measured exponent log_q |a_1| is reported against N/2 and N - 1/2.
ExperimentReport quartic_square_scan(const FieldPtr& field, const std::vector<std::uint32_t>& dims,
                                     const ExperimentConfig& cfg = {});

/// Samples cubics sum_{i<=r} l_i R_i with independent linear l_i and random
/// quadratic R_i for r in {1, 2}, profiles the bias up to n_max, and records
/// max over samples of min_n b_n per r; only finiteness is asserted.
ExperimentReport low_rank_bias_scan(const FieldPtr& field, std::uint32_t nvars,
                                    std::uint32_t samples_per_r, std::uint32_t n_max,
                                    const ExperimentConfig& cfg = {});

// ---------------------------------------------------------------------------
// verification suites

struct SuiteResult {
    std::string id;
    bool pass = false;
    nlohmann::json details;
    double runtime_sec = 0;
};

/// The ten acceptance suites, in report order.
const std::vector<std::string>& acceptance_suite_ids();
/// Extra report-only suites selectable by id ("quartic-square", "low-rank-bias").
const std::vector<std::string>& extra_suite_ids();

SuiteResult run_suite_by_id(const std::string& id, const ExperimentConfig& cfg);

/// Runs the requested suites; a failing or throwing suite becomes a recorded
/// entry, never an abort.  Empty selection runs nothing.
std::vector<SuiteResult> run_suites(const std::vector<std::string>& ids,
                                    const ExperimentConfig& cfg);

}  // namespace ffb

#endif
