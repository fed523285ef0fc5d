#pragma once

// Data-parallel kernels. Every kernel has a serial reference and an OpenMP
// variant; both produce identical results for any thread count because each
// work item (string index, sample index, trial index) owns its inputs and its
// random stream.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cbqs/amplify.hpp"
#include "cbqs/baselines.hpp"
#include "cbqs/instance.hpp"
#include "cbqs/sampler.hpp"

namespace cbqs::kernels {

// Strings that are feasible for `constraints` and have profit > threshold.
struct GoodTest {
  std::span<const LinearConstraint> constraints;
  std::span<const std::int64_t> profits;
  std::int64_t threshold = 0;

  std::int64_t profit(std::span<const std::uint8_t> y) const;
  bool operator()(std::span<const std::uint8_t> y) const;
};

// --- exhaustive MFKP scan -------------------------------------------------
BruteForceResult brute_force_serial(const MfkpInstance& inst);
BruteForceResult brute_force_parallel(const MfkpInstance& inst);

// --- exact good-state enumeration ----------------------------------------
struct WeightedString {
  Bits bits;
  double probability = 0.0;
  std::int64_t profit = 0;
};

// Reference: scores all 2^n strings through Sampler::path_probability.
std::vector<WeightedString> good_states_serial(const Sampler& sampler,
                                               const GoodTest& good);
// Walks the sampler's decision tree, pruning branches that cannot beat the
// threshold, with frontier subtrees processed in parallel.
std::vector<WeightedString> good_states_parallel(const Sampler& sampler,
                                                 const GoodTest& good);

// --- repeated sampling ----------------------------------------------------
// Draw t uses Stream::derive(seed, t).
struct FirstHit {
  std::uint64_t draws = 0;  // index of the hit + 1, or draws examined
  std::optional<SampleOutcome> outcome;
};

FirstHit first_hit_serial(const Sampler& sampler, const GoodTest& good,
                          std::uint64_t seed, std::uint64_t first,
                          std::uint64_t max_draws);
FirstHit first_hit_parallel(const Sampler& sampler, const GoodTest& good,
                            std::uint64_t seed, std::uint64_t first,
                            std::uint64_t max_draws);

struct SampleStats {
  std::uint64_t samples = 0;
  std::uint64_t feasible = 0;    // satisfies every constraint of `check`
  std::uint64_t dead_ends = 0;
  bool operator==(const SampleStats&) const = default;
};

SampleStats sample_stats_serial(const Sampler& sampler,
                                std::span<const LinearConstraint> check,
                                std::uint64_t seed, std::uint64_t count);
SampleStats sample_stats_parallel(const Sampler& sampler,
                                  std::span<const LinearConstraint> check,
                                  std::uint64_t seed, std::uint64_t count);

// Counts per string index (bit i has weight 2^i); n <= 24.
std::vector<std::uint64_t> histogram_serial(const Sampler& sampler,
                                            std::uint64_t seed,
                                            std::uint64_t count);
std::vector<std::uint64_t> histogram_parallel(const Sampler& sampler,
                                              std::uint64_t seed,
                                              std::uint64_t count);

// --- hyperplane rounding --------------------------------------------------
// Profit of the rounded solution of each trial, or -1 when infeasible.
std::vector<std::int64_t> round_trials_serial(const GramFactor& factor,
                                              const MfkpInstance& inst,
                                              std::uint64_t seed,
                                              std::uint64_t first,
                                              std::uint64_t count);
std::vector<std::int64_t> round_trials_parallel(const GramFactor& factor,
                                                const MfkpInstance& inst,
                                                std::uint64_t seed,
                                                std::uint64_t first,
                                                std::uint64_t count);
// Rounded +-1 vector of a single trial (z0 = +1).
std::vector<std::int8_t> round_trial(const GramFactor& factor,
                                     std::uint64_t seed, std::uint64_t trial);

// --- randomized amplitude amplification ----------------------------------
// Trial t of simulate_qsearch uses Stream::derive(seed, t).
struct QSearchTally {
  std::uint64_t trials = 0;
  std::uint64_t found = 0;
  std::int64_t grover_iterations = 0;
  std::int64_t measurements = 0;
  bool operator==(const QSearchTally&) const = default;
};

QSearchTally qsearch_tally_serial(double p, double t, std::uint64_t seed,
                                  std::uint64_t trials);
QSearchTally qsearch_tally_parallel(double p, double t, std::uint64_t seed,
                                    std::uint64_t trials);

int max_threads();

}  // namespace cbqs::kernels
