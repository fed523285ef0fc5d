#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "cbqs/costs.hpp"
#include "cbqs/instance.hpp"
#include "cbqs/rng.hpp"
#include "cbqs/sampler.hpp"
#include "cbqs/trajectory.hpp"

namespace cbqs {

// Success probability p of one measurement and the iteration maximum T of
// the randomized search. T = 2^(m + aa_frac).
struct AAParams {
  double p_good = 0.0;
  double iteration_max = 1.0;
  int m = 0;
  double aa_frac = 0.0;
  double theta = 0.0;  // arcsin(sqrt(p))

  static AAParams make(double p, double t);
};

// 1 - (1 - p)^T.
double classical_success(double p, double t);

// Randomized-iteration amplitude amplification: r = m or m + 1 (the latter
// with probability aa_frac); rounds k = 0..r each draw j uniform in
// {0..2^k - 1} and measure after j Grover iterations, failing with
// probability cos^2((2j + 1) theta). Returns 1 - E[prod of round failures].
double aa_success(double p, double t);

struct QSearchResult {
  bool found = false;
  std::int64_t grover_iterations = 0;
  std::int64_t measurements = 0;
};

// One run of the protocol above.
QSearchResult simulate_qsearch(double p, double t, Stream& rng);

// Expected charge of finding a marked state when p is known: repeat
// measurements after j Grover iterations, with j minimizing
// (j + 1) / sin^2((2j + 1) theta).
struct ExactCharge {
  std::int64_t iterations_per_attempt = 0;
  double success_per_attempt = 0.0;
  double expected_iterations = 0.0;
  double expected_measurements = 0.0;
};

ExactCharge exact_charge(double p);

inline constexpr std::size_t kDefaultExactLimit = 25;

// Sampler probability mass of strings that satisfy every constraint and have
// profit > threshold. Throws ExactLimitExceeded above `limit` items.
double exact_good_probability(std::span<const LinearConstraint> constraints,
                              const BiasSpec& bias,
                              std::span<const std::int64_t> profits,
                              std::int64_t threshold,
                              std::size_t limit = kDefaultExactLimit);

enum class BenchMode { Exact, Sampling };

std::string to_string(BenchMode mode);
BenchMode bench_mode_from_string(const std::string& name);

struct CbqsBudget {
  std::int64_t max_oracle_calls = 100000;
  double max_modeled_seconds = std::numeric_limits<double>::infinity();
  // Checked between incumbent steps; breaks reproducibility when it binds.
  double max_wall_seconds = std::numeric_limits<double>::infinity();
};

struct CbqsConfig {
  BenchMode mode = BenchMode::Sampling;
  double strength = -1.0;  // b; negative = n/4
  double mixing = 0.0;     // f; g(j) from bias_g when > 0
  std::size_t lookahead_depth = 0;
  bool lookahead_biasing = false;
  double lookahead_blend = 0.0;
  ItemOrdering ordering;
  CbqsBudget budget;
  CostParams costs;
  std::uint64_t seed = 0;
  // Draw cap of the rejection-sampling fallback for the first incumbent.
  std::uint64_t start_draws = 1000000;
  std::size_t exact_limit = kDefaultExactLimit;
  // Stop as soon as this value is reached.
  std::optional<std::int64_t> known_optimum;
};

// Incumbent improvement loop. Solutions in the trajectory use the original
// item order. Exact mode also stops once no improving string remains.
Trajectory cbqs_run(const MfkpInstance& inst, const CbqsConfig& config);

// Greedy by efficiency, then repair toward the filling constraint by adding
// the lightest items that still fit. Empty when the result is infeasible.
std::optional<Bits> greedy_start(const MfkpInstance& inst);

struct ConstraintComparison {
  std::uint64_t samples = 0;
  double p_feasible_single = 0.0;
  double p_feasible_both = 0.0;
  std::uint64_t dead_ends_both = 0;
  // ceil(sqrt(s)) for the first feasible draw s; empty when none was found.
  std::optional<std::int64_t> iterations_to_feasible_single;
  std::optional<std::int64_t> iterations_to_feasible_both;
};

struct ComparisonConfig {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
  BiasSpec bias;  // reference empty = uniform
};

// Feasible-sample rates of the sampler built from the capacity constraint
// only versus both MFKP constraints.
ConstraintComparison single_vs_both_constraints(const MfkpInstance& inst,
                                                const ComparisonConfig& config);

}  // namespace cbqs
