#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cbqs/instance.hpp"
#include "cbqs/trajectory.hpp"

namespace cbqs {

struct BruteForceResult {
  std::int64_t optimum = 0;
  Bits argmax;  // smallest index encoding among optimal strings
  std::uint64_t feasible_count = 0;
};

inline constexpr std::size_t kBruteForceLimit = 28;

// Exhaustive scan; throws NoFeasibleSolution when nothing is feasible and
// ValidationError above kBruteForceLimit items.
BruteForceResult brute_force(const MfkpInstance& inst);

struct AnnealingConfig {
  std::uint64_t iterations = 200000;
  double initial_temperature = 0.0;  // 0 = rho * max(w), the largest flip penalty
  double cooling = 0.0;              // 0 = reach 1e-4 * T0 at the last step
  std::uint64_t seed = 0;
  // Modeled time of one single-flip evaluation.
  double seconds_per_iteration = 1e-7;
  double max_wall_seconds = std::numeric_limits<double>::infinity();
};

// Single-bit-flip Metropolis on profit - rho * violation, rho = 2 sum(p) + 1,
// geometric cooling. Records feasible incumbents only; oracle_calls counts
// objective evaluations. Deterministic per seed.
Trajectory simulated_annealing(const MfkpInstance& inst,
                               const AnnealingConfig& config);

// c - eps <= w.x <= c rewritten as w.x + y = c with y = sum_j a_j s_j over
// `slack_coeffs.size()` binary slack variables.
struct SlackEncoding {
  std::vector<std::int64_t> slack_coeffs;
  std::int64_t target = 0;     // c
  std::int64_t max_slack = 0;  // eps
};

// ceil(log2(eps + 1)) slack bits with coefficients 1, 2, ..., 2^(s-2) and a
// last coefficient eps - 2^(s-1) + 1, so y ranges over exactly 0..eps.
SlackEncoding slack_binarize(const MfkpInstance& inst);

// Homogenized +-1 quadratic form over z = (z0, items, slack bits):
//   z^T M z + constant = p.x - rho (w.x + y - c)^2   with x_j = (1 + z0 z_j)/2.
struct QuadraticForm {
  std::size_t dim = 0;
  std::size_t items = 0;
  std::vector<double> matrix;  // row-major, symmetric
  double penalty = 0.0;        // rho
  // u with matrix = profit part - rho u u^T; empty for a generic form.
  std::vector<double> penalty_vector;
  double constant = 0.0;
  SlackEncoding slack;

  double at(std::size_t i, std::size_t j) const { return matrix[i * dim + j]; }
  // z^T M z + constant for a +-1 vector.
  double evaluate(std::span<const std::int8_t> z) const;
};

QuadraticForm build_gw_qform(const MfkpInstance& inst);

// Low-rank factor V (dim x rank, unit rows) of the SDP variable X = V V^T.
struct GramFactor {
  std::size_t dim = 0;
  std::size_t rank = 0;
  std::vector<double> vectors;  // row-major
  double objective = 0.0;       // <M, V V^T>
  std::size_t sweeps = 0;
  std::size_t degenerate_updates = 0;
  bool converged = false;
  // rank >= ceil(sqrt(2 dim)) and converged: objective + constant is then
  // reported as an upper bound on the MFKP optimum.
  bool bound_valid = false;

  std::span<const double> row(std::size_t i) const {
    return {vectors.data() + i * rank, rank};
  }
};

struct SdpOptions {
  std::size_t rank = 0;  // 0 = ceil(sqrt(2 dim)) + 1
  std::size_t max_sweeps = 20000;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  // Warm-up ascents at rho * 10^-k before the final one; 0 disables.
  std::size_t continuation_stages = 6;
};

std::size_t recommended_rank(std::size_t dim);

// Block-coordinate ascent on unit vectors maximizing <M, V V^T>; each row is
// replaced by its normalized gradient, so the objective never decreases
// within an ascent. Forms built by build_gw_qform are first solved at
// reduced penalty weights (see SdpOptions::continuation_stages).
GramFactor solve_sdp_lowrank(const QuadraticForm& q, const SdpOptions& options);
// Same ascent from a given starting factor.
GramFactor solve_sdp_lowrank(const QuadraticForm& q, GramFactor start,
                             const SdpOptions& options);

// Rank-1 factor with rows z_i * e_1.
GramFactor rank_one_factor(const QuadraticForm& q,
                           std::span<const std::int8_t> z, std::size_t rank);

double gram_objective(const QuadraticForm& q, const GramFactor& v);

struct RoundingConfig {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::uint64_t batch = 1024;
  // Modeled time of one rounding trial.
  double seconds_per_trial = 1e-6;
  double max_wall_seconds = std::numeric_limits<double>::infinity();
};

// Hyperplane rounding with feasibility post-selection. Trials are
// independent (per-trial streams) and evaluated in parallel batches; the
// trajectory lists improving feasible solutions in trial order.
Trajectory gw_round(const GramFactor& factor, const MfkpInstance& inst,
                    const RoundingConfig& config);

// Decodes a +-1 vector (any z0 sign) into item bits.
Bits decode_spins(std::span<const std::int8_t> z, std::size_t items);

}  // namespace cbqs
