#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cbqs/instance.hpp"
#include "cbqs/rng.hpp"

namespace cbqs {

// Parameters of the biased state preparation.
//
// Per item j the free-branch probabilities are
//   q1 = ((b x*_j + 1)/(b + 2) + f g_j) / (1 + f),   q0 = 1 - q1,
// so b = 0, f = 0 is the uniform distribution.
struct BiasSpec {
  Bits reference;                // x*
  double strength = 0.0;         // b
  double mixing = 0.0;           // f
  std::vector<double> g_values;  // g(j) in [0,1]; may be empty when f == 0
  std::size_t lookahead_depth = 0;
  bool lookahead_biasing = false;
  double lookahead_blend = 0.0;  // lambda, used only with lookahead_biasing

  static BiasSpec uniform(std::size_t n);
  // b = n/4 around `reference`, f = 0, no look-ahead.
  static BiasSpec centered(Bits reference);
};

struct BitProbabilities {
  double q0;
  double q1;
};

BitProbabilities bias_probability(const BiasSpec& bias, std::size_t j);

// Instance-structure bias: linear interpolation between 0.8 (least relative
// cost) and 0.2 (largest relative cost) for items with efficiency p/w > 1,
// and 0.2 otherwise.
double bias_g(const MfkpInstance& inst, std::size_t j);
std::vector<double> bias_g_all(const MfkpInstance& inst);

struct BranchFlags {
  bool zero = false;
  bool one = false;
  bool operator==(const BranchFlags&) const = default;
};

// Whether assigning bit i to 0 / 1 keeps every constraint's remaining budget
// non-negative. budgets[k] = C^k - (prefix value of constraint k so far).
BranchFlags branch_flags(std::span<const LinearConstraint> constraints,
                         std::span<const std::int64_t> budgets, std::size_t i);

// Exhaustive check of bits i..min(i+d, n-1): flag v is set iff some window
// assignment starting with v keeps every budget non-negative. d = 0 is
// exactly branch_flags.
BranchFlags lookahead_flags(std::span<const LinearConstraint> constraints,
                            std::span<const std::int64_t> budgets,
                            std::size_t i, std::size_t d);

// Number of passing window assignments that start with 0 / 1.
std::pair<std::uint64_t, std::uint64_t> lookahead_counts(
    std::span<const LinearConstraint> constraints,
    std::span<const std::int64_t> budgets, std::size_t i, std::size_t d);

enum class StepKind : std::uint8_t { Free, Forced0, Forced1, DeadEnd };

struct SampleOutcome {
  Bits bits;
  bool feasible = false;
  std::optional<std::size_t> dead_end_at;
  std::vector<StepKind> trace;  // steps at and after a dead end are DeadEnd
};

// Algorithm 1: a single constraint with per-bit P(y_i = 1) = q1[i]. Every
// output satisfies the constraint. Throws UnsatisfiableConstraint when even
// the minimizing string violates it.
Bits sample_single(const LinearConstraint& constraint,
                   std::span<const double> q1, Stream& rng);

// Sequential constraint-aware sampler (Algorithm 2 with the four-outcome
// rule). Immutable after construction; share freely across threads.
class Sampler {
 public:
  Sampler(std::vector<LinearConstraint> constraints, BiasSpec bias);

  std::size_t size() const { return n_; }
  const std::vector<LinearConstraint>& constraints() const {
    return constraints_;
  }
  const BiasSpec& bias() const { return bias_; }
  std::span<const double> q1() const { return q1_; }

  SampleOutcome sample(Stream& rng) const;

  // Exact probability that sample() returns y.
  double path_probability(std::span<const std::uint8_t> y) const;

  // Step primitives, used by the exact enumeration kernels.
  std::vector<std::int64_t> initial_budgets() const { return initial_budgets_; }
  BranchFlags flags(std::span<const std::int64_t> budgets, std::size_t i) const;
  // P(y_i = 1) on a free step (includes look-ahead biasing when enabled).
  double free_q1(std::span<const std::int64_t> budgets, std::size_t i) const;
  void consume(std::span<std::int64_t> budgets, std::size_t i,
               std::uint8_t bit) const;
  std::uint8_t dead_end_fill(std::size_t i) const { return fill_[i]; }
  bool all_satisfied(std::span<const std::uint8_t> y) const;

 private:
  bool window_ok(std::span<const std::int64_t> budgets, std::size_t i,
                 std::size_t assignment) const;
  std::pair<std::uint64_t, std::uint64_t> window_counts(
      std::span<const std::int64_t> budgets, std::size_t i) const;

  std::size_t n_;
  std::vector<LinearConstraint> constraints_;
  BiasSpec bias_;
  std::vector<double> q1_;
  std::vector<Bits> minimizers_;
  Bits fill_;
  std::vector<std::int64_t> initial_budgets_;
  // cost_[k][i]: budget consumed when bit i differs from constraint k's
  // minimizing bit (|w^k_i|).
  std::vector<std::vector<std::int64_t>> cost_;
  // Look-ahead tables: window_[i][k][a] = budget consumed by window
  // assignment a (bit t of a is the value of item i+t).
  std::vector<std::vector<std::vector<std::int64_t>>> window_;
  std::vector<std::size_t> window_len_;
};

// Algorithm 2 in one call.
SampleOutcome sample_multi(std::span<const LinearConstraint> constraints,
                           const BiasSpec& bias, Stream& rng);

}  // namespace cbqs
