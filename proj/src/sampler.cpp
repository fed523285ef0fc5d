#include "cbqs/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "cbqs/errors.hpp"

namespace cbqs {

namespace {

constexpr std::size_t kMaxLookahead = 16;

std::int64_t minimized_value(const LinearConstraint& c) {
  std::int64_t v = 0;
  for (auto w : c.coeffs)
    if (w < 0) v += w;
  return v;
}

}  // namespace

BiasSpec BiasSpec::uniform(std::size_t n) {
  BiasSpec b;
  b.reference.assign(n, 0);
  return b;
}

BiasSpec BiasSpec::centered(Bits reference) {
  BiasSpec b;
  b.strength = static_cast<double>(reference.size()) / 4.0;
  b.reference = std::move(reference);
  return b;
}

BitProbabilities bias_probability(const BiasSpec& bias, std::size_t j) {
  const double b = bias.strength;
  const double f = bias.mixing;
  const double ref = bias.reference.empty() ? 0.0 : bias.reference[j];
  const double g = bias.g_values.empty() ? 0.5 : bias.g_values[j];
  const double q1 = ((b * ref + 1.0) / (b + 2.0) + f * g) / (1.0 + f);
  const double q0 = ((b * (1.0 - ref) + 1.0) / (b + 2.0) + f * (1.0 - g)) /
                    (1.0 + f);
  return {q0, q1};
}

double bias_g(const MfkpInstance& inst, std::size_t j) {
  const double c = static_cast<double>(inst.capacity);
  double lo = static_cast<double>(inst.weights[0]) / c;
  double hi = lo;
  for (auto w : inst.weights) {
    lo = std::min(lo, static_cast<double>(w) / c);
    hi = std::max(hi, static_cast<double>(w) / c);
  }
  if (inst.profits[j] <= inst.weights[j]) return 0.2;
  if (hi == lo) return 0.8;
  const double r = static_cast<double>(inst.weights[j]) / c;
  return -0.6 / (hi - lo) * (r - lo) + 0.8;
}

std::vector<double> bias_g_all(const MfkpInstance& inst) {
  std::vector<double> g(inst.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = bias_g(inst, j);
  return g;
}

BranchFlags branch_flags(std::span<const LinearConstraint> constraints,
                         std::span<const std::int64_t> budgets,
                         std::size_t i) {
  BranchFlags f{true, true};
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const std::int64_t w = constraints[k].coeffs[i];
    if (w >= 0)
      f.one = f.one && budgets[k] >= w;
    else
      f.zero = f.zero && budgets[k] >= -w;
  }
  return f;
}

namespace {

// Budget consumed by every window assignment, per constraint.
std::vector<std::vector<std::int64_t>> window_table(
    std::span<const LinearConstraint> constraints, std::size_t i,
    std::size_t len) {
  std::vector<std::vector<std::int64_t>> table(constraints.size());
  const std::size_t count = std::size_t{1} << len;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    auto& t = table[k];
    t.assign(count, 0);
    for (std::size_t a = 1; a < count; ++a) {
      const std::size_t bit = static_cast<std::size_t>(std::countr_zero(a));
      const std::size_t rest = a & (a - 1);
      const std::int64_t w = constraints[k].coeffs[i + bit];
      // Setting bit `bit` to 1 costs |w| only when the minimizer has 0 there;
      // a 0 there costs |w| when the minimizer has 1 (w < 0).
      t[a] = t[rest] + (w > 0 ? w : 0) - (w < 0 ? -w : 0);
    }
    std::int64_t base = 0;  // cost of the all-zeros window assignment
    for (std::size_t t_idx = 0; t_idx < len; ++t_idx) {
      const std::int64_t w = constraints[k].coeffs[i + t_idx];
      if (w < 0) base += -w;
    }
    for (auto& v : t) v += base;
  }
  return table;
}

std::pair<std::uint64_t, std::uint64_t> count_window(
    const std::vector<std::vector<std::int64_t>>& table,
    std::span<const std::int64_t> budgets) {
  std::uint64_t n0 = 0, n1 = 0;
  const std::size_t count = table.empty() ? 0 : table[0].size();
  for (std::size_t a = 0; a < count; ++a) {
    bool ok = true;
    for (std::size_t k = 0; k < table.size() && ok; ++k)
      ok = table[k][a] <= budgets[k];
    if (ok) ++((a & 1U) ? n1 : n0);
  }
  return {n0, n1};
}

}  // namespace

BranchFlags lookahead_flags(std::span<const LinearConstraint> constraints,
                            std::span<const std::int64_t> budgets,
                            std::size_t i, std::size_t d) {
  if (d == 0) return branch_flags(constraints, budgets, i);
  auto [n0, n1] = lookahead_counts(constraints, budgets, i, d);
  return {n0 > 0, n1 > 0};
}

std::pair<std::uint64_t, std::uint64_t> lookahead_counts(
    std::span<const LinearConstraint> constraints,
    std::span<const std::int64_t> budgets, std::size_t i, std::size_t d) {
  const std::size_t n = constraints.front().size();
  const std::size_t len = std::min(d + 1, n - i);
  return count_window(window_table(constraints, i, len), budgets);
}

Bits sample_single(const LinearConstraint& constraint,
                   std::span<const double> q1, Stream& rng) {
  const Bits xw = minimizing_string(constraint.coeffs);
  std::int64_t budget = constraint.bound - minimized_value(constraint);
  if (budget < 0)
    throw UnsatisfiableConstraint(
        "constraint is violated by its minimizing string");
  const std::size_t n = constraint.size();
  Bits y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t mag = std::abs(constraint.coeffs[i]);
    if (budget >= mag) {
      y[i] = rng.uniform() < q1[i] ? 1 : 0;
      if (y[i] != xw[i]) budget -= mag;
    } else {
      y[i] = xw[i];
    }
  }
  return y;
}

Sampler::Sampler(std::vector<LinearConstraint> constraints, BiasSpec bias)
    : constraints_(std::move(constraints)), bias_(std::move(bias)) {
  if (constraints_.empty()) throw ValidationError("no constraints given");
  n_ = constraints_.front().size();
  if (n_ == 0) throw ValidationError("constraints have no coefficients");
  for (const auto& c : constraints_)
    if (c.size() != n_)
      throw ValidationError("constraints differ in length");
  if (bias_.reference.empty()) bias_.reference.assign(n_, 0);
  if (bias_.reference.size() != n_)
    throw ValidationError("reference string has wrong length");
  if (!bias_.g_values.empty() && bias_.g_values.size() != n_)
    throw ValidationError("g_values has wrong length");
  if (bias_.mixing > 0.0 && bias_.g_values.empty())
    throw ValidationError("mixing factor f > 0 requires g_values");
  if (!(bias_.strength >= 0.0) || !(bias_.mixing >= 0.0))
    throw ValidationError("bias strength and mixing must be non-negative");
  if (bias_.lookahead_depth > kMaxLookahead)
    throw ValidationError("look-ahead depth above 16 is not supported");
  if (bias_.lookahead_blend < 0.0 || bias_.lookahead_blend > 1.0)
    throw ValidationError("look-ahead blend must lie in [0, 1]");

  q1_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    q1_[j] = bias_probability(bias_, j).q1;
    if (!(q1_[j] > 0.0 && q1_[j] < 1.0))
      throw ValidationError("bias probability for item " + std::to_string(j) +
                            " is not strictly inside (0, 1)");
  }

  const std::size_t m = constraints_.size();
  minimizers_.resize(m);
  cost_.resize(m);
  initial_budgets_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto& c = constraints_[k];
    minimizers_[k] = minimizing_string(c.coeffs);
    initial_budgets_[k] = c.bound - minimized_value(c);
    if (initial_budgets_[k] < 0)
      throw UnsatisfiableConstraint("constraint " + std::to_string(k) +
                                    " is violated by its minimizing string");
    cost_[k].resize(n_);
    for (std::size_t i = 0; i < n_; ++i) cost_[k][i] = std::abs(c.coeffs[i]);
  }
  fill_ = minimizers_.front();

  if (bias_.lookahead_depth > 0) {
    window_.resize(n_);
    window_len_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      window_len_[i] = std::min(bias_.lookahead_depth + 1, n_ - i);
      window_[i] = window_table(constraints_, i, window_len_[i]);
    }
  }
}

BranchFlags Sampler::flags(std::span<const std::int64_t> budgets,
                           std::size_t i) const {
  if (bias_.lookahead_depth == 0)
    return branch_flags(constraints_, budgets, i);
  auto [n0, n1] = window_counts(budgets, i);
  return {n0 > 0, n1 > 0};
}

std::pair<std::uint64_t, std::uint64_t> Sampler::window_counts(
    std::span<const std::int64_t> budgets, std::size_t i) const {
  return count_window(window_[i], budgets);
}

double Sampler::free_q1(std::span<const std::int64_t> budgets,
                        std::size_t i) const {
  if (!bias_.lookahead_biasing || bias_.lookahead_depth == 0 ||
      bias_.lookahead_blend == 0.0)
    return q1_[i];
  auto [n0, n1] = window_counts(budgets, i);
  const double ratio =
      static_cast<double>(n1) / static_cast<double>(n0 + n1);
  const double lambda = bias_.lookahead_blend;
  return (1.0 - lambda) * q1_[i] + lambda * ratio;
}

void Sampler::consume(std::span<std::int64_t> budgets, std::size_t i,
                      std::uint8_t bit) const {
  for (std::size_t k = 0; k < constraints_.size(); ++k)
    if (bit != minimizers_[k][i]) budgets[k] -= cost_[k][i];
}

bool Sampler::all_satisfied(std::span<const std::uint8_t> y) const {
  for (const auto& c : constraints_)
    if (!c.satisfied_by(y)) return false;
  return true;
}

SampleOutcome Sampler::sample(Stream& rng) const {
  SampleOutcome out;
  out.bits.assign(n_, 0);
  out.trace.assign(n_, StepKind::Free);
  auto budgets = initial_budgets_;
  for (std::size_t i = 0; i < n_; ++i) {
    const BranchFlags f = flags(budgets, i);
    std::uint8_t bit;
    if (f.zero && f.one) {
      bit = rng.uniform() < free_q1(budgets, i) ? 1 : 0;
    } else if (f.one) {
      bit = 1;
      out.trace[i] = StepKind::Forced1;
    } else if (f.zero) {
      bit = 0;
      out.trace[i] = StepKind::Forced0;
    } else {
      out.dead_end_at = i;
      for (std::size_t j = i; j < n_; ++j) {
        out.bits[j] = fill_[j];
        out.trace[j] = StepKind::DeadEnd;
      }
      break;
    }
    out.bits[i] = bit;
    consume(budgets, i, bit);
  }
  out.feasible = all_satisfied(out.bits);
  return out;
}

double Sampler::path_probability(std::span<const std::uint8_t> y) const {
  auto budgets = initial_budgets_;
  double prob = 1.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const BranchFlags f = flags(budgets, i);
    if (f.zero && f.one) {
      const double q = free_q1(budgets, i);
      prob *= y[i] ? q : 1.0 - q;
    } else if (f.one || f.zero) {
      if ((y[i] != 0) != f.one) return 0.0;
    } else {
      for (std::size_t j = i; j < n_; ++j)
        if (y[j] != fill_[j]) return 0.0;
      return prob;
    }
    consume(budgets, i, y[i]);
  }
  return prob;
}

SampleOutcome sample_multi(std::span<const LinearConstraint> constraints,
                           const BiasSpec& bias, Stream& rng) {
  Sampler sampler({constraints.begin(), constraints.end()}, bias);
  return sampler.sample(rng);
}

}  // namespace cbqs
