#include "cbqs/amplify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cbqs/errors.hpp"
#include "cbqs/kernels.hpp"

namespace cbqs {

namespace {

using Clock = std::chrono::steady_clock;

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError("probability must lie in [0, 1]");
}

// Average of cos^2((2j + 1) theta) over j = 0..2^k - 1.
double round_failure(double theta, int k) {
  const double s2 = std::sin(2.0 * theta);
  if (std::abs(s2) < 1e-300) return std::cos(theta) * std::cos(theta) < 0.5 ? 0.0 : 1.0;
  const double big_m = std::ldexp(1.0, k);
  return 0.5 + std::sin(4.0 * big_m * theta) / (4.0 * big_m * s2);
}

double failure_through(double theta, int r) {
  double product = 1.0;
  for (int k = 0; k <= r; ++k) product *= round_failure(theta, k);
  return product;
}

std::uint64_t ceil_sqrt(std::uint64_t s) {
  auto k = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(s)));
  while (k * k < s) ++k;
  while (k > 0 && (k - 1) * (k - 1) >= s) --k;
  return k;
}

bool better_ratio(const MfkpInstance& inst, std::size_t a, std::size_t b) {
  const auto lhs = static_cast<__int128>(inst.profits[a]) * inst.weights[b];
  const auto rhs = static_cast<__int128>(inst.profits[b]) * inst.weights[a];
  return lhs != rhs ? lhs > rhs : a < b;
}

}  // namespace

AAParams AAParams::make(double p, double t) {
  check_probability(p);
  if (!(t >= 1.0) || !std::isfinite(t))
    throw ValidationError("iteration maximum T must be >= 1");
  AAParams a;
  a.p_good = p;
  a.iteration_max = t;
  const double l = std::log2(t);
  a.m = static_cast<int>(std::floor(l));
  a.aa_frac = std::clamp(l - a.m, 0.0, std::nextafter(1.0, 0.0));
  a.theta = std::asin(std::sqrt(p));
  return a;
}

double classical_success(double p, double t) {
  check_probability(p);
  if (t < 0.0) throw ValidationError("T must be non-negative");
  if (t == 0.0) return 0.0;
  return -std::expm1(t * std::log1p(-p));
}

double aa_success(double p, double t) {
  const AAParams a = AAParams::make(p, t);
  const double fail = (1.0 - a.aa_frac) * failure_through(a.theta, a.m) +
                      a.aa_frac * failure_through(a.theta, a.m + 1);
  return std::clamp(1.0 - fail, 0.0, 1.0);
}

QSearchResult simulate_qsearch(double p, double t, Stream& rng) {
  const AAParams a = AAParams::make(p, t);
  const int r = a.m + (rng.uniform() < a.aa_frac ? 1 : 0);
  QSearchResult out;
  for (int k = 0; k <= r; ++k) {
    const auto j = static_cast<std::int64_t>(rng.below(std::uint64_t{1} << k));
    out.grover_iterations += j;
    ++out.measurements;
    const double s = std::sin((2.0 * static_cast<double>(j) + 1.0) * a.theta);
    if (rng.uniform() < s * s) {
      out.found = true;
      break;
    }
  }
  return out;
}

ExactCharge exact_charge(double p) {
  check_probability(p);
  if (p == 0.0) throw ValidationError("no marked states: p = 0");
  const double theta = std::asin(std::sqrt(p));
  const auto jmax = static_cast<std::int64_t>(
      std::floor(std::numbers::pi / (4.0 * theta)));
  ExactCharge best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::int64_t j = 0; j <= jmax; ++j) {
    const double s = std::sin((2.0 * static_cast<double>(j) + 1.0) * theta);
    const double ps = s * s;
    const double cost = (static_cast<double>(j) + 1.0) / ps;
    if (cost < best_cost) {
      best_cost = cost;
      best.iterations_per_attempt = j;
      best.success_per_attempt = ps;
    }
  }
  best.expected_measurements = 1.0 / best.success_per_attempt;
  best.expected_iterations =
      static_cast<double>(best.iterations_per_attempt) * best.expected_measurements;
  return best;
}

double exact_good_probability(std::span<const LinearConstraint> constraints,
                              const BiasSpec& bias,
                              std::span<const std::int64_t> profits,
                              std::int64_t threshold, std::size_t limit) {
  if (constraints.empty()) throw ValidationError("no constraints given");
  const std::size_t n = constraints.front().size();
  if (n > limit)
    throw ExactLimitExceeded("exact benchmarking is limited to " +
                             std::to_string(limit) + " items, got " +
                             std::to_string(n));
  if (profits.size() != n) throw ValidationError("profit vector has wrong length");
  const Sampler sampler({constraints.begin(), constraints.end()}, bias);
  const kernels::GoodTest good{constraints, profits, threshold};
  double total = 0.0;
  for (const auto& s : kernels::good_states_parallel(sampler, good))
    total += s.probability;
  return total;
}

std::string to_string(BenchMode mode) {
  return mode == BenchMode::Exact ? "exact" : "sampling";
}

BenchMode bench_mode_from_string(const std::string& name) {
  if (name == "exact") return BenchMode::Exact;
  if (name == "sampling") return BenchMode::Sampling;
  throw ValidationError("unknown mode '" + name + "' (expected exact or sampling)");
}

std::optional<Bits> greedy_start(const MfkpInstance& inst) {
  const std::size_t n = inst.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return better_ratio(inst, a, b); });
  Bits x(n, 0);
  std::int64_t load = 0;
  for (auto j : order)
    if (load + inst.weights[j] <= inst.capacity) {
      x[j] = 1;
      load += inst.weights[j];
    }
  if (load < inst.capacity - inst.gap) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return inst.weights[a] < inst.weights[b];
    });
    for (auto j : order) {
      if (load >= inst.capacity - inst.gap) break;
      if (!x[j] && load + inst.weights[j] <= inst.capacity) {
        x[j] = 1;
        load += inst.weights[j];
      }
    }
  }
  if (!inst.feasible(x)) return std::nullopt;
  return x;
}

Trajectory cbqs_run(const MfkpInstance& inst, const CbqsConfig& config) {
  inst.validate();
  config.costs.validate();
  if (config.budget.max_oracle_calls < 0 || !(config.budget.max_modeled_seconds >= 0.0))
    throw ValidationError("budgets must be non-negative");
  const auto wall_start = Clock::now();
  const std::size_t n = inst.size();
  if (config.mode == BenchMode::Exact && n > config.exact_limit)
    throw ExactLimitExceeded("exact benchmarking is limited to " +
                             std::to_string(config.exact_limit) + " items");

  const Reordered ro = reorder(inst, config.ordering);
  const MfkpInstance& work = ro.instance;
  auto [upper, lower] = mfkp_constraints(work);
  const std::vector<LinearConstraint> cons{upper, lower};
  const CycleReport cost = stateprep_cycles(work, config.costs, config.lookahead_depth,
                                            config.lookahead_biasing);
  const auto grover = static_cast<double>(cost.grover_iteration_cycles);
  const auto prep = static_cast<double>(cost.stateprep_cycles);
  const std::vector<double> g =
      config.mixing > 0.0 ? bias_g_all(work) : std::vector<double>{};

  auto make_bias = [&](const Bits& reference) {
    BiasSpec b;
    b.reference = reference;
    b.strength = config.strength < 0.0 ? static_cast<double>(n) / 4.0 : config.strength;
    b.mixing = config.mixing;
    b.g_values = g;
    b.lookahead_depth = config.lookahead_depth;
    b.lookahead_biasing = config.lookahead_biasing;
    b.lookahead_blend = config.lookahead_blend;
    return b;
  };

  Trajectory traj{"cbqs-" + to_string(config.mode), {}};
  double iterations = 0.0, measurements = 0.0;
  Bits incumbent;
  std::int64_t value = 0;

  auto cycles_at = [&](double it, double ms) { return it * grover + ms * prep; };
  auto record = [&] {
    TrajectoryRecord r;
    r.incumbent_value = value;
    r.oracle_calls = std::llround(iterations);
    r.cycles = std::llround(cycles_at(iterations, measurements));
    r.modeled_seconds = cycles_to_seconds(static_cast<double>(r.cycles), config.costs);
    r.wall_seconds = std::chrono::duration<double>(Clock::now() - wall_start).count();
    r.solution = restore_order(incumbent, ro.permutation);
    traj.records.push_back(std::move(r));
  };
  auto within = [&](double it, double ms) {
    const double total_it = iterations + it;
    return total_it <= static_cast<double>(config.budget.max_oracle_calls) + 1e-9 &&
           cycles_to_seconds(cycles_at(total_it, measurements + ms), config.costs) <=
               config.budget.max_modeled_seconds;
  };

  if (auto start = greedy_start(work)) {
    incumbent = std::move(*start);
  } else {
    const Sampler uniform(cons, BiasSpec::uniform(n));
    const kernels::GoodTest feasible{cons, work.profits, -1};
    const auto hit = kernels::first_hit_parallel(
        uniform, feasible, Stream::derive(config.seed, ~std::uint64_t{0})(), 0,
        config.start_draws);
    if (!hit.outcome)
      throw NoFeasibleStart("no feasible string among " +
                            std::to_string(config.start_draws) + " samples");
    incumbent = hit.outcome->bits;
    iterations += static_cast<double>(ceil_sqrt(hit.draws));
    measurements += 1.0;
  }
  value = work.profit(incumbent);
  record();

  for (std::uint64_t step = 0;; ++step) {
    if (config.known_optimum && value >= *config.known_optimum) break;
    if (std::chrono::duration<double>(Clock::now() - wall_start).count() >=
        config.budget.max_wall_seconds)
      break;
    const Sampler sampler(cons, make_bias(incumbent));
    const kernels::GoodTest good{cons, work.profits, value};
    Stream rng = Stream::derive(config.seed, step);

    if (config.mode == BenchMode::Exact) {
      const auto states = kernels::good_states_parallel(sampler, good);
      if (states.empty()) break;
      double p = 0.0;
      for (const auto& s : states) p += s.probability;
      const ExactCharge charge = exact_charge(std::min(p, 1.0));
      if (!within(charge.expected_iterations, charge.expected_measurements)) break;
      iterations += charge.expected_iterations;
      measurements += charge.expected_measurements;
      double u = rng.uniform() * p;
      std::size_t pick = states.size() - 1;
      for (std::size_t k = 0; k < states.size(); ++k) {
        u -= states[k].probability;
        if (u < 0.0) {
          pick = k;
          break;
        }
      }
      incumbent = states[pick].bits;
    } else {
      const double left_it =
          static_cast<double>(config.budget.max_oracle_calls) - iterations;
      double left_sec = std::numeric_limits<double>::infinity();
      if (std::isfinite(config.budget.max_modeled_seconds))
        left_sec = (config.budget.max_modeled_seconds / config.costs.cycle_time_seconds -
                    cycles_at(iterations, measurements + 1.0)) /
                   grover;
      const double kmax = std::min({std::floor(left_it + 1e-9), std::floor(left_sec), 3e9});
      if (kmax < 1.0) break;
      const auto k = static_cast<std::uint64_t>(kmax);
      const auto hit =
          kernels::first_hit_parallel(sampler, good, rng(), 0, k * k);
      iterations += static_cast<double>(ceil_sqrt(hit.draws));
      measurements += 1.0;
      if (!hit.outcome) break;
      incumbent = hit.outcome->bits;
    }
    value = work.profit(incumbent);
    record();
  }
  return traj;
}

ConstraintComparison single_vs_both_constraints(const MfkpInstance& inst,
                                                const ComparisonConfig& config) {
  inst.validate();
  const std::size_t n = inst.size();
  const BiasSpec bias =
      config.bias.reference.empty() ? BiasSpec::uniform(n) : config.bias;
  auto [upper, lower] = mfkp_constraints(inst);
  const std::vector<LinearConstraint> check{upper, lower};
  const Sampler single({upper}, bias);
  const Sampler both(check, bias);

  const auto s1 = kernels::sample_stats_parallel(single, check, config.seed, config.samples);
  const auto s2 = kernels::sample_stats_parallel(both, check, config.seed, config.samples);
  ConstraintComparison out;
  out.samples = config.samples;
  if (config.samples > 0) {
    out.p_feasible_single =
        static_cast<double>(s1.feasible) / static_cast<double>(config.samples);
    out.p_feasible_both =
        static_cast<double>(s2.feasible) / static_cast<double>(config.samples);
  }
  out.dead_ends_both = s2.dead_ends;

  const kernels::GoodTest feasible{check, inst.profits, -1};
  auto first = [&](const Sampler& s) -> std::optional<std::int64_t> {
    const auto hit = kernels::first_hit_parallel(s, feasible, config.seed, 0, config.samples);
    if (!hit.outcome) return std::nullopt;
    return static_cast<std::int64_t>(ceil_sqrt(hit.draws));
  };
  out.iterations_to_feasible_single = first(single);
  out.iterations_to_feasible_both = first(both);
  return out;
}

}  // namespace cbqs
