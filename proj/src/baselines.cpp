#include "cbqs/baselines.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>

#include "cbqs/errors.hpp"
#include "cbqs/kernels.hpp"
#include "cbqs/rng.hpp"

namespace cbqs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::int64_t penalty_weight(const MfkpInstance& inst) {
  std::int64_t total = 0;
  for (auto p : inst.profits) total += p < 0 ? -p : p;
  return 2 * total + 1;
}

std::int64_t violation(const MfkpInstance& inst, std::int64_t load) {
  if (load > inst.capacity) return load - inst.capacity;
  const std::int64_t lo = inst.capacity - inst.gap;
  return load < lo ? lo - load : 0;
}

void normalize(std::span<double> v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
}

}  // namespace

BruteForceResult brute_force(const MfkpInstance& inst) {
  return kernels::brute_force_parallel(inst);
}

Trajectory simulated_annealing(const MfkpInstance& inst,
                               const AnnealingConfig& config) {
  inst.validate();
  const auto start = Clock::now();
  const std::size_t n = inst.size();
  const auto rho = static_cast<double>(penalty_weight(inst));
  const double heaviest = static_cast<double>(
      *std::max_element(inst.weights.begin(), inst.weights.end()));
  const double t0 = config.initial_temperature > 0.0 ? config.initial_temperature
                                                     : rho * heaviest;
  double cooling = config.cooling;
  if (cooling <= 0.0)
    cooling = config.iterations > 0
                  ? std::pow(1e-4, 1.0 / static_cast<double>(config.iterations))
                  : 1.0;

  Trajectory traj{"sa", {}};
  Bits x(n, 0);
  std::int64_t load = 0, profit = 0;
  auto energy = [&](std::int64_t pr, std::int64_t ld) {
    return static_cast<double>(pr) -
           rho * static_cast<double>(violation(inst, ld));
  };
  auto record = [&](std::uint64_t evals) {
    TrajectoryRecord r;
    r.incumbent_value = profit;
    r.oracle_calls = static_cast<std::int64_t>(evals);
    r.modeled_seconds = static_cast<double>(evals) * config.seconds_per_iteration;
    r.wall_seconds = seconds_since(start);
    r.solution = x;
    traj.records.push_back(std::move(r));
  };
  if (violation(inst, 0) == 0) record(0);

  Stream rng(config.seed);
  double temperature = t0;
  double current = energy(profit, load);
  for (std::uint64_t it = 0; it < config.iterations; ++it) {
    const auto j = static_cast<std::size_t>(rng.below(n));
    const std::int64_t sign = x[j] ? -1 : 1;
    const std::int64_t nl = load + sign * inst.weights[j];
    const std::int64_t np = profit + sign * inst.profits[j];
    const double proposed = energy(np, nl);
    const double delta = proposed - current;
    if (delta >= 0.0 || rng.uniform() < std::exp(delta / temperature)) {
      x[j] ^= 1U;
      load = nl;
      profit = np;
      current = proposed;
      if (violation(inst, load) == 0 &&
          (traj.empty() || profit > traj.back().incumbent_value))
        record(it + 1);
    }
    temperature *= cooling;
    if ((it & 1023U) == 1023U && seconds_since(start) >= config.max_wall_seconds)
      break;
  }
  return traj;
}

SlackEncoding slack_binarize(const MfkpInstance& inst) {
  if (inst.gap < 0) throw ValidationError("gap must be non-negative");
  SlackEncoding enc;
  enc.target = inst.capacity;
  enc.max_slack = inst.gap;
  const int s = static_cast<int>(std::bit_width(static_cast<std::uint64_t>(inst.gap)));
  for (int j = 0; j + 1 < s; ++j) enc.slack_coeffs.push_back(std::int64_t{1} << j);
  if (s > 0)
    enc.slack_coeffs.push_back(inst.gap - (std::int64_t{1} << (s - 1)) + 1);
  return enc;
}

double QuadraticForm::evaluate(std::span<const std::int8_t> z) const {
  double total = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < dim; ++j) row += at(i, j) * z[j];
    total += z[i] * row;
  }
  return total + constant;
}

QuadraticForm build_gw_qform(const MfkpInstance& inst) {
  inst.validate();
  QuadraticForm q;
  q.slack = slack_binarize(inst);
  q.items = inst.size();
  q.dim = 1 + q.items + q.slack.slack_coeffs.size();
  q.penalty = static_cast<double>(penalty_weight(inst));

  // a.b - c with b_j = (1 + z0 z_j)/2 equals z0 (u.z), u_0 = A/2 - c,
  // u_j = a_j/2; squaring drops z0.
  std::vector<double> u(q.dim, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < q.items; ++j) {
    u[1 + j] = static_cast<double>(inst.weights[j]) / 2.0;
    total += static_cast<double>(inst.weights[j]);
  }
  for (std::size_t j = 0; j < q.slack.slack_coeffs.size(); ++j) {
    u[1 + q.items + j] = static_cast<double>(q.slack.slack_coeffs[j]) / 2.0;
    total += static_cast<double>(q.slack.slack_coeffs[j]);
  }
  u[0] = total / 2.0 - static_cast<double>(inst.capacity);
  q.penalty_vector = u;

  q.matrix.assign(q.dim * q.dim, 0.0);
  for (std::size_t i = 0; i < q.dim; ++i)
    for (std::size_t j = 0; j < q.dim; ++j)
      q.matrix[i * q.dim + j] = -q.penalty * u[i] * u[j];
  double profit_sum = 0.0;
  for (std::size_t j = 0; j < q.items; ++j) {
    const double p = static_cast<double>(inst.profits[j]);
    q.matrix[1 + j] += p / 4.0;
    q.matrix[(1 + j) * q.dim] += p / 4.0;
    profit_sum += p;
  }
  q.constant = profit_sum / 2.0;
  return q;
}

std::size_t recommended_rank(std::size_t dim) {
  const auto r = static_cast<std::size_t>(
      std::ceil(std::sqrt(2.0 * static_cast<double>(dim))));
  return r + 1;
}

double gram_objective(const QuadraticForm& q, const GramFactor& v) {
  double total = 0.0;
  for (std::size_t i = 0; i < q.dim; ++i) {
    const auto vi = v.row(i);
    for (std::size_t j = 0; j < q.dim; ++j) {
      const auto vj = v.row(j);
      double d = 0.0;
      for (std::size_t r = 0; r < v.rank; ++r) d += vi[r] * vj[r];
      total += q.at(i, j) * d;
    }
  }
  return total;
}

GramFactor solve_sdp_lowrank(const QuadraticForm& q, const SdpOptions& options) {
  const std::size_t rank =
      options.rank == 0 ? recommended_rank(q.dim) : options.rank;
  if (rank < 2) throw ValidationError("SDP rank must be at least 2");
  GramFactor v;
  v.dim = q.dim;
  v.rank = rank;
  v.vectors.resize(q.dim * rank);
  Stream rng(options.seed);
  for (std::size_t i = 0; i < q.dim; ++i) {
    std::span<double> row(v.vectors.data() + i * rank, rank);
    do {
      for (double& x : row) x = rng.uniform() - 0.5;
    } while (std::all_of(row.begin(), row.end(), [](double x) { return x == 0.0; }));
    normalize(row);
  }
  return solve_sdp_lowrank(q, std::move(v), options);
}

namespace {

struct AscentResult {
  std::size_t sweeps = 0;
  std::size_t degenerate = 0;
  bool converged = false;
  double objective = 0.0;
};

double objective_of(std::span<const double> m, std::size_t n, const GramFactor& v) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < v.rank; ++k)
        d += v.vectors[i * v.rank + k] * v.vectors[j * v.rank + k];
      total += m[i * n + j] * d;
    }
  return total;
}

// Row-wise exact maximization of <M, V V^T> over unit rows.
AscentResult ascend(std::span<const double> m, std::size_t n, GramFactor& v,
                    std::size_t max_sweeps, double tolerance) {
  const std::size_t r = v.rank;
  // Running sums S_i = sum_j M_ij v_j, updated after every row change.
  std::vector<double> s(n * r, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < r; ++k)
        s[i * r + k] += m[i * n + j] * v.vectors[j * r + k];

  std::vector<double> g(r), old(r);
  AscentResult out;
  out.objective = objective_of(m, n, v);
  while (out.sweeps < max_sweeps) {
    for (std::size_t i = 0; i < n; ++i) {
      double norm = 0.0;
      for (std::size_t k = 0; k < r; ++k) {
        g[k] = s[i * r + k] - m[i * n + i] * v.vectors[i * r + k];
        norm += g[k] * g[k];
      }
      norm = std::sqrt(norm);
      if (!(norm > 0.0)) {
        ++out.degenerate;
        continue;
      }
      for (std::size_t k = 0; k < r; ++k) {
        old[k] = v.vectors[i * r + k];
        v.vectors[i * r + k] = g[k] / norm;
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double mji = m[j * n + i];
        if (mji == 0.0) continue;
        for (std::size_t k = 0; k < r; ++k)
          s[j * r + k] += mji * (v.vectors[i * r + k] - old[k]);
      }
    }
    ++out.sweeps;
    const double next = objective_of(m, n, v);
    const double gain = next - out.objective;
    out.objective = std::max(out.objective, next);
    if (gain <= tolerance * std::max(1.0, std::abs(next))) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

GramFactor solve_sdp_lowrank(const QuadraticForm& q, GramFactor v,
                             const SdpOptions& options) {
  if (v.dim != q.dim || v.vectors.size() != v.dim * v.rank)
    throw ValidationError("starting factor does not match the form");
  if (v.rank < 2) throw ValidationError("SDP rank must be at least 2");
  const std::size_t n = q.dim;
  v.sweeps = 0;
  v.degenerate_updates = 0;

  // Penalty continuation: the rank-one penalty dominates the spectrum and
  // stalls row updates, so warm up on rho * 10^-k, k = stages..1.
  if (options.continuation_stages > 0 && q.penalty_vector.size() == n) {
    std::vector<double> base(q.matrix);
    const auto& u = q.penalty_vector;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) base[i * n + j] += q.penalty * u[i] * u[j];
    std::vector<double> staged(n * n);
    Stream rng = Stream::derive(options.seed, 1);
    for (std::size_t k = options.continuation_stages; k >= 1; --k) {
      const double rho = q.penalty * std::pow(10.0, -static_cast<double>(k));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          staged[i * n + j] = base[i * n + j] - rho * u[i] * u[j];
      // Row updates never leave a rank-deficient configuration, so shake the
      // rows before each stage.
      for (std::size_t i = 0; i < n; ++i) {
        std::span<double> row(v.vectors.data() + i * v.rank, v.rank);
        for (double& x : row) x += 0.05 * (rng.uniform() - 0.5);
        normalize(row);
      }
      const auto stage = ascend(staged, n, v, options.max_sweeps, options.tolerance);
      v.sweeps += stage.sweeps;
      v.degenerate_updates += stage.degenerate;
    }
  }

  const auto last = ascend(q.matrix, n, v, options.max_sweeps, options.tolerance);
  v.sweeps += last.sweeps;
  v.degenerate_updates += last.degenerate;
  v.converged = last.converged;
  v.objective = last.objective;
  v.bound_valid = v.converged && v.rank + 1 >= recommended_rank(q.dim);
  return v;
}

GramFactor rank_one_factor(const QuadraticForm& q,
                           std::span<const std::int8_t> z, std::size_t rank) {
  if (z.size() != q.dim) throw ValidationError("spin vector has wrong length");
  if (rank < 1) throw ValidationError("rank must be positive");
  GramFactor v;
  v.dim = q.dim;
  v.rank = rank;
  v.vectors.assign(q.dim * rank, 0.0);
  for (std::size_t i = 0; i < q.dim; ++i) v.vectors[i * rank] = z[i];
  v.objective = gram_objective(q, v);
  return v;
}

Bits decode_spins(std::span<const std::int8_t> z, std::size_t items) {
  Bits x(items);
  for (std::size_t j = 0; j < items; ++j) x[j] = z[1 + j] == z[0] ? 1 : 0;
  return x;
}

Trajectory gw_round(const GramFactor& factor, const MfkpInstance& inst,
                    const RoundingConfig& config) {
  inst.validate();
  if (factor.dim < 1 + inst.size())
    throw ValidationError("factor dimension is smaller than the instance");
  const auto start = Clock::now();
  Trajectory traj{"gw", {}};
  const std::uint64_t batch = std::max<std::uint64_t>(config.batch, 1);
  for (std::uint64_t first = 0; first < config.trials; first += batch) {
    if (first > 0 && seconds_since(start) >= config.max_wall_seconds) break;
    const std::uint64_t count = std::min(batch, config.trials - first);
    const auto values =
        kernels::round_trials_parallel(factor, inst, config.seed, first, count);
    for (std::uint64_t t = 0; t < count; ++t) {
      const std::int64_t value = values[t];
      if (value < 0 || (!traj.empty() && value <= traj.back().incumbent_value))
        continue;
      TrajectoryRecord r;
      r.incumbent_value = value;
      r.oracle_calls = static_cast<std::int64_t>(first + t + 1);
      r.modeled_seconds =
          static_cast<double>(first + t + 1) * config.seconds_per_trial;
      r.wall_seconds = seconds_since(start);
      r.solution = decode_spins(
          kernels::round_trial(factor, config.seed, first + t), inst.size());
      traj.records.push_back(std::move(r));
    }
  }
  return traj;
}

}  // namespace cbqs
