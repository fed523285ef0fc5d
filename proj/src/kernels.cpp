#include "cbqs/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cbqs/errors.hpp"

namespace cbqs::kernels {

namespace {

std::uint64_t encode(std::span<const std::uint8_t> bits) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) idx |= std::uint64_t{1} << i;
  return idx;
}

void sort_by_index(std::vector<WeightedString>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return encode(a.bits) < encode(b.bits);
  });
}

struct ChunkBest {
  bool any = false;
  std::int64_t profit = 0;
  std::uint64_t index = 0;
  std::uint64_t feasible = 0;
};

void merge_best(ChunkBest& into, const ChunkBest& from) {
  into.feasible += from.feasible;
  if (!from.any) return;
  if (!into.any || from.profit > into.profit ||
      (from.profit == into.profit && from.index < into.index)) {
    into.any = true;
    into.profit = from.profit;
    into.index = from.index;
  }
}

// Gray-code walk over the low bits of one chunk of the search space.
ChunkBest scan_chunk(const MfkpInstance& inst, std::uint64_t chunk,
                     std::size_t low_bits) {
  const std::size_t n = inst.size();
  const std::uint64_t base = chunk << low_bits;
  std::int64_t weight = 0, profit = 0;
  for (std::size_t i = low_bits; i < n; ++i)
    if ((base >> i) & 1U) {
      weight += inst.weights[i];
      profit += inst.profits[i];
    }
  const std::int64_t lo = inst.capacity - inst.gap;
  ChunkBest best;
  std::uint64_t gray = 0;
  const std::uint64_t steps = std::uint64_t{1} << low_bits;
  for (std::uint64_t t = 0; t < steps; ++t) {
    if (t > 0) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(t));
      gray ^= std::uint64_t{1} << bit;
      const std::int64_t sign = ((gray >> bit) & 1U) ? 1 : -1;
      weight += sign * inst.weights[bit];
      profit += sign * inst.profits[bit];
    }
    if (weight <= inst.capacity && weight >= lo) {
      ++best.feasible;
      const std::uint64_t idx = base | gray;
      if (!best.any || profit > best.profit ||
          (profit == best.profit && idx < best.index)) {
        best.any = true;
        best.profit = profit;
        best.index = idx;
      }
    }
  }
  return best;
}

BruteForceResult finish(const MfkpInstance& inst, const ChunkBest& best) {
  if (!best.any) throw NoFeasibleSolution("instance has no feasible string");
  return {best.profit, bits_from_index(best.index, inst.size()), best.feasible};
}

void check_brute_size(const MfkpInstance& inst) {
  inst.validate();
  if (inst.size() > kBruteForceLimit)
    throw ValidationError("brute force is limited to " +
                          std::to_string(kBruteForceLimit) + " items");
}

struct Node {
  std::size_t depth = 0;
  std::vector<std::int64_t> budgets;
  double probability = 1.0;
  Bits bits;
  std::int64_t profit = 0;
};

class TreeWalker {
 public:
  TreeWalker(const Sampler& sampler, const GoodTest& good)
      : sampler_(sampler), good_(good), suffix_(sampler.size() + 1, 0) {
    for (std::size_t i = sampler.size(); i-- > 0;)
      suffix_[i] = suffix_[i + 1] + std::max<std::int64_t>(good.profits[i], 0);
  }

  Node root() const {
    Node r;
    r.budgets = sampler_.initial_budgets();
    r.bits.assign(sampler_.size(), 0);
    return r;
  }

  // Expands `node`; nodes reaching `stop_depth` go to `frontier` (when
  // given), complete strings that pass the good test go to `out`.
  void walk(Node node, std::size_t stop_depth, std::vector<Node>* frontier,
            std::vector<WeightedString>& out) const {
    const std::size_t n = sampler_.size();
    while (true) {
      const std::size_t i = node.depth;
      if (node.profit + suffix_[i] <= good_.threshold) return;
      if (i == n) {
        emit(node, out);
        return;
      }
      if (frontier && i == stop_depth) {
        frontier->push_back(std::move(node));
        return;
      }
      const BranchFlags f = sampler_.flags(node.budgets, i);
      if (f.zero && f.one) {
        const double q = sampler_.free_q1(node.budgets, i);
        Node one = node;
        one.probability *= q;
        advance(one, 1);
        walk(std::move(one), stop_depth, frontier, out);
        node.probability *= 1.0 - q;
        advance(node, 0);
      } else if (f.zero || f.one) {
        advance(node, f.one ? 1 : 0);
      } else {
        for (std::size_t j = i; j < n; ++j) node.bits[j] = sampler_.dead_end_fill(j);
        node.profit = good_.profit(node.bits);
        node.depth = n;
        emit(node, out);
        return;
      }
    }
  }

 private:
  void advance(Node& node, std::uint8_t bit) const {
    const std::size_t i = node.depth;
    node.bits[i] = bit;
    if (bit) node.profit += good_.profits[i];
    sampler_.consume(node.budgets, i, bit);
    ++node.depth;
  }

  void emit(const Node& node, std::vector<WeightedString>& out) const {
    if (node.probability > 0.0 && good_(node.bits))
      out.push_back({node.bits, node.probability, node.profit});
  }

  const Sampler& sampler_;
  const GoodTest& good_;
  std::vector<std::int64_t> suffix_;
};

// Standard normal pair via Box-Muller on the stream.
void fill_normals(Stream& rng, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); i += 2) {
    double u1 = rng.uniform();
    while (u1 <= 0.0) u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    out[i] = r * std::cos(a);
    if (i + 1 < out.size()) out[i + 1] = r * std::sin(a);
  }
}

std::int64_t trial_value(const GramFactor& factor, const MfkpInstance& inst,
                         std::uint64_t seed, std::uint64_t trial) {
  const auto z = round_trial(factor, seed, trial);
  const Bits x = decode_spins(z, inst.size());
  return inst.feasible(x) ? inst.profit(x) : -1;
}

}  // namespace

std::int64_t GoodTest::profit(std::span<const std::uint8_t> y) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < profits.size(); ++i)
    if (y[i]) total += profits[i];
  return total;
}

bool GoodTest::operator()(std::span<const std::uint8_t> y) const {
  for (const auto& c : constraints)
    if (!c.satisfied_by(y)) return false;
  return profit(y) > threshold;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

BruteForceResult brute_force_serial(const MfkpInstance& inst) {
  check_brute_size(inst);
  const std::size_t n = inst.size();
  ChunkBest best;
  Bits x(n);
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
    for (std::size_t i = 0; i < n; ++i) x[i] = (idx >> i) & 1U;
    if (!inst.feasible(x)) continue;
    ++best.feasible;
    const std::int64_t p = inst.profit(x);
    if (!best.any || p > best.profit) {
      best.any = true;
      best.profit = p;
      best.index = idx;
    }
  }
  return finish(inst, best);
}

BruteForceResult brute_force_parallel(const MfkpInstance& inst) {
  check_brute_size(inst);
  const std::size_t n = inst.size();
  const std::size_t high = n >= 12 ? 8 : 0;
  const std::size_t low = n - high;
  const auto chunks = static_cast<std::int64_t>(std::uint64_t{1} << high);
  std::vector<ChunkBest> per_chunk(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c)
    per_chunk[static_cast<std::size_t>(c)] =
        scan_chunk(inst, static_cast<std::uint64_t>(c), low);
  ChunkBest best;
  for (const auto& b : per_chunk) merge_best(best, b);
  return finish(inst, best);
}

std::vector<WeightedString> good_states_serial(const Sampler& sampler,
                                               const GoodTest& good) {
  const std::size_t n = sampler.size();
  if (n > 30) throw ExactLimitExceeded("serial enumeration limited to 30 items");
  std::vector<WeightedString> out;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
    Bits y = bits_from_index(idx, n);
    if (!good(y)) continue;
    const double p = sampler.path_probability(y);
    if (p > 0.0) out.push_back({std::move(y), p, good.profit(bits_from_index(idx, n))});
  }
  return out;
}

std::vector<WeightedString> good_states_parallel(const Sampler& sampler,
                                                 const GoodTest& good) {
  TreeWalker walker(sampler, good);
  std::vector<Node> frontier;
  std::vector<WeightedString> out;
  const std::size_t split = std::min<std::size_t>(sampler.size(), 10);
  walker.walk(walker.root(), split, &frontier, out);

  std::vector<std::vector<WeightedString>> parts(frontier.size());
  const auto count = static_cast<std::int64_t>(frontier.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto u = static_cast<std::size_t>(k);
    walker.walk(std::move(frontier[u]), 0, nullptr, parts[u]);
  }
  for (auto& part : parts)
    for (auto& w : part) out.push_back(std::move(w));
  sort_by_index(out);
  return out;
}

FirstHit first_hit_serial(const Sampler& sampler, const GoodTest& good,
                          std::uint64_t seed, std::uint64_t first,
                          std::uint64_t max_draws) {
  for (std::uint64_t t = 0; t < max_draws; ++t) {
    Stream rng = Stream::derive(seed, first + t);
    SampleOutcome s = sampler.sample(rng);
    if (good(s.bits)) return {t + 1, std::move(s)};
  }
  return {max_draws, std::nullopt};
}

FirstHit first_hit_parallel(const Sampler& sampler, const GoodTest& good,
                            std::uint64_t seed, std::uint64_t first,
                            std::uint64_t max_draws) {
  const std::uint64_t block =
      std::max<std::uint64_t>(256, 256 * static_cast<std::uint64_t>(max_threads()));
  std::vector<std::uint8_t> hit;
  for (std::uint64_t start = 0; start < max_draws; start += block) {
    const std::uint64_t len = std::min(block, max_draws - start);
    hit.assign(len, 0);
    const auto slen = static_cast<std::int64_t>(len);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < slen; ++k) {
      Stream rng = Stream::derive(seed, first + start + static_cast<std::uint64_t>(k));
      hit[static_cast<std::size_t>(k)] = good(sampler.sample(rng).bits) ? 1 : 0;
    }
    auto it = std::find(hit.begin(), hit.end(), 1);
    if (it != hit.end()) {
      const auto t = start + static_cast<std::uint64_t>(it - hit.begin());
      Stream rng = Stream::derive(seed, first + t);
      return {t + 1, sampler.sample(rng)};
    }
  }
  return {max_draws, std::nullopt};
}

SampleStats sample_stats_serial(const Sampler& sampler,
                                std::span<const LinearConstraint> check,
                                std::uint64_t seed, std::uint64_t count) {
  GoodTest feasible{check, {}, -1};
  SampleStats s;
  s.samples = count;
  for (std::uint64_t t = 0; t < count; ++t) {
    Stream rng = Stream::derive(seed, t);
    const SampleOutcome o = sampler.sample(rng);
    if (o.dead_end_at) ++s.dead_ends;
    if (feasible(o.bits)) ++s.feasible;
  }
  return s;
}

SampleStats sample_stats_parallel(const Sampler& sampler,
                                  std::span<const LinearConstraint> check,
                                  std::uint64_t seed, std::uint64_t count) {
  GoodTest feasible{check, {}, -1};
  std::uint64_t ok = 0, dead = 0;
  const auto scount = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) reduction(+ : ok, dead)
  for (std::int64_t t = 0; t < scount; ++t) {
    Stream rng = Stream::derive(seed, static_cast<std::uint64_t>(t));
    const SampleOutcome o = sampler.sample(rng);
    if (o.dead_end_at) ++dead;
    if (feasible(o.bits)) ++ok;
  }
  return {count, ok, dead};
}

std::vector<std::uint64_t> histogram_serial(const Sampler& sampler,
                                            std::uint64_t seed,
                                            std::uint64_t count) {
  if (sampler.size() > 24) throw ValidationError("histogram limited to 24 items");
  std::vector<std::uint64_t> h(std::size_t{1} << sampler.size(), 0);
  for (std::uint64_t t = 0; t < count; ++t) {
    Stream rng = Stream::derive(seed, t);
    ++h[encode(sampler.sample(rng).bits)];
  }
  return h;
}

std::vector<std::uint64_t> histogram_parallel(const Sampler& sampler,
                                              std::uint64_t seed,
                                              std::uint64_t count) {
  if (sampler.size() > 24) throw ValidationError("histogram limited to 24 items");
  const std::size_t bins = std::size_t{1} << sampler.size();
  std::vector<std::uint64_t> h(bins, 0);
  const auto scount = static_cast<std::int64_t>(count);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t t = 0; t < scount; ++t) {
      Stream rng = Stream::derive(seed, static_cast<std::uint64_t>(t));
      ++local[encode(sampler.sample(rng).bits)];
    }
#pragma omp critical
    for (std::size_t b = 0; b < bins; ++b) h[b] += local[b];
  }
  return h;
}

std::vector<std::int8_t> round_trial(const GramFactor& factor,
                                     std::uint64_t seed, std::uint64_t trial) {
  Stream rng = Stream::derive(seed, trial);
  std::vector<double> dir(factor.rank);
  fill_normals(rng, dir);
  std::vector<std::int8_t> z(factor.dim);
  for (std::size_t i = 0; i < factor.dim; ++i) {
    const auto row = factor.row(i);
    double s = 0.0;
    for (std::size_t r = 0; r < factor.rank; ++r) s += row[r] * dir[r];
    z[i] = s >= 0.0 ? 1 : -1;
  }
  if (z[0] < 0)
    for (auto& v : z) v = static_cast<std::int8_t>(-v);
  return z;
}

std::vector<std::int64_t> round_trials_serial(const GramFactor& factor,
                                              const MfkpInstance& inst,
                                              std::uint64_t seed,
                                              std::uint64_t first,
                                              std::uint64_t count) {
  std::vector<std::int64_t> v(count);
  for (std::uint64_t t = 0; t < count; ++t)
    v[t] = trial_value(factor, inst, seed, first + t);
  return v;
}

std::vector<std::int64_t> round_trials_parallel(const GramFactor& factor,
                                                const MfkpInstance& inst,
                                                std::uint64_t seed,
                                                std::uint64_t first,
                                                std::uint64_t count) {
  std::vector<std::int64_t> v(count);
  const auto scount = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < scount; ++t)
    v[static_cast<std::size_t>(t)] =
        trial_value(factor, inst, seed, first + static_cast<std::uint64_t>(t));
  return v;
}

QSearchTally qsearch_tally_serial(double p, double t, std::uint64_t seed,
                                  std::uint64_t trials) {
  QSearchTally tally;
  tally.trials = trials;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Stream rng = Stream::derive(seed, k);
    const QSearchResult r = simulate_qsearch(p, t, rng);
    tally.found += r.found ? 1 : 0;
    tally.grover_iterations += r.grover_iterations;
    tally.measurements += r.measurements;
  }
  return tally;
}

QSearchTally qsearch_tally_parallel(double p, double t, std::uint64_t seed,
                                    std::uint64_t trials) {
  AAParams::make(p, t);
  std::uint64_t found = 0;
  std::int64_t iterations = 0, measurements = 0;
  const auto strials = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : found, iterations, measurements)
  for (std::int64_t k = 0; k < strials; ++k) {
    Stream rng = Stream::derive(seed, static_cast<std::uint64_t>(k));
    const QSearchResult r = simulate_qsearch(p, t, rng);
    found += r.found ? 1 : 0;
    iterations += r.grover_iterations;
    measurements += r.measurements;
  }
  return {trials, found, iterations, measurements};
}

}  // namespace cbqs::kernels
