#pragma once

// Shared fixtures and independent reference implementations for the tests.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "cbqs/errors.hpp"
#include "cbqs/instance.hpp"
#include "cbqs/rng.hpp"
#include "cbqs/sampler.hpp"

namespace testing {

using cbqs::Bits;
using cbqs::MfkpInstance;

inline MfkpInstance tiny_instance() {
  return MfkpInstance{{6, 10, 12}, {1, 2, 3}, 5, 1};
}

// Generated instance; seeds whose instance has no feasible string are
// skipped deterministically.
inline MfkpInstance generated(std::size_t n, std::uint64_t seed,
                              cbqs::GeneratorParams params = {}) {
  for (;; seed += 1000003) {
    try {
      return cbqs::generate_instance(n, seed, params);
    } catch (const cbqs::InfeasibleGeneration&) {
    }
  }
}

inline MfkpInstance small_instance(std::size_t n, std::uint64_t seed) {
  return generated(n, seed, {100, 0.5, 0.2});
}

struct Optimum {
  std::int64_t value = -1;
  std::uint64_t index = 0;
  std::uint64_t feasible = 0;
};

// Plain enumeration over all index encodings.
inline Optimum naive_optimum(const MfkpInstance& inst) {
  Optimum best;
  const std::size_t n = inst.size();
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
    std::int64_t w = 0, p = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((idx >> i) & 1U) {
        w += inst.weights[i];
        p += inst.profits[i];
      }
    if (w > inst.capacity || w < inst.capacity - inst.gap) continue;
    ++best.feasible;
    if (p > best.value) {
      best.value = p;
      best.index = idx;
    }
  }
  return best;
}

// Output distribution of the sequential sampler without look-ahead, derived
// directly from the step rules: budgets start at C minus the minimum of w.x,
// a bit is allowed iff every budget covers its cost, free bits take 1 with
// probability q1[i], and a dead end fills the rest with the first
// constraint's minimizing bits.
inline std::map<std::uint64_t, double> reference_distribution(
    const std::vector<cbqs::LinearConstraint>& cons,
    const std::vector<double>& q1) {
  const std::size_t n = cons.front().coeffs.size();
  std::vector<std::int64_t> start;
  for (const auto& c : cons) {
    std::int64_t minimum = 0;
    for (auto w : c.coeffs) minimum += w < 0 ? w : 0;
    start.push_back(c.bound - minimum);
  }
  auto cost = [&](std::size_t k, std::size_t i, int bit) -> std::int64_t {
    const std::int64_t w = cons[k].coeffs[i];
    const int minimizer = w < 0 ? 1 : 0;
    return bit == minimizer ? 0 : (w < 0 ? -w : w);
  };
  std::map<std::uint64_t, double> out;
  struct Walker {
    const std::vector<cbqs::LinearConstraint>& cons;
    const std::vector<double>& q1;
    decltype(cost)& cost_fn;
    std::map<std::uint64_t, double>& out;
    std::size_t n;
    void go(std::size_t i, std::vector<std::int64_t> budget, std::uint64_t idx,
            double prob) {
      if (prob == 0.0) return;
      if (i == n) {
        out[idx] += prob;
        return;
      }
      bool ok[2] = {true, true};
      for (int bit = 0; bit < 2; ++bit)
        for (std::size_t k = 0; k < cons.size(); ++k)
          if (budget[k] < cost_fn(k, i, bit)) ok[bit] = false;
      if (!ok[0] && !ok[1]) {
        for (std::size_t j = i; j < n; ++j)
          if (cons[0].coeffs[j] < 0) idx |= std::uint64_t{1} << j;
        out[idx] += prob;
        return;
      }
      for (int bit = 0; bit < 2; ++bit) {
        if (!ok[bit]) continue;
        double p = prob;
        if (ok[0] && ok[1]) p *= bit ? q1[i] : 1.0 - q1[i];
        auto next = budget;
        for (std::size_t k = 0; k < cons.size(); ++k) next[k] -= cost_fn(k, i, bit);
        go(i + 1, next, bit ? idx | (std::uint64_t{1} << i) : idx, p);
      }
    }
  } walker{cons, q1, cost, out, n};
  walker.go(0, start, 0, 1.0);
  return out;
}

// Random constraint with mixed-sign coefficients whose minimizing string is
// feasible.
inline cbqs::LinearConstraint random_constraint(std::size_t n, cbqs::Stream& rng,
                                                std::int64_t range = 50) {
  cbqs::LinearConstraint c;
  std::int64_t minimum = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = static_cast<std::int64_t>(rng.below(2 * range + 1)) - range;
    c.coeffs.push_back(w);
    minimum += w < 0 ? w : 0;
    total += w < 0 ? -w : w;
  }
  c.bound = minimum + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total) + 1));
  return c;
}

inline double direct_aa_success(double p, double t) {
  const double theta = std::asin(std::sqrt(p));
  const double l = std::log2(t);
  const int m = static_cast<int>(std::floor(l));
  const double frac = l - m;
  auto fail = [&](int r) {
    double prod = 1.0;
    for (int k = 0; k <= r; ++k) {
      const long count = 1L << k;
      double sum = 0.0;
      for (long j = 0; j < count; ++j) {
        const double c = std::cos((2.0 * static_cast<double>(j) + 1.0) * theta);
        sum += c * c;
      }
      prod *= sum / static_cast<double>(count);
    }
    return prod;
  };
  return 1.0 - ((1.0 - frac) * fail(m) + frac * fail(m + 1));
}

}  // namespace testing
