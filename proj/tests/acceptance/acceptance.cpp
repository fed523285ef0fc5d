// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cbqs/amplify.hpp"
#include "cbqs/baselines.hpp"
#include "cbqs/bench.hpp"
#include "cbqs/costs.hpp"
#include "cbqs/errors.hpp"
#include "cbqs/kernels.hpp"
#include "cbqs/sampler.hpp"

using namespace cbqs;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

MfkpInstance generated(std::size_t n, std::uint64_t seed, GeneratorParams params = {}) {
  for (;; seed += 1000003) {
    try {
      return generate_instance(n, seed, params);
    } catch (const InfeasibleGeneration&) {
    }
  }
}

std::vector<LinearConstraint> both(const MfkpInstance& inst) {
  auto [u, l] = mfkp_constraints(inst);
  return {u, l};
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 100 mixed-sign constraints, 10^4 draws each.
Verdict single_constraint_soundness() {
  const auto start = std::chrono::steady_clock::now();
  Stream meta(2024);
  std::uint64_t draws = 0, violations = 0;
  for (int c = 0; c < 100; ++c) {
    const std::size_t n = 1 + meta.below(64);
    LinearConstraint con;
    std::int64_t minimum = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto w = static_cast<std::int64_t>(meta.below(201)) - 100;
      con.coeffs.push_back(w);
      minimum += std::min<std::int64_t>(w, 0);
      total += std::abs(w);
    }
    con.bound = minimum + static_cast<std::int64_t>(meta.below(static_cast<std::uint64_t>(total) + 1));
    std::vector<double> q(n);
    for (auto& v : q) v = 0.05 + 0.9 * meta.uniform();
    for (std::uint64_t t = 0; t < 10000; ++t) {
      Stream rng = Stream::derive(static_cast<std::uint64_t>(c), t);
      if (!con.satisfied_by(sample_single(con, q, rng))) ++violations;
      ++draws;
    }
  }
  const double secs = elapsed(start);
  return {violations == 0 && draws == 1000000 && secs < 60.0,
          fmt("%llu draws, %llu violations, %.1f s", static_cast<unsigned long long>(draws),
              static_cast<unsigned long long>(violations), secs)};
}

// 20 instances with n <= 10, 10^6 draws each.
Verdict distribution_exactness() {
  double worst_sum = 0.0, worst_tv = 0.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const std::size_t n = 3 + k % 8;
    const auto inst = generated(n, 7000 + k, {100, 0.5, 0.2});
    BiasSpec bias = BiasSpec::centered(bits_from_index(k * 37 % (std::uint64_t{1} << n), n));
    bias.lookahead_depth = k % 3;
    if (k % 2) {
      bias.mixing = 0.5;
      bias.g_values = bias_g_all(inst);
    }
    const Sampler s(both(inst), bias);
    const auto hist = kernels::histogram_parallel(s, 100 + k, 1000000);
    double sum = 0.0, tv = 0.0;
    for (std::uint64_t idx = 0; idx < hist.size(); ++idx) {
      const double p = s.path_probability(bits_from_index(idx, n));
      sum += p;
      tv += std::abs(p - static_cast<double>(hist[idx]) / 1e6);
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    worst_tv = std::max(worst_tv, tv / 2.0);
  }
  return {worst_sum <= 1e-12 && worst_tv <= 0.01,
          fmt("max |sum - 1| = %.2e, max TV = %.4f", worst_sum, worst_tv)};
}

// Closed form vs protocol simulation, plus the shape of the p = 0.001 curves.
Verdict aa_formula() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::uint64_t seed = 0;
  for (double p : {0.001, 0.01, 0.1, 0.5})
    for (double t : {2.0, 8.0, 64.0, 1024.0}) {
      const auto tally = kernels::qsearch_tally_parallel(p, t, ++seed, 100000);
      worst = std::max(worst, std::abs(aa_success(p, t) -
                                       static_cast<double>(tally.found) / 1e5));
    }

  bench::CurveSpec spec;
  spec.probabilities = {0.001};
  spec.trials = 0;
  const auto curve = bench::success_curves(spec);
  // AA ahead at small T, classical ahead from a single crossover on, and the
  // two close wherever either is between 0.1 and 0.9.
  int sign_changes = 0;
  double mid_gap = 0.0, crossover = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const bool classical_ahead = curve[k].classical > curve[k].aa;
    if (k > 0 && classical_ahead != (curve[k - 1].classical > curve[k - 1].aa)) {
      ++sign_changes;
      crossover = curve[k].t;
    }
    const bool mid = (curve[k].aa > 0.1 && curve[k].aa < 0.9) ||
                     (curve[k].classical > 0.1 && curve[k].classical < 0.9);
    if (mid) mid_gap = std::max(mid_gap, std::abs(curve[k].classical - curve[k].aa));
  }
  const bool shape = sign_changes == 1 && curve.front().aa >= curve.front().classical &&
                     curve.back().classical > curve.back().aa && mid_gap <= 0.15;
  const double secs = elapsed(start);
  return {worst <= 0.02 && shape && secs < 300.0,
          fmt("max |formula - MC| = %.4f; p=0.001: crossover at T=%.1f, %d sign change(s), "
              "max mid-regime gap %.3f; %.1f s",
              worst, crossover, sign_changes, mid_gap, secs)};
}

// 30 paired runs on an n = 16 instance that greedy does not solve.
Verdict exact_vs_sampling() {
  MfkpInstance inst;
  BruteForceResult bf;
  std::uint64_t seed = 42;
  for (;; ++seed) {
    inst = generated(16, seed);
    bf = brute_force(inst);
    const auto g = greedy_start(inst);
    if (!g || inst.profit(*g) < bf.optimum) break;
  }
  double exact_calls = 0.0, sampling_calls = 0.0;
  int reached = 0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    CbqsConfig c;
    c.seed = s;
    c.known_optimum = bf.optimum;
    c.budget.max_oracle_calls = 1000000;
    c.mode = BenchMode::Exact;
    const auto te = cbqs_run(inst, c);
    c.mode = BenchMode::Sampling;
    const auto ts = cbqs_run(inst, c);
    reached += (te.final_value() == bf.optimum) + (ts.final_value() == bf.optimum);
    exact_calls += static_cast<double>(te.back().oracle_calls);
    sampling_calls += static_cast<double>(ts.back().oracle_calls);
  }
  exact_calls /= 30;
  sampling_calls /= 30;
  return {reached == 60 && sampling_calls >= exact_calls,
          fmt("instance seed %llu, optimum %lld reached in %d/60 runs; mean oracle calls "
              "exact %.1f, sampling %.1f",
              static_cast<unsigned long long>(seed), static_cast<long long>(bf.optimum),
              reached, exact_calls, sampling_calls)};
}

// 10 instances, n = 70, random item order, 10^6 samples per sampler.
Verdict both_vs_single() {
  const auto start = std::chrono::steady_clock::now();
  int wins = 0;
  double single_sum = 0.0, both_sum = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto inst = generated(70, 500 + k);
    const auto ro = reorder(inst, {OrderingKind::Random, k});
    ComparisonConfig cfg;
    cfg.seed = k;
    const auto r = single_vs_both_constraints(ro.instance, cfg);
    wins += r.p_feasible_both > r.p_feasible_single;
    single_sum += r.p_feasible_single;
    both_sum += r.p_feasible_both;
  }
  const double secs = elapsed(start);
  return {wins >= 9 && secs < 600.0,
          fmt("both > single on %d/10; mean feasible rate single %.4f, both %.4f; %.1f s", wins,
              single_sum / 10, both_sum / 10, secs)};
}

// Dead-end rates with paired sample streams, the 4nd cost term and the
// d = 0 identity.
Verdict lookahead() {
  bool monotone = true, identical = true, cost = true;
  std::string rates;
  // Tight filling constraint (gap 1% of c) and an unbiased sampler, so dead
  // ends are common at d = 0.
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto inst =
        reorder(generated(40, 900 + k, {1000, 0.5, 0.01}), {OrderingKind::Random, k}).instance;
    const auto cons = both(inst);
    std::uint64_t base = 0;
    for (std::size_t d = 0; d <= 5; ++d) {
      BiasSpec bias = BiasSpec::uniform(inst.size());
      bias.lookahead_depth = d;
      const Sampler s(cons, bias);
      const auto stats = kernels::sample_stats_parallel(s, cons, 31 + k, 100000);
      if (d == 0) base = stats.dead_ends;
      if (stats.dead_ends > base || base == 0) monotone = false;
      rates += (d == 0 ? (k ? "; " : "") : ",") + std::to_string(stats.dead_ends);

      const auto report = stateprep_cycles(inst, CostParams{}, d);
      const auto plain = stateprep_cycles(inst, CostParams{}, 0);
      if (report.lookahead_extra_cycles != static_cast<std::int64_t>(4 * inst.size() * d) ||
          report.stateprep_cycles - plain.stateprep_cycles != report.lookahead_extra_cycles)
        cost = false;
    }
    BiasSpec plain = BiasSpec::centered(Bits(inst.size(), 0));
    BiasSpec zero = plain;
    zero.lookahead_depth = 0;
    zero.lookahead_biasing = true;
    zero.lookahead_blend = 0.5;
    const Sampler a(cons, plain), b(cons, zero);
    for (std::uint64_t t = 0; t < 10000; ++t) {
      Stream ra = Stream::derive(k, t), rb = Stream::derive(k, t);
      const auto x = sample_multi(cons, plain, ra);
      const auto y = b.sample(rb);
      Stream rc = Stream::derive(k, t);
      if (x.bits != y.bits || x.bits != a.sample(rc).bits) identical = false;
    }
  }
  return {monotone && identical && cost,
          fmt("dead ends per 1e5 draws, d=0..5: %s; 4nd cost %s; d=0 bit-identical %s",
              rates.c_str(), cost ? "exact" : "WRONG", identical ? "yes" : "NO")};
}

Verdict cost_identities() {
  const std::int64_t copies = copy_cycles(8);
  CostParams wide;
  wide.constraint_bits = {10, 10};
  const MfkpInstance inst{{3, 4, 5}, {1, 2, 3}, 5, 1};
  const auto ancilla = stateprep_cycles(inst, wide, 3).qubits_ancilla_lookahead;
  const double secs = cycles_to_seconds(1e8, CostParams{});
  return {copies == 3 && ancilla == 160 && secs == 1.0,
          fmt("copy_cycles(8)=%lld, ancilla(d=3,L=10)=%lld, cycles_to_seconds(1e8)=%.17g s",
              static_cast<long long>(copies), static_cast<long long>(ancilla), secs)};
}

// 50 instances with n <= 10.
Verdict baselines() {
  int sa_hits = 0, dominated = 0, converged = 0, sound = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto inst = generated(4 + k % 7, 1000 + k, {100, 0.5, 0.2});
    const auto bf = brute_force(inst);
    AnnealingConfig ac;
    ac.seed = k;
    sa_hits += simulated_annealing(inst, ac).final_value() == bf.optimum;

    const auto q = build_gw_qform(inst);
    SdpOptions opt;
    opt.seed = k;
    const auto f = solve_sdp_lowrank(q, opt);
    // Any iterate's objective is at most the SDP optimum, so dominance by the
    // iterate implies dominance by the relaxation even before convergence.
    dominated += f.rank >= recommended_rank(q.dim) &&
                 f.objective + q.constant >= static_cast<double>(bf.optimum) - 1e-6;
    converged += f.converged;

    RoundingConfig rc;
    rc.seed = k;
    const auto traj = gw_round(f, inst, rc);
    bool ok = true;
    for (const auto& r : traj.records)
      ok = ok && inst.feasible(r.solution) && r.incumbent_value <= bf.optimum &&
           inst.profit(r.solution) == r.incumbent_value;
    sound += ok;
  }
  return {sa_hits >= 45 && dominated == 50 && sound == 50,
          fmt("SA optimal %d/50, SDP dominance %d/50 (%d converged within the sweep cap), "
              "GW rounding sound %d/50",
              sa_hits, dominated, converged, sound)};
}

// n = 64, 20 seeds, modeled budget B for CBQS and B / (1e-7 s) SA iterations.
Verdict end_to_end() {
  const double budget = 0.01;
  const auto inst = generated(64, 7);
  int wins = 0, monotone = 0, within = 0;
  double cbqs_sum = 0.0, sa_sum = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    CbqsConfig c;
    c.seed = s;
    c.budget.max_oracle_calls = std::int64_t{1} << 40;
    c.budget.max_modeled_seconds = budget;
    const auto t = cbqs_run(inst, c);
    monotone += trajectory_violation(t.records).empty();
    within += t.back().modeled_seconds <= budget;
    AnnealingConfig ac;
    ac.seed = s;
    ac.iterations = static_cast<std::uint64_t>(budget / ac.seconds_per_iteration);
    const auto sa = simulated_annealing(inst, ac);
    wins += t.final_value() >= sa.final_value();
    cbqs_sum += static_cast<double>(t.final_value());
    sa_sum += static_cast<double>(sa.final_value());
  }
  return {monotone == 20 && within == 20 && wins >= 10,
          fmt("monotone %d/20, within budget %d/20, CBQS >= SA on %d/20 (mean %.0f vs %.0f)",
              monotone, within, wins, cbqs_sum / 20, sa_sum / 20)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"single-constraint soundness", single_constraint_soundness},
      {"distribution exactness", distribution_exactness},
      {"AA formula vs protocol", aa_formula},
      {"exact vs sampling benchmarking", exact_vs_sampling},
      {"both vs single constraints", both_vs_single},
      {"look-ahead", lookahead},
      {"cost identities", cost_identities},
      {"baseline soundness", baselines},
      {"end-to-end", end_to_end},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
