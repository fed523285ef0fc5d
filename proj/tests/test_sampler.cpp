#include <cmath>
#include <map>

#include "cbqs/errors.hpp"
#include "cbqs/sampler.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cbqs;

namespace {

std::vector<LinearConstraint> counterexample() {
  return {{{1, 2}, 2}, {{-1, -2}, -2}};
}

std::vector<LinearConstraint> both(const MfkpInstance& inst) {
  auto [u, l] = mfkp_constraints(inst);
  return {u, l};
}

}  // namespace

TEST_CASE("bias probability") {
  BiasSpec b;
  b.reference = {1};
  b.strength = 4;
  CHECK(bias_probability(b, 0).q1 == doctest::Approx(5.0 / 6.0));

  BiasSpec wide = BiasSpec::centered(Bits(70, 0));
  CHECK(wide.strength == 17.5);
  CHECK(bias_probability(wide, 3).q0 == doctest::Approx(18.5 / 19.5));

  Stream rng(3);
  for (int t = 0; t < 10000; ++t) {
    BiasSpec s;
    s.reference = {static_cast<std::uint8_t>(rng.below(2))};
    s.strength = rng.uniform() * 100;
    s.mixing = rng.uniform() * 10;
    s.g_values = {rng.uniform()};
    const auto q = bias_probability(s, 0);
    REQUIRE(q.q0 + q.q1 == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(q.q0 > 0.0);
    REQUIRE(q.q1 > 0.0);
  }
}

TEST_CASE("bias g") {
  // r = w/c in {0.1, 0.3, 0.5}.
  const MfkpInstance inst{{20, 60, 100, 10}, {10, 30, 50, 30}, 100, 10};
  CHECK(bias_g(inst, 2) == doctest::Approx(0.2));
  CHECK(bias_g(inst, 0) == doctest::Approx(0.8));
  CHECK(bias_g(inst, 1) == doctest::Approx(0.5));
  CHECK(bias_g(inst, 3) == doctest::Approx(0.2));  // efficiency <= 1
  const MfkpInstance flat{{5, 7}, {2, 2}, 4, 1};
  CHECK(bias_g(flat, 0) == 0.8);
  CHECK(bias_g_all(inst).size() == 4);
}

TEST_CASE("branch flags on the two-constraint counterexample") {
  const auto cons = counterexample();
  Sampler s(cons, BiasSpec::uniform(2));
  auto budgets = s.initial_budgets();
  CHECK(budgets == std::vector<std::int64_t>{2, 1});
  CHECK(branch_flags(cons, budgets, 0) == BranchFlags{true, true});
  s.consume(budgets, 0, 1);
  CHECK(budgets == std::vector<std::int64_t>{1, 1});
  CHECK(branch_flags(cons, budgets, 1) == BranchFlags{false, false});

  const std::vector<LinearConstraint> loose{{{3, 4, 5}, 1000}};
  const std::vector<std::int64_t> big{1000};
  for (std::size_t i = 0; i < 3; ++i) CHECK(branch_flags(loose, big, i) == BranchFlags{true, true});
}

TEST_CASE("dead end trace on the counterexample") {
  const auto cons = counterexample();
  Sampler s(cons, BiasSpec::uniform(2));
  bool saw_dead = false, saw_ok = false;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Stream rng(seed);
    const auto out = s.sample(rng);
    REQUIRE(out.trace.size() == 2);
    if (out.bits[0] == 1) {
      saw_dead = true;
      CHECK(out.dead_end_at == std::optional<std::size_t>{1});
      CHECK_FALSE(out.feasible);
      CHECK(out.trace[1] == StepKind::DeadEnd);
      CHECK(out.bits == Bits{1, 0});
    } else {
      saw_ok = true;
      CHECK(out.bits == Bits{0, 1});
      CHECK(out.feasible);
      CHECK(out.trace[1] == StepKind::Forced1);
    }
    if (out.feasible) CHECK_FALSE(out.dead_end_at.has_value());
  }
  CHECK(saw_dead);
  CHECK(saw_ok);
  CHECK(s.path_probability(Bits{1, 0}) == doctest::Approx(0.5));
  CHECK(s.path_probability(Bits{0, 1}) == doctest::Approx(0.5));
  CHECK(s.path_probability(Bits{1, 1}) == 0.0);
}

TEST_CASE("look-ahead resolves the counterexample") {
  const auto cons = counterexample();
  BiasSpec bias = BiasSpec::uniform(2);
  bias.lookahead_depth = 1;
  Sampler s(cons, bias);
  const auto budgets = s.initial_budgets();
  CHECK(lookahead_flags(cons, budgets, 0, 1) == BranchFlags{true, false});
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    Stream rng(seed);
    const auto out = s.sample(rng);
    CHECK(out.bits == Bits{0, 1});
    CHECK(out.trace[0] == StepKind::Forced0);
    CHECK_FALSE(out.dead_end_at.has_value());
  }
}

TEST_CASE("look-ahead flags and counts") {
  Stream rng(19);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 2 + rng.below(8);
    std::vector<LinearConstraint> cons{testing::random_constraint(n, rng),
                                       testing::random_constraint(n, rng)};
    std::vector<std::int64_t> budgets{static_cast<std::int64_t>(rng.below(120)),
                                      static_cast<std::int64_t>(rng.below(120))};
    const std::size_t i = rng.below(n);
    REQUIRE(lookahead_flags(cons, budgets, i, 0) == branch_flags(cons, budgets, i));
  }

  // Exhaustive window check on the three-item instance, i = 0, d = 2.
  const auto cons = both(testing::tiny_instance());
  Sampler s(cons, BiasSpec::uniform(3));
  const auto budgets = s.initial_budgets();
  std::uint64_t n0 = 0, n1 = 0;
  for (std::uint64_t idx = 0; idx < 8; ++idx) {
    const Bits y = bits_from_index(idx, 3);
    bool ok = true;
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t i = 0; i <= 3; ++i)
        ok = ok && prefix_value(cons[k].coeffs, y, i) <= cons[k].bound;
    if (ok) ++(y[0] ? n1 : n0);
  }
  const auto counts = lookahead_counts(cons, budgets, 0, 2);
  CHECK(counts.first == n0);
  CHECK(counts.second == n1);
  CHECK(lookahead_flags(cons, budgets, 0, 2) == BranchFlags{n0 > 0, n1 > 0});

  const std::vector<LinearConstraint> free{{{1, 1, 1, 1}, 100}};
  const std::vector<std::int64_t> wide{100};
  CHECK(lookahead_counts(free, wide, 0, 3) == std::pair<std::uint64_t, std::uint64_t>{8, 8});
}

TEST_CASE("Algorithm 1 examples") {
  const LinearConstraint one{{1}, 1};
  const std::vector<double> half{0.5};
  int ones = 0;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    Stream rng(seed);
    ones += sample_single(one, half, rng)[0];
  }
  CHECK(ones > 1800);
  CHECK(ones < 2200);

  const LinearConstraint tight{{5}, 3};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Stream rng(seed);
    CHECK(sample_single(tight, half, rng) == Bits{0});
  }
  Sampler s({one}, BiasSpec::uniform(1));
  CHECK(s.path_probability(Bits{1}) == doctest::Approx(0.5));

  Stream rng(1);
  CHECK_THROWS_AS(sample_single(LinearConstraint{{1, 1}, -1}, std::vector<double>{0.5, 0.5}, rng),
                  UnsatisfiableConstraint);
}

TEST_CASE("Algorithm 1 soundness on random constraints") {
  Stream meta(23);
  for (int c = 0; c < 50; ++c) {
    const std::size_t n = 1 + meta.below(64);
    const auto con = testing::random_constraint(n, meta);
    std::vector<double> q(n);
    for (auto& v : q) v = 0.05 + 0.9 * meta.uniform();
    for (std::uint64_t t = 0; t < 2000; ++t) {
      Stream rng = Stream::derive(static_cast<std::uint64_t>(c), t);
      REQUIRE(con.satisfied_by(sample_single(con, q, rng)));
    }
  }
}

TEST_CASE("single constraint sampler matches Algorithm 1 bit for bit") {
  Stream meta(29);
  for (int c = 0; c < 20; ++c) {
    const std::size_t n = 1 + meta.below(30);
    const auto con = testing::random_constraint(n, meta);
    BiasSpec bias = BiasSpec::uniform(n);
    bias.reference = bits_from_index(meta.below(std::uint64_t{1} << std::min<std::size_t>(n, 20)), n);
    bias.strength = 3;
    Sampler s({con}, bias);
    std::vector<double> q(s.q1().begin(), s.q1().end());
    for (std::uint64_t t = 0; t < 200; ++t) {
      Stream a = Stream::derive(7, t), b = Stream::derive(7, t);
      const auto multi = sample_multi(std::vector<LinearConstraint>{con}, bias, a);
      REQUIRE(multi.bits == sample_single(con, q, b));
      REQUIRE(multi.feasible);
    }
  }
}

TEST_CASE("path probability matches the reference distribution") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto inst = testing::small_instance(2 + seed % 11, seed);
    const std::size_t n = inst.size();
    BiasSpec bias;
    bias.reference = bits_from_index(seed * 2654435761ULL % (std::uint64_t{1} << n), n);
    bias.strength = static_cast<double>(n) / 4.0;
    bias.mixing = seed % 3 == 0 ? 0.5 : 0.0;
    if (bias.mixing > 0) bias.g_values = bias_g_all(inst);
    const auto cons = both(inst);
    Sampler s(cons, bias);
    const auto ref = testing::reference_distribution(
        cons, std::vector<double>(s.q1().begin(), s.q1().end()));
    double total = 0.0;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
      const Bits y = bits_from_index(idx, n);
      const double p = s.path_probability(y);
      const auto it = ref.find(idx);
      REQUIRE(p == doctest::Approx(it == ref.end() ? 0.0 : it->second).epsilon(1e-12));
      total += p;
      // Every feasible string is reachable.
      if (inst.feasible(y)) REQUIRE(p > 0.0);
    }
    REQUIRE(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("flagged feasible samples are feasible") {
  const auto inst = testing::tiny_instance();
  const auto cons = both(inst);
  Sampler s(cons, BiasSpec::uniform(3));
  for (std::uint64_t t = 0; t < 5000; ++t) {
    Stream rng = Stream::derive(1, t);
    const auto out = s.sample(rng);
    REQUIRE(out.feasible == inst.feasible(out.bits));
    if (out.feasible) {
      REQUIRE(inst.weight(out.bits) >= 4);
      REQUIRE(inst.weight(out.bits) <= 5);
    }
  }
}

TEST_CASE("look-ahead depth zero reproduces plain sampling") {
  const auto inst = testing::generated(40, 2);
  const auto cons = both(inst);
  BiasSpec plain = BiasSpec::centered(Bits(40, 0));
  BiasSpec zero = plain;
  zero.lookahead_depth = 0;
  zero.lookahead_biasing = true;
  zero.lookahead_blend = 0.7;
  Sampler a(cons, plain), b(cons, zero);
  for (std::uint64_t t = 0; t < 500; ++t) {
    Stream ra = Stream::derive(3, t), rb = Stream::derive(3, t);
    const auto x = a.sample(ra), y = b.sample(rb);
    REQUIRE(x.bits == y.bits);
    REQUIRE(x.trace == y.trace);
  }
}

TEST_CASE("look-ahead biasing keeps the distribution normalized") {
  const auto inst = testing::small_instance(9, 4);
  const auto cons = both(inst);
  BiasSpec bias = BiasSpec::uniform(9);
  bias.lookahead_depth = 2;
  bias.lookahead_biasing = true;
  bias.lookahead_blend = 0.5;
  Sampler s(cons, bias);
  double total = 0.0;
  for (std::uint64_t idx = 0; idx < 512; ++idx) total += s.path_probability(bits_from_index(idx, 9));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampler input validation") {
  CHECK_THROWS_AS(Sampler({}, BiasSpec::uniform(1)), ValidationError);
  CHECK_THROWS_AS(Sampler({LinearConstraint{{1, 1}, -1}}, BiasSpec::uniform(2)),
                  UnsatisfiableConstraint);
  BiasSpec wrong = BiasSpec::uniform(3);
  CHECK_THROWS_AS(Sampler({LinearConstraint{{1, 1}, 1}}, wrong), ValidationError);
}
