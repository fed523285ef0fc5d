#include "cbqs/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "cbqs/errors.hpp"
#include "cbqs/io.hpp"
#include "cbqs/rng.hpp"

namespace cbqs {

namespace {

constexpr int kProbeSamples = 100000;
constexpr std::int64_t kHeadroom = std::int64_t{1} << 40;

std::int64_t parse_int(const std::string& token, int line,
                       const std::string& field) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError("field '" + field + "': expected integer, got '" +
                         token + "'",
                     line);
  return value;
}

// Random maximal packing: insert items in random order while they fit.
bool probe_feasible(const MfkpInstance& inst, std::uint64_t seed) {
  const std::size_t n = inst.size();
  std::vector<std::size_t> order(n);
  Bits x(n);
  for (int trial = 0; trial < kProbeSamples; ++trial) {
    Stream rng = Stream::derive(seed, static_cast<std::uint64_t>(trial));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
    std::fill(x.begin(), x.end(), 0);
    std::int64_t load = 0;
    for (std::size_t idx : order) {
      if (load + inst.weights[idx] <= inst.capacity) {
        load += inst.weights[idx];
        x[idx] = 1;
      }
      if (load >= inst.capacity - inst.gap) return true;
    }
  }
  return false;
}

}  // namespace

std::int64_t LinearConstraint::dot(std::span<const std::uint8_t> x) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (x[i]) total += coeffs[i];
  return total;
}

void MfkpInstance::validate() const {
  if (profits.empty()) throw ValidationError("instance has no items");
  if (profits.size() != weights.size())
    throw ValidationError("profits and weights differ in length");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 1)
      throw ValidationError("weight " + std::to_string(i) + " must be >= 1");
    if (profits[i] < 1)
      throw ValidationError("profit " + std::to_string(i) + " must be >= 1");
    if (weights[i] >= kHeadroom || profits[i] >= kHeadroom)
      throw ValidationError("coefficient " + std::to_string(i) +
                            " exceeds 2^40");
  }
  if (capacity < 1) throw ValidationError("capacity must be positive");
  if (gap < 0 || gap > capacity)
    throw ValidationError("epsilon must satisfy 0 <= epsilon <= c");
}

std::int64_t MfkpInstance::profit(std::span<const std::uint8_t> x) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < profits.size(); ++i)
    if (x[i]) total += profits[i];
  return total;
}

std::int64_t MfkpInstance::weight(std::span<const std::uint8_t> x) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (x[i]) total += weights[i];
  return total;
}

std::pair<LinearConstraint, LinearConstraint> mfkp_constraints(
    const MfkpInstance& inst) {
  LinearConstraint upper{inst.weights, inst.capacity};
  LinearConstraint lower{inst.weights, -(inst.capacity - inst.gap)};
  for (auto& c : lower.coeffs) c = -c;
  return {std::move(upper), std::move(lower)};
}

Bits minimizing_string(std::span<const std::int64_t> w) {
  Bits x(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) x[i] = w[i] < 0 ? 1 : 0;
  return x;
}

std::int64_t prefix_value(std::span<const std::int64_t> w,
                          std::span<const std::uint8_t> x, std::size_t i) {
  std::int64_t total = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const bool bit = k < i ? x[k] != 0 : w[k] < 0;
    if (bit) total += w[k];
  }
  return total;
}

MfkpInstance generate_instance(std::size_t n, std::uint64_t seed,
                               const GeneratorParams& params) {
  if (n == 0) throw ValidationError("n must be >= 1");
  if (params.weight_range < 1) throw ValidationError("weight_range must be >= 1");
  if (!(params.capacity_fraction > 0.0 && params.capacity_fraction <= 1.0))
    throw ValidationError("capacity_fraction must lie in (0, 1]");
  if (!(params.gap_fraction > 0.0 && params.gap_fraction <= 1.0))
    throw ValidationError("gap_fraction must lie in (0, 1]");
  if (static_cast<double>(n) * static_cast<double>(params.weight_range) >=
      static_cast<double>(kHeadroom))
    throw ValidationError("n * weight_range must stay below 2^40");

  Stream rng(seed);
  MfkpInstance inst;
  inst.profits.resize(n);
  inst.weights.resize(n);
  const auto range = static_cast<std::uint64_t>(params.weight_range);
  for (std::size_t i = 0; i < n; ++i) {
    inst.weights[i] = 1 + static_cast<std::int64_t>(rng.below(range));
    inst.profits[i] = 1 + static_cast<std::int64_t>(rng.below(range));
  }
  const std::int64_t total =
      std::accumulate(inst.weights.begin(), inst.weights.end(), std::int64_t{0});
  inst.capacity = static_cast<std::int64_t>(
      std::floor(params.capacity_fraction * static_cast<double>(total)));
  if (inst.capacity < 1)
    throw InfeasibleGeneration("capacity rounds to zero for these parameters");
  inst.gap = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(
             params.gap_fraction * static_cast<double>(inst.capacity))));
  inst.gap = std::min(inst.gap, inst.capacity);

  if (!probe_feasible(inst, seed ^ 0x5bd1e995ULL))
    throw InfeasibleGeneration("no feasible string found after " +
                               std::to_string(kProbeSamples) +
                               " probe samples");
  return inst;
}

std::string to_string(OrderingKind kind) {
  switch (kind) {
    case OrderingKind::Identity: return "identity";
    case OrderingKind::RatioDescending: return "ratio";
    case OrderingKind::RatioAscending: return "inverse-ratio";
    case OrderingKind::WeightAscending: return "weight";
    case OrderingKind::ProfitDescending: return "profit";
    case OrderingKind::Random: return "random";
  }
  return "identity";
}

OrderingKind ordering_from_string(const std::string& name) {
  for (auto kind : {OrderingKind::Identity, OrderingKind::RatioDescending,
                    OrderingKind::RatioAscending, OrderingKind::WeightAscending,
                    OrderingKind::ProfitDescending, OrderingKind::Random})
    if (to_string(kind) == name) return kind;
  throw ValidationError("unknown ordering '" + name + "'");
}

Reordered reorder(const MfkpInstance& inst, const ItemOrdering& ordering) {
  const std::size_t n = inst.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const auto& p = inst.profits;
  const auto& w = inst.weights;
  // p_a / w_a < p_b / w_b, exactly.
  auto ratio_less = [&](std::size_t a, std::size_t b) {
    return static_cast<__int128>(p[a]) * w[b] <
           static_cast<__int128>(p[b]) * w[a];
  };
  switch (ordering.kind) {
    case OrderingKind::Identity:
      break;
    case OrderingKind::RatioDescending:
      std::stable_sort(perm.begin(), perm.end(),
                       [&](auto a, auto b) { return ratio_less(b, a); });
      break;
    case OrderingKind::RatioAscending:
      std::stable_sort(perm.begin(), perm.end(), ratio_less);
      break;
    case OrderingKind::WeightAscending:
      std::stable_sort(perm.begin(), perm.end(),
                       [&](auto a, auto b) { return w[a] < w[b]; });
      break;
    case OrderingKind::ProfitDescending:
      std::stable_sort(perm.begin(), perm.end(),
                       [&](auto a, auto b) { return p[a] > p[b]; });
      break;
    case OrderingKind::Random: {
      Stream rng(ordering.seed);
      for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.below(i)]);
      break;
    }
  }
  Reordered out;
  out.instance.capacity = inst.capacity;
  out.instance.gap = inst.gap;
  out.instance.profits.resize(n);
  out.instance.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.instance.profits[i] = p[perm[i]];
    out.instance.weights[i] = w[perm[i]];
  }
  out.permutation = std::move(perm);
  return out;
}

Bits restore_order(std::span<const std::uint8_t> x,
                   std::span<const std::size_t> permutation) {
  Bits out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[permutation[i]] = x[i];
  return out;
}

MfkpInstance parse_instance(std::istream& in) {
  std::optional<std::int64_t> n, c, eps;
  std::optional<Coeffs> p, w;
  std::map<std::string, int> seen;
  std::string raw;
  int line_no = 0;
  int p_line = 0, w_line = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto tokens = io::split_ws(io::strip_comment(raw));
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    if (auto it = seen.find(key); it != seen.end())
      throw ParseError("duplicate field '" + key + "' (first on line " +
                           std::to_string(it->second) + ")",
                       line_no);
    seen[key] = line_no;
    auto scalar = [&]() {
      if (tokens.size() != 2)
        throw ParseError("field '" + key + "' expects exactly one value",
                         line_no);
      return parse_int(tokens[1], line_no, key);
    };
    auto vec = [&]() {
      Coeffs v;
      for (std::size_t i = 1; i < tokens.size(); ++i)
        v.push_back(parse_int(tokens[i], line_no, key));
      return v;
    };
    if (key == "n") {
      n = scalar();
    } else if (key == "c") {
      c = scalar();
    } else if (key == "epsilon") {
      eps = scalar();
    } else if (key == "p") {
      p = vec();
      p_line = line_no;
    } else if (key == "w") {
      w = vec();
      w_line = line_no;
    } else {
      throw ParseError("unknown field '" + key + "'", line_no);
    }
  }
  if (!n) throw ParseError("missing field 'n'");
  if (!c) throw ParseError("missing field 'c'");
  if (!eps) throw ParseError("missing field 'epsilon'");
  if (!p) throw ParseError("missing field 'p'");
  if (!w) throw ParseError("missing field 'w'");
  if (*n < 1) throw ValidationError("n must be >= 1");
  if (static_cast<std::int64_t>(p->size()) != *n)
    throw ParseError("field 'p' has " + std::to_string(p->size()) +
                         " entries, expected " + std::to_string(*n),
                     p_line);
  if (static_cast<std::int64_t>(w->size()) != *n)
    throw ParseError("field 'w' has " + std::to_string(w->size()) +
                         " entries, expected " + std::to_string(*n),
                     w_line);
  MfkpInstance inst{std::move(*p), std::move(*w), *c, *eps};
  inst.validate();
  return inst;
}

void format_instance(std::ostream& out, const MfkpInstance& inst) {
  out << "n " << inst.size() << "\n";
  out << "c " << inst.capacity << "\n";
  out << "epsilon " << inst.gap << "\n";
  out << "p";
  for (auto v : inst.profits) out << ' ' << v;
  out << "\nw";
  for (auto v : inst.weights) out << ' ' << v;
  out << "\n";
}

MfkpInstance read_instance(const std::filesystem::path& path) {
  std::istringstream in(io::read_file(path));
  return parse_instance(in);
}

void write_instance(const MfkpInstance& inst,
                    const std::filesystem::path& path) {
  inst.validate();
  std::ostringstream out;
  format_instance(out, inst);
  io::write_file_atomic(path, out.str());
}

std::string bits_to_string(std::span<const std::uint8_t> x) {
  std::string s(x.size(), '0');
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) s[i] = '1';
  return s;
}

Bits bits_from_index(std::uint64_t index, std::size_t n) {
  Bits x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (index >> i) & 1U;
  return x;
}

}  // namespace cbqs
