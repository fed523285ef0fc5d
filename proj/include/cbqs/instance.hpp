#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cbqs {

using Bits = std::vector<std::uint8_t>;
using Coeffs = std::vector<std::int64_t>;

// Requirement coeffs . x <= bound on bit strings. Coefficients may have
// either sign; all arithmetic is exact 64-bit.
struct LinearConstraint {
  Coeffs coeffs;
  std::int64_t bound = 0;

  std::size_t size() const { return coeffs.size(); }
  std::int64_t dot(std::span<const std::uint8_t> x) const;
  bool satisfied_by(std::span<const std::uint8_t> x) const {
    return dot(x) <= bound;
  }

  bool operator==(const LinearConstraint&) const = default;
};

// Knapsack with a minimum filling constraint:
//   max p.x  s.t.  c - eps <= w.x <= c,  x in {0,1}^n.
struct MfkpInstance {
  Coeffs profits;
  Coeffs weights;
  std::int64_t capacity = 0;
  std::int64_t gap = 0;

  std::size_t size() const { return profits.size(); }

  // Throws ValidationError when an invariant is broken.
  void validate() const;

  std::int64_t profit(std::span<const std::uint8_t> x) const;
  std::int64_t weight(std::span<const std::uint8_t> x) const;
  bool feasible(std::span<const std::uint8_t> x) const {
    const std::int64_t load = weight(x);
    return load <= capacity && load >= capacity - gap;
  }

  bool operator==(const MfkpInstance&) const = default;
};

// ((w, c), (-w, -(c - eps))).
std::pair<LinearConstraint, LinearConstraint> mfkp_constraints(
    const MfkpInstance& inst);

// The bit string minimizing w.x: 1 exactly where w_i < 0 (zero coefficients
// map to 0).
Bits minimizing_string(std::span<const std::int64_t> w);

// sum_{k<i} w_k x_k + sum_{k>=i} w_k xw_k, with i counting assigned bits
// (0 <= i <= n).
std::int64_t prefix_value(std::span<const std::int64_t> w,
                          std::span<const std::uint8_t> x, std::size_t i);

struct GeneratorParams {
  std::int64_t weight_range = 1000;
  double capacity_fraction = 0.5;
  double gap_fraction = 0.05;
};

// Uniform profits/weights in [1, R]; c = floor(capacity_fraction * sum w);
// eps = max(1, floor(gap_fraction * c)). Throws InfeasibleGeneration when no
// feasible string turns up among the probe samples.
MfkpInstance generate_instance(std::size_t n, std::uint64_t seed,
                               const GeneratorParams& params = {});

enum class OrderingKind {
  Identity,
  RatioDescending,
  RatioAscending,
  WeightAscending,
  ProfitDescending,
  Random,
};

struct ItemOrdering {
  OrderingKind kind = OrderingKind::Identity;
  std::uint64_t seed = 0;  // Random only
};

std::string to_string(OrderingKind kind);
OrderingKind ordering_from_string(const std::string& name);

struct Reordered {
  MfkpInstance instance;
  // permutation[new position] = original index.
  std::vector<std::size_t> permutation;
};

// Ties are broken by original index ascending.
Reordered reorder(const MfkpInstance& inst, const ItemOrdering& ordering);

// Maps a solution of the reordered instance back to the original indexing.
Bits restore_order(std::span<const std::uint8_t> x,
                   std::span<const std::size_t> permutation);

MfkpInstance parse_instance(std::istream& in);
void format_instance(std::ostream& out, const MfkpInstance& inst);
MfkpInstance read_instance(const std::filesystem::path& path);
void write_instance(const MfkpInstance& inst,
                    const std::filesystem::path& path);

std::string bits_to_string(std::span<const std::uint8_t> x);
Bits bits_from_index(std::uint64_t index, std::size_t n);

}  // namespace cbqs
