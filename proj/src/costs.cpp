#include "cbqs/costs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cbqs/errors.hpp"

namespace cbqs {

namespace {

std::int64_t scaled(double coefficient, std::int64_t base) {
  return static_cast<std::int64_t>(
      std::ceil(coefficient * static_cast<double>(base) - 1e-9));
}

int bits_for(std::uint64_t value) {
  return static_cast<int>(std::bit_width(value));
}

}  // namespace

void CostParams::validate() const {
  if (!(cycle_time_seconds > 0.0))
    throw ValidationError("cycle_time_seconds must be positive");
  if (!(adder_depth_coefficient > 0.0))
    throw ValidationError("adder_depth_coefficient must be positive");
  if (!(comparison_depth_coefficient > 0.0))
    throw ValidationError("comparison_depth_coefficient must be positive");
  if (objective_bits < 0)
    throw ValidationError("objective_bits must be non-negative");
}

int required_register_bits(const LinearConstraint& constraint) {
  std::int64_t budget = constraint.bound;
  for (auto w : constraint.coeffs)
    if (w < 0) budget -= w;
  return bits_for(static_cast<std::uint64_t>(std::max<std::int64_t>(budget, 0))) +
         1;
}

int required_objective_bits(std::span<const std::int64_t> profits) {
  std::uint64_t total = 0;
  for (auto p : profits) total += static_cast<std::uint64_t>(std::abs(p));
  return bits_for(total) + 1;
}

CycleReport stateprep_cycles(std::span<const LinearConstraint> constraints,
                             std::span<const std::int64_t> profits,
                             const CostParams& params, std::size_t d,
                             bool lookahead_biasing) {
  params.validate();
  if (constraints.empty()) throw ValidationError("no constraints given");
  const auto n = static_cast<std::int64_t>(constraints.front().size());

  std::vector<int> widths(constraints.size());
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const int needed = required_register_bits(constraints[k]);
    if (params.constraint_bits.empty()) {
      widths[k] = needed;
    } else {
      if (params.constraint_bits.size() != constraints.size())
        throw ValidationError("constraint_bits must list one width per constraint");
      if (params.constraint_bits[k] < needed)
        throw ValidationError("constraint register " + std::to_string(k) +
                              " needs at least " + std::to_string(needed) +
                              " bits");
      widths[k] = params.constraint_bits[k];
    }
  }
  const int objective_needed = required_objective_bits(profits);
  int objective = params.objective_bits == 0 ? objective_needed
                                             : params.objective_bits;
  if (objective < objective_needed)
    throw ValidationError("objective register needs at least " +
                          std::to_string(objective_needed) + " bits");
  const int widest = *std::max_element(widths.begin(), widths.end());

  const std::int64_t adder = scaled(params.adder_depth_coefficient, widest);
  const std::int64_t compare = scaled(params.comparison_depth_coefficient, 3);
  const std::int64_t objective_add =
      scaled(params.adder_depth_coefficient, objective);

  CycleReport r;
  if (d >= 1) {
    r.lookahead_extra_cycles = 4 * n * static_cast<std::int64_t>(d);
    r.qubits_ancilla_lookahead = (std::int64_t{1} << (d + 1)) * widest;
    if (lookahead_biasing) {
      r.lookahead_extra_cycles += n * lookahead_biasing_cycles(d);
      r.qubits_ancilla_lookahead += lookahead_biasing_qubits(d);
    }
  }
  r.stateprep_cycles =
      n * (2 * adder + compare + objective_add) + r.lookahead_extra_cycles;
  // S_f: one comparison of the objective register against the threshold.
  r.oracle_cycles = compare;
  // S_0: X layer, log-depth multi-controlled Z, X layer.
  r.diffusion_cycles =
      2 + static_cast<std::int64_t>(std::bit_width(static_cast<std::uint64_t>(n - 1)));
  r.grover_iteration_cycles =
      2 * r.stateprep_cycles + r.oracle_cycles + r.diffusion_cycles;

  std::int64_t registers = 0;
  for (int w : widths) registers += w;
  r.qubits_total = n + registers + objective + r.qubits_ancilla_lookahead;
  return r;
}

CycleReport stateprep_cycles(const MfkpInstance& inst, const CostParams& params,
                             std::size_t d, bool lookahead_biasing) {
  auto [upper, lower] = mfkp_constraints(inst);
  const LinearConstraint both[] = {upper, lower};
  return stateprep_cycles(both, inst.profits, params, d, lookahead_biasing);
}

std::int64_t copy_cycles(std::int64_t m) {
  if (m < 1) throw ValidationError("copy count must be >= 1");
  return static_cast<std::int64_t>(
      std::bit_width(static_cast<std::uint64_t>(m - 1)));
}

std::int64_t lookahead_biasing_cycles(std::size_t d) {
  if (d < 1) throw ValidationError("look-ahead biasing needs d >= 1");
  const double x = static_cast<double>(d) * std::log2(static_cast<double>(d));
  return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

std::int64_t lookahead_biasing_qubits(std::size_t d) {
  if (d < 1) throw ValidationError("look-ahead biasing needs d >= 1");
  return (std::int64_t{1} << (d + 1)) * static_cast<std::int64_t>(d);
}

double cycles_to_seconds(double cycles, const CostParams& params) {
  return cycles * params.cycle_time_seconds;
}

}  // namespace cbqs
