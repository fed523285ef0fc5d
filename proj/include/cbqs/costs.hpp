#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cbqs/instance.hpp"

namespace cbqs {

// Quantum cost model parameters. Cycle = one layer of gates on disjoint
// qubits; Toffoli and controlled single-qubit unitaries take one cycle.
struct CostParams {
  double cycle_time_seconds = 1e-8;
  double adder_depth_coefficient = 1.0;
  double comparison_depth_coefficient = 1.0;
  // Budget register widths per constraint; empty = minimal widths.
  std::vector<int> constraint_bits;
  // Objective register width; 0 = minimal width.
  int objective_bits = 0;

  void validate() const;
};

struct CycleReport {
  std::int64_t stateprep_cycles = 0;
  std::int64_t oracle_cycles = 0;
  std::int64_t diffusion_cycles = 0;
  std::int64_t grover_iteration_cycles = 0;
  std::int64_t lookahead_extra_cycles = 0;
  std::int64_t qubits_total = 0;
  std::int64_t qubits_ancilla_lookahead = 0;
};

// Smallest budget register (including one sign qubit) that holds every
// running budget of the constraint.
int required_register_bits(const LinearConstraint& constraint);
int required_objective_bits(std::span<const std::int64_t> profits);

// Cost of one application of the state preparation U for the given
// constraint list, objective and look-ahead depth d:
//   per item: subtract |w_i| from every budget register (in parallel),
//   sign check + controlled rotation + uncompute (3 comparison cycles),
//   controlled re-addition, controlled objective addition;
//   plus exactly 4 n d cycles for look-ahead when d >= 1.
// Look-ahead biasing, when requested, adds n * ceil(d log2 d) cycles and
// 2^(d+1) d qubits on top.
CycleReport stateprep_cycles(std::span<const LinearConstraint> constraints,
                             std::span<const std::int64_t> profits,
                             const CostParams& params, std::size_t d,
                             bool lookahead_biasing = false);

// Both MFKP constraints.
CycleReport stateprep_cycles(const MfkpInstance& inst, const CostParams& params,
                             std::size_t d, bool lookahead_biasing = false);

// ceil(log2 m) cycles to fan one register out into m copies.
std::int64_t copy_cycles(std::int64_t m);

// ceil(d log2 d); d >= 1.
std::int64_t lookahead_biasing_cycles(std::size_t d);
std::int64_t lookahead_biasing_qubits(std::size_t d);

double cycles_to_seconds(double cycles, const CostParams& params);

}  // namespace cbqs
