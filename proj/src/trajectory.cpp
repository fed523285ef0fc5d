#include "cbqs/trajectory.hpp"

namespace cbqs {

std::string trajectory_violation(const std::vector<TrajectoryRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string where = "record " + std::to_string(i) + ": ";
    if (!r.feasible) return where + "infeasible incumbent";
    if (r.oracle_calls < 0 || r.cycles < 0 || r.modeled_seconds < 0.0 ||
        r.wall_seconds < 0.0)
      return where + "negative cumulative field";
    if (i == 0) continue;
    const auto& p = records[i - 1];
    if (r.incumbent_value < p.incumbent_value)
      return where + "incumbent value decreased";
    if (r.oracle_calls < p.oracle_calls) return where + "oracle calls decreased";
    if (r.cycles < p.cycles) return where + "cycles decreased";
    if (r.modeled_seconds < p.modeled_seconds)
      return where + "modeled seconds decreased";
    if (r.wall_seconds < p.wall_seconds) return where + "wall seconds decreased";
  }
  return {};
}

}  // namespace cbqs
