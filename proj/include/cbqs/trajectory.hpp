#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbqs/instance.hpp"

namespace cbqs {

// One incumbent improvement.
struct TrajectoryRecord {
  std::int64_t incumbent_value = 0;
  std::int64_t oracle_calls = 0;  // cumulative
  std::int64_t cycles = 0;        // cumulative
  double modeled_seconds = 0.0;   // cumulative
  double wall_seconds = 0.0;
  bool feasible = true;
  Bits solution;  // not serialized
};

struct Trajectory {
  std::string algorithm;
  std::vector<TrajectoryRecord> records;

  bool empty() const { return records.empty(); }
  const TrajectoryRecord& back() const { return records.back(); }
  std::int64_t final_value() const {
    return records.empty() ? 0 : records.back().incumbent_value;
  }
};

// Empty string when every record is feasible and all of incumbent value,
// oracle calls, cycles and both clocks are non-decreasing; otherwise a
// description of the first violation.
std::string trajectory_violation(const std::vector<TrajectoryRecord>& records);

}  // namespace cbqs
