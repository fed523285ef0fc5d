#pragma once

// Experiment orchestration behind the command-line tool: run configuration,
// trajectory CSV files, parameter sweeps, success curves and comparisons.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cbqs/amplify.hpp"
#include "cbqs/costs.hpp"
#include "cbqs/instance.hpp"
#include "cbqs/trajectory.hpp"

namespace cbqs::bench {

enum class Algorithm { Cbqs, Sa, Gw, Brute };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct GeneratorSpec {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  GeneratorParams params;
};

struct RunConfig {
  // Exactly one instance source.
  std::filesystem::path instance_path;
  std::optional<GeneratorSpec> generator;
  std::string instance_id;  // empty = derived from the source

  Algorithm algorithm = Algorithm::Cbqs;
  BenchMode mode = BenchMode::Sampling;
  double strength = -1.0;  // negative = n/4
  double mixing = 0.0;
  std::size_t lookahead_depth = 0;
  bool lookahead_biasing = false;
  double lookahead_blend = 0.0;
  OrderingKind ordering = OrderingKind::Identity;
  std::uint64_t ordering_seed = 0;

  std::int64_t max_oracle_calls = 100000;
  double max_modeled_seconds = std::numeric_limits<double>::infinity();
  double max_wall_seconds = std::numeric_limits<double>::infinity();
  CostParams costs;
  std::size_t exact_limit = kDefaultExactLimit;

  std::uint64_t sa_iterations = 200000;
  std::uint64_t gw_trials = 10000;
  std::size_t sdp_rank = 0;

  std::uint64_t seed = 0;
  std::filesystem::path output;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

// Keyed text, one "key value" per line, '#' comments. Unknown or repeated
// keys are parse errors. With `validate` false the result may still lack an
// instance source (the CLI fills it in from overrides).
RunConfig parse_run_config(std::istream& in, bool validate = true);
RunConfig read_run_config(const std::filesystem::path& path, bool validate = true);
void format_run_config(std::ostream& out, const RunConfig& config);
std::string default_config_text();

// Applies one "key value" pair; used by the parser and CLI overrides.
void set_config_value(RunConfig& config, const std::string& key,
                      const std::string& value);

MfkpInstance load_instance(const RunConfig& config);
std::string instance_id_of(const RunConfig& config);

struct RunResult {
  MfkpInstance instance;
  std::string instance_id;
  Trajectory trajectory;
};

RunResult run(const RunConfig& config);

// --- trajectory CSV -------------------------------------------------------
inline constexpr const char* kTrajectoryHeader =
    "instance_id,algorithm,seed,incumbent_value,oracle_calls,cycles,"
    "modeled_seconds,wall_seconds,feasible";

struct CsvRow {
  std::string instance_id;
  std::string algorithm;
  std::uint64_t seed = 0;
  TrajectoryRecord record;
};

std::string format_number(double v);
std::string trajectory_csv(const std::string& instance_id, std::uint64_t seed,
                           const Trajectory& trajectory);
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::string& instance_id, std::uint64_t seed,
                          const Trajectory& trajectory);
// Checks the header, every field, and the trajectory invariants of every
// (instance_id, algorithm, seed) series; ParseError carries the line.
std::vector<CsvRow> parse_trajectory_csv(std::istream& in);
std::vector<CsvRow> read_trajectory_csv(const std::filesystem::path& path);

// --- sweep ----------------------------------------------------------------
struct SweepSpec {
  RunConfig base;
  std::vector<double> mixings{0.0};
  std::vector<std::size_t> depths{0, 1, 2, 3, 4, 5};
  std::vector<OrderingKind> orderings{OrderingKind::Identity};
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path out_dir;
};

struct SweepCell {
  double mixing = 0.0;
  std::size_t depth = 0;
  OrderingKind ordering = OrderingKind::Identity;
  std::uint64_t seed = 0;
  std::filesystem::path csv;
  std::int64_t final_value = 0;
  std::int64_t oracle_calls_to_final = 0;
  std::int64_t cycles_to_final = 0;
  double modeled_seconds_to_final = 0.0;
};

// One CBQS run per cell (cells run in parallel); writes cell CSVs plus
// summary.csv (per cell) and depth_summary.csv (means over seeds).
std::vector<SweepCell> run_sweep(const SweepSpec& spec);

// --- success curves -------------------------------------------------------
struct CurvePoint {
  double p = 0.0;
  double t = 0.0;
  double classical = 0.0;  // 1 - (1 - p)^(T^2)
  double aa = 0.0;
  double monte_carlo = 0.0;
};

struct CurveSpec {
  std::vector<double> probabilities{0.001};
  double t_max = 16384.0;
  int points_per_octave = 4;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
};

std::vector<double> t_grid(double t_max, int points_per_octave);
std::vector<CurvePoint> success_curves(const CurveSpec& spec);
std::string curves_csv(const std::vector<CurvePoint>& points);

// --- compare --------------------------------------------------------------
enum class Axis { OracleCalls, Cycles, ModeledSeconds, WallSeconds };

Axis axis_from_string(const std::string& name);
std::string to_string(Axis axis);

// Aligns every (instance_id, algorithm, seed) series on the union of axis
// values; each cell holds that series' incumbent at the time, empty before
// its first record. Series are labelled instance_id/algorithm/seed.
std::string compare_csv(const std::vector<std::vector<CsvRow>>& inputs,
                        Axis axis);

}  // namespace cbqs::bench
