#include "cbqs/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cbqs/baselines.hpp"
#include "cbqs/errors.hpp"
#include "cbqs/io.hpp"
#include "cbqs/kernels.hpp"

namespace cbqs::bench {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || value.empty())
    throw ValidationError(key + ": cannot parse '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw ValidationError(key + ": expected true or false, got '" + value + "'");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

CbqsConfig cbqs_config(const RunConfig& c) {
  CbqsConfig out;
  out.mode = c.mode;
  out.strength = c.strength;
  out.mixing = c.mixing;
  out.lookahead_depth = c.lookahead_depth;
  out.lookahead_biasing = c.lookahead_biasing;
  out.lookahead_blend = c.lookahead_blend;
  out.ordering = {c.ordering, c.ordering_seed};
  out.budget = {c.max_oracle_calls, c.max_modeled_seconds, c.max_wall_seconds};
  out.costs = c.costs;
  out.seed = c.seed;
  out.exact_limit = c.exact_limit;
  return out;
}

double axis_value(const TrajectoryRecord& r, Axis axis) {
  switch (axis) {
    case Axis::OracleCalls: return static_cast<double>(r.oracle_calls);
    case Axis::Cycles: return static_cast<double>(r.cycles);
    case Axis::ModeledSeconds: return r.modeled_seconds;
    case Axis::WallSeconds: return r.wall_seconds;
  }
  return 0.0;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Cbqs: return "cbqs";
    case Algorithm::Sa: return "sa";
    case Algorithm::Gw: return "gw";
    case Algorithm::Brute: return "brute";
  }
  return "cbqs";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "cbqs") return Algorithm::Cbqs;
  if (name == "sa") return Algorithm::Sa;
  if (name == "gw") return Algorithm::Gw;
  if (name == "brute") return Algorithm::Brute;
  throw ValidationError("algorithm: unknown value '" + name +
                        "' (expected cbqs, sa, gw or brute)");
}

void RunConfig::validate() const {
  if (instance_path.empty() == !generator.has_value())
    throw ValidationError("instance: exactly one of 'instance' and 'generate_n' must be set");
  if (generator && generator->n < 1) throw ValidationError("generate_n: must be >= 1");
  if (generator && generator->params.weight_range < 1)
    throw ValidationError("weight_range: must be >= 1");
  if (generator && !(generator->params.capacity_fraction > 0.0 &&
                     generator->params.capacity_fraction <= 1.0))
    throw ValidationError("capacity_fraction: must lie in (0, 1]");
  if (generator && !(generator->params.gap_fraction > 0.0 &&
                     generator->params.gap_fraction <= 1.0))
    throw ValidationError("gap_fraction: must lie in (0, 1]");
  if (instance_id.find_first_of(",\n\r") != std::string::npos)
    throw ValidationError("instance_id: must not contain commas or line breaks");
  if (!(mixing >= 0.0)) throw ValidationError("mixing: must be >= 0");
  if (lookahead_depth > 16) throw ValidationError("lookahead_depth: must be <= 16");
  if (!(lookahead_blend >= 0.0 && lookahead_blend <= 1.0))
    throw ValidationError("lookahead_blend: must lie in [0, 1]");
  if (max_oracle_calls < 0) throw ValidationError("max_oracle_calls: must be >= 0");
  if (!(max_modeled_seconds >= 0.0))
    throw ValidationError("max_modeled_seconds: must be >= 0");
  if (!(max_wall_seconds > 0.0)) throw ValidationError("max_wall_seconds: must be > 0");
  if (exact_limit < 1 || exact_limit > 40)
    throw ValidationError("exact_limit: must lie in [1, 40]");
  if (sdp_rank == 1) throw ValidationError("sdp_rank: must be 0 (auto) or >= 2");
  costs.validate();
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  auto gen = [&]() -> GeneratorSpec& {
    if (!c.generator) c.generator = GeneratorSpec{};
    return *c.generator;
  };
  if (key == "instance") {
    c.instance_path = value;
  } else if (key == "instance_id") {
    c.instance_id = value;
  } else if (key == "generate_n") {
    gen().n = parse_number<std::size_t>(key, value);
  } else if (key == "generate_seed") {
    gen().seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "weight_range") {
    gen().params.weight_range = parse_number<std::int64_t>(key, value);
  } else if (key == "capacity_fraction") {
    gen().params.capacity_fraction = parse_number<double>(key, value);
  } else if (key == "gap_fraction") {
    gen().params.gap_fraction = parse_number<double>(key, value);
  } else if (key == "algorithm") {
    c.algorithm = algorithm_from_string(value);
  } else if (key == "mode") {
    try {
      c.mode = bench_mode_from_string(value);
    } catch (const ValidationError& e) {
      throw ValidationError("mode: " + std::string(e.what()));
    }
  } else if (key == "strength") {
    c.strength = parse_number<double>(key, value);
  } else if (key == "mixing") {
    c.mixing = parse_number<double>(key, value);
  } else if (key == "lookahead_depth") {
    c.lookahead_depth = parse_number<std::size_t>(key, value);
  } else if (key == "lookahead_biasing") {
    c.lookahead_biasing = parse_bool(key, value);
  } else if (key == "lookahead_blend") {
    c.lookahead_blend = parse_number<double>(key, value);
  } else if (key == "ordering") {
    try {
      c.ordering = ordering_from_string(value);
    } catch (const Error& e) {
      throw ValidationError("ordering: " + std::string(e.what()));
    }
  } else if (key == "ordering_seed") {
    c.ordering_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "max_oracle_calls") {
    c.max_oracle_calls = parse_number<std::int64_t>(key, value);
  } else if (key == "max_modeled_seconds") {
    c.max_modeled_seconds = parse_number<double>(key, value);
  } else if (key == "max_wall_seconds") {
    c.max_wall_seconds = parse_number<double>(key, value);
  } else if (key == "cycle_time_seconds") {
    c.costs.cycle_time_seconds = parse_number<double>(key, value);
  } else if (key == "adder_depth_coefficient") {
    c.costs.adder_depth_coefficient = parse_number<double>(key, value);
  } else if (key == "comparison_depth_coefficient") {
    c.costs.comparison_depth_coefficient = parse_number<double>(key, value);
  } else if (key == "constraint_bits") {
    c.costs.constraint_bits.clear();
    for (const auto& tok : io::split_ws(value))
      c.costs.constraint_bits.push_back(parse_number<int>(key, tok));
  } else if (key == "objective_bits") {
    c.costs.objective_bits = parse_number<int>(key, value);
  } else if (key == "exact_limit") {
    c.exact_limit = parse_number<std::size_t>(key, value);
  } else if (key == "sa_iterations") {
    c.sa_iterations = parse_number<std::uint64_t>(key, value);
  } else if (key == "gw_trials") {
    c.gw_trials = parse_number<std::uint64_t>(key, value);
  } else if (key == "sdp_rank") {
    c.sdp_rank = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "output") {
    c.output = value;
  } else {
    throw ValidationError("unknown key '" + key + "'");
  }
}

RunConfig parse_run_config(std::istream& in, bool validate) {
  RunConfig c;
  std::map<std::string, int> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(io::strip_comment(raw));
    if (line.empty()) continue;
    const auto split = line.find_first_of(" \t");
    const std::string key = line.substr(0, split);
    const std::string value =
        split == std::string::npos ? std::string{} : trim(line.substr(split));
    if (auto it = seen.find(key); it != seen.end())
      throw ParseError("duplicate key '" + key + "' (first on line " +
                           std::to_string(it->second) + ")",
                       line_no);
    seen[key] = line_no;
    if (value.empty()) throw ParseError("key '" + key + "' has no value", line_no);
    try {
      set_config_value(c, key, value);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (validate) c.validate();
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path, bool validate) {
  std::istringstream in(io::read_file(path));
  return parse_run_config(in, validate);
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void format_run_config(std::ostream& out, const RunConfig& c) {
  auto line = [&](const std::string& key, const std::string& value) {
    out << key << ' ' << value << '\n';
  };
  if (!c.instance_path.empty()) line("instance", c.instance_path.string());
  if (c.generator) {
    line("generate_n", std::to_string(c.generator->n));
    line("generate_seed", std::to_string(c.generator->seed));
    line("weight_range", std::to_string(c.generator->params.weight_range));
    line("capacity_fraction", format_number(c.generator->params.capacity_fraction));
    line("gap_fraction", format_number(c.generator->params.gap_fraction));
  }
  if (!c.instance_id.empty()) line("instance_id", c.instance_id);
  line("algorithm", to_string(c.algorithm));
  line("mode", to_string(c.mode));
  line("strength", format_number(c.strength));
  line("mixing", format_number(c.mixing));
  line("lookahead_depth", std::to_string(c.lookahead_depth));
  line("lookahead_biasing", c.lookahead_biasing ? "true" : "false");
  line("lookahead_blend", format_number(c.lookahead_blend));
  line("ordering", cbqs::to_string(c.ordering));
  line("ordering_seed", std::to_string(c.ordering_seed));
  line("max_oracle_calls", std::to_string(c.max_oracle_calls));
  line("max_modeled_seconds", format_number(c.max_modeled_seconds));
  line("max_wall_seconds", format_number(c.max_wall_seconds));
  line("cycle_time_seconds", format_number(c.costs.cycle_time_seconds));
  line("adder_depth_coefficient", format_number(c.costs.adder_depth_coefficient));
  line("comparison_depth_coefficient",
       format_number(c.costs.comparison_depth_coefficient));
  if (!c.costs.constraint_bits.empty()) {
    std::string bits;
    for (int b : c.costs.constraint_bits)
      bits += (bits.empty() ? "" : " ") + std::to_string(b);
    line("constraint_bits", bits);
  }
  line("objective_bits", std::to_string(c.costs.objective_bits));
  line("exact_limit", std::to_string(c.exact_limit));
  line("sa_iterations", std::to_string(c.sa_iterations));
  line("gw_trials", std::to_string(c.gw_trials));
  line("sdp_rank", std::to_string(c.sdp_rank));
  line("seed", std::to_string(c.seed));
  if (!c.output.empty()) line("output", c.output.string());
}

std::string default_config_text() {
  std::ostringstream out;
  out << "# exactly one instance source:\n"
         "# instance <path>\n"
         "# generate_n <n>   (with generate_seed, weight_range, capacity_fraction, "
         "gap_fraction)\n"
         "# strength < 0 means n/4; objective_bits 0 means minimal width\n";
  format_run_config(out, RunConfig{});
  out << "# output <path>\n";
  return out.str();
}

MfkpInstance load_instance(const RunConfig& c) {
  if (c.generator)
    return generate_instance(c.generator->n, c.generator->seed, c.generator->params);
  return read_instance(c.instance_path);
}

std::string instance_id_of(const RunConfig& c) {
  if (!c.instance_id.empty()) return c.instance_id;
  if (c.generator)
    return "gen-n" + std::to_string(c.generator->n) + "-s" +
           std::to_string(c.generator->seed);
  return c.instance_path.stem().string();
}

RunResult run(const RunConfig& c) {
  c.validate();
  RunResult out{load_instance(c), instance_id_of(c), {}};
  const MfkpInstance& inst = out.instance;
  switch (c.algorithm) {
    case Algorithm::Cbqs:
      out.trajectory = cbqs_run(inst, cbqs_config(c));
      break;
    case Algorithm::Sa: {
      AnnealingConfig sa;
      sa.iterations = c.sa_iterations;
      sa.seed = c.seed;
      sa.max_wall_seconds = c.max_wall_seconds;
      out.trajectory = simulated_annealing(inst, sa);
      break;
    }
    case Algorithm::Gw: {
      const auto q = build_gw_qform(inst);
      SdpOptions opt;
      opt.rank = c.sdp_rank;
      opt.seed = c.seed;
      const auto factor = solve_sdp_lowrank(q, opt);
      RoundingConfig rc;
      rc.trials = c.gw_trials;
      rc.seed = c.seed;
      rc.max_wall_seconds = c.max_wall_seconds;
      out.trajectory = gw_round(factor, inst, rc);
      break;
    }
    case Algorithm::Brute: {
      const auto start = std::chrono::steady_clock::now();
      const auto bf = brute_force(inst);
      const auto evals = std::int64_t{1} << inst.size();
      TrajectoryRecord r;
      r.incumbent_value = bf.optimum;
      r.oracle_calls = evals;
      r.modeled_seconds = static_cast<double>(evals) * AnnealingConfig{}.seconds_per_iteration;
      r.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      r.solution = bf.argmax;
      out.trajectory = {"brute", {r}};
      break;
    }
  }
  return out;
}

std::string trajectory_csv(const std::string& instance_id, std::uint64_t seed,
                           const Trajectory& t) {
  std::ostringstream out;
  out << kTrajectoryHeader << '\n';
  for (const auto& r : t.records)
    out << instance_id << ',' << t.algorithm << ',' << seed << ','
        << r.incumbent_value << ',' << r.oracle_calls << ',' << r.cycles << ','
        << format_number(r.modeled_seconds) << ',' << format_number(r.wall_seconds)
        << ',' << (r.feasible ? 1 : 0) << '\n';
  return out.str();
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::string& instance_id, std::uint64_t seed,
                          const Trajectory& t) {
  io::write_file_atomic(path, trajectory_csv(instance_id, seed, t));
}

std::vector<CsvRow> parse_trajectory_csv(std::istream& in) {
  std::string raw;
  int line_no = 1;
  if (!std::getline(in, raw)) throw ParseError("empty trajectory file");
  if (trim(raw) != kTrajectoryHeader)
    throw ParseError("unexpected header, expected '" + std::string(kTrajectoryHeader) + "'",
                     1);
  std::vector<CsvRow> rows;
  std::map<std::tuple<std::string, std::string, std::uint64_t>, std::size_t> last;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto f = io::split_csv_line(line);
    if (f.size() != 9)
      throw ParseError("expected 9 fields, got " + std::to_string(f.size()), line_no);
    CsvRow row;
    try {
      row.instance_id = f[0];
      row.algorithm = f[1];
      row.seed = parse_number<std::uint64_t>("seed", f[2]);
      row.record.incumbent_value = parse_number<std::int64_t>("incumbent_value", f[3]);
      row.record.oracle_calls = parse_number<std::int64_t>("oracle_calls", f[4]);
      row.record.cycles = parse_number<std::int64_t>("cycles", f[5]);
      row.record.modeled_seconds = parse_number<double>("modeled_seconds", f[6]);
      row.record.wall_seconds = parse_number<double>("wall_seconds", f[7]);
      row.record.feasible = parse_bool("feasible", f[8]);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    const auto key = std::make_tuple(row.instance_id, row.algorithm, row.seed);
    std::vector<TrajectoryRecord> pair;
    if (auto it = last.find(key); it != last.end()) pair.push_back(rows[it->second].record);
    pair.push_back(row.record);
    if (auto v = trajectory_violation(pair); !v.empty())
      throw ParseError("series " + row.instance_id + "/" + row.algorithm + "/" +
                           std::to_string(row.seed) + ": " +
                           v.substr(v.find(": ") + 2),
                       line_no);
    last[key] = rows.size();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> read_trajectory_csv(const std::filesystem::path& path) {
  std::istringstream in(io::read_file(path));
  try {
    return parse_trajectory_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
  RunConfig base = spec.base;
  base.algorithm = Algorithm::Cbqs;
  base.validate();
  if (spec.out_dir.empty()) throw ValidationError("out_dir: must be set");
  if (spec.mixings.empty() || spec.depths.empty() || spec.orderings.empty() ||
      spec.seeds.empty())
    throw ValidationError("sweep: every axis needs at least one value");
  const MfkpInstance inst = load_instance(base);
  const std::string id = instance_id_of(base);

  std::vector<SweepCell> cells;
  for (double f : spec.mixings)
    for (std::size_t d : spec.depths)
      for (OrderingKind o : spec.orderings)
        for (std::uint64_t s : spec.seeds) {
          SweepCell cell;
          cell.mixing = f;
          cell.depth = d;
          cell.ordering = o;
          cell.seed = s;
          cell.csv = spec.out_dir / ("f" + format_number(f) + "_d" + std::to_string(d) +
                                     "_" + cbqs::to_string(o) + "_s" +
                                     std::to_string(s) + ".csv");
          cells.push_back(cell);
        }
  for (const auto& cell : cells) {
    RunConfig c = base;
    c.mixing = cell.mixing;
    c.lookahead_depth = cell.depth;
    c.validate();
  }

  std::vector<std::exception_ptr> errors(cells.size());
  const auto count = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    auto& cell = cells[static_cast<std::size_t>(k)];
    try {
      RunConfig c = base;
      c.mixing = cell.mixing;
      c.lookahead_depth = cell.depth;
      c.ordering = cell.ordering;
      c.seed = cell.seed;
      const Trajectory t = cbqs_run(inst, cbqs_config(c));
      write_trajectory_csv(cell.csv, id, cell.seed, t);
      if (!t.empty()) {
        cell.final_value = t.back().incumbent_value;
        cell.oracle_calls_to_final = t.back().oracle_calls;
        cell.cycles_to_final = t.back().cycles;
        cell.modeled_seconds_to_final = t.back().modeled_seconds;
      }
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::ostringstream summary;
  summary << "instance_id,mixing,depth,ordering,seed,final_value,oracle_calls_to_final,"
             "cycles_to_final,modeled_seconds_to_final,csv\n";
  for (const auto& c : cells)
    summary << id << ',' << format_number(c.mixing) << ',' << c.depth << ','
            << cbqs::to_string(c.ordering) << ',' << c.seed << ',' << c.final_value << ','
            << c.oracle_calls_to_final << ',' << c.cycles_to_final << ','
            << format_number(c.modeled_seconds_to_final) << ','
            << c.csv.filename().string() << '\n';
  io::write_file_atomic(spec.out_dir / "summary.csv", summary.str());

  struct Acc {
    std::size_t runs = 0;
    double value = 0, calls = 0, cycles = 0;
  };
  std::map<std::tuple<double, std::size_t, std::string>, Acc> groups;
  for (const auto& c : cells) {
    auto& a = groups[{c.mixing, c.depth, cbqs::to_string(c.ordering)}];
    ++a.runs;
    a.value += static_cast<double>(c.final_value);
    a.calls += static_cast<double>(c.oracle_calls_to_final);
    a.cycles += static_cast<double>(c.cycles_to_final);
  }
  std::ostringstream depth;
  depth << "instance_id,mixing,depth,ordering,runs,mean_final_value,"
           "mean_oracle_calls_to_final,mean_cycles_to_final\n";
  for (const auto& [key, a] : groups) {
    const auto runs = static_cast<double>(a.runs);
    depth << id << ',' << format_number(std::get<0>(key)) << ',' << std::get<1>(key)
          << ',' << std::get<2>(key) << ',' << a.runs << ','
          << format_number(a.value / runs) << ',' << format_number(a.calls / runs) << ','
          << format_number(a.cycles / runs) << '\n';
  }
  io::write_file_atomic(spec.out_dir / "depth_summary.csv", depth.str());
  return cells;
}

std::vector<double> t_grid(double t_max, int points_per_octave) {
  if (!(t_max >= 1.0)) throw ValidationError("t_max: must be >= 1");
  if (points_per_octave < 1) throw ValidationError("points_per_octave: must be >= 1");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double t = std::exp2(static_cast<double>(k) / points_per_octave);
    if (t > t_max * (1.0 + 1e-12)) break;
    grid.push_back(t);
  }
  if (grid.back() < t_max * (1.0 - 1e-12)) grid.push_back(t_max);
  return grid;
}

std::vector<CurvePoint> success_curves(const CurveSpec& spec) {
  if (spec.probabilities.empty()) throw ValidationError("p: at least one value required");
  for (double p : spec.probabilities)
    if (!(p > 0.0 && p <= 1.0)) throw ValidationError("p: values must lie in (0, 1]");
  const auto grid = t_grid(spec.t_max, spec.points_per_octave);
  std::vector<CurvePoint> out;
  std::uint64_t index = 0;
  for (double p : spec.probabilities)
    for (double t : grid) {
      CurvePoint pt{p, t, classical_success(p, t * t), aa_success(p, t), 0.0};
      if (spec.trials > 0) {
        const auto tally = kernels::qsearch_tally_parallel(
            p, t, Stream::derive(spec.seed, index)(), spec.trials);
        pt.monte_carlo =
            static_cast<double>(tally.found) / static_cast<double>(spec.trials);
      }
      ++index;
      out.push_back(pt);
    }
  return out;
}

std::string curves_csv(const std::vector<CurvePoint>& points) {
  std::ostringstream out;
  out << "p,T,classical_success,aa_success,monte_carlo\n";
  for (const auto& pt : points)
    out << format_number(pt.p) << ',' << format_number(pt.t) << ','
        << format_number(pt.classical) << ',' << format_number(pt.aa) << ','
        << format_number(pt.monte_carlo) << '\n';
  return out.str();
}

Axis axis_from_string(const std::string& name) {
  if (name == "oracle_calls") return Axis::OracleCalls;
  if (name == "cycles") return Axis::Cycles;
  if (name == "modeled_seconds") return Axis::ModeledSeconds;
  if (name == "wall_seconds") return Axis::WallSeconds;
  throw ValidationError("axis: unknown value '" + name +
                        "' (expected oracle_calls, cycles, modeled_seconds or "
                        "wall_seconds)");
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::OracleCalls: return "oracle_calls";
    case Axis::Cycles: return "cycles";
    case Axis::ModeledSeconds: return "modeled_seconds";
    case Axis::WallSeconds: return "wall_seconds";
  }
  return "modeled_seconds";
}

std::string compare_csv(const std::vector<std::vector<CsvRow>>& inputs, Axis axis) {
  std::vector<std::string> labels;
  std::map<std::string, std::vector<TrajectoryRecord>> series;
  for (const auto& rows : inputs)
    for (const auto& r : rows) {
      const std::string label =
          r.instance_id + "/" + r.algorithm + "/" + std::to_string(r.seed);
      auto [it, inserted] = series.try_emplace(label);
      if (inserted) labels.push_back(label);
      it->second.push_back(r.record);
    }
  std::set<double> times;
  for (const auto& [label, recs] : series)
    for (const auto& r : recs) times.insert(axis_value(r, axis));

  std::ostringstream out;
  out << to_string(axis);
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (double t : times) {
    out << format_number(t);
    for (const auto& l : labels) {
      out << ',';
      const auto& recs = series.at(l);
      const TrajectoryRecord* at = nullptr;
      for (const auto& r : recs)
        if (axis_value(r, axis) <= t) at = &r;
      if (at) out << at->incumbent_value;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace cbqs::bench
