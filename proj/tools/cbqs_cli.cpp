// cbqs: generate instances, run solvers, sweep CBQS settings, tabulate
// success curves and merge trajectory files.
//
// Exit codes: 0 success, 1 invalid input (flags, config, files), 2 runtime
// failure.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbqs/bench.hpp"
#include "cbqs/errors.hpp"
#include "cbqs/io.hpp"

namespace {

using namespace cbqs;
using namespace cbqs::bench;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_file_atomic(path, text);
}

// --config file, then --set key=value overrides in order.
RunConfig build_config(const std::string& config_path,
                       const std::vector<std::string>& overrides) {
  RunConfig c;
  if (!config_path.empty()) c = read_run_config(config_path, false);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("--set expects key=value, got '" + kv + "'");
    set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  c.validate();
  return c;
}

template <typename T, typename F>
std::vector<T> map_list(const std::vector<std::string>& items, F f) {
  std::vector<T> out;
  for (const auto& s : items) out.push_back(f(s));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-biased quantum search benchmarking"};
  app.require_subcommand(0, 1);
  bool print_defaults = false;
  app.add_flag("--print-defaults", print_defaults, "Print the default run config and exit");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random MFKP instance file");
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  GeneratorParams gen_params;
  std::string gen_out;
  gen->add_option("-n,--items", gen_n, "Number of items")->required();
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--weight-range", gen_params.weight_range, "Weights and profits in 1..R");
  gen->add_option("--capacity-fraction", gen_params.capacity_fraction, "c as a fraction of sum(w)");
  gen->add_option("--gap-fraction", gen_params.gap_fraction, "epsilon as a fraction of c");
  gen->add_option("-o,--output", gen_out, "Instance file (default stdout)");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run one solver and write its trajectory CSV");
  std::string run_config;
  std::vector<std::string> run_set;
  std::string run_out;
  run_cmd->add_option("-c,--config", run_config, "Run config file");
  run_cmd->add_option("-s,--set", run_set, "Override a config key (key=value)")->take_all();
  run_cmd->add_option("-o,--output", run_out, "Trajectory CSV (default: config 'output' or stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "CBQS over mixing x depth x ordering x seed");
  std::string sweep_config;
  std::vector<std::string> sweep_set;
  std::vector<double> sweep_mixing{0.0};
  std::vector<std::size_t> sweep_depths{0, 1, 2, 3, 4, 5};
  std::vector<std::string> sweep_orderings{"identity"};
  std::vector<std::uint64_t> sweep_seeds{0};
  std::string sweep_dir;
  sweep->add_option("-c,--config", sweep_config, "Base run config file");
  sweep->add_option("-s,--set", sweep_set, "Override a config key (key=value)")->take_all();
  sweep->add_option("--mixing", sweep_mixing, "Mixing factors f")->delimiter(',');
  sweep->add_option("--depths", sweep_depths, "Look-ahead depths")->delimiter(',');
  sweep->add_option("--orderings", sweep_orderings, "Item orderings")->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds, "Seeds")->delimiter(',');
  sweep->add_option("-d,--out-dir", sweep_dir, "Output directory")->required();

  // curves
  auto* curves = app.add_subcommand("curves", "Classical vs amplitude amplification success");
  CurveSpec curve_spec;
  std::string curve_out;
  curves->add_option("-p,--p", curve_spec.probabilities, "Success probabilities")->delimiter(',');
  curves->add_option("--t-max", curve_spec.t_max, "Largest T");
  curves->add_option("--points-per-octave", curve_spec.points_per_octave, "Grid density");
  curves->add_option("--trials", curve_spec.trials, "Monte Carlo trials per point (0 = skip)");
  curves->add_option("--seed", curve_spec.seed, "Monte Carlo seed");
  curves->add_option("-o,--output", curve_out, "CSV file (default stdout)");

  // compare
  auto* compare = app.add_subcommand("compare", "Align trajectory CSVs on a common axis");
  std::vector<std::string> compare_in;
  std::string compare_axis = "modeled_seconds";
  std::string compare_out;
  compare->add_option("inputs", compare_in, "Trajectory CSV files")->required();
  compare->add_option("--axis", compare_axis,
                      "oracle_calls, cycles, modeled_seconds or wall_seconds");
  compare->add_option("-o,--output", compare_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (print_defaults) {
      std::cout << default_config_text();
      return 0;
    }
    if (*gen) {
      const auto inst = generate_instance(gen_n, gen_seed, gen_params);
      std::ostringstream text;
      format_instance(text, inst);
      emit(gen_out, text.str());
    } else if (*run_cmd) {
      const RunConfig c = build_config(run_config, run_set);
      const RunResult r = run(c);
      const std::string path = !run_out.empty() ? run_out : c.output.string();
      emit(path, trajectory_csv(r.instance_id, c.seed, r.trajectory));
    } else if (*sweep) {
      SweepSpec spec;
      spec.base = build_config(sweep_config, sweep_set);
      spec.mixings = sweep_mixing;
      spec.depths = sweep_depths;
      spec.orderings = map_list<OrderingKind>(sweep_orderings, [](const std::string& s) {
        try {
          return ordering_from_string(s);
        } catch (const Error& e) {
          throw ValidationError(std::string("orderings: ") + e.what());
        }
      });
      spec.seeds = sweep_seeds;
      spec.out_dir = sweep_dir;
      std::filesystem::create_directories(spec.out_dir);
      const auto cells = run_sweep(spec);
      std::cerr << cells.size() << " runs written to " << spec.out_dir.string() << '\n';
    } else if (*curves) {
      emit(curve_out, curves_csv(success_curves(curve_spec)));
    } else if (*compare) {
      const Axis axis = axis_from_string(compare_axis);
      std::vector<std::vector<CsvRow>> inputs;
      for (const auto& path : compare_in) inputs.push_back(read_trajectory_csv(path));
      emit(compare_out, compare_csv(inputs, axis));
    } else {
      std::cout << app.help();
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
