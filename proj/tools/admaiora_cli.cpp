// Experiment driver: single runs and parameter sweeps over allocator,
// topology, message period, node count, and gateway count, with CSV output.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "admaiora/scenario.hpp"
#include "admaiora/sweep.hpp"

using namespace admaiora;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

std::vector<Allocator> parse_allocators(const std::string& arg) {
  std::vector<Allocator> out;
  for (const std::string& name : split(arg, ',')) {
    const auto a = allocator_from_name(name);
    if (!a) throw CLI::ValidationError("--allocator", "unknown allocator: " + name);
    out.push_back(*a);
  }
  if (out.empty()) throw CLI::ValidationError("--allocator", "no allocator given");
  return out;
}

// "<axis>=<v1,v2,...>"
std::pair<SweepAxis, std::vector<double>> parse_sweep(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) {
    throw CLI::ValidationError("--sweep", "expected <axis>=<v1,v2,...>, got " + arg);
  }
  const auto axis = sweep_axis_from_name(arg.substr(0, eq));
  if (!axis) throw CLI::ValidationError("--sweep", "unknown axis: " + arg.substr(0, eq));
  std::vector<double> values;
  for (const std::string& v : split(arg.substr(eq + 1), ',')) {
    values.push_back(std::stod(v));
  }
  if (values.empty()) throw CLI::ValidationError("--sweep", "no axis values given");
  return {*axis, values};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LoRa multi-gateway spreading-factor allocation experiments"};

  int nodes = 500;
  int gateways = 4;
  std::string allocator_arg = "admaiora";
  std::string topology_arg = "balanced";
  double mp = 10.0;
  double duty_cycle = 0.1;
  int payload = 20;
  double sim_time = 3600.0;
  std::uint64_t seed = 1;
  int seeds = 1;
  std::string sweep_arg;
  std::string config_file;
  std::string out_dir = ".";
  int jobs = 1;

  app.add_option("--nodes", nodes, "number of end devices");
  app.add_option("--gateways", gateways, "number of gateways");
  app.add_option("--allocator", allocator_arg,
                 "allocator(s): adr|prob-adr|admaiora, comma-separated for sweeps");
  app.add_option("--topology", topology_arg, "balanced|unbalanced|single");
  app.add_option("--mp", mp, "mean message period, seconds");
  app.add_option("--duty-cycle", duty_cycle, "duty-cycle limit, fraction");
  app.add_option("--payload", payload, "payload bytes per message");
  app.add_option("--sim-time", sim_time, "simulated duration, seconds");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--seeds", seeds, "seeds per point");
  app.add_option("--sweep", sweep_arg, "sweep axis, e.g. mp=10,100,900 or nodes=50,100");
  app.add_option("--config", config_file, "scenario config JSON; flags override");
  app.add_option("--out", out_dir, "output directory for CSV files");
  app.add_option("--jobs", jobs, "concurrent sweep points");

  try {
    app.parse(argc, argv);

    ScenarioSpec base;
    if (!config_file.empty()) base = load_scenario_spec(config_file);
    if (app.count("--nodes") || config_file.empty()) base.n_nodes = nodes;
    if (app.count("--gateways") || config_file.empty()) base.n_gateways = gateways;
    if (app.count("--topology") || config_file.empty()) {
      const auto t = topology_from_name(topology_arg);
      if (!t) throw CLI::ValidationError("--topology", "unknown topology: " + topology_arg);
      base.topology = *t;
    }
    if (app.count("--mp") || config_file.empty()) base.traffic.message_period_s = mp;
    if (app.count("--duty-cycle") || config_file.empty()) base.traffic.duty_cycle = duty_cycle;
    if (app.count("--payload") || config_file.empty()) {
      base.payload_bytes = payload;
      base.traffic.payload_bytes = payload;
    }
    if (app.count("--sim-time") || config_file.empty()) base.traffic.sim_duration_s = sim_time;

    const std::vector<Allocator> allocators = parse_allocators(allocator_arg);

    SweepSpec sweep;
    sweep.allocators = allocators;
    sweep.seeds_per_point = seeds;
    sweep.base_seed = seed;
    sweep.base = base;
    sweep.jobs = jobs;
    if (!sweep_arg.empty()) {
      const auto [axis, values] = parse_sweep(sweep_arg);
      sweep.axis = axis;
      sweep.values = values;
    } else {
      // single point: run the configured scenario as a one-value sweep
      sweep.axis = SweepAxis::MessagePeriod;
      sweep.values = {base.traffic.message_period_s};
    }

    const SweepResult result = run_sweep(sweep);

    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    {
      std::ostringstream csv;
      write_results_csv(result.rows, csv);
      write_file(out / "results.csv", csv.str());
      if (sweep_arg.empty()) std::cout << csv.str();
    }
    {
      std::ostringstream csv;
      write_summary_csv(result.aggregates, csv);
      write_file(out / "summary.csv", csv.str());
      if (!sweep_arg.empty()) std::cout << csv.str();
    }
    {
      std::ostringstream csv;
      write_per_gw_csv(result.rows, csv);
      write_file(out / "per_gw.csv", csv.str());
    }
    {
      std::ostringstream csv;
      write_sf_histogram_csv(result.rows, csv);
      write_file(out / "sf_histogram.csv", csv.str());
    }

    int failed = 0;
    for (const RunRow& row : result.rows) {
      if (!row.ok) {
        ++failed;
        std::cerr << "point failed (allocator " << allocator_name(row.allocator) << ", seed "
                  << row.seed << "): " << row.error << "\n";
      }
    }
    if (failed > 0) {
      std::cerr << failed << " of " << result.rows.size() << " points failed\n";
      return 2;
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
