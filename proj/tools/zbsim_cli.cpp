#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "zbsim/harness/calibrate.hpp"
#include "zbsim/harness/compare.hpp"
#include "zbsim/harness/coverage.hpp"
#include "zbsim/harness/scenario_file.hpp"
#include "zbsim/harness/simulation.hpp"
#include "zbsim/harness/sweep.hpp"
#include "zbsim/harness/trace_csv.hpp"

namespace fs = std::filesystem;
using namespace zbsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitScenario = 2;
constexpr int kExitInfeasible = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ScenarioConfig load(const std::string& path) { return path.empty() ? default_scenario() : load_scenario(path); }

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

std::vector<Interval> parse_gap_targets(const std::string& text) {
  std::vector<Interval> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError(fmt::format("gap '{}' is not start:end", item));
    try {
      out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw UsageError(fmt::format("gap '{}' is not start:end", item));
    }
  }
  return out;
}

int cmd_run(const std::string& scenario, std::optional<std::uint64_t> seed, const std::string& out_dir) {
  const ScenarioConfig cfg = load(scenario);
  const std::uint64_t s = seed.value_or(cfg.seed);
  const RunResult run = run_simulation(cfg, s);
  const fs::path dir(out_dir);
  write_file(dir / "trace.csv", trace_csv(run.trace));
  write_file(dir / "energy.csv", energy_report(run));

  std::string summary = fmt::format("seed {}, duration {:.3f} s, {} trace rows, {} events\n", s,
                                    run.duration.to_seconds(), run.trace.size(), run.engine.processed);
  for (const auto& m : run.mobiles) {
    summary += fmt::format(
        "mobile {}: generated {}, delivered {}, no-ack {}, access failures {}, outage drops {}, overflow {}\n", m.id,
        m.traffic.generated, m.traffic.delivered, m.traffic.no_ack, m.traffic.access_failures,
        m.traffic.outage_losses, m.traffic.overflow_drops);
    summary += fmt::format("mobile {}: handovers {}/{}, mean latency {:.4f} s, outage {:.3f} s\n", m.id,
                           m.handover.completions, m.handover.attempts, m.handover.mean_latency_s(),
                           m.handover.total_outage.to_seconds());
  }
  write_file(dir / "summary.txt", summary);
  std::cout << summary;
  return kExitOk;
}

int cmd_sweep(const std::string& scenario, std::optional<std::uint64_t> seed, std::optional<std::vector<double>> powers,
              const std::string& out_dir) {
  const ScenarioConfig cfg = load(scenario);
  const std::vector<double> levels = powers.value_or(cfg.sweep_powers);
  if (levels.empty()) throw UsageError("power list is empty");
  CoverageReport report;
  try {
    report = run_sweep(cfg, levels, seed.value_or(cfg.seed));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string text = sweep_summary_text(report);
  std::cout << text;
  if (!out_dir.empty()) {
    write_file(fs::path(out_dir) / "sweep.txt", text);
    write_file(fs::path(out_dir) / "intervals.csv", sweep_intervals_csv(report));
  }
  return kExitOk;
}

int cmd_calibrate(const std::string& scenario, const std::string& gaps, double gap_power, double gap_free,
                  double tolerance, const std::string& write_path) {
  const ScenarioConfig cfg = load(scenario);
  CalibrationTargets targets;
  targets.gap_power_dbm = gap_power;
  targets.gap_free_power_dbm = gap_free;
  targets.tolerance_m = tolerance;
  if (!gaps.empty()) targets.gaps = parse_gap_targets(gaps);
  const CalibrationResult result = calibrate(cfg, targets);
  std::cout << calibration_report(result, targets);
  if (!result.feasible) return kExitInfeasible;
  if (!write_path.empty()) {
    ScenarioWriteOptions opts;
    opts.header_notes.push_back(fmt::format("calibrated: max boundary error {:.3f} m against gaps {} at {} dBm",
                                            result.max_error_m, format_intervals(targets.gaps), gap_power));
    write_file(write_path, write_scenario(apply_calibration(cfg, result), opts));
    std::cout << "wrote " << write_path << '\n';
  }
  return kExitOk;
}

int cmd_compare(const std::string& scenario, std::optional<std::uint64_t> seed, const std::string& out_dir) {
  const ScenarioConfig cfg = load(scenario);
  const CompareReport report = run_compare(cfg, seed.value_or(cfg.seed));
  const std::string text = compare_report_text(report);
  std::cout << text;
  if (!out_dir.empty()) write_file(fs::path(out_dir) / "compare.txt", text);
  return kExitOk;
}

int cmd_gaps(const std::string& trace_path, std::optional<int> node, const std::string& scenario) {
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw ScenarioError(0, trace_path, "cannot open trace file");
  const auto rows = read_trace_csv(in);
  const ScenarioConfig cfg = load(scenario);
  const auto mobiles = cfg.mobiles();
  const Trajectory& path = mobiles.empty() ? cfg.trajectory : cfg.trajectory_of(*mobiles.front());
  std::optional<NodeId> id;
  if (node) id = static_cast<NodeId>(*node);
  const auto gaps = gap_analysis(rows, path.min_x(), path.max_x(), id);
  std::cout << "start_m,end_m\n";
  for (const auto& g : gaps) std::cout << fmt::format("{:.2f},{:.2f}\n", g.start_m, g.end_m);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zbsim: discrete-event simulator of an IEEE 802.15.4 network with a mobile end device"};
  app.require_subcommand(1);

  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run one simulation and write trace.csv, energy.csv and summary.txt");
  run->add_option("--scenario", scenario, "Scenario file (default: the built-in scenario)");
  run->add_option("--seed", seed, "Random seed (default: the scenario's run.seed)");
  run->add_option("--out", out_dir, "Output directory")->required();

  std::optional<std::vector<double>> powers;
  auto* sweep = app.add_subcommand("sweep", "Run once per transmit power level and report coverage gaps");
  sweep->add_option("--scenario", scenario, "Scenario file (default: the built-in scenario)");
  sweep->add_option("--seed", seed, "Random seed shared by every level");
  auto* powers_opt = sweep->add_option("--powers", powers, "Comma-separated power levels in dBm (default: sweep.powers)")
      ->delimiter(',')
      ->expected(0, -1);
  sweep->add_option("--out", out_dir, "Optional directory for sweep.txt and intervals.csv");

  std::string gaps = "2:4,11:13";
  double gap_power = 0.0;
  double gap_free = 4.0;
  double tolerance = 0.5;
  std::string write_path;
  auto* cal = app.add_subcommand("calibrate", "Fit propagation constants and node positions to target gaps");
  cal->add_option("--scenario", scenario, "Starting scenario (default: the built-in scenario)");
  cal->add_option("--gaps", gaps, "Target gaps as start:end pairs in meters")->capture_default_str();
  cal->add_option("--gap-power", gap_power, "Level at which the target gaps apply, dBm")->capture_default_str();
  cal->add_option("--gap-free", gap_free, "Lowest level that must be gap-free, dBm")->capture_default_str();
  cal->add_option("--tolerance", tolerance, "Allowed boundary error, meters")->capture_default_str();
  cal->add_option("--write", write_path, "Write the calibrated scenario to this file");

  auto* cmp = app.add_subcommand("compare", "Compare broadcast/scan handover with and without power control");
  cmp->add_option("--scenario", scenario, "Scenario file (default: the built-in scenario)");
  cmp->add_option("--seed", seed, "Random seed shared by all four runs");
  cmp->add_option("--out", out_dir, "Optional directory for compare.txt");

  std::string trace_path;
  std::optional<int> node;
  auto* gaps_cmd = app.add_subcommand("gaps", "Extract coverage gaps from a trace CSV");
  gaps_cmd->add_option("--trace", trace_path, "Trace CSV written by 'run'")->required();
  gaps_cmd->add_option("--node", node, "Mobile node id (default: the node with MOVE rows)");
  gaps_cmd->add_option("--scenario", scenario, "Scenario giving the trajectory bounds (default: built-in)");

  auto* dump = app.add_subcommand("scenario", "Print the built-in scenario file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(scenario, seed, out_dir);
    if (*sweep) {
      // "--powers" given without values means an empty list, not the default.
      if (*powers_opt && (!powers || powers->empty())) throw UsageError("power list is empty");
      return cmd_sweep(scenario, seed, powers, out_dir);
    }
    if (*cal) return cmd_calibrate(scenario, gaps, gap_power, gap_free, tolerance, write_path);
    if (*cmp) return cmd_compare(scenario, seed, out_dir);
    if (*gaps_cmd) return cmd_gaps(trace_path, node, scenario);
    if (*dump) {
      std::cout << default_scenario_text();
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitScenario;
  } catch (const TraceFormatError& e) {
    std::cerr << "trace format error: " << e.what() << '\n';
    return kExitScenario;
  } catch (const GapAnalysisError& e) {
    std::cerr << "trace format error: " << e.what() << '\n';
    return kExitScenario;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitScenario;
  }
  return kExitUsage;
}
