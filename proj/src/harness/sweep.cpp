#include "zbsim/harness/sweep.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

#include <fmt/format.h>

namespace zbsim {

namespace {

LevelReport evaluate_level(const ScenarioConfig& base, double power, std::uint64_t seed) {
  const ScenarioConfig cfg = with_fixed_power(base, power);
  const RunResult run = run_simulation(cfg, seed);
  const double lo = run.trajectory.min_x();
  const double hi = run.trajectory.max_x();
  const NodeId mobile = run.mobile().id;

  LevelReport level;
  level.power_dbm = power;
  level.gaps = gap_analysis(run.trace, lo, hi, mobile);
  level.associations = association_map(run.trace, lo, hi, mobile);
  level.overlaps = static_coverage(cfg, power).overlaps;
  level.traffic = run.mobile().traffic;
  level.handover_attempts = run.mobile().handover.attempts;
  return level;
}

}  // namespace

CoverageReport run_sweep(const ScenarioConfig& cfg, std::span<const double> powers, std::uint64_t seed,
                         bool parallel) {
  if (powers.empty()) throw std::invalid_argument("sweep needs at least one power level");
  for (double p : powers) {
    if (!cfg.is_power_level(p)) {
      throw std::invalid_argument(fmt::format("{} dBm is not a configured power level", p));
    }
  }
  if (cfg.mobiles().empty()) throw std::invalid_argument("sweep needs a mobile node");
  std::vector<double> sorted(powers.begin(), powers.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  CoverageReport report;
  report.seed = seed;
  if (parallel) {
    std::vector<std::future<LevelReport>> jobs;
    for (double p : sorted) jobs.push_back(std::async(std::launch::async, evaluate_level, std::cref(cfg), p, seed));
    for (auto& j : jobs) report.levels.push_back(j.get());
  } else {
    for (double p : sorted) report.levels.push_back(evaluate_level(cfg, p, seed));
  }

  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    auto& level = report.levels[i];
    if (!report.optimal_power_dbm && level.gaps.empty()) {
      report.optimal_power_dbm = level.power_dbm;
      level.optimal = true;
    }
    level.overprovisioned = !level.overlaps.empty();
    if (i > 0 && !intervals_contained(level.gaps, report.levels[i - 1].gaps)) report.monotone = false;
  }
  return report;
}

std::string sweep_summary_text(const CoverageReport& report) {
  std::string out = fmt::format("power sweep, seed {}\n", report.seed);
  out += fmt::format("{:>9}  {:<34}  {:<30}  {:>9}  {}\n", "power", "gaps (m)", "overlaps (m)", "delivered",
                     "marker");
  for (const auto& l : report.levels) {
    std::string marker;
    if (l.optimal) marker = "OPTIMAL";
    if (l.overprovisioned) marker += marker.empty() ? "OVERPROVISIONED" : " OVERPROVISIONED";
    out += fmt::format("{:>5.1f} dBm  {:<34}  {:<30}  {:>4}/{:<4}  {}\n", l.power_dbm, format_intervals(l.gaps),
                       format_intervals(l.overlaps), l.traffic.delivered, l.traffic.generated, marker);
  }
  if (report.optimal_power_dbm) {
    out += fmt::format("lowest gap-free level: {:.1f} dBm\n", *report.optimal_power_dbm);
  } else {
    out += "no swept level is gap-free\n";
  }
  out += fmt::format("gap sets shrink with power: {}\n", report.monotone ? "yes" : "NO");
  out += "note: 2 dBm is an assumed intermediate level\n";
  out += "\nassociations:\n";
  for (const auto& l : report.levels) {
    out += fmt::format("{:>5.1f} dBm ", l.power_dbm);
    for (const auto& s : l.associations) {
      out += fmt::format(" [{:.1f}, {:.1f})->{}", s.span.start_m, s.span.end_m,
                         s.parent ? fmt::format("{}", *s.parent) : std::string("none"));
    }
    out += '\n';
  }
  return out;
}

std::string sweep_intervals_csv(const CoverageReport& report) {
  std::string out = "power_dbm,kind,start_m,end_m\n";
  for (const auto& l : report.levels) {
    for (const auto& g : l.gaps) out += fmt::format("{:.1f},gap,{:.2f},{:.2f}\n", l.power_dbm, g.start_m, g.end_m);
    for (const auto& o : l.overlaps) {
      out += fmt::format("{:.1f},overlap,{:.2f},{:.2f}\n", l.power_dbm, o.start_m, o.end_m);
    }
  }
  return out;
}

}  // namespace zbsim
