#pragma once

// Seeded Monte Carlo orchestration, output files and plots.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lefturn/config.hpp"
#include "lefturn/metrics.hpp"
#include "lefturn/world.hpp"

namespace lefturn {

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunResult {
  RunRecord record;
  RunOutcome outcome;
  std::vector<TraceRow> trace;
  std::vector<Event> events;
  double max_approach_speed = 0.0;
};

// "v600-SituationAware"
std::string scenario_id(double volume, ControllerKind k);

RunResult run_single(const ScenarioConfig& c, double volume, ControllerKind k, std::uint64_t seed,
                     bool keep_trace);

// Worker count from LEFTURN_WORKERS, else the hardware concurrency (at least 1).
int default_workers();

struct ExperimentOutput {
  std::vector<RunRecord> records;  // volume, controller (config order), run index
  std::vector<SummaryRow> summary;
};

// Runs every (volume, controller, run) cell. When `out_dir` is non-empty the
// per-run trace files are written there as runs finish. Output is identical
// for any worker count.
ExperimentOutput run_experiment(const ScenarioConfig& c, int workers, const std::string& out_dir = "");

void write_metrics_csv(const std::string& path, const std::vector<RunRecord>& records);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);
void write_run_info(const std::string& path, const ScenarioConfig& c);
// Markdown comparison of SituationAware against each baseline per volume.
// Throws std::invalid_argument with fewer than two controllers.
std::string comparison_report(const ScenarioConfig& c, const std::vector<SummaryRow>& rows);

std::vector<RunRecord> read_metrics_csv(const std::string& path);

// Reads metrics.csv, run_info.json and trace files in `dir`; writes
// brake_reduction.svg, travel_time_boxplot.svg and progression.svg.
// Throws std::runtime_error when there is nothing to plot.
std::vector<std::string> emit_plots(const std::string& dir);

// Optimizer-vs-oracle comparison table as CSV.
std::string oracle_table(std::uint64_t seed = 7, int instances = 10);

}  // namespace lefturn
