#pragma once

// Abrupt-braking detection, per-run records and per-cell aggregates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lefturn/common.hpp"

namespace lefturn {

struct BrakeDetectorParams {
  double threshold_decel = -4.5;  // [m/s^2]
  double min_duration = 0.3;      // [s]
  double release_decel = -2.0;    // excursion ends once accel rises above this

  void validate() const;
};

struct BrakeEvents {
  int count = 0;
  std::vector<double> onset_times;
};

// One event per excursion: it opens at the first sample <= threshold, closes
// at the first sample > release, and counts when some unbroken run of samples
// at or below the threshold lasts at least min_duration.
BrakeEvents detect_hard_brakes(const std::vector<double>& accel, double dt,
                               const BrakeDetectorParams& p, double t0 = 0.0);

struct Stats {
  int n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for n < 2
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Quantiles by linear interpolation between order statistics.
Stats compute_stats(std::vector<double> xs);

// 100 (base - treat) / base; empty when base is zero.
std::optional<double> percent_reduction(double base, double treat);

struct RunRecord {
  std::string scenario;
  double volume = 0.0;
  ControllerKind controller = ControllerKind::BaseAv1;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::Ok;
  int brake_events = 0;
  // Censored at the cap for timed-out runs; NaN when the vehicle never entered.
  double tt_subject = 0.0;
  double tt_follower = 0.0;
  double follower_dwell = 0.0;
  int conflict_events = 0;
  int same_lane_events = 0;
  bool collision() const { return status == RunStatus::Collision; }
};

struct Reduction {
  std::optional<double> brake;
  std::optional<double> tt_subject;
  std::optional<double> tt_follower;
};

struct SummaryRow {
  double volume = 0.0;
  ControllerKind controller = ControllerKind::BaseAv1;
  int runs = 0;
  int collisions = 0;
  int infeasible = 0;
  Stats brake;        // all runs
  Stats tt_subject;   // all runs except collisions
  Stats tt_follower;  // all runs except collisions
  Stats dwell;        // all runs except collisions
  std::optional<Reduction> vs_base1;
  std::optional<Reduction> vs_base2;
};

// One row per (volume, controller), ordered by volume then controller.
// Throws std::invalid_argument when controllers at one volume have different
// run counts or unmatched seeds.
std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& runs);

}  // namespace lefturn
