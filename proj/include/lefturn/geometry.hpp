#pragma once

// Intersection layout, the parabolic left-turn path and the clearance
// distances used to decide whether an opposing vehicle occupies a conflict
// area.

#include <string>

namespace lefturn {

enum class ConflictFormula {
  // Square root of the lane width, the literal form of the clearance formulas.
  Verbatim,
  // 1.41 * w_l and w_l instead of the square-root terms.
  Linearized,
};

std::string to_string(ConflictFormula f);
ConflictFormula conflict_formula_from_string(const std::string& s);

struct IntersectionLayout {
  double lane_width = 3.6;            // w_l [m]
  int major_lanes_per_direction = 2;  // the clearance formulas assume two
  int minor_lanes = 1;
  double major_length = 337.0;        // corridor entry to stop bar [m]
  double minor_speed_limit = 7.0;     // [m/s]
  double major_speed_limit = 13.4;    // [m/s]
  double stop_line_position = 337.0;  // stop bar station on the major route [m]
  // Distance between the subject stop line and the opposing stop line.
  double intersection_depth = 14.4;   // [m]
  double minor_length = 60.0;         // minor street modelled past the turn [m]

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

// Stations along the turn path, measured from the stop bar.
struct TurnPath {
  double parabola_height = 0.0;  // a = 2.5 w_l
  double parabola_chord = 0.0;   // b = 3 w_l
  double total_arc_length = 0.0;
  // Path crosses the near edge of the near opposing lane (lane A).
  double near_lane_entry = 0.0;
  // L2: far edge of the near opposing lane.
  double conflict_entry_first_lane = 0.0;
  // L1 + L2: far edge of the far opposing lane.
  double conflict_entry_second_lane = 0.0;
  // Stations where the path crosses each opposing lane centre. The subject
  // holds a lane's conflict point from front reaching it until rear clears it.
  double first_lane_center = 0.0;
  double second_lane_center = 0.0;
  // Longitudinal offset of the path where it crosses the centre of either
  // opposing lane, measured from the subject stop line.
  double lane_center_crossing_offset = 0.0;
};

struct ConflictDistances {
  double d_l_first = 0.0;
  double d_f_first = 0.0;
  double d_l_second = 0.0;
  double d_f_second = 0.0;
  double sigma = 0.6;
  double threshold = 1.2;
  double vehicle_width = 1.8;
  // Set when a pass-side clearance came out negative and was clamped to zero.
  bool clamped = false;
};

// Closed-form arc length of a parabolic arch of height `a` over chord `b`.
// Throws std::domain_error unless a > 0 and b > 0.
double arc_length(double a, double b);

// Arc length of the same arch from the chord start to lateral progress `u`
// (0 <= u <= b), by composite Gauss-Legendre quadrature.
double partial_arc_length(double a, double b, double u);

ConflictDistances conflict_distances(double lane_width, double vehicle_width,
                                     double sigma, double threshold,
                                     ConflictFormula formula = ConflictFormula::Verbatim);

TurnPath path_station_of_conflicts(const IntersectionLayout& layout);

}  // namespace lefturn
