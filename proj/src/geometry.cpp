#include "lefturn/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace lefturn {

std::string to_string(ConflictFormula f) {
  return f == ConflictFormula::Verbatim ? "verbatim" : "linearized";
}

ConflictFormula conflict_formula_from_string(const std::string& s) {
  if (s == "verbatim") return ConflictFormula::Verbatim;
  if (s == "linearized") return ConflictFormula::Linearized;
  throw std::invalid_argument("unknown conflict_formula '" + s + "'");
}

void IntersectionLayout::validate() const {
  if (!(lane_width > 0.0)) throw std::invalid_argument("lane_width must be > 0");
  if (major_lanes_per_direction != 2)
    throw std::invalid_argument("major_lanes_per_direction must be 2");
  if (minor_lanes < 1) throw std::invalid_argument("minor_lanes must be >= 1");
  if (!(major_length > 0.0) || !(minor_speed_limit > 0.0) || !(major_speed_limit > 0.0) ||
      !(stop_line_position > 0.0) || !(intersection_depth > 0.0) || !(minor_length > 0.0))
    throw std::invalid_argument("layout lengths and speed limits must be > 0");
  if (stop_line_position > major_length)
    throw std::invalid_argument("stop_line_position beyond major_length");
}

double arc_length(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("arc_length requires a > 0 and b > 0");
  const double root = std::sqrt(b * b + 16.0 * a * a);
  return 0.5 * root + (b * b / (8.0 * a)) * std::log((4.0 * a + root) / b);
}

namespace {

// y(u) = 4 a u (b - u) / b^2, so |dy/du| = 4 a |b - 2u| / b^2.
double speed_along_arch(double a, double b, double u) {
  const double slope = 4.0 * a * (b - 2.0 * u) / (b * b);
  return std::sqrt(1.0 + slope * slope);
}

}  // namespace

double partial_arc_length(double a, double b, double u) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("partial_arc_length requires a, b > 0");
  if (u < 0.0 || u > b) throw std::domain_error("partial_arc_length: u outside [0, b]");
  constexpr std::array<double, 5> nodes = {0.0, -0.5384693101056831, 0.5384693101056831,
                                           -0.9061798459386640, 0.9061798459386640};
  constexpr std::array<double, 5> weights = {0.5688888888888889, 0.4786286704993665,
                                             0.4786286704993665, 0.2369268850561891,
                                             0.2369268850561891};
  constexpr int panels = 64;
  const double h = u / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t k = 0; k < nodes.size(); ++k)
      sum += weights[k] * speed_along_arch(a, b, mid + 0.5 * h * nodes[k]);
  }
  return 0.5 * h * sum;
}

ConflictDistances conflict_distances(double lane_width, double vehicle_width, double sigma,
                                     double threshold, ConflictFormula formula) {
  if (!(lane_width > 0.0)) throw std::domain_error("conflict_distances requires w_l > 0");
  if (vehicle_width < 0.0 || sigma < 0.0 || threshold < 0.0)
    throw std::domain_error("conflict_distances requires non-negative w_car, sigma, t");
  const double base = formula == ConflictFormula::Verbatim ? std::sqrt(lane_width) : lane_width;
  const double far_base = 1.41 * base;
  const double half = vehicle_width / 2.0;

  ConflictDistances d;
  d.sigma = sigma;
  d.threshold = threshold;
  d.vehicle_width = vehicle_width;
  d.d_l_second = far_base - half - sigma;
  d.d_f_second = far_base + half + sigma + threshold;
  d.d_l_first = base - half - sigma;
  d.d_f_first = base + half + sigma + threshold;
  if (d.d_l_first < 0.0 || d.d_l_second < 0.0) {
    d.clamped = true;
    d.d_l_first = std::max(0.0, d.d_l_first);
    d.d_l_second = std::max(0.0, d.d_l_second);
  }
  return d;
}

TurnPath path_station_of_conflicts(const IntersectionLayout& layout) {
  const double w = layout.lane_width;
  if (!(w > 0.0)) throw std::invalid_argument("lane_width must be > 0");
  TurnPath p;
  p.parabola_height = 2.5 * w;
  p.parabola_chord = 3.0 * w;
  const double a = p.parabola_height;
  const double b = p.parabola_chord;
  p.total_arc_length = arc_length(a, b);
  // The path starts at the centre of the inner subject lane; the opposing
  // lanes occupy lateral progress [0.5 w, 1.5 w] (near) and [1.5 w, 2.5 w] (far).
  p.near_lane_entry = partial_arc_length(a, b, 0.5 * w);
  p.conflict_entry_first_lane = partial_arc_length(a, b, 1.5 * w);
  p.conflict_entry_second_lane = partial_arc_length(a, b, 2.5 * w);
  p.first_lane_center = partial_arc_length(a, b, w);
  p.second_lane_center = partial_arc_length(a, b, 2.0 * w);
  p.lane_center_crossing_offset = 4.0 * a * w * (b - w) / (b * b);
  return p;
}

}  // namespace lefturn
