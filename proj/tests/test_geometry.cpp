#include <doctest.h>

#include <random>
#include <stdexcept>

#include "lefturn/geometry.hpp"
#include "oracles.hpp"

using namespace lefturn;

TEST_SUITE("geometry") {

TEST_CASE("arc length flat limit tends to the chord") {
  CHECK(arc_length(0.001, 10.0) == doctest::Approx(10.0).epsilon(1e-6));
  for (double b : {0.5, 3.0, 17.0}) CHECK(std::fabs(arc_length(1e-3 * b, b) - b) < 1e-3);
}

TEST_CASE("arc length of the w=3.6 arch") {
  const double al = arc_length(9.0, 10.8);
  CHECK(al == doctest::Approx(21.90).epsilon(0.001));
  CHECK(std::fabs(al - oracle::parabola_arc(9.0, 10.8, 10.8)) / al < 1e-6);
}

TEST_CASE("arc length unit lane width against quadrature") {
  const double al = arc_length(2.5, 3.0);
  CHECK(std::fabs(al - oracle::parabola_arc(2.5, 3.0, 3.0)) / al <= 1e-6);
}

TEST_CASE("arc length closed form matches Simpson over random arches") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.1, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = U(rng), b = U(rng);
    const double ref = oracle::parabola_arc(a, b, b);
    worst = std::max(worst, std::fabs(arc_length(a, b) - ref) / ref);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("arc length rejects non-positive inputs") {
  CHECK_THROWS_AS(arc_length(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(arc_length(1.0, -1.0), std::domain_error);
}

TEST_CASE("partial arc length agrees with quadrature and ends at the full arc") {
  for (double u : {0.0, 1.8, 5.4, 9.0, 10.8})
    CHECK(partial_arc_length(9.0, 10.8, u) == doctest::Approx(oracle::parabola_arc(9.0, 10.8, u)).epsilon(1e-9));
  CHECK(partial_arc_length(9.0, 10.8, 10.8) == doctest::Approx(arc_length(9.0, 10.8)).epsilon(1e-9));
}

TEST_CASE("clearance distances for the default vehicle") {
  const auto d = conflict_distances(3.6, 1.8, 0.6, 1.2);
  CHECK(d.d_l_second == doctest::Approx(1.175).epsilon(1e-3));
  CHECK(d.d_f_second == doctest::Approx(5.375).epsilon(1e-3));
  CHECK(d.d_l_first == doctest::Approx(0.397).epsilon(2e-3));
  CHECK(d.d_f_first == doctest::Approx(4.597).epsilon(1e-3));
  CHECK_FALSE(d.clamped);
}

TEST_CASE("clearance distances without thresholds") {
  const auto d = conflict_distances(1.0, 0.0, 0.0, 0.0);
  CHECK(d.d_l_first == doctest::Approx(1.0));
  CHECK(d.d_f_first == doctest::Approx(1.0));
  CHECK(d.d_l_second == doctest::Approx(1.41));
  CHECK(d.d_f_second == doctest::Approx(1.41));
}

TEST_CASE("clearance distances are affine in width, sigma and threshold") {
  const auto narrow = conflict_distances(3.6, 0.8, 0.6, 1.2);
  const auto wide = conflict_distances(3.6, 1.8, 0.6, 1.2);
  CHECK(wide.d_f_first - narrow.d_f_first == doctest::Approx(0.5));
  CHECK(wide.d_f_second - narrow.d_f_second == doctest::Approx(0.5));
  CHECK(wide.d_l_first - narrow.d_l_first == doctest::Approx(-0.5));
  CHECK(wide.d_l_second - narrow.d_l_second == doctest::Approx(-0.5));
  const auto& base = wide;
  const auto s = conflict_distances(3.6, 1.8, 0.7, 1.2);
  CHECK(s.d_f_first - base.d_f_first == doctest::Approx(0.1));
  CHECK(s.d_l_first - base.d_l_first == doctest::Approx(-0.1));
  const auto t = conflict_distances(3.6, 1.8, 0.6, 1.5);
  CHECK(t.d_f_second - base.d_f_second == doctest::Approx(0.3));
  CHECK(t.d_l_second == doctest::Approx(base.d_l_second));
  // approach side always further out than the pass side
  for (double w : {0.0, 1.0, 2.5}) {
    const auto x = conflict_distances(3.6, w, 0.6, 1.2);
    CHECK(x.d_f_first > x.d_l_first);
    CHECK(x.d_f_second > x.d_l_second);
  }
}

TEST_CASE("negative pass-side clearance is clamped") {
  const auto d = conflict_distances(0.25, 2.5, 0.6, 1.2);
  CHECK(d.d_l_first == 0.0);
  CHECK(d.clamped);
}

TEST_CASE("linearized clearance reading") {
  const auto d = conflict_distances(3.6, 0.0, 0.0, 0.0, ConflictFormula::Linearized);
  CHECK(d.d_l_first == doctest::Approx(3.6));
  CHECK(d.d_l_second == doctest::Approx(1.41 * 3.6));
}

TEST_CASE("turn path stations") {
  IntersectionLayout L;
  const auto p = path_station_of_conflicts(L);
  CHECK(p.parabola_height == doctest::Approx(9.0));
  CHECK(p.parabola_chord == doctest::Approx(10.8));
  CHECK(p.total_arc_length == doctest::Approx(oracle::parabola_arc(9.0, 10.8, 10.8)).epsilon(1e-9));
  CHECK(p.near_lane_entry == doctest::Approx(oracle::parabola_arc(9.0, 10.8, 1.8)).epsilon(1e-9));
  CHECK(p.first_lane_center == doctest::Approx(oracle::parabola_arc(9.0, 10.8, 3.6)).epsilon(1e-9));
  CHECK(p.conflict_entry_first_lane == doctest::Approx(oracle::parabola_arc(9.0, 10.8, 5.4)).epsilon(1e-9));
  CHECK(p.second_lane_center == doctest::Approx(oracle::parabola_arc(9.0, 10.8, 7.2)).epsilon(1e-9));
  CHECK(p.conflict_entry_second_lane == doctest::Approx(oracle::parabola_arc(9.0, 10.8, 9.0)).epsilon(1e-9));
  CHECK(0.0 < p.near_lane_entry);
  CHECK(p.near_lane_entry < p.first_lane_center);
  CHECK(p.first_lane_center < p.conflict_entry_first_lane);
  CHECK(p.conflict_entry_first_lane < p.second_lane_center);
  CHECK(p.second_lane_center < p.conflict_entry_second_lane);
  CHECK(p.conflict_entry_second_lane < p.total_arc_length);
  CHECK(p.lane_center_crossing_offset == doctest::Approx(8.0));
}

TEST_CASE("turn path scales with the lane width") {
  IntersectionLayout a, b;
  b.lane_width = 2.0 * a.lane_width;
  const auto p = path_station_of_conflicts(a), q = path_station_of_conflicts(b);
  CHECK(q.total_arc_length == doctest::Approx(2.0 * p.total_arc_length));
  CHECK(q.conflict_entry_first_lane == doctest::Approx(2.0 * p.conflict_entry_first_lane));
  CHECK(q.conflict_entry_second_lane == doctest::Approx(2.0 * p.conflict_entry_second_lane));
  CHECK(q.first_lane_center == doctest::Approx(2.0 * p.first_lane_center));

  IntersectionLayout tiny;
  tiny.lane_width = 1e-6;
  const auto t = path_station_of_conflicts(tiny);
  CHECK(t.conflict_entry_first_lane < 1e-4);
  CHECK(t.conflict_entry_second_lane < 1e-4);
}

TEST_CASE("layout validation") {
  IntersectionLayout L;
  CHECK_NOTHROW(L.validate());
  L.lane_width = 0.0;
  CHECK_THROWS_AS(L.validate(), std::invalid_argument);
  L = {};
  L.major_lanes_per_direction = 3;
  CHECK_THROWS(L.validate());
}

}
