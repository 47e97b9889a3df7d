#include <doctest.h>

#include <random>
#include <stdexcept>

#include "lefturn/profile.hpp"
#include "oracles.hpp"

using namespace lefturn;

TEST_SUITE("profile") {

TEST_CASE("uniform motion") {
  const JerkProfile p{5.0, 0.0, 0.0, 10.0};
  const auto s = p.eval(3.0);
  CHECK(s.jerk == 0.0);
  CHECK(s.accel == 0.0);
  CHECK(s.speed == 5.0);
  CHECK(s.distance == doctest::Approx(15.0));
}

TEST_CASE("eval outside the segment throws") {
  const JerkProfile p{5.0, 0.0, 0.0, 10.0};
  CHECK_THROWS_AS(p.eval(-0.1), std::domain_error);
  CHECK_THROWS_AS(p.eval(10.01), std::domain_error);
  CHECK_NOTHROW(p.eval(10.0));
}

TEST_CASE("inflow optimum profile ends at rest acceleration") {
  const double j = 0.1, T = std::cbrt(12.0 * (13.4 - 2.5) / j);
  CHECK(T == doctest::Approx(10.936).epsilon(1e-4));
  const JerkProfile p{13.4, -j * T / 2.0, j, T};
  CHECK(p.J_o == doctest::Approx(-0.5468).epsilon(1e-3));
  const auto s = p.eval(T);
  CHECK(std::fabs(s.accel) < 1e-6);
  CHECK(std::fabs(s.speed - 2.5) < 0.01);
  CHECK(s.distance == doctest::Approx(86.9).epsilon(1e-3));
  const auto rk = oracle::integrate_jerk(13.4, p.J_o, j, T);
  CHECK(std::fabs(rk.d - s.distance) < 1e-6);
  CHECK(std::fabs(rk.v - s.speed) < 1e-9);
  CHECK(std::fabs(rk.a - s.accel) < 1e-9);
}

TEST_CASE("finite differences recover the chain d' = v, v' = a, a' = J") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> V(0.0, 20.0), J(-1.5, 1.5), S(-0.8, 0.8), T(2.0, 30.0), F(0.05, 0.95);
  const double h = 1e-4;
  for (int i = 0; i < 100; ++i) {
    const JerkProfile p{V(rng), J(rng), S(rng), T(rng)};
    const double t = F(rng) * p.duration;
    const auto m = p.eval(t), lo = p.eval(t - h), hi = p.eval(t + h);
    // central differences are exact for these polynomials up to O(h^2) terms
    CHECK(std::fabs((hi.distance - lo.distance) / (2 * h) - m.speed) < 1e-5 * (1 + std::fabs(m.speed)));
    CHECK(std::fabs((hi.speed - lo.speed) / (2 * h) - m.accel) < 1e-5 * (1 + std::fabs(m.accel)));
    CHECK(std::fabs((hi.accel - lo.accel) / (2 * h) - m.jerk) < 1e-5 * (1 + std::fabs(m.jerk)));
    CHECK(std::fabs((hi.jerk - lo.jerk) / (2 * h) - p.jerk_slope) < 1e-6);
  }
}

TEST_CASE("terminal identities with a(T) = 0") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> V(0.0, 20.0), S(-0.8, 0.8), T(1.0, 30.0);
  for (int i = 0; i < 100; ++i) {
    const double v0 = V(rng), j = S(rng), tt = T(rng);
    const JerkProfile p{v0, -j * tt / 2.0, j, tt};
    const auto s = p.eval(tt);
    CHECK(std::fabs(s.accel) < 1e-9);
    CHECK(std::fabs(s.speed - (v0 - j * tt * tt * tt / 12.0)) < 1e-9);
    CHECK(std::fabs(s.distance - (v0 * tt - j * tt * tt * tt * tt / 24.0)) < 1e-9 * (1 + std::fabs(s.distance)));
    CHECK(p.terminal_jerk() == doctest::Approx(j * tt / 2.0));
  }
}

TEST_CASE("trapezoid already at the required speed is a pure cruise") {
  const auto p = trapezoid_approach(100.0, 100.0 / 13.4, 13.4, 15.64);
  CHECK(p.feasible());
  CHECK(p.v_max_trap == doctest::Approx(13.4));
  CHECK(p.ramp_duration == doctest::Approx(0.0));
  CHECK(p.position(100.0 / 13.4) == doctest::Approx(100.0));
}

TEST_CASE("trapezoid peak solves the area balance") {
  const auto p = trapezoid_approach(100.0, 7.0, 13.4, 15.64);
  REQUIRE(p.feasible());
  CHECK(p.v_des == doctest::Approx(100.0 / 7.0));
  // area above v_current: h (T - h / r) = dist - v_current T with r = 1
  const double excess = 100.0 - 13.4 * 7.0;
  const double h = (7.0 - std::sqrt(49.0 - 4.0 * excess)) / 2.0;
  CHECK(p.v_max_trap == doctest::Approx(13.4 + h));
  CHECK(p.v_max_trap <= 15.64);
  CHECK(std::fabs(p.position(7.0) - 100.0) < 0.01);
  CHECK(std::fabs(p.total_duration - 7.0) < 0.01);
  CHECK(p.speed(7.0) == doctest::Approx(13.4));
  // integrate the speed profile independently
  const double area = oracle::simpson([&](double t) { return p.speed(t); }, 0.0, 7.0, 70000);
  CHECK(std::fabs(area - 100.0) < 0.01);
}

TEST_CASE("trapezoid beyond the cap is flagged") {
  const auto p = trapezoid_approach(200.0, 10.0, 13.4, 15.64);
  CHECK(p.feasibility == ApproachFeasibility::ExceedsCap);
  CHECK(p.v_max_trap <= 15.64 + 1e-12);
  CHECK(p.total_duration == doctest::Approx(fastest_approach_time(200.0, 13.4, 15.64, 1.0)));
}

TEST_CASE("slowdown plans respect the floor") {
  ApproachLimits lim;
  const auto ok = trapezoid_approach(100.0, 8.0, 13.4, 15.64, lim);
  CHECK(ok.feasible());
  CHECK(ok.v_max_trap < 13.4);
  CHECK(ok.v_max_trap >= lim.v_floor);
  CHECK(std::fabs(ok.position(8.0) - 100.0) < 0.01);
  const auto late = trapezoid_approach(100.0, 30.0, 13.4, 15.64, lim);
  CHECK(late.feasibility == ApproachFeasibility::TooLate);
}

TEST_CASE("feasible plans cover the distance in the available time") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> D(20.0, 300.0), V(8.0, 15.6), R(0.7, 1.3);
  int feasible = 0;
  for (int i = 0; i < 500; ++i) {
    const double d = D(rng), v = V(rng), t = d / v * R(rng);
    const auto p = trapezoid_approach(d, t, v, 15.64);
    if (!p.feasible()) continue;
    ++feasible;
    CHECK(p.v_max_trap <= 15.64 + 1e-12);
    CHECK(std::fabs(p.position(t) - d) < 0.01);
    CHECK(std::fabs(p.total_duration - t) < 0.01);
  }
  CHECK(feasible > 100);
}

TEST_CASE("trapezoid preconditions") {
  CHECK_THROWS_AS(trapezoid_approach(100.0, 7.0, 16.0, 15.64), std::invalid_argument);
  CHECK_THROWS_AS(trapezoid_approach(0.0, 7.0, 10.0, 15.64), std::invalid_argument);
  CHECK_THROWS_AS(trapezoid_approach(10.0, 0.0, 10.0, 15.64), std::invalid_argument);
}

}
