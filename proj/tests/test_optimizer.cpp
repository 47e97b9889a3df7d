#include <doctest.h>

#include <random>
#include <stdexcept>

#include "lefturn/optimizer.hpp"
#include "oracles.hpp"

using namespace lefturn;

namespace {

// Printed bounds and a(T) = 0, checked here rather than through the library.
void check_inflow(const InflowProblem& p, const SolveResult& r) {
  const double tol = 1e-9;
  CHECK(r.j >= 0.1 - tol);
  CHECK(r.j <= 0.8 + tol);
  CHECK(r.v_T >= 0.1 - tol);
  CHECK(r.v_T <= 2.5 + tol);
  CHECK(r.J_o >= -1.5 - tol);
  CHECK(r.J_o <= 1.5 + tol);
  CHECK(r.T > 0.0);
  CHECK(r.T <= p.T_max + tol);
  CHECK(std::fabs(r.J_o * r.T + 0.5 * r.j * r.T * r.T) <= tol);
  CHECK(std::fabs(r.J_o + r.j * r.T / 2.0) <= tol);
  CHECK(std::fabs(p.v_o + 0.5 * r.J_o * r.T * r.T + r.j * r.T * r.T * r.T / 6.0 - r.v_T) <= 1e-8);
}

void check_outflow(const OutflowProblem& p, const SolveResult& r) {
  const double tol = 1e-9;
  CHECK(r.j >= -0.6 - tol);
  CHECK(r.j <= -0.2 + tol);
  CHECK(r.v_T >= 6.0 - tol);
  CHECK(r.v_T <= 7.0 + tol);
  CHECK(r.J_o >= -1.5 - tol);
  CHECK(r.J_o <= 1.5 + tol);
  CHECK(r.T >= 5.0 - tol);
  CHECK(r.T <= p.T_max + tol);
  CHECK(std::fabs(r.J_o * r.T + 0.5 * r.j * r.T * r.T) <= tol);
  CHECK(std::fabs(p.v_o + 0.5 * r.J_o * r.T * r.T + r.j * r.T * r.T * r.T / 6.0 - r.v_T) <= 1e-8);
}

void check_base(const BaseAvProblem& p, const BaseAvSchedule& s) {
  const double tol = 1e-9;
  CHECK(s.v_in >= 11.5 - tol);
  CHECK(s.v_in <= 12.5 + tol);
  CHECK(s.a_in >= 0.5 - tol);
  CHECK(s.a_in <= 1.5 + tol);
  CHECK(s.dT2 >= -tol);
  CHECK(s.objective() < p.T_max);
  CHECK(std::fabs(s.dT1 - oracle::base_dt1(p.v_max, s.v_in, s.a_in)) <= tol);
  CHECK(std::fabs(s.dT2 - oracle::base_dt2(p.d_in, p.v_max, s.v_in, s.a_in)) <= tol);
  CHECK(std::fabs(s.dT_target - (s.dT1 + s.dT2)) <= tol);
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("inflow corner at the default approach speed") {
  InflowProblem p;
  const auto r = solve_inflow(p);
  REQUIRE(r.feasible);
  CHECK(r.j == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(r.v_T == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(std::fabs(r.T - 10.936) < 0.01);
  CHECK(std::fabs(r.objective - 0.547) < 0.001);
  CHECK(r.J_o == doctest::Approx(-0.547).epsilon(2e-3));
  check_inflow(p, r);
  CHECK(satisfies_constraints(p, r));
}

TEST_CASE("inflow with a tiny speed change") {
  InflowProblem p;
  p.v_o = 2.6;
  const auto r = solve_inflow(p);
  REQUIRE(r.feasible);
  CHECK(r.v_T == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(r.T == doctest::Approx(std::cbrt(12.0 * 0.1 / 0.1)).epsilon(1e-4));
  CHECK(r.objective == doctest::Approx(0.114).epsilon(0.01));
  check_inflow(p, r);
}

TEST_CASE("inflow infeasible at or below the band") {
  for (double v : {2.5, 0.1, 0.0}) {
    InflowProblem p;
    p.v_o = v;
    CHECK_FALSE(solve_inflow(p).feasible);
    CHECK_FALSE(oracle::inflow_grid(v, p.T_max).feasible);
  }
}

TEST_CASE("outflow from the inflow terminal speed") {
  OutflowProblem p;
  const auto r = solve_outflow(p);
  REQUIRE(r.feasible);
  CHECK(r.j == doctest::Approx(-0.2).epsilon(1e-6));
  CHECK(r.v_T == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(std::fabs(r.T - 5.944) < 0.01);
  CHECK(r.objective == doctest::Approx(0.594).epsilon(2e-3));
  CHECK(r.J_o == doctest::Approx(0.594).epsilon(2e-3));
  check_outflow(p, r);
}

TEST_CASE("outflow from a standstill") {
  OutflowProblem p;
  p.v_o = 0.0;
  const auto r = solve_outflow(p);
  REQUIRE(r.feasible);
  CHECK(r.v_T == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(std::fabs(r.T - 7.114) < 0.01);
  CHECK(std::fabs(r.objective - 0.711) < 0.001);
  check_outflow(p, r);
}

TEST_CASE("outflow above the band start has no point with T > 5") {
  // v_o = 6.5 leaves dv < 0.5, so T <= cbrt(12 * 0.5 / 0.2) ~ 3.1 s
  OutflowProblem p;
  p.v_o = 6.5;
  CHECK_FALSE(solve_outflow(p).feasible);
  CHECK_FALSE(oracle::outflow_grid(6.5, p.T_max).feasible);
}

TEST_CASE("base AV corner") {
  BaseAvProblem p;
  const auto s = solve_base_av(p);
  REQUIRE(s.feasible);
  CHECK(s.v_in == doctest::Approx(12.5));
  CHECK(s.a_in == doctest::Approx(1.5));
  CHECK(s.dT1 == doctest::Approx(0.6));
  CHECK(std::fabs(s.dT2 - 19.60) < 0.01);
  CHECK(std::fabs(s.objective() - 20.20) < 0.01);
  check_base(p, s);
}

TEST_CASE("base AV timing identities") {
  const auto t = base_av_timing(270.45, 13.4, 13.4, 1.0);
  CHECK(t.dT1 == 0.0);
  CHECK(t.dT2 == doctest::Approx(270.45 / 13.4));
}

TEST_CASE("base AV corridor too short") {
  BaseAvProblem p;
  p.d_in = 5.0;
  CHECK_FALSE(solve_base_av(p).feasible);
  CHECK_FALSE(oracle::base_av_grid(5.0, 13.4).feasible);
  // 10 m still leaves room: reaching cruise from the corner needs ~7.8 m
  p.d_in = 10.0;
  CHECK(solve_base_av(p).feasible);
  CHECK(oracle::base_av_grid(10.0, 13.4).feasible);
}

TEST_CASE("stopping distance") {
  CHECK(std::fabs(stopping_distance(13.4, 0.5, -1.5) - 66.55) < 0.01);
  CHECK(stopping_distance(13.4, 0.5, -1.5) == doctest::Approx(oracle::stopping_distance(13.4, 0.5, -1.5)));
  CHECK(stopping_distance(0.0, 0.5, -1.5) == 0.0);
  CHECK(stopping_distance(20.0, 0.0, -2.0) == doctest::Approx(4.0 * stopping_distance(10.0, 0.0, -2.0)));
  CHECK_THROWS_AS(stopping_distance(10.0, 0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(stopping_distance(-1.0, 0.5, -1.0), std::domain_error);
}

TEST_CASE("solver never loses to the brute-force grid") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> Vi(2.6, 20.0), Vo(0.0, 5.9), D(100.0, 500.0), Vm(12.6, 15.6);
  for (int i = 0; i < 20; ++i) {
    InflowProblem ip;
    ip.v_o = Vi(rng);
    const auto r = solve_inflow(ip);
    const auto g = oracle::inflow_grid(ip.v_o, ip.T_max);
    REQUIRE(g.feasible);
    REQUIRE(r.feasible);
    CHECK(r.objective <= g.objective + 1e-3);
    check_inflow(ip, r);

    OutflowProblem op;
    op.v_o = Vo(rng);
    const auto o = solve_outflow(op);
    const auto og = oracle::outflow_grid(op.v_o, op.T_max);
    // above v_o ~ 4.92 the band cannot be reached in more than 5 s
    CHECK(o.feasible == og.feasible);
    if (og.feasible && o.feasible) {
      CHECK(o.objective <= og.objective + 1e-3);
      check_outflow(op, o);
    }

    BaseAvProblem bp;
    bp.d_in = D(rng);
    bp.v_max = Vm(rng);
    const auto s = solve_base_av(bp);
    const auto bg = oracle::base_av_grid(bp.d_in, bp.v_max);
    REQUIRE(bg.feasible);
    REQUIRE(s.feasible);
    CHECK(s.objective() <= bg.objective + 1e-3);
    CHECK(s.v_in == doctest::Approx(12.5));
    CHECK(s.a_in == doctest::Approx(1.5));
    check_base(bp, s);
  }
}

TEST_CASE("library grid oracle agrees with the independent grid") {
  InflowProblem ip;
  CHECK(grid_oracle(ip).objective == doctest::Approx(oracle::inflow_grid(13.4, 60.0).objective).epsilon(1e-6));
  OutflowProblem op;
  CHECK(grid_oracle(op).objective == doctest::Approx(oracle::outflow_grid(2.5, 60.0).objective).epsilon(1e-6));
  BaseAvProblem bp;
  CHECK(grid_oracle(bp).objective == doctest::Approx(oracle::base_av_grid(270.45, 13.4).objective).epsilon(1e-6));
  ip.v_o = 2.5;
  CHECK_FALSE(grid_oracle(ip).feasible);
}

TEST_CASE("solves are bit-identical on repeat") {
  InflowProblem ip;
  ip.v_o = 11.37;
  const auto a = solve_inflow(ip), b = solve_inflow(ip);
  CHECK(a.j == b.j);
  CHECK(a.v_T == b.v_T);
  CHECK(a.T == b.T);
  CHECK(a.J_o == b.J_o);
}

TEST_CASE("interval ordering") {
  bool swapped = false;
  const auto iv = ordered({-0.2, -0.6}, &swapped);
  CHECK(swapped);
  CHECK(iv.lo == -0.6);
  CHECK(iv.hi == -0.2);
}

}
