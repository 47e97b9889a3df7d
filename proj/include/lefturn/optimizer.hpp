#pragma once

// The three constrained problems solved by the vehicle controllers:
//   inflow   - decelerate to the stop bar with zero terminal acceleration,
//   outflow  - accelerate through the turn into the minor street,
//   base AV  - minimum-time cruise schedule up to the stopping-distance point.
// Each has a deterministic solver and an exhaustive grid oracle.

#include <cstddef>
#include <limits>

#include "lefturn/profile.hpp"

namespace lefturn {

// Printed bounds are open; solvers work on the closed interval shrunk by this.
inline constexpr double kStrictShrink = 1e-9;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double inner_lo() const { return lo + kStrictShrink; }
  double inner_hi() const { return hi - kStrictShrink; }
  bool contains_closed(double x, double tol) const { return x >= lo - tol && x <= hi + tol; }
};

// Returns the interval with lo <= hi; sets *swapped when it had to reorder.
Interval ordered(Interval iv, bool* swapped = nullptr);

struct InflowProblem {
  double v_o = 13.4;
  double T_max = 60.0;
  Interval v_T{0.1, 2.5};
  Interval J_o{-1.5, 1.5};
  Interval j{0.1, 0.8};
};

struct OutflowProblem {
  double v_o = 2.5;
  double T_max = 60.0;
  double T_min = 5.0;
  Interval v_T{6.0, 7.0};
  Interval J_o{-1.5, 1.5};
  Interval j{-0.6, -0.2};
};

struct SolveResult {
  bool feasible = false;
  double j = 0.0;
  double J_o = 0.0;
  double v_T = 0.0;
  double T = 0.0;
  double objective = std::numeric_limits<double>::infinity();  // |J_T|
  double oracle_gap = std::numeric_limits<double>::quiet_NaN();
  std::size_t evaluations = 0;

  JerkProfile profile(double v_o) const { return {v_o, J_o, j, T}; }
};

struct BaseAvProblem {
  double d_in = 270.45;
  double v_max = 13.4;
  Interval v_in{11.5, 12.5};
  Interval a_in{0.5, 1.5};
  double T_max = 60.0;
};

struct BaseAvSchedule {
  bool feasible = false;
  double T_0 = 0.0;
  double T_stop = 0.0;
  double v_in = 0.0;
  double a_in = 0.0;
  double d_in = 0.0;
  double dT1 = 0.0;
  double dT2 = 0.0;
  double dT_target = 0.0;
  double v_max = 0.0;
  std::size_t evaluations = 0;

  double objective() const { return T_stop - T_0; }
};

SolveResult solve_inflow(const InflowProblem& p);
SolveResult solve_outflow(const OutflowProblem& p);
BaseAvSchedule solve_base_av(const BaseAvProblem& p);

// d_stop = t_r v - v^2 / (2 a_dec). Throws std::domain_error unless a_dec < 0,
// v_max >= 0 and t_r >= 0.
double stopping_distance(double v_max, double t_r, double a_dec);

// Time split of a base-AV schedule for a given (v_in, a_in).
struct BaseAvTiming {
  double dT1 = 0.0;
  double dT2 = 0.0;
};
BaseAvTiming base_av_timing(double d_in, double v_max, double v_in, double a_in);

struct OracleResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  double x0 = 0.0;  // j (inflow/outflow) or v_in (base AV)
  double x1 = 0.0;  // v_T (inflow/outflow) or a_in (base AV)
  std::size_t evaluated = 0;
};

inline constexpr int kOracleGridPoints = 401;

OracleResult grid_oracle(const InflowProblem& p, int points_per_dim = kOracleGridPoints);
OracleResult grid_oracle(const OutflowProblem& p, int points_per_dim = kOracleGridPoints);
OracleResult grid_oracle(const BaseAvProblem& p, int points_per_dim = kOracleGridPoints);

// Every printed bound and the a(T) = 0 terminal condition, within tol.
bool satisfies_constraints(const InflowProblem& p, const SolveResult& r, double tol = 1e-9);
bool satisfies_constraints(const OutflowProblem& p, const SolveResult& r, double tol = 1e-9);
bool satisfies_constraints(const BaseAvProblem& p, const BaseAvSchedule& s, double tol = 1e-9);

}  // namespace lefturn
