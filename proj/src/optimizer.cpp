#include "lefturn/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace lefturn {

Interval ordered(Interval iv, bool* swapped) {
  const bool s = iv.lo > iv.hi;
  if (swapped) *swapped = s;
  if (s) std::swap(iv.lo, iv.hi);
  return iv;
}

double stopping_distance(double v_max, double t_r, double a_dec) {
  if (!(a_dec < 0.0)) throw std::domain_error("stopping_distance requires a_dec < 0");
  if (v_max < 0.0 || t_r < 0.0)
    throw std::domain_error("stopping_distance requires v_max >= 0 and t_r >= 0");
  return t_r * v_max - v_max * v_max / (2.0 * a_dec);
}

BaseAvTiming base_av_timing(double d_in, double v_max, double v_in, double a_in) {
  BaseAvTiming t;
  t.dT1 = (v_max - v_in) / a_in;
  t.dT2 = d_in / v_max - (v_max * v_max - v_in * v_in) / (2.0 * a_in * v_max);
  return t;
}

namespace {

struct Candidate {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
};

using Objective2d = std::function<Candidate(double, double)>;

struct Box {
  double lo0, hi0, lo1, hi1;
};

struct Minimum {
  bool found = false;
  double x0 = 0.0, x1 = 0.0;
  double objective = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

// Coarse uniform scan followed by a clamped compass search. Steps that leave
// the box are clamped onto it, so bound-optimal problems land exactly on the
// bound.
Minimum minimize_2d(const Objective2d& f, const Box& box, int coarse) {
  Minimum m;
  auto at = [](double lo, double hi, int i, int n) {
    return i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  };
  for (int i = 0; i < coarse; ++i) {
    for (int k = 0; k < coarse; ++k) {
      const double x0 = at(box.lo0, box.hi0, i, coarse);
      const double x1 = at(box.lo1, box.hi1, k, coarse);
      const Candidate c = f(x0, x1);
      ++m.evaluations;
      if (c.feasible && c.objective < m.objective) {
        m = {true, x0, x1, c.objective, m.evaluations};
      }
    }
  }
  if (!m.found) return m;

  double s0 = (box.hi0 - box.lo0) / (coarse - 1);
  double s1 = (box.hi1 - box.lo1) / (coarse - 1);
  const double min0 = std::max(1e-15, 1e-14 * (box.hi0 - box.lo0));
  const double min1 = std::max(1e-15, 1e-14 * (box.hi1 - box.lo1));
  constexpr std::array<std::array<int, 2>, 8> dirs = {
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  while (s0 > min0 || s1 > min1) {
    bool improved = false;
    for (const auto& d : dirs) {
      const double x0 = std::clamp(m.x0 + d[0] * s0, box.lo0, box.hi0);
      const double x1 = std::clamp(m.x1 + d[1] * s1, box.lo1, box.hi1);
      if (x0 == m.x0 && x1 == m.x1) continue;
      const Candidate c = f(x0, x1);
      ++m.evaluations;
      if (c.feasible && c.objective < m.objective) {
        m.x0 = x0;
        m.x1 = x1;
        m.objective = c.objective;
        improved = true;
        break;
      }
    }
    if (!improved) {
      s0 *= 0.5;
      s1 *= 0.5;
    }
  }
  return m;
}

constexpr int kCoarseGrid = 201;

// Reduced jerk problem: given (j, v_T), a(T) = 0 with a_o = 0 forces
// J_o = -j T / 2, and then v(T) - v_o = -j T^3 / 12 fixes T.
struct JerkPoint {
  bool valid = false;
  double T = 0.0;
  double J_o = 0.0;
  double objective = 0.0;
};

JerkPoint reduce(double v_o, double j, double v_T) {
  JerkPoint p;
  const double dv = v_o - v_T;
  if (j == 0.0 || dv == 0.0 || (dv > 0.0) != (j > 0.0)) return p;
  p.T = std::cbrt(12.0 * dv / j);
  p.J_o = -j * p.T / 2.0;
  p.objective = std::abs(p.J_o + j * p.T);
  p.valid = true;
  return p;
}

template <class Problem>
bool jerk_point_feasible(const Problem& p, const JerkPoint& jp, double T_lo) {
  return jp.valid && jp.T >= T_lo + kStrictShrink && jp.T <= p.T_max - kStrictShrink &&
         jp.J_o >= p.J_o.inner_lo() && jp.J_o <= p.J_o.inner_hi();
}

template <class Problem>
SolveResult solve_jerk(const Problem& p, Interval j_iv, double T_lo) {
  SolveResult r;
  const Box box{j_iv.inner_lo(), j_iv.inner_hi(), p.v_T.inner_lo(), p.v_T.inner_hi()};
  const auto f = [&](double j, double v_T) {
    const JerkPoint jp = reduce(p.v_o, j, v_T);
    return Candidate{jerk_point_feasible(p, jp, T_lo), jp.objective};
  };
  const Minimum m = minimize_2d(f, box, kCoarseGrid);
  r.evaluations = m.evaluations;
  if (!m.found) return r;
  const JerkPoint jp = reduce(p.v_o, m.x0, m.x1);
  r.feasible = true;
  r.j = m.x0;
  r.v_T = m.x1;
  r.T = jp.T;
  r.J_o = jp.J_o;
  r.objective = jp.objective;
  return r;
}

}  // namespace

SolveResult solve_inflow(const InflowProblem& p) {
  // Deceleration into the target band needs v_o above the band.
  if (!(p.v_o > p.v_T.hi) || p.v_o <= 0.1) return {};
  return solve_jerk(p, ordered(p.j), 0.0);
}

SolveResult solve_outflow(const OutflowProblem& p) {
  if (!(p.v_o < p.v_T.lo) || p.v_o < 0.0) return {};
  return solve_jerk(p, ordered(p.j), p.T_min);
}

BaseAvSchedule solve_base_av(const BaseAvProblem& p) {
  BaseAvSchedule s;
  s.d_in = p.d_in;
  s.v_max = p.v_max;
  if (!(p.d_in > 0.0) || !(p.v_max > 0.0)) return s;
  const Box box{p.v_in.inner_lo(), p.v_in.inner_hi(), p.a_in.inner_lo(), p.a_in.inner_hi()};
  const auto f = [&](double v_in, double a_in) {
    const BaseAvTiming t = base_av_timing(p.d_in, p.v_max, v_in, a_in);
    const double total = t.dT1 + t.dT2;
    return Candidate{t.dT2 >= 0.0 && total > 0.0 && total <= p.T_max - kStrictShrink, total};
  };
  const Minimum m = minimize_2d(f, box, kCoarseGrid);
  s.evaluations = m.evaluations;
  if (!m.found) return s;
  const BaseAvTiming t = base_av_timing(p.d_in, p.v_max, m.x0, m.x1);
  s.feasible = true;
  s.v_in = m.x0;
  s.a_in = m.x1;
  s.dT1 = t.dT1;
  s.dT2 = t.dT2;
  s.dT_target = t.dT1 + t.dT2;
  s.T_stop = s.T_0 + s.dT_target;
  return s;
}

namespace {

double grid_at(double lo, double hi, int i, int n) {
  return i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
}

// Exhaustive scan over (j, v_T); every candidate is checked by evaluating the
// jerk polynomial itself rather than the reduced identities.
template <class Problem>
OracleResult jerk_oracle(const Problem& p, Interval j_iv, double T_lo, bool degenerate, int n) {
  OracleResult out;
  if (degenerate) return out;
  const double jl = j_iv.lo + kStrictShrink, jh = j_iv.hi - kStrictShrink;
  const double vl = p.v_T.lo + kStrictShrink, vh = p.v_T.hi - kStrictShrink;
  for (int a = 0; a < n; ++a) {
    const double j = grid_at(jl, jh, a, n);
    for (int b = 0; b < n; ++b) {
      const double v_T = grid_at(vl, vh, b, n);
      ++out.evaluated;
      const double ratio = 12.0 * (p.v_o - v_T) / j;
      if (!(ratio > 0.0)) continue;
      const double T = std::cbrt(ratio);
      if (T < T_lo + kStrictShrink || T > p.T_max - kStrictShrink) continue;
      // Solve a(T) = J_o T + j T^2 / 2 = 0 for J_o.
      const double J_o = -0.5 * j * T;
      if (J_o < p.J_o.lo + kStrictShrink || J_o > p.J_o.hi - kStrictShrink) continue;
      const KinematicSample end = JerkProfile{p.v_o, J_o, j, T}.eval(T);
      if (std::abs(end.accel) > 1e-9 || std::abs(end.speed - v_T) > 1e-9) continue;
      const double obj = std::abs(end.jerk);
      if (obj < out.objective) {
        out.feasible = true;
        out.objective = obj;
        out.x0 = j;
        out.x1 = v_T;
      }
    }
  }
  return out;
}

}  // namespace

OracleResult grid_oracle(const InflowProblem& p, int n) {
  return jerk_oracle(p, ordered(p.j), 0.0, !(p.v_o > p.v_T.hi) || p.v_o <= 0.1, n);
}

OracleResult grid_oracle(const OutflowProblem& p, int n) {
  return jerk_oracle(p, ordered(p.j), p.T_min, !(p.v_o < p.v_T.lo) || p.v_o < 0.0, n);
}

OracleResult grid_oracle(const BaseAvProblem& p, int n) {
  OracleResult out;
  if (!(p.d_in > 0.0) || !(p.v_max > 0.0)) return out;
  const double vl = p.v_in.lo + kStrictShrink, vh = p.v_in.hi - kStrictShrink;
  const double al = p.a_in.lo + kStrictShrink, ah = p.a_in.hi - kStrictShrink;
  for (int a = 0; a < n; ++a) {
    const double v_in = grid_at(vl, vh, a, n);
    for (int b = 0; b < n; ++b) {
      const double a_in = grid_at(al, ah, b, n);
      ++out.evaluated;
      // Time to accelerate plus cruise time over the remaining distance.
      const double t_acc = (p.v_max - v_in) / a_in;
      const double d_acc = (v_in + p.v_max) / 2.0 * t_acc;
      const double t_cruise = (p.d_in - d_acc) / p.v_max;
      if (t_cruise < 0.0) continue;
      const double total = t_acc + t_cruise;
      if (total <= 0.0 || total > p.T_max - kStrictShrink) continue;
      if (total < out.objective) {
        out.feasible = true;
        out.objective = total;
        out.x0 = v_in;
        out.x1 = a_in;
      }
    }
  }
  return out;
}

namespace {

template <class Problem>
bool jerk_constraints(const Problem& p, const SolveResult& r, Interval j_iv, double T_lo,
                      double tol) {
  if (!r.feasible) return false;
  if (!p.v_T.contains_closed(r.v_T, tol) || !p.J_o.contains_closed(r.J_o, tol) ||
      !j_iv.contains_closed(r.j, tol))
    return false;
  if (r.T < T_lo - tol || r.T > p.T_max + tol) return false;
  const KinematicSample end = r.profile(p.v_o).eval(r.T);
  return std::abs(end.accel) <= tol && std::abs(end.speed - r.v_T) <= tol;
}

}  // namespace

bool satisfies_constraints(const InflowProblem& p, const SolveResult& r, double tol) {
  return jerk_constraints(p, r, ordered(p.j), 0.0, tol);
}

bool satisfies_constraints(const OutflowProblem& p, const SolveResult& r, double tol) {
  return jerk_constraints(p, r, ordered(p.j), p.T_min, tol);
}

bool satisfies_constraints(const BaseAvProblem& p, const BaseAvSchedule& s, double tol) {
  if (!s.feasible) return false;
  if (!p.v_in.contains_closed(s.v_in, tol) || !p.a_in.contains_closed(s.a_in, tol)) return false;
  if (s.dT2 < -tol) return false;
  if (std::abs(s.dT_target - (s.dT1 + s.dT2)) > tol) return false;
  return s.T_stop >= s.T_0 + s.dT_target - tol && s.T_stop - s.T_0 < p.T_max + tol;
}

}  // namespace lefturn
