#include "lefturn/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lefturn {

KinematicSample JerkProfile::eval(double t) const {
  if (t < 0.0 || t > duration) throw std::domain_error("JerkProfile::eval: t outside [0, T]");
  return eval_unchecked(t);
}

KinematicSample JerkProfile::eval_unchecked(double t) const {
  const double j = jerk_slope;
  KinematicSample s;
  s.jerk = J_o + j * t;
  s.accel = J_o * t + 0.5 * j * t * t;
  s.speed = v_o + 0.5 * J_o * t * t + j * t * t * t / 6.0;
  s.distance = v_o * t + J_o * t * t * t / 6.0 + j * t * t * t * t / 24.0;
  return s;
}

const char* to_string(ApproachFeasibility f) {
  switch (f) {
    case ApproachFeasibility::Feasible: return "feasible";
    case ApproachFeasibility::ExceedsCap: return "exceeds_cap";
    case ApproachFeasibility::TooLate: return "too_late";
  }
  return "?";
}

double ApproachPlan::position(double t) const {
  t = std::max(0.0, t);
  const double delta = v_max_trap - v_current;
  const double acc = ramp_duration > 0.0 ? delta / ramp_duration : 0.0;
  if (t <= ramp_duration) return v_current * t + 0.5 * acc * t * t;
  const double x1 = v_current * ramp_duration + 0.5 * acc * ramp_duration * ramp_duration;
  if (t <= ramp_duration + cruise_duration) return x1 + v_max_trap * (t - ramp_duration);
  const double x2 = x1 + v_max_trap * cruise_duration;
  if (t <= total_duration) {
    const double tau = t - ramp_duration - cruise_duration;
    return x2 + v_max_trap * tau - 0.5 * acc * tau * tau;
  }
  const double x3 = x2 + v_max_trap * ramp_duration - 0.5 * acc * ramp_duration * ramp_duration;
  return x3 + v_current * (t - total_duration);
}

double ApproachPlan::speed(double t) const {
  t = std::max(0.0, t);
  const double delta = v_max_trap - v_current;
  const double acc = ramp_duration > 0.0 ? delta / ramp_duration : 0.0;
  if (t <= ramp_duration) return v_current + acc * t;
  if (t <= ramp_duration + cruise_duration) return v_max_trap;
  if (t <= total_duration) return v_max_trap - acc * (t - ramp_duration - cruise_duration);
  return v_current;
}

namespace {

// Symmetric plan with plateau offset `delta` covering `dist`. If the plateau
// cannot be reached the ramps meet in the middle (triangular shape).
ApproachPlan build_plan(double dist, double v_current, double delta, double ramp_accel) {
  ApproachPlan p;
  p.v_current = v_current;
  p.ramp_accel = ramp_accel;
  p.distance = dist;
  const double tr = std::abs(delta) / ramp_accel;
  const double ramps = 2.0 * v_current * tr + delta * tr;
  const double plateau = v_current + delta;
  double cruise = plateau > 0.0 ? (dist - ramps) / plateau : 0.0;
  if (cruise < 0.0) {
    // Triangular: shrink the plateau offset until both ramps cover dist.
    double d2;
    if (delta >= 0.0) {
      d2 = -v_current + std::sqrt(v_current * v_current + ramp_accel * dist);
    } else {
      const double disc = v_current * v_current - ramp_accel * dist;
      d2 = -(v_current - std::sqrt(std::max(0.0, disc)));
    }
    p.v_max_trap = v_current + d2;
    p.ramp_duration = std::abs(d2) / ramp_accel;
    p.cruise_duration = 0.0;
  } else {
    p.v_max_trap = plateau;
    p.ramp_duration = tr;
    p.cruise_duration = cruise;
  }
  p.total_duration = 2.0 * p.ramp_duration + p.cruise_duration;
  p.v_des = p.total_duration > 0.0 ? dist / p.total_duration : v_current;
  return p;
}

}  // namespace

double fastest_approach_time(double dist, double v_current, double v_cap, double ramp_accel) {
  const double dc = v_cap - v_current;
  const double ramps = (2.0 * v_current * dc + dc * dc) / ramp_accel;
  if (dist >= ramps) return 2.0 * dc / ramp_accel + (dist - ramps) / v_cap;
  const double d = -v_current + std::sqrt(v_current * v_current + ramp_accel * dist);
  return 2.0 * d / ramp_accel;
}

ApproachPlan trapezoid_approach(double dist, double available_time, double v_current, double v_cap,
                                const ApproachLimits& limits) {
  if (!(dist > 0.0) || !(available_time > 0.0))
    throw std::invalid_argument("trapezoid_approach requires positive distance and time");
  if (v_current > v_cap + 1e-12)
    throw std::invalid_argument("trapezoid_approach: current speed above the cap");
  if (v_current < 0.0) throw std::invalid_argument("trapezoid_approach: negative speed");
  const double r = limits.ramp_accel;
  const double T = available_time;
  const double excess = dist - v_current * T;  // area above (or below) the v_current line
  const double v_des = dist / T;

  auto finish = [&](ApproachPlan p, ApproachFeasibility f) {
    p.v_cap = v_cap;
    p.feasibility = f;
    if (f == ApproachFeasibility::Feasible) p.v_des = v_des;
    return p;
  };

  if (excess >= 0.0) {
    const double disc = r * r * T * T - 4.0 * r * excess;
    if (disc < 0.0 || v_des > v_cap) {
      return finish(build_plan(dist, v_current, v_cap - v_current, r), ApproachFeasibility::ExceedsCap);
    }
    const double delta = 0.5 * (r * T - std::sqrt(disc));
    if (v_current + delta > v_cap + 1e-12)
      return finish(build_plan(dist, v_current, v_cap - v_current, r), ApproachFeasibility::ExceedsCap);
    ApproachPlan p;
    p.v_current = v_current;
    p.ramp_accel = r;
    p.distance = dist;
    p.v_max_trap = v_current + delta;
    p.ramp_duration = delta / r;
    p.cruise_duration = T - 2.0 * p.ramp_duration;
    p.total_duration = T;
    return finish(p, ApproachFeasibility::Feasible);
  }

  const double deficit = -excess;
  const double disc = r * r * T * T - 4.0 * r * deficit;
  const double floor = std::min(limits.v_floor, v_current);
  if (disc < 0.0 || v_current - 0.5 * (r * T - std::sqrt(disc)) < floor) {
    return finish(build_plan(dist, v_current, floor - v_current, r), ApproachFeasibility::TooLate);
  }
  const double delta = -0.5 * (r * T - std::sqrt(disc));
  ApproachPlan p;
  p.v_current = v_current;
  p.ramp_accel = r;
  p.distance = dist;
  p.v_max_trap = v_current + delta;
  p.ramp_duration = -delta / r;
  p.cruise_duration = T - 2.0 * p.ramp_duration;
  p.total_duration = T;
  return finish(p, ApproachFeasibility::Feasible);
}

}  // namespace lefturn
