#pragma once

// Cubic-speed motion segments (constant jerk slope) and the
// accelerate-cruise-decelerate plan used to reach the initial point of
// deceleration at a chosen time.

namespace lefturn {

struct KinematicSample {
  double jerk = 0.0;
  double accel = 0.0;
  double speed = 0.0;
  double distance = 0.0;
};

// Segment starting with zero acceleration at zero distance. Speed is cubic
// in time: v(t) = v_o + J_o t^2 / 2 + j t^3 / 6.
struct JerkProfile {
  double v_o = 0.0;
  double J_o = 0.0;        // initial jerk [m/s^3]
  double jerk_slope = 0.0;  // j [m/s^4]
  double duration = 0.0;    // T [s]

  // Throws std::domain_error for t outside [0, duration].
  KinematicSample eval(double t) const;
  // Same polynomial without the range check.
  KinematicSample eval_unchecked(double t) const;
  double terminal_jerk() const { return J_o + jerk_slope * duration; }
};

enum class ApproachFeasibility {
  Feasible,
  ExceedsCap,  // required peak speed above the cap; fastest plan returned
  TooLate,     // required slowdown below the speed floor; slowest plan returned
};

const char* to_string(ApproachFeasibility f);

struct ApproachPlan {
  double v_current = 0.0;  // start and end speed of the plan
  double v_des = 0.0;      // distance / available time
  double v_max_trap = 0.0;  // plateau speed (may be below v_current for a slowdown)
  double v_cap = 0.0;
  double ramp_accel = 1.0;
  double ramp_duration = 0.0;
  double cruise_duration = 0.0;
  double total_duration = 0.0;
  double distance = 0.0;
  double decel_point_station = 0.0;  // filled by callers that know the route
  ApproachFeasibility feasibility = ApproachFeasibility::Feasible;

  bool feasible() const { return feasibility == ApproachFeasibility::Feasible; }
  // Distance covered and speed at plan time t (clamped to [0, total_duration];
  // beyond the end the plan continues at v_current).
  double position(double t) const;
  double speed(double t) const;
};

struct ApproachLimits {
  double ramp_accel = 1.0;
  double v_floor = 8.0;  // slowest cruise the approach will plan
};

// Throws std::invalid_argument when v_current > v_cap or the distance/time are
// not positive.
ApproachPlan trapezoid_approach(double dist_to_decel_point, double available_time,
                                double v_current, double v_cap, const ApproachLimits& limits = {});

// Shortest time in which a symmetric plan capped at v_cap covers `dist`,
// starting and ending at v_current.
double fastest_approach_time(double dist, double v_current, double v_cap, double ramp_accel);

}  // namespace lefturn
