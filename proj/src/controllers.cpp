#include "lefturn/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lefturn {

namespace {

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double profile_station(const JerkProfile& pr, double tau) {
  if (tau <= 0.0) return 0.0;
  if (tau <= pr.duration) return pr.eval_unchecked(tau).distance;
  const KinematicSample e = pr.eval_unchecked(pr.duration);
  return e.distance + e.speed * (tau - pr.duration);
}

}  // namespace

const char* to_string(CavPhase p) {
  switch (p) {
    case CavPhase::Approach: return "Approach";
    case CavPhase::AdjustToDecelPoint: return "AdjustToDecelPoint";
    case CavPhase::InflowDecel: return "InflowDecel";
    case CavPhase::WaitAtStopBar: return "WaitAtStopBar";
    case CavPhase::Turning: return "Turning";
    case CavPhase::Done: return "Done";
  }
  return "?";
}

bool base_gap_ok(const OpposingSnapshot& onboard, const SceneGeometry& scene,
                 const CrossingOffsets& offsets, const ControllerParams& p) {
  const double now = onboard.timestamp;
  for (const auto& v : onboard.vehicles) {
    const auto iv = occupancy_interval(v, scene.d_f(v.lane), scene.d_l(v.lane), now);
    if (iv && iv->start - now < p.accepted_gap) return false;
  }
  if (!p.base_clearance_check) return true;
  const GapPrediction g = predict_gaps(onboard, scene, 0.0, offsets, p.gap_margin);
  return launch_feasible(g, now);
}

double base_turn_station(double tau, double start_offset, double v0, const ControllerParams& p) {
  const double r = p.turn_accel;
  const double vt = std::max(p.turn_speed, v0);
  const double tr = (vt - v0) / r;
  if (tau <= tr) return start_offset + v0 * tau + 0.5 * r * tau * tau;
  return start_offset + v0 * tr + 0.5 * r * tr * tr + vt * (tau - tr);
}

// ---------------------------------------------------------------------------

bool StopBarTurn::in_zone(const SubjectObservation& obs) const {
  const double to_bar = scene_.stop_bar - obs.station;
  return to_bar <= p_.launch_zone && -to_bar < scene_.path.near_lane_entry;
}

std::optional<double> StopBarTurn::try_turn(const SubjectObservation& obs) {
  if (!turning_) {
    // Turns start from a standstill at the bar.
    if (!in_zone(obs) || obs.speed > p_.stopped_speed) return std::nullopt;
    const double off = obs.station - scene_.stop_bar;
    const double v0 = obs.speed;
    const CrossingOffsets o = crossing_offsets(
        scene_, [&](double tau) { return base_turn_station(tau, off, v0, p_); });
    if (!base_gap_ok(obs.onboard, scene_, o, p_)) return std::nullopt;
    turning_ = true;
  }
  return std::clamp((p_.turn_speed - obs.speed) / obs.dt, -p_.turn_accel, p_.turn_accel);
}

// ---------------------------------------------------------------------------

BaseAv1::BaseAv1(const SceneGeometry& scene, const ControllerParams& p)
    : scene_(scene), p_(p), turn_(scene_, p_) {}

std::string BaseAv1::phase() const { return turn_.turning() ? "Turning" : "Approach"; }

Command BaseAv1::decide(const SubjectObservation& obs) {
  const bool was_turning = turn_.turning();
  if (auto a = turn_.try_turn(obs)) return {*a, was_turning ? "" : "launch"};
  // The stop bar acts as a standing obstacle whose rear sits one minimum gap
  // beyond it, so the car-following model parks the front bumper on the bar.
  Leader bar{scene_.stop_bar + p_.idm.min_gap - obs.station, 0.0};
  if (obs.front && obs.front->gap < bar.gap) bar = Leader{obs.front->gap, obs.front->speed};
  return {car_follow(p_.idm, bar, obs.speed, obs.speed_limit), ""};
}

// ---------------------------------------------------------------------------

BaseAv2::BaseAv2(const SceneGeometry& scene, const ControllerParams& p)
    : scene_(scene), p_(p), turn_(scene_, p_) {}

std::string BaseAv2::phase() const {
  if (fallback_) return backup_->phase();
  if (turn_.turning()) return "Turning";
  return braking_ ? "Stopping" : "Cruise";
}

Command BaseAv2::decide(const SubjectObservation& obs) {
  std::string decision;
  if (!solved_) {
    solved_ = true;
    const double d_stop = stopping_distance(obs.speed_limit, p_.reaction_time, p_.stop_decel);
    BaseAvProblem prob = p_.base_av;
    prob.d_in = scene_.stop_bar - obs.station - d_stop;
    prob.v_max = obs.speed_limit;
    if (prob.d_in > 0.0) schedule_ = solve_base_av(prob);
    schedule_.T_0 = obs.time;
    schedule_.T_stop = obs.time + schedule_.dT_target;
    if (!schedule_.feasible) {
      fallback_ = true;
      backup_ = std::make_unique<BaseAv1>(scene_, p_);
      decision = "warning:base_av_schedule_infeasible;fallback=BaseAv1";
    } else {
      decision = "schedule:v_in=" + fmt("%.3f", schedule_.v_in) + ";a_in=" + fmt("%.3f", schedule_.a_in) +
                 ";T=" + fmt("%.3f", schedule_.dT_target);
    }
  }
  if (fallback_) {
    Command c = backup_->decide(obs);
    if (!decision.empty()) c.decision = decision;
    return c;
  }

  const bool was_turning = turn_.turning();
  if (auto a = turn_.try_turn(obs)) return {*a, was_turning ? "" : "launch"};

  const double v = obs.speed;
  const double to_bar = scene_.stop_bar - obs.station;
  const double d_stop = stopping_distance(schedule_.v_max, p_.reaction_time, p_.stop_decel);
  if (!braking_ && to_bar <= d_stop - p_.reaction_time * schedule_.v_max) {
    braking_ = true;
    brake_start_ = obs.time;
    decision = "brake";
  }
  double a;
  if (braking_) {
    if (v <= 0.0) a = 0.0;
    else if (to_bar <= v * obs.dt) a = -v / obs.dt;
    else a = -v * v / (2.0 * to_bar);
  } else {
    a = std::min(schedule_.a_in, (schedule_.v_max - v) / obs.dt);
  }
  if (obs.front) a = std::min(a, car_follow(p_.idm, Leader{obs.front->gap, obs.front->speed}, v, schedule_.v_max));
  return {std::max(a, p_.idm.min_accel), decision};
}

// ---------------------------------------------------------------------------

double CavPlan::arrival_time() const {
  return t_start + (has_approach ? approach.total_duration : 0.0) + (has_inflow ? inflow.duration : 0.0);
}

double CavPlan::station(double t) const {
  double tau = t - t_start;
  const double ta = has_approach ? approach.total_duration : 0.0;
  if (has_approach && tau <= ta) return x_start + approach.position(tau);
  tau -= ta;
  const double ti = has_inflow ? inflow.duration : 0.0;
  if (has_inflow && tau <= ti) return decel_point + inflow.eval_unchecked(std::max(0.0, tau)).distance;
  tau -= ti;
  return launch_station + profile_station(outflow, tau);
}

SituationAware::SituationAware(const SceneGeometry& scene, const ControllerParams& p)
    : scene_(scene), p_(p), inner_(scene_, p_) {}

void SituationAware::update_intent(const SubjectObservation& obs) {
  if (aggressive_) return;
  if (!obs.rear) {
    rear_.clear();
    return;
  }
  if (!rear_.empty() && obs.rear->time - rear_.back().time > 1.5 * obs.dt) rear_.clear();
  rear_.push_back(*obs.rear);
  if (rear_.size() > 3) rear_.pop_front();
  if (rear_.size() < 3) return;
  FollowerObservation fo{{rear_[0], rear_[1], rear_[2]}};
  estimate_ = intent_probability(follower_kinematics(fo, p_.intent.speed_floor), p_.intent);
  if (estimate_->classification == Intent::Aggressive) aggressive_ = true;
}

const SolveResult& SituationAware::inflow_for(double v_o) {
  auto it = inflow_cache_.find(v_o);
  if (it != inflow_cache_.end()) return it->second;
  InflowProblem pr = p_.inflow;
  pr.v_o = v_o;
  return inflow_cache_.emplace(v_o, solve_inflow(pr)).first->second;
}

const SolveResult& SituationAware::outflow_for(double v_o) {
  auto it = outflow_cache_.find(v_o);
  if (it != outflow_cache_.end()) return it->second;
  OutflowProblem pr = p_.outflow;
  pr.v_o = v_o;
  return outflow_cache_.emplace(v_o, solve_outflow(pr)).first->second;
}

bool SituationAware::replan(const SubjectObservation& obs, std::string& decision) {
  last_replan_ = obs.time;
  ++replans_;
  const double v0 = obs.speed;
  const double now = obs.time;
  const SolveResult& in = inflow_for(v0);
  if (!in.feasible) return false;
  const JerkProfile inflow = in.profile(v0);
  const double d_inflow = inflow.eval_unchecked(inflow.duration).distance;
  const double ipd = scene_.stop_bar - d_inflow;
  const double dist = ipd - obs.station;
  if (dist < 0.5) return false;
  const SolveResult& out = outflow_for(in.v_T);
  if (!out.feasible) return false;
  const JerkProfile outflow = out.profile(in.v_T);
  const CrossingOffsets offs = crossing_offsets(scene_, [&](double tau) { return profile_station(outflow, tau); });

  const double cap = obs.speed_limit + p_.speed_threshold_margin;
  const double t_fast = now + fastest_approach_time(dist, v0, cap, p_.approach.ramp_accel) + inflow.duration;
  const OpposingSnapshot& snap = obs.rsu ? *obs.rsu : obs.onboard;
  const GapPrediction g = predict_gaps(snap, scene_, t_fast - now, offs, p_.gap_margin);

  CavPlan plan;
  plan.t_start = now;
  plan.x_start = obs.station;
  plan.inflow = inflow;
  plan.outflow = outflow;
  plan.decel_point = ipd;
  plan.launch_station = scene_.stop_bar;

  for (const GapWindow& w : g.windows) {
    const double cand = std::max(w.start, t_fast);
    if (cand > w.end) continue;
    const double tau = cand - now - inflow.duration;
    if (!(tau > 0.0)) continue;
    ApproachPlan ap = trapezoid_approach(dist, tau, v0, cap, p_.approach);
    const bool ok = ap.feasibility == ApproachFeasibility::Feasible ||
                    (ap.feasibility == ApproachFeasibility::ExceedsCap && std::abs(ap.total_duration - tau) < 1e-6);
    if (ok) {
      plan.approach = ap;
      plan.window = w;
      plan_ = plan;
      plan_offsets_ = offs;
      degraded_ = false;
      decision = "plan:arrive=" + fmt("%.2f", plan_->arrival_time()) + ";window=" + fmt("%.2f", w.start) + "-" +
                 (w.end == kInfinity ? std::string("inf") : fmt("%.2f", w.end)) + ";v_peak=" +
                 fmt("%.2f", ap.v_max_trap) + ";T_in=" + fmt("%.2f", inflow.duration) +
                 ";T_out=" + fmt("%.2f", outflow.duration);
      return true;
    }
    if (ap.feasibility == ApproachFeasibility::TooLate) break;
  }
  // Nothing reachable: hold the slowest approach and keep looking.
  plan.approach = trapezoid_approach(dist, 1e6, v0, cap, p_.approach);
  plan.window = GapWindow{};
  plan_ = plan;
  plan_offsets_ = offs;
  degraded_ = true;
  decision = "degraded:no_reachable_window";
  return false;
}

bool SituationAware::plan_still_valid(const SubjectObservation& obs) {
  if (!plan_) return false;
  const OpposingSnapshot& snap = obs.rsu ? *obs.rsu : obs.onboard;
  const double arrival = plan_->arrival_time();
  const GapPrediction g = predict_gaps(snap, scene_, arrival - obs.time, plan_offsets_, p_.gap_margin);
  return launch_feasible(g, arrival);
}

double SituationAware::track(const SubjectObservation& obs) const {
  const double target = plan_->station(obs.time + obs.dt);
  const double a = ((target - obs.station) / obs.dt - obs.speed) / obs.dt;
  return std::clamp(a, p_.idm.min_accel, 4.0);
}

Command SituationAware::enter_wait(const SubjectObservation& obs, const std::string& why) {
  phase_ = CavPhase::WaitAtStopBar;
  wait_target_ = std::max(scene_.stop_bar, obs.station + obs.speed * obs.speed / (2.0 * p_.wait_decel));
  plan_.reset();
  return {0.0, "wait:" + why};
}

Command SituationAware::decide(const SubjectObservation& obs) {
  update_intent(obs);
  std::string decision;

  if (phase_ == CavPhase::Approach) {
    if (!aggressive_ || handoff_failed_) return inner_.decide(obs);
    const bool ok = replan(obs, decision);
    if (!ok && !plan_) {
      // Too close to the bar to plan an inflow: stay with the base behaviour.
      handoff_failed_ = true;
      return inner_.decide(obs);
    }
    phase_ = CavPhase::AdjustToDecelPoint;
    decision = "aggressive_follower;" + decision;
  }

  if (phase_ == CavPhase::AdjustToDecelPoint) {
    const double ta = plan_->t_start + (plan_->has_approach ? plan_->approach.total_duration : 0.0);
    if (obs.time >= ta - 1e-9) {
      phase_ = CavPhase::InflowDecel;
      decision += decision.empty() ? "inflow" : ";inflow";
    } else {
      const bool need = degraded_ ? obs.time - last_replan_ >= 1.0 - 1e-9 : !plan_still_valid(obs);
      if (need) {
        std::string d;
        replan(obs, d);
        decision += decision.empty() ? "replan;" + d : ";replan;" + d;
      }
    }
  }

  if (phase_ == CavPhase::InflowDecel) {
    const double arrival = plan_->arrival_time();
    if (obs.time >= arrival - p_.final_check_lead - 1e-9) {
      const GapPrediction g =
          predict_gaps(obs.onboard, scene_, arrival - obs.time, plan_offsets_, p_.gap_margin);
      if (!launch_feasible(g, arrival)) {
        Command c = enter_wait(obs, "onboard_check_failed");
        if (!decision.empty()) c.decision = decision + ";" + c.decision;
        // Fall through to the wait branch for this step's command.
        decision = c.decision;
      }
    }
    if (phase_ == CavPhase::InflowDecel && obs.time + obs.dt > arrival) {
      phase_ = CavPhase::Turning;
      decision += decision.empty() ? "turn" : ";turn";
    }
  }

  if (phase_ == CavPhase::WaitAtStopBar) {
    const double v = obs.speed;
    if (v > 1e-9) {
      const double rem = wait_target_ - obs.station;
      double a = rem <= v * obs.dt ? -v / obs.dt : -v * v / (2.0 * rem);
      return {std::max(a, p_.idm.min_accel), decision};
    }
    const SolveResult& out = outflow_for(0.0);
    const JerkProfile outflow = out.profile(0.0);
    const double off = obs.station - scene_.stop_bar;
    const CrossingOffsets offs =
        crossing_offsets(scene_, [&](double tau) { return off + profile_station(outflow, tau); });
    const GapPrediction g = predict_gaps(obs.onboard, scene_, 0.0, offs, p_.gap_margin);
    if (!out.feasible || !launch_feasible(g, obs.time)) return {0.0, decision};
    CavPlan plan;
    plan.t_start = obs.time;
    plan.x_start = obs.station;
    plan.has_approach = false;
    plan.has_inflow = false;
    plan.outflow = outflow;
    plan.decel_point = obs.station;
    plan.launch_station = obs.station;
    plan_ = plan;
    plan_offsets_ = offs;
    phase_ = CavPhase::Turning;
    decision += decision.empty() ? "turn_from_stop" : ";turn_from_stop";
  }

  if (phase_ == CavPhase::Turning) {
    const double p = obs.station - scene_.stop_bar;
    if (p - obs.length >= scene_.path.conflict_entry_second_lane) {
      phase_ = CavPhase::Done;
      decision += decision.empty() ? "clear" : ";clear";
    }
  }
  return {track(obs), decision};
}

// ---------------------------------------------------------------------------

std::unique_ptr<SubjectPolicy> make_controller(ControllerKind kind, const SceneGeometry& scene,
                                               const ControllerParams& p) {
  switch (kind) {
    case ControllerKind::BaseAv1: return std::make_unique<BaseAv1>(scene, p);
    case ControllerKind::BaseAv2: return std::make_unique<BaseAv2>(scene, p);
    case ControllerKind::SituationAware: return std::make_unique<SituationAware>(scene, p);
  }
  throw std::invalid_argument("unknown controller kind");
}

}  // namespace lefturn
