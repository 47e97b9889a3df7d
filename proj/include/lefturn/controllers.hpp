#pragma once

// Longitudinal policies for the turning vehicle.

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "lefturn/common.hpp"
#include "lefturn/intent.hpp"
#include "lefturn/optimizer.hpp"
#include "lefturn/profile.hpp"
#include "lefturn/world.hpp"

namespace lefturn {

struct ControllerParams {
  double accepted_gap = 5.0;   // onboard gap rule of the base AVs [s]
  double gap_margin = 0.5;     // added to both ends of every occupancy [s]
  bool base_clearance_check = true;  // base AVs also require the crossing itself to fit
  double launch_zone = 1.0;    // distance before the stop bar counted as "at the bar" [m]
  double stopped_speed = 0.1;  // base AV launches below this speed
  double turn_accel = 1.0;     // base AV turn plan
  double turn_speed = 6.0;
  double reaction_time = 0.5;  // stopping distance terms
  double stop_decel = -1.5;
  double speed_threshold_margin = 2.24;  // approach may exceed the limit by this much
  double final_check_lead = 1.0;         // onboard re-check starts this long before arrival [s]
  double wait_decel = 3.0;               // braking used when a committed gap disappears
  ApproachLimits approach;
  InflowProblem inflow;
  OutflowProblem outflow;
  BaseAvProblem base_av;  // d_in and v_max are filled in at corridor entry
  IntentModelParams intent;
  IdmParams idm;
};

// Base AV gap rule: no onboard-visible opposing vehicle reaches its conflict
// area within `accepted_gap`, and the crossing described by `offsets` fits.
bool base_gap_ok(const OpposingSnapshot& onboard, const SceneGeometry& scene,
                 const CrossingOffsets& offsets, const ControllerParams& p);

// Path station (from the stop bar) of the base AV turn plan launched at
// `start_offset` with speed v0.
double base_turn_station(double tau, double start_offset, double v0, const ControllerParams& p);

// Stop-bar wait and fixed turn plan shared by both base AVs.
class StopBarTurn {
 public:
  StopBarTurn(const SceneGeometry& scene, const ControllerParams& p) : scene_(scene), p_(p) {}
  bool in_zone(const SubjectObservation& obs) const;
  bool turning() const { return turning_; }
  // Returns the turn command once launched or launching this step.
  std::optional<double> try_turn(const SubjectObservation& obs);

 private:
  const SceneGeometry& scene_;
  const ControllerParams& p_;
  bool turning_ = false;
};

class BaseAv1 : public SubjectPolicy {
 public:
  BaseAv1(const SceneGeometry& scene, const ControllerParams& p);
  bool uses_rsu() const override { return false; }
  Command decide(const SubjectObservation& obs) override;
  std::string phase() const override;

 private:
  SceneGeometry scene_;
  ControllerParams p_;
  StopBarTurn turn_;
};

class BaseAv2 : public SubjectPolicy {
 public:
  BaseAv2(const SceneGeometry& scene, const ControllerParams& p);
  bool uses_rsu() const override { return false; }
  Command decide(const SubjectObservation& obs) override;
  std::string phase() const override;
  const BaseAvSchedule& schedule() const { return schedule_; }
  bool fell_back() const { return fallback_; }

 private:
  SceneGeometry scene_;
  ControllerParams p_;
  StopBarTurn turn_;
  bool solved_ = false;
  bool fallback_ = false;
  bool braking_ = false;
  double brake_start_ = 0.0;
  BaseAvSchedule schedule_;
  std::unique_ptr<BaseAv1> backup_;
};

enum class CavPhase { Approach, AdjustToDecelPoint, InflowDecel, WaitAtStopBar, Turning, Done };

const char* to_string(CavPhase p);

// Timed plan from `t_start`: trapezoid approach to the deceleration point,
// inflow to the stop bar, outflow through the turn.
struct CavPlan {
  double t_start = 0.0;
  double x_start = 0.0;
  ApproachPlan approach;
  JerkProfile inflow;
  JerkProfile outflow;
  double decel_point = 0.0;  // station of the Initial Point of Deceleration
  double launch_station = 0.0;
  bool has_approach = true;
  bool has_inflow = true;
  GapWindow window;

  double arrival_time() const;
  double launch_time() const { return arrival_time(); }
  double station(double t) const;
};

class SituationAware : public SubjectPolicy {
 public:
  SituationAware(const SceneGeometry& scene, const ControllerParams& p);
  bool uses_rsu() const override { return true; }
  Command decide(const SubjectObservation& obs) override;
  std::string phase() const override { return to_string(phase_); }

  CavPhase cav_phase() const { return phase_; }
  bool follower_aggressive() const { return aggressive_; }
  const std::optional<IntentEstimate>& last_estimate() const { return estimate_; }
  const std::optional<CavPlan>& plan() const { return plan_; }
  int replans() const { return replans_; }
  bool degraded() const { return degraded_; }

 private:
  void update_intent(const SubjectObservation& obs);
  const SolveResult& inflow_for(double v_o);
  const SolveResult& outflow_for(double v_o);
  // Builds the earliest feasible plan; returns false when none exists and a
  // slowest-possible holding plan was installed instead.
  bool replan(const SubjectObservation& obs, std::string& decision);
  bool plan_still_valid(const SubjectObservation& obs);
  double track(const SubjectObservation& obs) const;
  Command enter_wait(const SubjectObservation& obs, const std::string& why);

  SceneGeometry scene_;
  ControllerParams p_;
  BaseAv2 inner_;
  CavPhase phase_ = CavPhase::Approach;
  bool aggressive_ = false;
  bool degraded_ = false;
  bool handoff_failed_ = false;
  int replans_ = 0;
  double last_replan_ = -1e300;
  std::deque<RearSample> rear_;
  std::optional<IntentEstimate> estimate_;
  std::optional<CavPlan> plan_;
  CrossingOffsets plan_offsets_;
  double wait_target_ = 0.0;
  std::map<double, SolveResult> inflow_cache_;
  std::map<double, SolveResult> outflow_cache_;
};

std::unique_ptr<SubjectPolicy> make_controller(ControllerKind kind, const SceneGeometry& scene,
                                               const ControllerParams& p);

}  // namespace lefturn
