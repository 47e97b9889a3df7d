#pragma once

// Time-stepped world of one permissive-green left turn: the subject vehicle,
// its follower on the shared lane, two opposing through lanes, the roadside
// unit and collision bookkeeping.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lefturn/geometry.hpp"
#include "lefturn/intent.hpp"

namespace lefturn {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Role { SubjectCAV, Follower, OpposingThrough, Obstacle };
enum class Lane { MajorDir1Lane1, MajorDir1Lane2, MajorDir2Lane1, MajorDir2Lane2, Minor };

const char* to_string(Role r);
const char* to_string(Lane l);

// Opposing lanes as seen from the turning vehicle: A is the near lane, B the far one.
enum class OpposingLane { A, B };

struct VehicleState {
  int id = 0;
  Role role = Role::OpposingThrough;
  Lane lane = Lane::MajorDir1Lane1;
  double station = 0.0;  // front bumper along the vehicle's route [m]
  double speed = 0.0;
  double accel = 0.0;    // realised acceleration over the last step
  double length = 4.6;
  double width = 1.8;
  double spawn_time = 0.0;
  double desired_speed = 0.0;
};

// Everything a controller needs to know about the fixed geometry.
struct SceneGeometry {
  IntersectionLayout layout;
  TurnPath path;
  ConflictDistances conflicts;
  double stop_bar = 0.0;        // subject route station of the stop bar
  double turn_end = 0.0;        // stop_bar + turn arc length
  double route_end = 0.0;       // end of the modelled minor street
  // Opposing route station where the turn path crosses each lane centre.
  double opposing_conflict_station = 0.0;
  double opposing_exit_station = 0.0;
  // Turn-path station past which the subject no longer blocks the shared lane.
  double shared_lane_clear = 0.0;
  double subject_length = 4.6;

  double d_f(OpposingLane l) const { return l == OpposingLane::A ? conflicts.d_f_first : conflicts.d_f_second; }
  double d_l(OpposingLane l) const { return l == OpposingLane::A ? conflicts.d_l_first : conflicts.d_l_second; }
};

struct ConflictParams {
  double sigma = 0.6;
  double threshold = 1.2;
  double vehicle_width = 1.8;
  ConflictFormula formula = ConflictFormula::Verbatim;
};

SceneGeometry make_scene(const IntersectionLayout& layout, const ConflictParams& conflict,
                         double subject_length = 4.6);

// ---------------------------------------------------------------------------
// Roadside-unit view and gap prediction

struct OpposingObserved {
  int id = 0;
  OpposingLane lane = OpposingLane::A;
  double distance_to_conflict = 0.0;  // front bumper to the lane's conflict point
  double speed = 0.0;
  double length = 4.6;
};

struct OpposingSnapshot {
  double timestamp = 0.0;
  double visibility_range = 300.0;
  std::vector<OpposingObserved> vehicles;
};

struct TimeInterval {
  double start = 0.0;
  double end = 0.0;
};

struct GapWindow {
  double start = 0.0;
  double end = kInfinity;
  double length() const { return end - start; }
};

// Offsets, relative to the moment the subject's front passes the launch
// point, at which it enters and leaves each conflict area.
struct CrossingOffsets {
  double a_in = 0.0;
  double a_out = 0.0;
  double b_in = 0.0;
  double b_out = 0.0;
};

struct VehicleSets {
  std::vector<int> a_pass;
  std::vector<int> b_pass;
  std::vector<int> a_approach;
  std::vector<int> b_approach;
};

struct GapPrediction {
  VehicleSets sets;
  std::vector<TimeInterval> occupied_a;  // absolute times, sorted, merged
  std::vector<TimeInterval> occupied_b;
  // Launch times at which the crossing fits between occupancies; sorted and
  // disjoint. With zero offsets these are the complement of all occupancies.
  std::vector<GapWindow> windows;
};

// Conflict-area occupancy of one opposing vehicle under constant speed, in
// absolute time. Returns nothing for vehicles that already passed or never
// arrive; a stopped vehicle inside the area blocks forever.
std::optional<TimeInterval> occupancy_interval(const OpposingObserved& v, double d_f, double d_l,
                                               double now);

// Sorted union of possibly overlapping intervals.
std::vector<TimeInterval> merge_intervals(std::vector<TimeInterval> in);

GapPrediction predict_gaps(const OpposingSnapshot& snapshot, const SceneGeometry& scene,
                           double cav_eta_to_conflict, const CrossingOffsets& offsets,
                           double margin = 0.0);

bool launch_feasible(const GapPrediction& g, double launch_time);

// Times at which a front bumper following `path_station(tau)` (turn-path
// station measured from the stop bar, tau from launch) enters and leaves the
// two conflict areas. `path_station` must be nondecreasing.
CrossingOffsets crossing_offsets(const SceneGeometry& scene,
                                 const std::function<double(double)>& path_station,
                                 double horizon = 120.0);

// ---------------------------------------------------------------------------
// Traffic generation and non-CAV driver models

struct OpposingTrafficParams {
  double volume_vphpln = 600.0;
  double min_headway = 1.0;
  double speed_mean_factor = 0.9;    // x speed limit
  double speed_band_factor = 0.2;    // 95 % half-width, x speed limit
  double speed_min_factor = 0.5;
  double speed_max_factor = 1.2;
};

struct Arrival {
  double time = 0.0;
  double desired_speed = 0.0;
};

// Per-lane arrival stream: exponential headways (mean 3600 / rate) floored at
// `min_headway`, and truncated-normal desired speeds.
class ArrivalStream {
 public:
  ArrivalStream(const OpposingTrafficParams& p, double speed_limit, std::uint64_t seed,
                std::uint64_t lane_salt);
  Arrival next();

 private:
  double uniform();
  double normal();

  OpposingTrafficParams params_;
  double speed_limit_;
  double clock_ = 0.0;
  std::mt19937_64 rng_;
};

struct IdmParams {
  double max_accel = 1.5;
  double comfortable_decel = 2.0;
  double min_gap = 2.0;
  double time_headway = 1.5;
  double exponent = 4.0;
  double min_accel = -8.0;
};

struct Leader {
  double gap = kInfinity;  // bumper to bumper
  double speed = 0.0;
};

double car_follow(const IdmParams& p, const std::optional<Leader>& leader, double speed,
                  double desired_speed);

// Closed-form equilibrium gap of the car-following model at speed v.
double idm_equilibrium_gap(const IdmParams& p, double v, double desired_speed);

struct AggressiveFollowerParams {
  double hard_gap = 12.0;
  double hard_ttc = 1.5;
  double hard_decel = -6.0;
  double release_gap = 15.0;
  double track_accel = 2.5;
  double entry_speed = 9.0;
  double start_offset = 8.0;
};

class AggressiveFollower {
 public:
  explicit AggressiveFollower(AggressiveFollowerParams p) : p_(p) {}
  // Acceleration command; `leader` absent when the shared lane ahead is clear.
  double command(const std::optional<Leader>& leader, double speed, double limit, double dt);
  bool braking() const { return braking_; }
  int brake_onsets() const { return onsets_; }

 private:
  AggressiveFollowerParams p_;
  bool braking_ = false;
  int onsets_ = 0;
};

// ---------------------------------------------------------------------------
// Subject vehicle policy interface

struct FrontObject {
  double gap = 0.0;
  double speed = 0.0;
};

struct SubjectObservation {
  double time = 0.0;
  double dt = 0.1;
  double station = 0.0;
  double speed = 0.0;
  double accel = 0.0;
  double length = 4.6;
  double speed_limit = 13.4;
  std::optional<FrontObject> front;
  std::optional<RearSample> rear;
  OpposingSnapshot onboard;             // front sensor range
  std::optional<OpposingSnapshot> rsu;  // V2I-equipped policies only
};

struct Command {
  double accel = 0.0;
  std::string decision;
};

class SubjectPolicy {
 public:
  virtual ~SubjectPolicy() = default;
  virtual bool uses_rsu() const = 0;
  virtual Command decide(const SubjectObservation& obs) = 0;
  virtual std::string phase() const = 0;
};

// ---------------------------------------------------------------------------
// World

struct SensorParams {
  double rear_camera_range = 200.0;
  double front_range = 200.0;
  double rsu_range = 300.0;
};

struct WorldParams {
  double dt = 0.1;
  double warmup = 40.0;         // opposing traffic runs alone before the subject enters
  double max_duration = 300.0;  // after subject entry
  double subject_entry_speed = 12.5;
  bool include_follower = true;
  OpposingTrafficParams opposing;
  IdmParams idm;
  AggressiveFollowerParams follower;
  SensorParams sensors;
  std::uint64_t seed = 1;
};

enum class EventKind {
  Spawn,
  HardBrakeOnset,
  ConflictEntry,
  ConflictExit,
  Collision,
  Arrival,
};

const char* to_string(EventKind k);

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Spawn;
  int vehicle_id = 0;
  std::string detail;
};

struct TraceRow {
  double time = 0.0;
  int vehicle_id = 0;
  Role role = Role::SubjectCAV;
  Lane lane = Lane::MajorDir1Lane1;
  double station = 0.0;
  double speed = 0.0;
  double accel = 0.0;
  std::string flags;
  std::string decision;
};

struct RunOutcome {
  bool finished = false;    // both tracked vehicles cleared before the cap
  bool timed_out = false;
  int conflict_collisions = 0;
  int same_lane_collisions = 0;
  double subject_entry = 0.0;
  double subject_clear = kInfinity;  // front reached the end of the turn path
  double follower_entry = 0.0;
  double follower_clear = kInfinity;  // front passed stop bar + length
  std::vector<double> follower_accel;  // realised acceleration per step
  double follower_dwell = 0.0;         // time stopped
  double max_subject_approach_speed = 0.0;
};

// Scripted acceleration for test vehicles, as a function of time and state.
using AccelScript = std::function<double(double, const VehicleState&)>;

class World {
 public:
  World(const WorldParams& params, const SceneGeometry& scene,
        std::unique_ptr<SubjectPolicy> policy);

  // Test hooks: scripted vehicles bypass the driver models.
  int add_scripted_opposing(OpposingLane lane, double station, double speed, AccelScript script);
  int add_obstacle(double station, double speed, AccelScript script = {});
  void disable_random_traffic() { random_traffic_ = false; }

  void step();
  // Steps until both tracked vehicles cleared or the duration cap.
  const RunOutcome& run();
  bool done() const;

  double time() const { return time_; }
  const std::vector<VehicleState>& vehicles() const { return vehicles_; }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<TraceRow>& trace() const { return trace_; }
  const RunOutcome& outcome() const { return outcome_; }
  const SceneGeometry& scene() const { return scene_; }
  const VehicleState* subject() const;
  const VehicleState* follower() const;
  const SubjectPolicy& policy() const { return *policy_; }

  OpposingSnapshot snapshot(double range_from_conflict) const;

 private:
  struct Scripted {
    int id;
    AccelScript script;
  };

  void spawn_due();
  std::optional<Leader> leader_of(std::size_t idx) const;
  std::optional<Leader> follower_leader() const;
  SubjectObservation observe_subject() const;
  void detect();
  OpposingLane lane_of(const VehicleState& v) const;
  bool subject_in_conflict(OpposingLane l) const;

  WorldParams params_;
  SceneGeometry scene_;
  std::unique_ptr<SubjectPolicy> policy_;
  AggressiveFollower follower_model_;
  std::vector<VehicleState> vehicles_;
  std::vector<Scripted> scripted_;
  std::vector<Event> events_;
  std::vector<TraceRow> trace_;
  RunOutcome outcome_;
  ArrivalStream stream_a_;
  ArrivalStream stream_b_;
  std::optional<Arrival> pending_a_;
  std::optional<Arrival> pending_b_;
  bool random_traffic_ = true;
  double time_ = 0.0;
  int next_id_ = 1;
  int subject_id_ = -1;
  int follower_id_ = -1;
  bool subject_spawned_ = false;
  bool follower_spawned_ = false;
  bool in_conflict_a_ = false;
  bool in_conflict_b_ = false;
  bool collided_a_ = false;
  bool collided_b_ = false;
  bool collided_lane_ = false;
  std::string last_decision_;
};

}  // namespace lefturn
