#include "lefturn/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lefturn {

const char* to_string(Role r) {
  switch (r) {
    case Role::SubjectCAV: return "subject";
    case Role::Follower: return "follower";
    case Role::OpposingThrough: return "opposing";
    case Role::Obstacle: return "obstacle";
  }
  return "?";
}

const char* to_string(Lane l) {
  switch (l) {
    case Lane::MajorDir1Lane1: return "major_dir1_lane1";
    case Lane::MajorDir1Lane2: return "major_dir1_lane2";
    case Lane::MajorDir2Lane1: return "major_dir2_lane1";
    case Lane::MajorDir2Lane2: return "major_dir2_lane2";
    case Lane::Minor: return "minor";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Spawn: return "spawn";
    case EventKind::HardBrakeOnset: return "hard_brake_onset";
    case EventKind::ConflictEntry: return "conflict_entry";
    case EventKind::ConflictExit: return "conflict_exit";
    case EventKind::Collision: return "collision";
    case EventKind::Arrival: return "arrival";
  }
  return "?";
}

SceneGeometry make_scene(const IntersectionLayout& layout, const ConflictParams& conflict,
                         double subject_length) {
  layout.validate();
  if (!(subject_length > 0.0)) throw std::invalid_argument("subject length must be positive");
  SceneGeometry s;
  s.layout = layout;
  s.path = path_station_of_conflicts(layout);
  s.conflicts = conflict_distances(layout.lane_width, conflict.vehicle_width, conflict.sigma,
                                   conflict.threshold, conflict.formula);
  s.stop_bar = layout.stop_line_position;
  s.turn_end = s.stop_bar + s.path.total_arc_length;
  s.route_end = s.turn_end + layout.minor_length;
  // Opposing vehicles meet the turn path this far past their own stop line.
  s.opposing_conflict_station =
      layout.stop_line_position + layout.intersection_depth - s.path.lane_center_crossing_offset;
  s.opposing_exit_station = layout.stop_line_position + layout.intersection_depth + 60.0;
  s.shared_lane_clear = s.stop_bar + s.path.near_lane_entry + 0.5 * subject_length;
  s.subject_length = subject_length;
  return s;
}

// ---------------------------------------------------------------------------

std::optional<TimeInterval> occupancy_interval(const OpposingObserved& v, double d_f, double d_l,
                                               double now) {
  const double far = v.distance_to_conflict + d_l + v.length;
  if (far <= 0.0) return std::nullopt;  // already through
  const double near = v.distance_to_conflict - d_f;
  if (v.speed <= 1e-9) {
    if (near <= 0.0) return TimeInterval{now, kInfinity};
    return std::nullopt;
  }
  return TimeInterval{now + std::max(0.0, near) / v.speed, now + far / v.speed};
}

std::vector<TimeInterval> merge_intervals(std::vector<TimeInterval> in) {
  std::sort(in.begin(), in.end(), [](const TimeInterval& a, const TimeInterval& b) {
    return a.start < b.start || (a.start == b.start && a.end < b.end);
  });
  std::vector<TimeInterval> out;
  for (const auto& iv : in) {
    if (iv.end < iv.start) continue;
    if (!out.empty() && iv.start <= out.back().end) {
      out.back().end = std::max(out.back().end, iv.end);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

GapPrediction predict_gaps(const OpposingSnapshot& snapshot, const SceneGeometry& scene,
                           double cav_eta_to_conflict, const CrossingOffsets& off, double margin) {
  GapPrediction g;
  const double now = snapshot.timestamp;
  const double eta = now + cav_eta_to_conflict;
  std::vector<TimeInterval> raw_a, raw_b;
  for (const auto& v : snapshot.vehicles) {
    const auto iv = occupancy_interval(v, scene.d_f(v.lane), scene.d_l(v.lane), now);
    const bool passes = !iv || iv->end <= eta;
    if (v.lane == OpposingLane::A) {
      (passes ? g.sets.a_pass : g.sets.a_approach).push_back(v.id);
      if (iv) raw_a.push_back(*iv);
    } else {
      (passes ? g.sets.b_pass : g.sets.b_approach).push_back(v.id);
      if (iv) raw_b.push_back(*iv);
    }
  }
  g.occupied_a = merge_intervals(raw_a);
  g.occupied_b = merge_intervals(raw_b);

  // A launch at tau is blocked by an occupancy [s, e] of a lane the CAV holds
  // over [tau + in, tau + out] whenever the two overlap (margin on both sides).
  std::vector<TimeInterval> blocked;
  for (const auto& iv : g.occupied_a)
    blocked.push_back({iv.start - margin - off.a_out, iv.end + margin - off.a_in});
  for (const auto& iv : g.occupied_b)
    blocked.push_back({iv.start - margin - off.b_out, iv.end + margin - off.b_in});
  blocked = merge_intervals(blocked);

  double cursor = now;
  for (const auto& b : blocked) {
    if (b.end <= cursor) continue;
    if (b.start > cursor) g.windows.push_back({cursor, b.start});
    cursor = std::max(cursor, b.end);
    if (cursor == kInfinity) break;
  }
  if (cursor < kInfinity) g.windows.push_back({cursor, kInfinity});
  return g;
}

bool launch_feasible(const GapPrediction& g, double launch_time) {
  for (const auto& w : g.windows) {
    if (launch_time < w.start) return false;
    if (launch_time <= w.end) return true;
  }
  return false;
}

CrossingOffsets crossing_offsets(const SceneGeometry& scene,
                                 const std::function<double(double)>& path_station,
                                 double horizon) {
  const double len = scene.subject_length;
  const auto& p = scene.path;
  // First tau with path_station(tau) >= target, by scan then bisection.
  auto first_reach = [&](double target) {
    if (path_station(0.0) >= target) return 0.0;
    constexpr double kStep = 0.05;
    double lo = 0.0;
    for (double t = kStep; t <= horizon + 1e-12; t += kStep) {
      if (path_station(t) >= target) {
        double hi = t;
        for (int i = 0; i < 60; ++i) {
          const double mid = 0.5 * (lo + hi);
          (path_station(mid) >= target ? hi : lo) = mid;
        }
        return hi;
      }
      lo = t;
    }
    return kInfinity;
  };
  CrossingOffsets o;
  o.a_in = first_reach(p.first_lane_center);
  o.a_out = first_reach(p.first_lane_center + len);
  o.b_in = first_reach(p.second_lane_center);
  o.b_out = first_reach(p.second_lane_center + len);
  return o;
}

// ---------------------------------------------------------------------------

ArrivalStream::ArrivalStream(const OpposingTrafficParams& p, double speed_limit, std::uint64_t seed,
                             std::uint64_t lane_salt)
    : params_(p), speed_limit_(speed_limit) {
  if (!(p.volume_vphpln > 0.0)) throw std::invalid_argument("opposing volume must be positive");
  if (3600.0 / p.volume_vphpln <= p.min_headway)
    throw std::invalid_argument("opposing volume too high for the minimum headway");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(lane_salt), 0x9e3779b9u};
  rng_.seed(seq);
}

double ArrivalStream::uniform() {
  // 53 random bits; identical on every platform, unlike the std distributions.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double ArrivalStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Arrival ArrivalStream::next() {
  const double mean = 3600.0 / params_.volume_vphpln;
  clock_ += std::max(params_.min_headway, -mean * std::log(1.0 - uniform()));
  const double mu = params_.speed_mean_factor * speed_limit_;
  const double sd = params_.speed_band_factor * speed_limit_ / 1.96;
  const double lo = params_.speed_min_factor * speed_limit_;
  const double hi = params_.speed_max_factor * speed_limit_;
  double v;
  do {
    v = mu + sd * normal();
  } while (v < lo || v > hi);
  return {clock_, v};
}

// ---------------------------------------------------------------------------

double car_follow(const IdmParams& p, const std::optional<Leader>& leader, double speed,
                  double desired_speed) {
  const double v0 = std::max(desired_speed, 1e-6);
  double a = p.max_accel * (1.0 - std::pow(speed / v0, p.exponent));
  if (leader) {
    if (leader->gap <= 0.0) return p.min_accel;
    const double dv = speed - leader->speed;
    const double s_star =
        p.min_gap + std::max(0.0, speed * p.time_headway +
                                      speed * dv / (2.0 * std::sqrt(p.max_accel * p.comfortable_decel)));
    const double r = s_star / leader->gap;
    a -= p.max_accel * r * r;
  }
  return std::clamp(a, p.min_accel, p.max_accel);
}

double idm_equilibrium_gap(const IdmParams& p, double v, double desired_speed) {
  const double ratio = 1.0 - std::pow(v / desired_speed, p.exponent);
  if (ratio <= 0.0) return kInfinity;
  return (p.min_gap + v * p.time_headway) / std::sqrt(ratio);
}

double AggressiveFollower::command(const std::optional<Leader>& leader, double speed, double limit,
                                   double dt) {
  double closing = 0.0;
  if (leader) {
    closing = speed - leader->speed;
    const double ttc = closing > 0.0 ? leader->gap / closing : kInfinity;
    const bool trigger = leader->gap < p_.hard_gap || ttc < p_.hard_ttc;
    if (!braking_ && trigger) {
      braking_ = true;
      if (closing > 0.0) ++onsets_;
    }
    // The ttc trigger can fire beyond the release gap; hold until it clears too.
    else if (braking_ && leader->gap > p_.release_gap && !trigger) braking_ = false;
  } else {
    braking_ = false;
  }
  if (braking_) return closing > 0.0 && speed > 0.0 ? p_.hard_decel : 0.0;
  // Track the posted limit regardless of what is ahead.
  return std::clamp((limit - speed) / dt, -p_.track_accel, p_.track_accel);
}

// ---------------------------------------------------------------------------

World::World(const WorldParams& params, const SceneGeometry& scene,
             std::unique_ptr<SubjectPolicy> policy)
    : params_(params),
      scene_(scene),
      policy_(std::move(policy)),
      follower_model_(params.follower),
      stream_a_(params.opposing, scene.layout.major_speed_limit, params.seed, 1),
      stream_b_(params.opposing, scene.layout.major_speed_limit, params.seed, 2) {
  if (!(params.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!policy_) throw std::invalid_argument("world needs a subject policy");
}

const VehicleState* World::subject() const {
  for (const auto& v : vehicles_)
    if (v.id == subject_id_) return &v;
  return nullptr;
}

const VehicleState* World::follower() const {
  for (const auto& v : vehicles_)
    if (v.id == follower_id_) return &v;
  return nullptr;
}

OpposingLane World::lane_of(const VehicleState& v) const {
  return v.lane == Lane::MajorDir2Lane1 ? OpposingLane::A : OpposingLane::B;
}

int World::add_scripted_opposing(OpposingLane lane, double station, double speed,
                                 AccelScript script) {
  VehicleState v;
  v.id = next_id_++;
  v.role = Role::OpposingThrough;
  v.lane = lane == OpposingLane::A ? Lane::MajorDir2Lane1 : Lane::MajorDir2Lane2;
  v.station = station;
  v.speed = speed;
  v.desired_speed = speed;
  v.spawn_time = time_;
  vehicles_.push_back(v);
  scripted_.push_back({v.id, std::move(script)});
  return v.id;
}

int World::add_obstacle(double station, double speed, AccelScript script) {
  VehicleState v;
  v.id = next_id_++;
  v.role = Role::Obstacle;
  v.lane = Lane::MajorDir1Lane1;
  v.station = station;
  v.speed = speed;
  v.desired_speed = speed;
  v.spawn_time = time_;
  vehicles_.push_back(v);
  scripted_.push_back({v.id, std::move(script)});
  return v.id;
}

void World::spawn_due() {
  auto spawn_opposing = [&](std::optional<Arrival>& pending, ArrivalStream& stream, Lane lane) {
    for (;;) {
      if (!pending) pending = stream.next();
      if (pending->time > time_ + 1e-9) return;
      // Nearest vehicle already in the lane decides whether there is room.
      const VehicleState* last = nullptr;
      for (const auto& v : vehicles_)
        if (v.role == Role::OpposingThrough && v.lane == lane && (!last || v.station < last->station))
          last = &v;
      double speed = pending->desired_speed;
      if (last) {
        const double gap = last->station - last->length;
        if (gap < params_.idm.min_gap + 0.5) return;  // try again next step
        if (gap < idm_equilibrium_gap(params_.idm, speed, pending->desired_speed))
          speed = std::min(speed, last->speed);
      }
      VehicleState v;
      v.id = next_id_++;
      v.role = Role::OpposingThrough;
      v.lane = lane;
      v.speed = speed;
      v.desired_speed = pending->desired_speed;
      v.spawn_time = time_;
      vehicles_.push_back(v);
      events_.push_back({time_, EventKind::Spawn, v.id, to_string(lane)});
      pending.reset();
    }
  };
  if (random_traffic_) {
    spawn_opposing(pending_a_, stream_a_, Lane::MajorDir2Lane1);
    spawn_opposing(pending_b_, stream_b_, Lane::MajorDir2Lane2);
  }
  if (!subject_spawned_ && time_ >= params_.warmup - 1e-9) {
    VehicleState v;
    v.id = next_id_++;
    v.role = Role::SubjectCAV;
    v.lane = Lane::MajorDir1Lane1;
    v.speed = params_.subject_entry_speed;
    v.length = scene_.subject_length;
    v.desired_speed = scene_.layout.major_speed_limit;
    v.spawn_time = time_;
    subject_id_ = v.id;
    subject_spawned_ = true;
    outcome_.subject_entry = time_;
    vehicles_.push_back(v);
    events_.push_back({time_, EventKind::Spawn, v.id, "subject"});
  }
  if (params_.include_follower && !follower_spawned_ &&
      time_ >= params_.warmup + params_.follower.start_offset - 1e-9) {
    VehicleState v;
    v.id = next_id_++;
    v.role = Role::Follower;
    v.lane = Lane::MajorDir1Lane1;
    v.speed = params_.follower.entry_speed;
    v.desired_speed = scene_.layout.major_speed_limit;
    v.spawn_time = time_;
    follower_id_ = v.id;
    follower_spawned_ = true;
    outcome_.follower_entry = time_;
    vehicles_.push_back(v);
    events_.push_back({time_, EventKind::Spawn, v.id, "follower"});
  }
}

std::optional<Leader> World::leader_of(std::size_t idx) const {
  const VehicleState& me = vehicles_[idx];
  std::optional<Leader> best;
  for (std::size_t k = 0; k < vehicles_.size(); ++k) {
    const VehicleState& o = vehicles_[k];
    if (k == idx || o.role != Role::OpposingThrough || o.lane != me.lane || o.station <= me.station)
      continue;
    const double gap = o.station - o.length - me.station;
    if (!best || gap < best->gap) best = Leader{gap, o.speed};
  }
  return best;
}

std::optional<Leader> World::follower_leader() const {
  const VehicleState* f = follower();
  if (!f) return std::nullopt;
  std::optional<Leader> best;
  for (const auto& o : vehicles_) {
    const bool in_lane = o.role == Role::Obstacle ||
                         (o.role == Role::SubjectCAV && o.station <= scene_.shared_lane_clear);
    if (!in_lane || o.station <= f->station) continue;
    const double gap = o.station - o.length - f->station;
    if (!best || gap < best->gap) best = Leader{gap, o.speed};
  }
  return best;
}

OpposingSnapshot World::snapshot(double range_from_conflict) const {
  OpposingSnapshot s;
  s.timestamp = time_;
  s.visibility_range = range_from_conflict;
  for (const auto& v : vehicles_) {
    if (v.role != Role::OpposingThrough) continue;
    const OpposingLane l = lane_of(v);
    const double dist = scene_.opposing_conflict_station - v.station;
    if (dist > range_from_conflict) continue;
    if (dist + scene_.d_l(l) + v.length <= 0.0) continue;
    s.vehicles.push_back({v.id, l, dist, v.speed, v.length});
  }
  return s;
}

SubjectObservation World::observe_subject() const {
  const VehicleState& s = *subject();
  SubjectObservation o;
  o.time = time_;
  o.dt = params_.dt;
  o.station = s.station;
  o.speed = s.speed;
  o.accel = s.accel;
  o.length = s.length;
  o.speed_limit = scene_.layout.major_speed_limit;
  for (const auto& v : vehicles_) {
    if (v.role != Role::Obstacle || v.station <= s.station) continue;
    const double gap = v.station - v.length - s.station;
    if (gap > params_.sensors.front_range) continue;
    if (!o.front || gap < o.front->gap) o.front = FrontObject{gap, v.speed};
  }
  if (const VehicleState* f = follower(); f && s.station <= scene_.shared_lane_clear) {
    const double rear = s.station - s.length;
    const double gap = rear - f->station;
    if (gap >= 0.0 && gap <= params_.sensors.rear_camera_range) o.rear = RearSample{time_, rear, gap};
  }
  const double to_bar = std::max(0.0, scene_.stop_bar - s.station);
  o.onboard = snapshot(params_.sensors.front_range - to_bar);
  if (policy_->uses_rsu()) o.rsu = snapshot(params_.sensors.rsu_range);
  return o;
}

bool World::subject_in_conflict(OpposingLane l) const {
  const VehicleState* s = subject();
  if (!s) return false;
  const double p = s->station - scene_.stop_bar;
  const auto& tp = scene_.path;
  if (l == OpposingLane::A) return p >= tp.first_lane_center && p - s->length < tp.first_lane_center;
  return p >= tp.second_lane_center && p - s->length < tp.second_lane_center;
}

void World::step() {
  const double dt = params_.dt;
  spawn_due();

  // Commands from the current state for everyone, then a common update.
  std::vector<double> accel(vehicles_.size(), 0.0);
  last_decision_.clear();
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    const VehicleState& v = vehicles_[i];
    const auto scripted = std::find_if(scripted_.begin(), scripted_.end(),
                                       [&](const Scripted& s) { return s.id == v.id; });
    if (scripted != scripted_.end()) {
      accel[i] = scripted->script ? scripted->script(time_, v) : 0.0;
      continue;
    }
    switch (v.role) {
      case Role::OpposingThrough:
        accel[i] = car_follow(params_.idm, leader_of(i), v.speed, v.desired_speed);
        break;
      case Role::Follower:
        accel[i] = follower_model_.command(follower_leader(), v.speed,
                                           scene_.layout.major_speed_limit, dt);
        break;
      case Role::SubjectCAV: {
        Command c = policy_->decide(observe_subject());
        accel[i] = c.accel;
        last_decision_ = std::move(c.decision);
        break;
      }
      case Role::Obstacle: break;
    }
  }

  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    VehicleState& v = vehicles_[i];
    const double nv = std::max(0.0, v.speed + accel[i] * dt);
    v.accel = (nv - v.speed) / dt;
    v.speed = nv;
    v.station += nv * dt;
  }
  time_ += dt;
  detect();
}

void World::detect() {
  const VehicleState* s = subject();
  const VehicleState* f = follower();

  // Conflict areas.
  for (OpposingLane l : {OpposingLane::A, OpposingLane::B}) {
    const bool in = subject_in_conflict(l);
    bool& was = l == OpposingLane::A ? in_conflict_a_ : in_conflict_b_;
    const char* name = l == OpposingLane::A ? "A" : "B";
    if (in != was) {
      events_.push_back({time_, in ? EventKind::ConflictEntry : EventKind::ConflictExit, subject_id_, name});
      was = in;
    }
    if (!in) continue;
    const double cp = scene_.opposing_conflict_station;
    for (const auto& o : vehicles_) {
      if (o.role != Role::OpposingThrough || lane_of(o) != l) continue;
      const bool occupies = o.station > cp - scene_.d_f(l) && o.station - o.length < cp + scene_.d_l(l);
      if (!occupies) continue;
      const std::string detail = std::string("conflict_") + name + ":" + std::to_string(o.id);
      const bool seen = std::any_of(events_.begin(), events_.end(), [&](const Event& e) {
        return e.kind == EventKind::Collision && e.detail == detail;
      });
      if (!seen) {
        events_.push_back({time_, EventKind::Collision, subject_id_, detail});
        ++outcome_.conflict_collisions;
      }
    }
  }

  // Shared lane: subject/follower and obstacles.
  auto overlap = [](const VehicleState& ahead, const VehicleState& behind) {
    return behind.station > ahead.station - ahead.length;
  };
  if (s && f && !collided_lane_ && s->station <= scene_.shared_lane_clear && s->station >= f->station &&
      overlap(*s, *f)) {
    collided_lane_ = true;
    ++outcome_.same_lane_collisions;
    events_.push_back({time_, EventKind::Collision, f->id, "same_lane"});
  }
  for (const auto& o : vehicles_) {
    if (o.role != Role::Obstacle) continue;
    for (const VehicleState* v : {s, f}) {
      if (v && v->station <= o.station && overlap(o, *v)) {
        const std::string detail = "obstacle:" + std::to_string(v->id);
        const bool seen = std::any_of(events_.begin(), events_.end(), [&](const Event& e) {
          return e.kind == EventKind::Collision && e.detail == detail;
        });
        if (!seen) {
          ++outcome_.same_lane_collisions;
          events_.push_back({time_, EventKind::Collision, v->id, detail});
        }
      }
    }
  }

  if (f && follower_model_.brake_onsets() > 0) {
    // Count transitions into braking as onset events.
    const int logged = static_cast<int>(std::count_if(events_.begin(), events_.end(), [&](const Event& e) {
      return e.kind == EventKind::HardBrakeOnset;
    }));
    if (follower_model_.brake_onsets() > logged)
      events_.push_back({time_, EventKind::HardBrakeOnset, f->id, "follower"});
  }

  // Tracked-vehicle bookkeeping and trace rows.
  if (s) {
    if (s->station < scene_.stop_bar)
      outcome_.max_subject_approach_speed = std::max(outcome_.max_subject_approach_speed, s->speed);
    if (outcome_.subject_clear == kInfinity && s->station >= scene_.turn_end) {
      outcome_.subject_clear = time_;
      events_.push_back({time_, EventKind::Arrival, s->id, "subject"});
    }
    std::string flags;
    if (in_conflict_a_) flags += "conflict_A;";
    if (in_conflict_b_) flags += "conflict_B;";
    if (!flags.empty()) flags.pop_back();
    trace_.push_back({time_, s->id, Role::SubjectCAV,
                      s->station <= scene_.stop_bar ? Lane::MajorDir1Lane1 : Lane::Minor, s->station,
                      s->speed, s->accel, flags, last_decision_});
  }
  if (f) {
    if (outcome_.follower_clear == kInfinity) {
      outcome_.follower_accel.push_back(f->accel);
      if (f->speed < 0.5) outcome_.follower_dwell += params_.dt;
      if (f->station >= scene_.stop_bar + f->length) {
        outcome_.follower_clear = time_;
        events_.push_back({time_, EventKind::Arrival, f->id, "follower"});
      }
    }
    trace_.push_back({time_, f->id, Role::Follower, Lane::MajorDir1Lane1, f->station, f->speed, f->accel,
                      follower_model_.braking() ? "braking" : "", ""});
  }

  // Retire vehicles that left the modelled area.
  const double follower_exit = scene_.stop_bar + scene_.layout.intersection_depth + 60.0;
  std::vector<int> gone;
  for (const auto& v : vehicles_) {
    const bool out = (v.role == Role::OpposingThrough && v.station > scene_.opposing_exit_station) ||
                     (v.role == Role::SubjectCAV && v.station > scene_.route_end) ||
                     (v.role == Role::Follower && v.station > follower_exit);
    if (out) gone.push_back(v.id);
  }
  if (!gone.empty()) {
    std::erase_if(vehicles_, [&](const VehicleState& v) {
      return std::find(gone.begin(), gone.end(), v.id) != gone.end();
    });
    std::erase_if(scripted_, [&](const Scripted& sc) {
      return std::find(gone.begin(), gone.end(), sc.id) != gone.end();
    });
  }
}

bool World::done() const {
  if (!subject_spawned_) return false;
  const bool subject_done = outcome_.subject_clear < kInfinity;
  const bool follower_done = !params_.include_follower || outcome_.follower_clear < kInfinity;
  return subject_done && follower_done;
}

const RunOutcome& World::run() {
  const double cap = params_.warmup + params_.max_duration;
  while (!done()) {
    if (time_ >= cap - 1e-9) {
      outcome_.timed_out = true;
      break;
    }
    step();
  }
  outcome_.finished = done();
  return outcome_;
}

}  // namespace lefturn
