#include <doctest.h>

#include <map>
#include <random>

#include "lefturn/config.hpp"
#include "lefturn/controllers.hpp"
#include "lefturn/metrics.hpp"
#include "lefturn/world.hpp"
#include "oracles.hpp"

using namespace lefturn;

namespace {

SceneGeometry default_scene() { return scene_of(ScenarioConfig{}); }

OpposingObserved veh(int id, OpposingLane l, double dist, double speed) {
  OpposingObserved v;
  v.id = id;
  v.lane = l;
  v.distance_to_conflict = dist;
  v.speed = speed;
  return v;
}

bool inside(const std::vector<TimeInterval>& ivs, double t) {
  for (const auto& iv : ivs)
    if (t >= iv.start && t <= iv.end) return true;
  return false;
}

// World on the default scene with the given controller and no random traffic.
std::unique_ptr<World> scripted_world(ControllerKind k, std::uint64_t seed, bool follower = true) {
  ScenarioConfig c;
  c.include_follower = follower;
  c.max_duration = 200.0;
  const auto scene = scene_of(c);
  auto w = std::make_unique<World>(world_params(c, 600.0, seed), scene, make_controller(k, scene, c.controller));
  w->disable_random_traffic();
  return w;
}

double conflict_station() { return default_scene().opposing_conflict_station; }

}  // namespace

TEST_SUITE("world") {

TEST_CASE("occupancy of a single vehicle") {
  const auto iv = occupancy_interval(veh(1, OpposingLane::A, 100.0, 10.0), 5.4, 1.2, 0.0);
  REQUIRE(iv);
  CHECK(iv->start == doctest::Approx(9.46));
  CHECK(iv->end == doctest::Approx(10.58));
  // passed vehicles and far stopped vehicles never occupy
  CHECK_FALSE(occupancy_interval(veh(2, OpposingLane::A, -10.0, 10.0), 5.4, 1.2, 0.0));
  CHECK_FALSE(occupancy_interval(veh(3, OpposingLane::A, 50.0, 0.0), 5.4, 1.2, 0.0));
  const auto stuck = occupancy_interval(veh(4, OpposingLane::A, 2.0, 0.0), 5.4, 1.2, 3.0);
  REQUIRE(stuck);
  CHECK(stuck->start == 3.0);
  CHECK(stuck->end == kInfinity);
}

TEST_CASE("empty road gives one unbounded window") {
  OpposingSnapshot s;
  s.timestamp = 12.5;
  const auto g = predict_gaps(s, default_scene(), 3.0, {});
  REQUIRE(g.windows.size() == 1);
  CHECK(g.windows[0].start == 12.5);
  CHECK(g.windows[0].end == kInfinity);
}

TEST_CASE("single vehicle splits the window") {
  auto scene = default_scene();
  scene.conflicts.d_f_first = 5.4;
  scene.conflicts.d_l_first = 1.2;
  OpposingSnapshot s;
  s.vehicles.push_back(veh(1, OpposingLane::A, 100.0, 10.0));
  const auto g = predict_gaps(s, scene, 0.0, {});
  REQUIRE(g.windows.size() == 2);
  CHECK(g.windows[0].start == 0.0);
  CHECK(g.windows[0].end == doctest::Approx(9.46));
  CHECK(g.windows[1].start == doctest::Approx(10.58));
  CHECK(g.windows[1].end == kInfinity);
}

TEST_CASE("overlapping occupancies merge") {
  const auto m = merge_intervals({{5.0, 8.0}, {1.0, 2.0}, {7.0, 9.0}, {9.0, 9.5}});
  REQUIRE(m.size() == 2);
  CHECK(m[0].start == 1.0);
  CHECK(m[0].end == 2.0);
  CHECK(m[1].start == 5.0);
  CHECK(m[1].end == 9.5);
}

TEST_CASE("windows are the complement of the occupancies") {
  const auto scene = default_scene();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> D(-20.0, 300.0), V(0.0, 16.0), U(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    OpposingSnapshot s;
    s.timestamp = 50.0;
    const int n = static_cast<int>(U(rng) * 12);
    for (int i = 0; i < n; ++i)
      s.vehicles.push_back(veh(i, U(rng) < 0.5 ? OpposingLane::A : OpposingLane::B, D(rng), V(rng) < 1.0 ? 0.0 : V(rng)));
    const double eta = 20.0 * U(rng);
    const auto g = predict_gaps(s, scene, eta, {});

    // independent occupancy list
    std::vector<TimeInterval> all;
    for (const auto& v : s.vehicles) {
      const double df = v.lane == OpposingLane::A ? scene.conflicts.d_f_first : scene.conflicts.d_f_second;
      const double dl = v.lane == OpposingLane::A ? scene.conflicts.d_l_first : scene.conflicts.d_l_second;
      const double far = v.distance_to_conflict + dl + v.length, near = v.distance_to_conflict - df;
      if (far <= 0.0) continue;
      if (v.speed == 0.0) {
        if (near <= 0.0) all.push_back({50.0, oracle::kInf});
        continue;
      }
      all.push_back({50.0 + std::max(0.0, near) / v.speed, 50.0 + far / v.speed});
    }
    for (std::size_t i = 1; i < g.windows.size(); ++i) CHECK(g.windows[i - 1].end < g.windows[i].start);
    for (const auto& w : g.windows) CHECK(w.end > w.start);
    for (int k = 0; k < 400; ++k) {
      const double t = 50.0 + 80.0 * U(rng);
      CHECK(launch_feasible(g, t) == !inside(all, t));
    }

    // vehicle sets partition each lane
    std::vector<int> a_ids, b_ids;
    for (const auto& v : s.vehicles) (v.lane == OpposingLane::A ? a_ids : b_ids).push_back(v.id);
    auto joined = [](std::vector<int> x, const std::vector<int>& y) {
      x.insert(x.end(), y.begin(), y.end());
      std::sort(x.begin(), x.end());
      return x;
    };
    CHECK(joined(g.sets.a_pass, g.sets.a_approach) == joined(a_ids, {}));
    CHECK(joined(g.sets.b_pass, g.sets.b_approach) == joined(b_ids, {}));
  }
}

TEST_CASE("pass and approach sets follow the CAV arrival") {
  const auto scene = default_scene();
  OpposingSnapshot s;
  s.vehicles.push_back(veh(1, OpposingLane::A, 20.0, 10.0));   // through in ~2.6 s
  s.vehicles.push_back(veh(2, OpposingLane::B, 200.0, 10.0));  // arrives in ~19 s
  const auto g = predict_gaps(s, scene, 5.0, {});
  CHECK(g.sets.a_pass == std::vector<int>{1});
  CHECK(g.sets.b_approach == std::vector<int>{2});
  CHECK(g.sets.a_approach.empty());
  CHECK(g.sets.b_pass.empty());
}

TEST_CASE("opposing headways and speeds") {
  OpposingTrafficParams p;
  p.volume_vphpln = 600.0;
  ArrivalStream s(p, 13.4, 99, 1);
  double prev = 0.0, sum = 0.0, min_h = 1e9;
  int in_band = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto a = s.next();
    sum += a.time - prev;
    min_h = std::min(min_h, a.time - prev);
    prev = a.time;
    if (a.desired_speed >= 9.38 && a.desired_speed <= 14.74) ++in_band;
    CHECK(a.desired_speed >= 0.5 * 13.4);
    CHECK(a.desired_speed <= 1.2 * 13.4);
  }
  CHECK(std::fabs(sum / n - 6.0) / 6.0 < 0.05);
  CHECK(min_h >= 1.0);
  CHECK(std::fabs(100.0 * in_band / n - 95.0) <= 2.0);
}

TEST_CASE("arrival streams replay") {
  OpposingTrafficParams p;
  ArrivalStream a(p, 13.4, 5, 1), b(p, 13.4, 5, 1), c(p, 13.4, 5, 2);
  bool differs = false;
  for (int i = 0; i < 200; ++i) {
    const auto x = a.next(), y = b.next(), z = c.next();
    CHECK(x.time == y.time);
    CHECK(x.desired_speed == y.desired_speed);
    differs |= x.time != z.time;
  }
  CHECK(differs);
}

TEST_CASE("car following limits") {
  IdmParams p;
  CHECK(std::fabs(car_follow(p, std::nullopt, 13.4, 13.4)) < 1e-12);
  CHECK(car_follow(p, Leader{0.0, 0.0}, 10.0, 13.4) == p.min_accel);
  CHECK(car_follow(p, Leader{0.01, 0.0}, 10.0, 13.4) == p.min_accel);
  CHECK(car_follow(p, std::nullopt, 0.0, 13.4) == doctest::Approx(p.max_accel));
}

TEST_CASE("car following equilibrium spacing") {
  IdmParams p;
  const double s = oracle::idm_equilibrium(12.0, 15.0);
  CHECK(idm_equilibrium_gap(p, 12.0, 15.0) == doctest::Approx(s).epsilon(1e-9));
  CHECK(std::fabs(car_follow(p, Leader{s, 12.0}, 12.0, 15.0)) < 1e-9);
  CHECK(car_follow(p, Leader{0.8 * s, 12.0}, 12.0, 15.0) < 0.0);
  CHECK(car_follow(p, Leader{1.2 * s, 12.0}, 12.0, 15.0) > 0.0);
}

TEST_CASE("aggressive follower ignores a distant leader") {
  AggressiveFollower f({});
  CHECK(f.command(Leader{100.0, 5.0}, 9.0, 13.4, 0.1) > 0.0);
  CHECK_FALSE(f.braking());
}

TEST_CASE("aggressive follower brakes hard when close") {
  AggressiveFollower f({});
  CHECK(f.command(Leader{8.0, 5.0}, 12.0, 13.4, 0.1) == -6.0);
  CHECK(f.braking());
  CHECK(f.brake_onsets() == 1);
  // released only past the release gap
  f.command(Leader{14.0, 13.0}, 12.0, 13.4, 0.1);
  CHECK(f.braking());
  f.command(Leader{16.0, 13.0}, 12.0, 13.4, 0.1);
  CHECK_FALSE(f.braking());
}

TEST_CASE("limit-speed follower behind a stopped leader brakes exactly once") {
  AggressiveFollowerParams p;
  AggressiveFollower f(p);
  const double dt = 0.1, leader = 300.0;
  double x = 0.0, v = 13.4, trigger_gap = -1.0, trigger_v = 0.0;
  std::vector<double> acc;
  for (int i = 0; i < 600; ++i) {
    const double gap = leader - x;
    const double a = f.command(Leader{gap, 0.0}, v, 13.4, dt);
    if (a == p.hard_decel && trigger_gap < 0.0) {
      trigger_gap = gap;
      trigger_v = v;
    }
    const double v_new = std::max(0.0, v + a * dt);
    acc.push_back((v_new - v) / dt);
    v = v_new;
    x += v * dt;
  }
  CHECK(f.brake_onsets() == 1);
  CHECK(detect_hard_brakes(acc, dt, {}).count == 1);
  CHECK(v == 0.0);
  REQUIRE(trigger_gap > 0.0);
  // constant-deceleration stop from the trigger point
  const double final_gap = leader - x;
  const double expect = trigger_gap - trigger_v * trigger_v / (2.0 * -p.hard_decel);
  CHECK(final_gap > 0.0);
  CHECK(std::fabs(final_gap - expect) <= trigger_v * dt);
  CHECK(trigger_gap <= std::max(p.hard_gap, p.hard_ttc * trigger_v));
}

TEST_CASE("uniform motion step") {
  auto w = scripted_world(ControllerKind::BaseAv1, 1, false);
  const int id = w->add_scripted_opposing(OpposingLane::A, -500.0, 10.0, {});
  w->step();
  for (const auto& v : w->vehicles())
    if (v.id == id) CHECK(v.station == doctest::Approx(-499.0).epsilon(1e-12));
}

TEST_CASE("speeds stay non-negative and stations monotone") {
  ScenarioConfig c;
  for (auto k : {ControllerKind::BaseAv1, ControllerKind::SituationAware}) {
    const auto scene = scene_of(c);
    World w(world_params(c, 1000.0, 3), scene, make_controller(k, scene, c.controller));
    w.run();
    std::map<int, double> last;
    for (const auto& r : w.trace()) {
      CHECK(r.speed >= 0.0);
      if (last.count(r.vehicle_id)) CHECK(r.station >= last[r.vehicle_id]);
      last[r.vehicle_id] = r.station;
    }
  }
}

TEST_CASE("same seed replays bit for bit") {
  ScenarioConfig c;
  const auto scene = scene_of(c);
  World a(world_params(c, 800.0, 21), scene, make_controller(ControllerKind::SituationAware, scene, c.controller));
  World b(world_params(c, 800.0, 21), scene, make_controller(ControllerKind::SituationAware, scene, c.controller));
  a.run();
  b.run();
  REQUIRE(a.events().size() == b.events().size());
  for (std::size_t i = 0; i < a.events().size(); ++i) {
    CHECK(a.events()[i].time == b.events()[i].time);
    CHECK(a.events()[i].kind == b.events()[i].kind);
    CHECK(a.events()[i].detail == b.events()[i].detail);
  }
  REQUIRE(a.trace().size() == b.trace().size());
  for (std::size_t i = 0; i < a.trace().size(); ++i) {
    CHECK(a.trace()[i].station == b.trace()[i].station);
    CHECK(a.trace()[i].accel == b.trace()[i].accel);
  }
}

TEST_CASE("constant-speed opposing traffic never meets the turning vehicle") {
  std::uniform_real_distribution<double> H(1.5, 12.0), V(9.0, 14.5);
  const double xc = conflict_station();
  int turned = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    for (auto k : {ControllerKind::BaseAv1, ControllerKind::BaseAv2, ControllerKind::SituationAware}) {
      auto w = scripted_world(k, seed);
      std::mt19937_64 r(seed);
      for (auto lane : {OpposingLane::A, OpposingLane::B}) {
        // arrivals at the conflict point from t = 5 s to t = 200 s, each at its own constant speed
        double t = 5.0;
        while (t < 200.0) {
          const double v = V(r);
          w->add_scripted_opposing(lane, xc - v * t, v, {});
          t += H(r);
        }
      }
      const auto& o = w->run();
      CHECK(o.conflict_collisions == 0);
      CHECK(o.same_lane_collisions == 0);
      turned += o.subject_clear < kInfinity ? 1 : 0;
    }
  }
  CHECK(turned > 60);
}

TEST_CASE("opposing vehicle speeding up after the prediction") {
  // A slow vehicle that would leave a gap ahead of it, then accelerates hard
  // toward the conflict point once the turning vehicle is committed.
  const double xc = conflict_station();
  for (double t_kick = 55.0; t_kick <= 75.0; t_kick += 1.0) {
    auto w = scripted_world(ControllerKind::SituationAware, 4);
    w->add_scripted_opposing(OpposingLane::A, xc - 500.0, 5.0, [t_kick](double t, const VehicleState& v) {
      return t >= t_kick && v.speed < 20.0 ? 4.0 : 0.0;
    });
    w->add_scripted_opposing(OpposingLane::B, xc - 700.0, 6.0, [t_kick](double t, const VehicleState& v) {
      return t >= t_kick + 2.0 && v.speed < 22.0 ? 4.0 : 0.0;
    });
    const auto& o = w->run();
    CHECK(o.conflict_collisions == 0);
  }
}

}
