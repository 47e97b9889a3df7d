#include "lefturn/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lefturn {

using nlohmann::json;

namespace {

const char* to_string(TraceMode m) {
  switch (m) {
    case TraceMode::All: return "all";
    case TraceMode::First: return "first";
    case TraceMode::None: return "none";
  }
  return "?";
}

TraceMode trace_mode_from_string(const std::string& s) {
  if (s == "all") return TraceMode::All;
  if (s == "first") return TraceMode::First;
  if (s == "none") return TraceMode::None;
  throw ConfigError("traces must be one of all, first, none (got '" + s + "')");
}

// Field tables. The same visitor drives parsing and serialisation, so the two
// cannot drift apart.
template <class V> void fields(V& v, IntersectionLayout& l) {
  v("lane_width", l.lane_width);
  v("major_lanes_per_direction", l.major_lanes_per_direction);
  v("minor_lanes", l.minor_lanes);
  v("major_length", l.major_length);
  v("minor_speed_limit", l.minor_speed_limit);
  v("major_speed_limit", l.major_speed_limit);
  v("stop_line_position", l.stop_line_position);
  v("intersection_depth", l.intersection_depth);
  v("minor_length", l.minor_length);
}
template <class V> void fields(V& v, ConflictParams& c) {
  v("sigma", c.sigma);
  v("threshold", c.threshold);
  v("vehicle_width", c.vehicle_width);
  v("formula", c.formula);
}
template <class V> void fields(V& v, OpposingTrafficParams& o) {
  v("min_headway", o.min_headway);
  v("speed_mean_factor", o.speed_mean_factor);
  v("speed_band_factor", o.speed_band_factor);
  v("speed_min_factor", o.speed_min_factor);
  v("speed_max_factor", o.speed_max_factor);
}
template <class V> void fields(V& v, IdmParams& p) {
  v("max_accel", p.max_accel);
  v("comfortable_decel", p.comfortable_decel);
  v("min_gap", p.min_gap);
  v("time_headway", p.time_headway);
  v("exponent", p.exponent);
  v("min_accel", p.min_accel);
}
template <class V> void fields(V& v, AggressiveFollowerParams& p) {
  v("hard_gap", p.hard_gap);
  v("hard_ttc", p.hard_ttc);
  v("hard_decel", p.hard_decel);
  v("release_gap", p.release_gap);
  v("track_accel", p.track_accel);
  v("entry_speed", p.entry_speed);
}
template <class V> void fields(V& v, SensorParams& p) {
  v("rear_camera_range", p.rear_camera_range);
  v("front_range", p.front_range);
  v("rsu_range", p.rsu_range);
}
template <class V> void fields(V& v, ApproachLimits& p) {
  v("ramp_accel", p.ramp_accel);
  v("v_floor", p.v_floor);
}
template <class V> void fields(V& v, InflowProblem& p) {
  v("T_max", p.T_max);
  v("v_T", p.v_T);
  v("J_o", p.J_o);
  v("j", p.j);
}
template <class V> void fields(V& v, OutflowProblem& p) {
  v("T_max", p.T_max);
  v("T_min", p.T_min);
  v("v_T", p.v_T);
  v("J_o", p.J_o);
  v("j", p.j);
}
template <class V> void fields(V& v, BaseAvProblem& p) {
  v("v_in", p.v_in);
  v("a_in", p.a_in);
  v("T_max", p.T_max);
}
template <class V> void fields(V& v, IntentModelParams& p) {
  v("mean_accel_aggressive", p.mean_accel_aggressive);
  v("mean_accel_non_aggressive", p.mean_accel_non_aggressive);
  v("sigma_accel", p.sigma_accel);
  v("mean_headway_aggressive", p.mean_headway_aggressive);
  v("mean_headway_non_aggressive", p.mean_headway_non_aggressive);
  v("sigma_headway", p.sigma_headway);
  v("prior_aggressive", p.prior_aggressive);
  v("prior_non_aggressive", p.prior_non_aggressive);
  v("classify_threshold", p.classify_threshold);
  v("speed_floor", p.speed_floor);
}
template <class V> void fields(V& v, ControllerParams& p) {
  v("accepted_gap", p.accepted_gap);
  v("gap_margin", p.gap_margin);
  v("launch_zone", p.launch_zone);
  v("stopped_speed", p.stopped_speed);
  v("turn_accel", p.turn_accel);
  v("base_clearance_check", p.base_clearance_check);
  v("turn_speed", p.turn_speed);
  v("reaction_time", p.reaction_time);
  v("stop_decel", p.stop_decel);
  v("speed_threshold_margin", p.speed_threshold_margin);
  v("final_check_lead", p.final_check_lead);
  v("wait_decel", p.wait_decel);
  v("approach", p.approach);
  v("inflow", p.inflow);
  v("outflow", p.outflow);
  v("base_av", p.base_av);
  v("intent", p.intent);
  v("idm", p.idm);
}
template <class V> void fields(V& v, BrakeDetectorParams& p) {
  v("threshold_decel", p.threshold_decel);
  v("min_duration", p.min_duration);
  v("release_decel", p.release_decel);
}
template <class V> void fields(V& v, ScenarioConfig& c) {
  v("volumes", c.volumes);
  v("controllers", c.controllers);
  v("runs_per_cell", c.runs_per_cell);
  v("base_seed", c.base_seed);
  v("dt", c.dt);
  v("follower_start_offset", c.follower_start_offset);
  v("warmup", c.warmup);
  v("max_duration", c.max_duration);
  v("subject_entry_speed", c.subject_entry_speed);
  v("vehicle_length", c.vehicle_length);
  v("include_follower", c.include_follower);
  v("traces", c.traces);
  v("layout", c.layout);
  v("conflict", c.conflict);
  v("opposing", c.opposing);
  v("idm", c.idm);
  v("follower", c.follower);
  v("sensors", c.sensors);
  v("controller", c.controller);
  v("detector", c.detector);
}

struct Reader {
  const json& node;
  std::string path;
  std::vector<std::string>* warnings;
  std::set<std::string> known{};

  template <class T> void operator()(const char* key, T& out) {
    known.insert(key);
    auto it = node.find(key);
    if (it == node.end()) return;
    read(*it, out, path.empty() ? std::string(key) : path + "." + key);
  }

  void finish() const {
    for (auto it = node.begin(); it != node.end(); ++it)
      if (!known.count(it.key()))
        throw ConfigError("unknown key '" + (path.empty() ? it.key() : path + "." + it.key()) + "'");
  }

  [[noreturn]] static void type_error(const std::string& where, const char* want) {
    throw ConfigError("'" + where + "' must be " + want);
  }

  void read(const json& j, double& x, const std::string& w) {
    if (!j.is_number()) type_error(w, "a number");
    x = j.get<double>();
  }
  void read(const json& j, int& x, const std::string& w) {
    if (!j.is_number_integer()) type_error(w, "an integer");
    x = j.get<int>();
  }
  void read(const json& j, std::uint64_t& x, const std::string& w) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
      type_error(w, "a non-negative integer");
    x = j.get<std::uint64_t>();
  }
  void read(const json& j, bool& x, const std::string& w) {
    if (!j.is_boolean()) type_error(w, "true or false");
    x = j.get<bool>();
  }
  void read(const json& j, ConflictFormula& x, const std::string& w) {
    if (!j.is_string()) type_error(w, "a string");
    try {
      x = conflict_formula_from_string(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("'") + w + "': " + e.what());
    }
  }
  void read(const json& j, TraceMode& x, const std::string& w) {
    if (!j.is_string()) type_error(w, "a string");
    x = trace_mode_from_string(j.get<std::string>());
  }
  void read(const json& j, Interval& x, const std::string& w) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      type_error(w, "a two-element numeric array");
    x = Interval{j[0].get<double>(), j[1].get<double>()};
    bool swapped = false;
    x = ordered(x, &swapped);
    if (swapped) warnings->push_back("'" + w + "' bounds given high-to-low; reordered");
  }
  void read(const json& j, std::vector<double>& x, const std::string& w) {
    if (!j.is_array()) type_error(w, "an array of numbers");
    x.clear();
    for (const auto& e : j) {
      if (!e.is_number()) type_error(w, "an array of numbers");
      x.push_back(e.get<double>());
    }
  }
  void read(const json& j, std::vector<ControllerKind>& x, const std::string& w) {
    if (!j.is_array()) type_error(w, "an array of controller names");
    x.clear();
    for (const auto& e : j) {
      if (!e.is_string()) type_error(w, "an array of controller names");
      try {
        x.push_back(controller_kind_from_string(e.get<std::string>()));
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("'") + w + "': " + ex.what());
      }
    }
  }
  template <class T>
    requires std::is_class_v<T>
  void read(const json& j, T& section, const std::string& w) {
    if (!j.is_object()) type_error(w, "an object");
    Reader sub{j, w, warnings};
    fields(sub, section);
    sub.finish();
  }
};

struct Writer {
  json& node;

  template <class T> void operator()(const char* key, T& v) { node[key] = write(v); }

  static json write(double x) { return x; }
  static json write(int x) { return x; }
  static json write(std::uint64_t x) { return x; }
  static json write(bool x) { return x; }
  static json write(ConflictFormula f) { return to_string(f); }
  static json write(TraceMode m) { return to_string(m); }
  static json write(Interval& iv) { return json::array({iv.lo, iv.hi}); }
  static json write(std::vector<double>& xs) { return xs; }
  static json write(std::vector<ControllerKind>& ks) {
    json a = json::array();
    for (auto k : ks) a.push_back(to_string(k));
    return a;
  }
  template <class T>
    requires std::is_class_v<T>
  static json write(T& section) {
    json j = json::object();
    Writer w{j};
    fields(w, section);
    return j;
  }
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void check_interval(const Interval& iv, const std::string& name) {
  require(iv.lo < iv.hi, name + " must satisfy lo < hi");
}

}  // namespace

void ScenarioConfig::validate() const {
  require(!volumes.empty(), "volumes must not be empty");
  for (double v : volumes) {
    require(v > 0.0, "volumes must be positive");
    require(3600.0 / v > opposing.min_headway, "volume " + std::to_string(v) + " exceeds what the minimum headway allows");
  }
  require(!controllers.empty(), "controllers must not be empty");
  {
    auto ks = controllers;
    std::sort(ks.begin(), ks.end());
    require(std::adjacent_find(ks.begin(), ks.end()) == ks.end(), "controllers must be unique");
  }
  require(runs_per_cell >= 1 && runs_per_cell <= 100000, "runs_per_cell must be in [1, 100000]");
  require(dt > 0.0 && dt <= 1.0, "dt must be in (0, 1]");
  require(follower_start_offset >= 0.0, "follower_start_offset must be >= 0");
  require(warmup >= 0.0, "warmup must be >= 0");
  require(max_duration > 0.0, "max_duration must be > 0");
  require(vehicle_length > 0.0, "vehicle_length must be > 0");
  try {
    layout.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("layout: ") + e.what());
  }
  require(subject_entry_speed > 0.0 && subject_entry_speed <= layout.major_speed_limit,
          "subject_entry_speed must be in (0, major_speed_limit]");
  require(layout.intersection_depth > 20.0 * layout.lane_width / 9.0,
          "layout.intersection_depth must exceed the turn path's lane-centre offset");
  require(conflict.sigma >= 0.0 && conflict.threshold >= 0.0 && conflict.vehicle_width > 0.0,
          "conflict: sigma, threshold >= 0 and vehicle_width > 0");
  require(opposing.min_headway > 0.0, "opposing.min_headway must be > 0");
  require(opposing.speed_band_factor > 0.0, "opposing.speed_band_factor must be > 0");
  require(opposing.speed_min_factor > 0.0 && opposing.speed_min_factor < opposing.speed_mean_factor &&
              opposing.speed_mean_factor < opposing.speed_max_factor,
          "opposing speed factors must satisfy 0 < min < mean < max");
  require(idm.max_accel > 0.0 && idm.comfortable_decel > 0.0 && idm.min_gap >= 0.0 && idm.time_headway >= 0.0 &&
              idm.exponent > 0.0 && idm.min_accel < 0.0,
          "idm parameters out of range");
  require(follower.hard_gap > 0.0 && follower.release_gap >= follower.hard_gap && follower.hard_ttc > 0.0 &&
              follower.hard_decel < 0.0 && follower.track_accel > 0.0 && follower.entry_speed > 0.0,
          "follower parameters out of range");
  require(sensors.rear_camera_range > 0.0 && sensors.front_range > 0.0 && sensors.rsu_range > 0.0,
          "sensor ranges must be > 0");
  const ControllerParams& p = controller;
  require(p.accepted_gap >= 0.0 && p.gap_margin >= 0.0 && p.launch_zone > 0.0, "controller gap settings out of range");
  require(p.stopped_speed > 0.0, "controller.stopped_speed must be > 0");
  require(p.turn_accel > 0.0 && p.turn_speed > 0.0, "controller turn plan out of range");
  require(p.reaction_time >= 0.0 && p.stop_decel < 0.0, "controller stopping terms out of range");
  require(p.speed_threshold_margin >= 0.0 && p.final_check_lead >= 0.0 && p.wait_decel > 0.0,
          "controller margins out of range");
  require(p.approach.ramp_accel > 0.0 && p.approach.v_floor > 0.0, "controller.approach out of range");
  check_interval(p.inflow.v_T, "controller.inflow.v_T");
  check_interval(p.inflow.J_o, "controller.inflow.J_o");
  check_interval(p.inflow.j, "controller.inflow.j");
  check_interval(p.outflow.v_T, "controller.outflow.v_T");
  check_interval(p.outflow.J_o, "controller.outflow.J_o");
  check_interval(p.outflow.j, "controller.outflow.j");
  check_interval(p.base_av.v_in, "controller.base_av.v_in");
  check_interval(p.base_av.a_in, "controller.base_av.a_in");
  require(p.inflow.T_max > 0.0 && p.outflow.T_max > p.outflow.T_min && p.outflow.T_min >= 0.0 &&
              p.base_av.T_max > 0.0,
          "controller horizon settings out of range");
  require(p.inflow.v_T.lo > 0.0, "controller.inflow.v_T must be positive");
  require(p.base_av.a_in.lo > 0.0 && p.base_av.v_in.lo > 0.0, "controller.base_av bounds must be positive");
  try {
    p.intent.validate();
    detector.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  ScenarioConfig c;
  std::vector<std::string> warnings;
  Reader r{j, "", &warnings};
  fields(r, c);
  r.finish();
  const OutflowProblem defaults;
  if (c.controller.outflow.j.lo != defaults.j.lo || c.controller.outflow.j.hi != defaults.j.hi)
    warnings.push_back("controller.outflow.j overrides the default jerk-slope bounds (-0.6, -0.2)");
  c.warnings = std::move(warnings);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ScenarioConfig& c, int indent) {
  ScenarioConfig copy = c;
  return Writer::write(copy).dump(indent);
}

WorldParams world_params(const ScenarioConfig& c, double volume, std::uint64_t seed) {
  WorldParams w;
  w.dt = c.dt;
  w.warmup = c.warmup;
  w.max_duration = c.max_duration;
  w.subject_entry_speed = c.subject_entry_speed;
  w.include_follower = c.include_follower;
  w.opposing = c.opposing;
  w.opposing.volume_vphpln = volume;
  w.idm = c.idm;
  w.follower = c.follower;
  w.follower.start_offset = c.follower_start_offset;
  w.sensors = c.sensors;
  w.seed = seed;
  return w;
}

SceneGeometry scene_of(const ScenarioConfig& c) { return make_scene(c.layout, c.conflict, c.vehicle_length); }

}  // namespace lefturn
