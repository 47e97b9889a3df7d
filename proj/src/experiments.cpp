#include "lefturn/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "lefturn/controllers.hpp"
#include "lefturn/optimizer.hpp"

namespace lefturn {

namespace {

std::string num(double x, const char* f = "%.4f") {
  if (!std::isfinite(x)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string opt(const std::optional<double>& x) { return x ? num(*x, "%.2f") : "n/a"; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_num(const std::string& s) {
  if (s == "n/a") return std::nan("");
  return std::stod(s);
}

}  // namespace

std::string scenario_id(double volume, ControllerKind k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "v%g-%s", volume, to_string(k));
  return buf;
}

RunResult run_single(const ScenarioConfig& c, double volume, ControllerKind k, std::uint64_t seed,
                     bool keep_trace) {
  const SceneGeometry scene = scene_of(c);
  World world(world_params(c, volume, seed), scene, make_controller(k, scene, c.controller));
  const RunOutcome& o = world.run();

  RunResult r;
  r.outcome = o;
  RunRecord& rec = r.record;
  rec.scenario = scenario_id(volume, k);
  rec.volume = volume;
  rec.controller = k;
  rec.seed = seed;
  rec.conflict_events = o.conflict_collisions;
  rec.same_lane_events = o.same_lane_collisions;
  rec.brake_events = detect_hard_brakes(o.follower_accel, c.dt, c.detector).count;
  // A vehicle still en route at the cap gets the elapsed time (a lower bound).
  auto travel = [&](double entry, double clear) {
    if (!(entry < kInfinity)) return std::nan("");
    return (clear < kInfinity ? clear : world.time()) - entry;
  };
  rec.tt_subject = travel(o.subject_entry, o.subject_clear);
  rec.tt_follower = c.include_follower ? travel(o.follower_entry, o.follower_clear) : std::nan("");
  rec.follower_dwell = o.follower_dwell;
  if (o.conflict_collisions + o.same_lane_collisions > 0) rec.status = RunStatus::Collision;
  else if (!o.finished) rec.status = RunStatus::Infeasible;
  r.max_approach_speed = o.max_subject_approach_speed;
  r.events = world.events();
  if (keep_trace) r.trace = world.trace();
  return r;
}

int default_workers() {
  if (const char* env = std::getenv("LEFTURN_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1 && n <= 1024) return static_cast<int>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ExperimentOutput run_experiment(const ScenarioConfig& c, int workers, const std::string& out_dir) {
  c.validate();
  struct Job {
    double volume;
    ControllerKind kind;
    int run;
  };
  std::vector<Job> jobs;
  for (double v : c.volumes)
    for (ControllerKind k : c.controllers)
      for (int i = 0; i < c.runs_per_cell; ++i) jobs.push_back({v, k, i});

  std::vector<RunRecord> records(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < jobs.size(); idx = next++) {
      const Job& j = jobs[idx];
      try {
        const bool trace = !out_dir.empty() &&
                           (c.traces == TraceMode::All || (c.traces == TraceMode::First && j.run == 0));
        const std::uint64_t seed = c.base_seed + static_cast<std::uint64_t>(j.run);
        RunResult r = run_single(c, j.volume, j.kind, seed, trace);
        if (trace)
          write_trace_csv(out_dir + "/trace_" + r.record.scenario + "_" + std::to_string(seed) + ".csv", r.trace);
        records[idx] = std::move(r.record);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("run failed: " + e);

  ExperimentOutput out;
  out.records = std::move(records);
  out.summary = aggregate(out.records);
  return out;
}

void write_metrics_csv(const std::string& path, const std::vector<RunRecord>& records) {
  std::ostringstream s;
  s << "scenario,controller,seed,brake_events,tt_subject_s,tt_follower_s,collision_flag,"
       "status,volume,follower_dwell_s,conflict_events,same_lane_events\n";
  for (const auto& r : records) {
    s << r.scenario << ',' << to_string(r.controller) << ',' << r.seed << ',' << r.brake_events << ','
      << num(r.tt_subject) << ',' << num(r.tt_follower) << ',' << (r.collision() ? 1 : 0) << ','
      << to_string(r.status) << ',' << num(r.volume, "%g") << ',' << num(r.follower_dwell) << ','
      << r.conflict_events << ',' << r.same_lane_events << '\n';
  }
  write_file(path, s.str());
}

std::vector<RunRecord> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() < 12) throw std::runtime_error("malformed row in '" + path + "'");
    RunRecord r;
    r.scenario = f[0];
    r.controller = controller_kind_from_string(f[1]);
    r.seed = std::stoull(f[2]);
    r.brake_events = std::stoi(f[3]);
    r.tt_subject = parse_num(f[4]);
    r.tt_follower = parse_num(f[5]);
    r.status = f[7] == "ok" ? RunStatus::Ok : f[7] == "collision" ? RunStatus::Collision : RunStatus::Infeasible;
    r.volume = parse_num(f[8]);
    r.follower_dwell = parse_num(f[9]);
    r.conflict_events = std::stoi(f[10]);
    r.same_lane_events = std::stoi(f[11]);
    out.push_back(r);
  }
  return out;
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ostringstream s;
  s << "volume,controller,runs,collisions,infeasible,"
       "brake_mean,brake_std,"
       "tt_subject_n,tt_subject_mean,tt_subject_std,tt_subject_min,tt_subject_q1,tt_subject_median,"
       "tt_subject_q3,tt_subject_max,"
       "tt_follower_n,tt_follower_mean,tt_follower_std,tt_follower_min,tt_follower_q1,tt_follower_median,"
       "tt_follower_q3,tt_follower_max,"
       "dwell_mean,"
       "brake_red_vs_BaseAv1_pct,tt_subject_red_vs_BaseAv1_pct,tt_follower_red_vs_BaseAv1_pct,"
       "brake_red_vs_BaseAv2_pct,tt_subject_red_vs_BaseAv2_pct,tt_follower_red_vs_BaseAv2_pct\n";
  auto stats = [&](const Stats& st) {
    s << st.n << ',' << num(st.mean) << ',' << num(st.stddev) << ',' << num(st.min) << ',' << num(st.q1) << ','
      << num(st.median) << ',' << num(st.q3) << ',' << num(st.max) << ',';
  };
  auto red = [&](const std::optional<Reduction>& r) {
    if (!r) return std::string("n/a,n/a,n/a");
    return opt(r->brake) + ',' + opt(r->tt_subject) + ',' + opt(r->tt_follower);
  };
  for (const auto& r : rows) {
    s << num(r.volume, "%g") << ',' << to_string(r.controller) << ',' << r.runs << ',' << r.collisions << ','
      << r.infeasible << ',' << num(r.brake.mean) << ',' << num(r.brake.stddev) << ',';
    if (r.tt_subject.n > 0) stats(r.tt_subject);
    else s << "0,n/a,n/a,n/a,n/a,n/a,n/a,n/a,";
    if (r.tt_follower.n > 0) stats(r.tt_follower);
    else s << "0,n/a,n/a,n/a,n/a,n/a,n/a,n/a,";
    s << (r.dwell.n > 0 ? num(r.dwell.mean) : "n/a") << ',' << red(r.vs_base1) << ',' << red(r.vs_base2) << '\n';
  }
  write_file(path, s.str());
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::string s = "time,vehicle_id,role,lane,station,speed,accel,flags,decision\n";
  s.reserve(trace.size() * 64);
  char buf[160];
  for (const auto& t : trace) {
    std::snprintf(buf, sizeof buf, "%.2f,%d,%s,%s,%.3f,%.3f,%.3f,", t.time, t.vehicle_id, to_string(t.role),
                  to_string(t.lane), t.station, t.speed, t.accel);
    s += buf;
    s += t.flags;
    s += ',';
    // Decisions may contain commas in principle; keep the CSV simple.
    for (char ch : t.decision) s += ch == ',' ? ';' : ch;
    s += '\n';
  }
  write_file(path, s);
}

void write_run_info(const std::string& path, const ScenarioConfig& c) {
  nlohmann::json j;
  j["volumes"] = c.volumes;
  nlohmann::json ks = nlohmann::json::array();
  for (auto k : c.controllers) ks.push_back(to_string(k));
  j["controllers"] = ks;
  j["base_seed"] = c.base_seed;
  j["runs_per_cell"] = c.runs_per_cell;
  j["dt"] = c.dt;
  j["warmup"] = c.warmup;
  j["stop_bar"] = c.layout.stop_line_position;
  j["turn_arc_length"] = scene_of(c).path.total_arc_length;
  j["minor_length"] = c.layout.minor_length;
  write_file(path, j.dump(2) + "\n");
}

std::string comparison_report(const ScenarioConfig& c, const std::vector<SummaryRow>& rows) {
  if (c.controllers.size() < 2) throw std::invalid_argument("compare needs at least two controllers");
  std::ostringstream s;
  s << "# Controller comparison\n\n";
  s << "Runs per cell: " << c.runs_per_cell << ", base seed " << c.base_seed << ".\n\n";
  s << "| volume | controller | hard brakes (mean) | subject tt (s) | follower tt (s) | brake red. vs #1 | "
       "brake red. vs #2 | subject tt red. vs #2 | follower tt red. vs #2 |\n";
  s << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    auto g = [](const std::optional<Reduction>& x, int which) {
      if (!x) return std::string("n/a");
      const auto& v = which == 0 ? x->brake : which == 1 ? x->tt_subject : x->tt_follower;
      return v ? num(*v, "%.1f") + "%" : std::string("n/a");
    };
    s << "| " << num(r.volume, "%g") << " | " << to_string(r.controller) << " | " << num(r.brake.mean, "%.2f")
      << " | " << (r.tt_subject.n ? num(r.tt_subject.mean, "%.1f") : "n/a") << " | "
      << (r.tt_follower.n ? num(r.tt_follower.mean, "%.1f") : "n/a") << " | " << g(r.vs_base1, 0) << " | "
      << g(r.vs_base2, 0) << " | " << g(r.vs_base2, 1) << " | " << g(r.vs_base2, 2) << " |\n";
  }
  s << "\nReductions are 100 (baseline - controller) / baseline of the cell means. Collision runs are "
       "excluded from travel times; runs still en route at the time cap count with their elapsed time.\n";
  return s.str();
}

std::string oracle_table(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::ostringstream s;
  s << "problem,instance,input,solver_feasible,solver_objective,oracle_feasible,oracle_objective,difference\n";
  auto row = [&](const char* name, int i, double input, bool sf, double so, const OracleResult& o) {
    s << name << ',' << i << ',' << num(input, "%.4f") << ',' << (sf ? 1 : 0) << ',' << num(so, "%.6f") << ','
      << (o.feasible ? 1 : 0) << ',' << num(o.objective, "%.6f") << ','
      << (sf && o.feasible ? num(so - o.objective, "%.6f") : "n/a") << '\n';
  };
  for (int i = 0; i < instances; ++i) {
    InflowProblem p;
    p.v_o = u(2.6, 20.0);
    const SolveResult r = solve_inflow(p);
    row("inflow", i, p.v_o, r.feasible, r.objective, grid_oracle(p));
  }
  for (int i = 0; i < instances; ++i) {
    OutflowProblem p;
    p.v_o = u(0.0, 5.9);
    const SolveResult r = solve_outflow(p);
    row("outflow", i, p.v_o, r.feasible, r.objective, grid_oracle(p));
  }
  for (int i = 0; i < instances; ++i) {
    BaseAvProblem p;
    p.d_in = u(50.0, 600.0);
    const BaseAvSchedule r = solve_base_av(p);
    row("base_av", i, p.d_in, r.feasible, r.objective(), grid_oracle(p));
  }
  return s.str();
}

}  // namespace lefturn
