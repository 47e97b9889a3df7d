// extern "C" surface over the core. Exceptions stop here.

#include "lefturn/lefturn.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "lefturn/config.hpp"
#include "lefturn/experiments.hpp"

struct lefturn_config {
  lefturn::ScenarioConfig cfg;
};

struct lefturn_result {
  lefturn::ScenarioConfig cfg;
  lefturn::ExperimentOutput out;
};

namespace {

thread_local std::string g_error;

lefturn_status fail(lefturn_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

// Maps whatever the core threw to a status code.
template <class F>
lefturn_status guarded(F&& f) {
  g_error.clear();
  try {
    return f();
  } catch (const lefturn::ConfigError& e) {
    return fail(LEFTURN_E_CONFIG, e.what());
  } catch (const lefturn::IoError& e) {
    return fail(LEFTURN_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LEFTURN_E_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(LEFTURN_E_RUNTIME, e.what());
  } catch (...) {
    return fail(LEFTURN_E_RUNTIME, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

double red(const std::optional<lefturn::Reduction>& r, int which) {
  if (!r) return NAN;
  const auto& v = which == 0 ? r->brake : which == 1 ? r->tt_subject : r->tt_follower;
  return v ? *v : NAN;
}

lefturn_status run_impl(const lefturn_config* c, int workers, const char* out_dir, bool compare,
                        lefturn_result** out) {
  if (!c || !out) return fail(LEFTURN_E_ARG, "null argument");
  if (workers < 1) return fail(LEFTURN_E_ARG, "worker count must be >= 1");
  *out = nullptr;
  return guarded([&]() -> lefturn_status {
    if (compare && c->cfg.controllers.size() < 2)
      return fail(LEFTURN_E_CONFIG, "compare needs at least two controllers");
    std::string dir = out_dir ? out_dir : "";
    if (!dir.empty() && !std::filesystem::is_directory(dir))
      return fail(LEFTURN_E_IO, "output directory '" + dir + "' does not exist");
    auto r = std::make_unique<lefturn_result>();
    r->cfg = c->cfg;
    r->out = lefturn::run_experiment(r->cfg, workers, dir);
    if (!dir.empty()) {
      lefturn::write_metrics_csv(dir + "/metrics.csv", r->out.records);
      lefturn::write_summary_csv(dir + "/summary.csv", r->out.summary);
      lefturn::write_run_info(dir + "/run_info.json", r->cfg);
      if (compare) {
        const std::string md = lefturn::comparison_report(r->cfg, r->out.summary);
        std::FILE* f = std::fopen((dir + "/comparison.md").c_str(), "wb");
        if (!f) throw lefturn::IoError("cannot write '" + dir + "/comparison.md'");
        const bool ok = std::fwrite(md.data(), 1, md.size(), f) == md.size();
        std::fclose(f);
        if (!ok) throw lefturn::IoError("write failed for '" + dir + "/comparison.md'");
      }
    }
    *out = r.release();
    return LEFTURN_OK;
  });
}

}  // namespace

extern "C" {

const char* lefturn_version(void) { return "1.0.0"; }

const char* lefturn_last_error(void) { return g_error.c_str(); }

void lefturn_string_free(char* s) { std::free(s); }

int lefturn_default_workers(void) { return lefturn::default_workers(); }

lefturn_status lefturn_config_default(lefturn_config** out) {
  if (!out) return fail(LEFTURN_E_ARG, "null argument");
  return guarded([&] {
    *out = new lefturn_config{};
    return LEFTURN_OK;
  });
}

lefturn_status lefturn_config_parse(const char* json, lefturn_config** out) {
  if (!json || !out) return fail(LEFTURN_E_ARG, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<lefturn_config>();
    c->cfg = lefturn::parse_config(json);
    *out = c.release();
    return LEFTURN_OK;
  });
}

lefturn_status lefturn_config_load(const char* path, lefturn_config** out) {
  if (!path || !out) return fail(LEFTURN_E_ARG, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<lefturn_config>();
    c->cfg = lefturn::load_config(path);
    *out = c.release();
    return LEFTURN_OK;
  });
}

void lefturn_config_free(lefturn_config* c) { delete c; }

lefturn_status lefturn_config_to_json(const lefturn_config* c, char** out) {
  if (!c || !out) return fail(LEFTURN_E_ARG, "null argument");
  return guarded([&] {
    *out = dup(lefturn::config_to_json(c->cfg));
    return LEFTURN_OK;
  });
}

size_t lefturn_config_warning_count(const lefturn_config* c) { return c ? c->cfg.warnings.size() : 0; }

const char* lefturn_config_warning(const lefturn_config* c, size_t i) {
  if (!c || i >= c->cfg.warnings.size()) return nullptr;
  return c->cfg.warnings[i].c_str();
}

lefturn_status lefturn_run(const lefturn_config* c, int workers, const char* out_dir, lefturn_result** out) {
  return run_impl(c, workers, out_dir, false, out);
}

lefturn_status lefturn_compare(const lefturn_config* c, int workers, const char* out_dir,
                               lefturn_result** out) {
  return run_impl(c, workers, out_dir, true, out);
}

void lefturn_result_free(lefturn_result* r) { delete r; }

size_t lefturn_result_run_count(const lefturn_result* r) { return r ? r->out.records.size() : 0; }

size_t lefturn_result_collision_runs(const lefturn_result* r) {
  if (!r) return 0;
  size_t n = 0;
  for (const auto& x : r->out.records) n += x.collision() ? 1 : 0;
  return n;
}

size_t lefturn_result_infeasible_runs(const lefturn_result* r) {
  if (!r) return 0;
  size_t n = 0;
  for (const auto& x : r->out.records) n += x.status == lefturn::RunStatus::Infeasible ? 1 : 0;
  return n;
}

size_t lefturn_result_summary_count(const lefturn_result* r) { return r ? r->out.summary.size() : 0; }

lefturn_status lefturn_result_summary(const lefturn_result* r, size_t i, lefturn_summary_row* out) {
  if (!r || !out) return fail(LEFTURN_E_ARG, "null argument");
  if (i >= r->out.summary.size()) return fail(LEFTURN_E_ARG, "summary index out of range");
  const auto& s = r->out.summary[i];
  auto mean = [](const lefturn::Stats& st) { return st.n ? st.mean : NAN; };
  out->volume = s.volume;
  out->controller = static_cast<int>(s.controller);
  out->runs = s.runs;
  out->collisions = s.collisions;
  out->infeasible = s.infeasible;
  out->brake_mean = mean(s.brake);
  out->tt_subject_mean = mean(s.tt_subject);
  out->tt_follower_mean = mean(s.tt_follower);
  out->dwell_mean = mean(s.dwell);
  out->brake_red_vs_base1 = red(s.vs_base1, 0);
  out->brake_red_vs_base2 = red(s.vs_base2, 0);
  out->tt_subject_red_vs_base1 = red(s.vs_base1, 1);
  out->tt_subject_red_vs_base2 = red(s.vs_base2, 1);
  out->tt_follower_red_vs_base1 = red(s.vs_base1, 2);
  out->tt_follower_red_vs_base2 = red(s.vs_base2, 2);
  g_error.clear();
  return LEFTURN_OK;
}

lefturn_status lefturn_result_report(const lefturn_result* r, char** out) {
  if (!r || !out) return fail(LEFTURN_E_ARG, "null argument");
  if (r->cfg.controllers.size() < 2) return fail(LEFTURN_E_CONFIG, "compare needs at least two controllers");
  return guarded([&] {
    *out = dup(lefturn::comparison_report(r->cfg, r->out.summary));
    return LEFTURN_OK;
  });
}

lefturn_status lefturn_plot(const char* dir, char** out) {
  if (!dir || !out) return fail(LEFTURN_E_ARG, "null argument");
  return guarded([&] {
    std::string list;
    for (const auto& p : lefturn::emit_plots(dir)) list += p + "\n";
    *out = dup(list);
    return LEFTURN_OK;
  });
}

lefturn_status lefturn_oracle_table(uint64_t seed, int instances, char** out) {
  if (!out) return fail(LEFTURN_E_ARG, "null argument");
  if (instances < 1) return fail(LEFTURN_E_ARG, "instances must be >= 1");
  return guarded([&] {
    *out = dup(lefturn::oracle_table(seed, instances));
    return LEFTURN_OK;
  });
}

}  // extern "C"
