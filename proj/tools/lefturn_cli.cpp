// lefturn command line. Talks to the library only through lefturn.h.
//
// exit codes: 0 ok, 1 other failure, 2 config error, 3 a run collided

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "lefturn/lefturn.h"

namespace {

int code_of(lefturn_status s) {
  if (s == LEFTURN_OK) return 0;
  if (s == LEFTURN_E_CONFIG) return 2;
  return 1;
}

int report_error(const char* what, lefturn_status s) {
  std::fprintf(stderr, "lefturn %s: %s\n", what, lefturn_last_error());
  return code_of(s);
}

const char* controller_name(int k) {
  switch (k) {
    case LEFTURN_BASE_AV1: return "BaseAv1";
    case LEFTURN_BASE_AV2: return "BaseAv2";
    case LEFTURN_SITUATION_AWARE: return "SituationAware";
  }
  return "?";
}

void print_num(double x) {
  if (x != x) std::printf("%9s", "n/a");
  else std::printf("%9.1f", x);
}

void print_pct(double x) {
  if (x != x) std::printf("%9s", "n/a");
  else std::printf("%8.1f%%", x);
}

int run_cmd(const std::string& config, const std::string& out, bool compare) {
  lefturn_config* c = nullptr;
  lefturn_status s = lefturn_config_load(config.c_str(), &c);
  if (s != LEFTURN_OK) return report_error("config", s);
  for (size_t i = 0; i < lefturn_config_warning_count(c); ++i)
    std::fprintf(stderr, "warning: %s\n", lefturn_config_warning(c, i));

  const int workers = lefturn_default_workers();
  lefturn_result* r = nullptr;
  s = compare ? lefturn_compare(c, workers, out.c_str(), &r) : lefturn_run(c, workers, out.c_str(), &r);
  lefturn_config_free(c);
  if (s != LEFTURN_OK) return report_error(compare ? "compare" : "run", s);

  std::printf("%zu runs, %d workers, output in %s\n", lefturn_result_run_count(r), workers, out.c_str());
  std::printf("%7s %-15s %7s %9s %9s %9s %9s %9s\n", "volume", "controller", "brakes", "tt_subj", "tt_foll",
              "brk_vs2", "subj_vs2", "foll_vs2");
  for (size_t i = 0; i < lefturn_result_summary_count(r); ++i) {
    lefturn_summary_row row;
    if (lefturn_result_summary(r, i, &row) != LEFTURN_OK) continue;
    std::printf("%7g %-15s %7.2f ", row.volume, controller_name(row.controller), row.brake_mean);
    print_num(row.tt_subject_mean);
    std::printf(" ");
    print_num(row.tt_follower_mean);
    std::printf(" ");
    print_pct(row.brake_red_vs_base2);
    std::printf(" ");
    print_pct(row.tt_subject_red_vs_base2);
    std::printf(" ");
    print_pct(row.tt_follower_red_vs_base2);
    std::printf("\n");
  }
  const size_t collided = lefturn_result_collision_runs(r);
  const size_t capped = lefturn_result_infeasible_runs(r);
  if (capped) std::printf("%zu runs reached the time cap\n", capped);
  lefturn_result_free(r);
  if (collided) {
    std::fprintf(stderr, "%zu runs had a collision\n", collided);
    return 3;
  }
  return 0;
}

int plot_cmd(const std::string& dir) {
  char* files = nullptr;
  const lefturn_status s = lefturn_plot(dir.c_str(), &files);
  if (s != LEFTURN_OK) return report_error("plot", s);
  std::fputs(files, stdout);
  lefturn_string_free(files);
  return 0;
}

int oracle_cmd(unsigned long long seed, int instances) {
  char* csv = nullptr;
  const lefturn_status s = lefturn_oracle_table(seed, instances, &csv);
  if (s != LEFTURN_OK) return report_error("oracle", s);
  std::fputs(csv, stdout);
  lefturn_string_free(csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permissive left-turn simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lefturn_version()));

  std::string config, out, in;
  auto* run = app.add_subcommand("run", "run every configured cell");
  run->add_option("--config", config, "scenario JSON")->required();
  run->add_option("--out", out, "output directory (created if missing)")->required();

  auto* cmp = app.add_subcommand("compare", "run and write comparison.md");
  cmp->add_option("--config", config, "scenario JSON")->required();
  cmp->add_option("--out", out, "output directory (created if missing)")->required();

  auto* plot = app.add_subcommand("plot", "render SVG plots from a results directory");
  plot->add_option("--in", in, "directory holding metrics.csv")->required()->check(CLI::ExistingDirectory);

  unsigned long long seed = 7;
  int instances = 10;
  auto* oracle = app.add_subcommand("oracle", "optimizer vs grid oracle, CSV on stdout");
  oracle->add_option("--seed", seed, "instance generator seed");
  oracle->add_option("--instances", instances, "instances per problem")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (*run || *cmp) {
    std::error_code ec;
    if (!out.empty()) {
      // the library only writes into an existing directory
      std::filesystem::create_directories(out, ec);
      if (ec) {
        std::fprintf(stderr, "lefturn: cannot create '%s': %s\n", out.c_str(), ec.message().c_str());
        return 1;
      }
    }
    return run_cmd(config, out, cmp->parsed());
  }
  if (*plot) return plot_cmd(in);
  if (*oracle) return oracle_cmd(seed, instances);
  return 1;
}
