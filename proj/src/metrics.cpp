#include "lefturn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lefturn {

void BrakeDetectorParams::validate() const {
  if (!(threshold_decel < 0.0)) throw std::invalid_argument("brake threshold must be negative");
  if (!(release_decel > threshold_decel)) throw std::invalid_argument("brake release must lie above the threshold");
  if (!(min_duration >= 0.0)) throw std::invalid_argument("brake min_duration must be non-negative");
}

BrakeEvents detect_hard_brakes(const std::vector<double>& accel, double dt, const BrakeDetectorParams& p,
                               double t0) {
  if (!(dt > 0.0)) throw std::invalid_argument("detect_hard_brakes: dt must be positive");
  BrakeEvents out;
  bool open = false;
  bool counted = false;
  int run = 0;
  double onset = 0.0;
  for (std::size_t i = 0; i < accel.size(); ++i) {
    const double a = accel[i];
    if (!open) {
      if (a > p.threshold_decel) continue;
      open = true;
      counted = false;
      run = 0;
      onset = t0 + static_cast<double>(i) * dt;
    }
    if (a > p.release_decel) {
      open = false;
      continue;
    }
    run = a <= p.threshold_decel ? run + 1 : 0;
    if (!counted && run * dt >= p.min_duration - 1e-9) {
      counted = true;
      ++out.count;
      out.onset_times.push_back(onset);
    }
  }
  return out;
}

Stats compute_stats(std::vector<double> xs) {
  Stats s;
  s.n = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (s.n - 1));
  }
  auto q = [&](double p) {
    const double h = p * (s.n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
  };
  s.min = xs.front();
  s.q1 = q(0.25);
  s.median = q(0.5);
  s.q3 = q(0.75);
  s.max = xs.back();
  return s;
}

std::optional<double> percent_reduction(double base, double treat) {
  if (base == 0.0 || !std::isfinite(base) || !std::isfinite(treat)) return std::nullopt;
  return 100.0 * (base - treat) / base;
}

std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& runs) {
  std::map<std::pair<double, int>, std::vector<const RunRecord*>> cells;
  for (const auto& r : runs) cells[{r.volume, static_cast<int>(r.controller)}].push_back(&r);

  // Matched seeds across controllers at each volume.
  std::map<double, std::vector<std::uint64_t>> seeds_at;
  for (auto& [key, rs] : cells) {
    std::vector<std::uint64_t> seeds;
    for (const auto* r : rs) seeds.push_back(r->seed);
    std::sort(seeds.begin(), seeds.end());
    auto it = seeds_at.find(key.first);
    if (it == seeds_at.end()) {
      seeds_at.emplace(key.first, seeds);
    } else if (it->second.size() != seeds.size()) {
      throw std::invalid_argument("aggregate: mismatched run counts across controllers");
    } else if (it->second != seeds) {
      throw std::invalid_argument("aggregate: unmatched seeds across controllers");
    }
  }

  std::vector<SummaryRow> rows;
  for (auto& [key, rs] : cells) {
    SummaryRow row;
    row.volume = key.first;
    row.controller = static_cast<ControllerKind>(key.second);
    row.runs = static_cast<int>(rs.size());
    std::vector<double> brake, tts, ttf, dwell;
    for (const auto* r : rs) {
      brake.push_back(r->brake_events);
      if (r->status == RunStatus::Collision) ++row.collisions;
      if (r->status == RunStatus::Infeasible) ++row.infeasible;
      // Timed-out runs carry travel times censored at the cap; collisions are dropped.
      if (r->status == RunStatus::Collision) continue;
      if (std::isfinite(r->tt_subject)) tts.push_back(r->tt_subject);
      if (std::isfinite(r->tt_follower)) ttf.push_back(r->tt_follower);
      dwell.push_back(r->follower_dwell);
    }
    row.brake = compute_stats(brake);
    row.tt_subject = compute_stats(tts);
    row.tt_follower = compute_stats(ttf);
    row.dwell = compute_stats(dwell);
    rows.push_back(row);
  }

  auto reduction_vs = [&](const SummaryRow& treat, ControllerKind base) -> std::optional<Reduction> {
    for (const auto& b : rows) {
      if (b.volume != treat.volume || b.controller != base) continue;
      Reduction r;
      r.brake = percent_reduction(b.brake.mean, treat.brake.mean);
      if (b.tt_subject.n > 0 && treat.tt_subject.n > 0) {
        r.tt_subject = percent_reduction(b.tt_subject.mean, treat.tt_subject.mean);
        r.tt_follower = percent_reduction(b.tt_follower.mean, treat.tt_follower.mean);
      }
      return r;
    }
    return std::nullopt;
  };
  for (auto& row : rows) {
    row.vs_base1 = reduction_vs(row, ControllerKind::BaseAv1);
    row.vs_base2 = reduction_vs(row, ControllerKind::BaseAv2);
  }
  return rows;
}

}  // namespace lefturn
