// Hand-rolled SVG output. Everything is formatted with fixed precision so the
// files are byte-stable across runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lefturn/experiments.hpp"

namespace lefturn {

namespace {

std::string f2(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

const char* colour(int i) {
  static const char* c[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"};
  return c[i % 6];
}

std::string escape(const std::string& s) {
  std::string o;
  for (char ch : s) {
    if (ch == '<') o += "&lt;";
    else if (ch == '>') o += "&gt;";
    else if (ch == '&') o += "&amp;";
    else o += ch;
  }
  return o;
}

class Svg {
 public:
  Svg(double w, double h) : w_(w), h_(h) {
    s_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(w) << "\" height=\"" << f2(h)
       << "\" viewBox=\"0 0 " << f2(w) << ' ' << f2(h) << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << f2(w) << "\" height=\"" << f2(h) << "\" fill=\"white\"/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke = "none") {
    s_ << "<rect x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" width=\"" << f2(std::max(0.0, w)) << "\" height=\""
       << f2(std::max(0.0, h)) << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
            const std::string& dash = "") {
    s_ << "<line x1=\"" << f2(x1) << "\" y1=\"" << f2(y1) << "\" x2=\"" << f2(x2) << "\" y2=\"" << f2(y2)
       << "\" stroke=\"" << stroke << "\" stroke-width=\"" << f2(width) << "\"";
    if (!dash.empty()) s_ << " stroke-dasharray=\"" << dash << "\"";
    s_ << "/>\n";
  }
  void text(double x, double y, const std::string& t, const std::string& anchor = "start", int size = 11,
            double rotate = 0.0) {
    s_ << "<text x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" text-anchor=\"" << anchor << "\" font-size=\"" << size
       << "\"";
    if (rotate != 0.0) s_ << " transform=\"rotate(" << f2(rotate) << ' ' << f2(x) << ' ' << f2(y) << ")\"";
    s_ << ">" << escape(t) << "</text>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width,
                const std::string& dash = "") {
    if (pts.empty()) return;
    s_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << f2(width) << "\"";
    if (!dash.empty()) s_ << " stroke-dasharray=\"" << dash << "\"";
    s_ << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) s_ << (i ? " " : "") << f2(pts[i].first) << ',' << f2(pts[i].second);
    s_ << "\"/>\n";
  }
  // Axis ranges as data attributes so the file can be checked without rendering.
  void axes(const std::string& id, double x_lo, double x_hi, double y_lo, double y_hi) {
    s_ << "<g id=\"" << id << "\" data-x-min=\"" << f2(x_lo) << "\" data-x-max=\"" << f2(x_hi) << "\" data-y-min=\""
       << f2(y_lo) << "\" data-y-max=\"" << f2(y_hi) << "\"/>\n";
  }
  std::string str() const { return s_.str() + "</svg>\n"; }
  double width() const { return w_; }
  double height() const { return h_; }

 private:
  double w_, h_;
  std::ostringstream s_;
};

struct Axis {
  double lo, hi, px_lo, px_hi;
  double operator()(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

void y_ticks(Svg& svg, const Axis& y, double x_left, double x_right, const std::string& label) {
  const double step = nice_step(y.hi - y.lo);
  for (double v = std::ceil(y.lo / step) * step; v <= y.hi + 1e-9; v += step) {
    svg.line(x_left, y(v), x_right, y(v), "#dddddd");
    svg.text(x_left - 4, y(v) + 4, f2(v), "end", 10);
  }
  svg.text(x_left - 42, (y.px_lo + y.px_hi) / 2, label, "middle", 11, -90);
}

void write_svg(const std::string& path, const Svg& svg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << svg.str();
}

// Mean hard-brake events per controller, grouped by volume,
// with the situation-aware reductions printed above its bar.
void brake_plot(const std::string& path, const std::vector<SummaryRow>& rows, const std::vector<double>& vols,
                const std::vector<ControllerKind>& ks) {
  Svg svg(720, 420);
  svg.text(360, 24, "Follower hard-brake events per run (mean)", "middle", 14);
  double ymax = 0.0;
  for (const auto& r : rows) ymax = std::max(ymax, r.brake.mean);
  ymax = ymax <= 0.0 ? 1.0 : ymax * 1.25;
  const Axis y{0.0, ymax, 360.0, 50.0};
  y_ticks(svg, y, 70, 700, "events per run");
  const double group_w = 630.0 / vols.size();
  const double bar_w = group_w * 0.7 / ks.size();
  for (std::size_t vi = 0; vi < vols.size(); ++vi) {
    const double gx = 70 + vi * group_w + group_w * 0.15;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      for (const auto& r : rows) {
        if (r.volume != vols[vi] || r.controller != ks[ki]) continue;
        const double x = gx + ki * bar_w;
        svg.rect(x, y(r.brake.mean), bar_w - 2, y(0) - y(r.brake.mean), colour(static_cast<int>(ks[ki])));
        if (r.controller == ControllerKind::SituationAware) {
          std::string t;
          if (r.vs_base1 && r.vs_base1->brake) t += "-" + f2(*r.vs_base1->brake) + "% vs #1";
          if (r.vs_base2 && r.vs_base2->brake) t += (t.empty() ? "" : " / ") + ("-" + f2(*r.vs_base2->brake) + "% vs #2");
          if (!t.empty()) svg.text(x + bar_w / 2, y(r.brake.mean) - 6, t, "middle", 9);
        }
      }
    }
    svg.text(70 + vi * group_w + group_w / 2, 378, f2(vols[vi]) + " vphpln", "middle");
  }
  svg.line(70, y(0), 700, y(0), "black");
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    svg.rect(80 + ki * 150, 396, 12, 12, colour(static_cast<int>(ks[ki])));
    svg.text(96 + ki * 150, 406, to_string(ks[ki]));
  }
  write_svg(path, svg);
}

void box(Svg& svg, const Axis& y, double x, double w, const Stats& s, const char* fill) {
  if (s.n == 0) return;
  svg.line(x + w / 2, y(s.min), x + w / 2, y(s.q1), "black");
  svg.line(x + w / 2, y(s.q3), x + w / 2, y(s.max), "black");
  svg.line(x + w * 0.25, y(s.min), x + w * 0.75, y(s.min), "black");
  svg.line(x + w * 0.25, y(s.max), x + w * 0.75, y(s.max), "black");
  svg.rect(x, y(s.q3), w, y(s.q1) - y(s.q3), fill, "black");
  svg.line(x, y(s.median), x + w, y(s.median), "black", 2.0);
}

void boxplot(const std::string& path, const std::vector<SummaryRow>& rows, const std::vector<double>& vols,
             const std::vector<ControllerKind>& ks) {
  Svg svg(900, 460);
  svg.text(450, 24, "Travel times (collision runs excluded)", "middle", 14);
  double ymax = 0.0;
  for (const auto& r : rows) {
    if (r.tt_subject.n) ymax = std::max(ymax, r.tt_subject.max);
    if (r.tt_follower.n) ymax = std::max(ymax, r.tt_follower.max);
  }
  ymax = ymax <= 0.0 ? 1.0 : ymax * 1.1;
  const Axis y{0.0, ymax, 390.0, 50.0};
  for (int panel = 0; panel < 2; ++panel) {
    const double x0 = 70 + panel * 420;
    const double x1 = x0 + 380;
    y_ticks(svg, y, x0, x1, "seconds");
    svg.text((x0 + x1) / 2, 44, panel == 0 ? "Subject vehicle" : "Following vehicle", "middle", 12);
    const double group_w = (x1 - x0) / vols.size();
    const double bw = group_w * 0.7 / ks.size();
    for (std::size_t vi = 0; vi < vols.size(); ++vi) {
      for (std::size_t ki = 0; ki < ks.size(); ++ki)
        for (const auto& r : rows)
          if (r.volume == vols[vi] && r.controller == ks[ki])
            box(svg, y, x0 + vi * group_w + group_w * 0.15 + ki * bw, bw - 3,
                panel == 0 ? r.tt_subject : r.tt_follower, colour(static_cast<int>(ks[ki])));
      svg.text(x0 + vi * group_w + group_w / 2, 408, f2(vols[vi]), "middle", 10);
    }
    svg.line(x0, y(0), x1, y(0), "black");
  }
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    svg.rect(80 + ki * 150, 430, 12, 12, colour(static_cast<int>(ks[ki])));
    svg.text(96 + ki * 150, 440, to_string(ks[ki]));
  }
  write_svg(path, svg);
}

struct Track {
  std::vector<std::pair<double, double>> subject, follower;
};

Track read_trace(const std::string& path) {
  Track t;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string time, id, role, lane, station;
    std::getline(ss, time, ',');
    std::getline(ss, id, ',');
    std::getline(ss, role, ',');
    std::getline(ss, lane, ',');
    std::getline(ss, station, ',');
    if (station.empty()) continue;
    auto& dst = role == "subject" ? t.subject : t.follower;
    dst.emplace_back(std::stod(time), std::stod(station));
  }
  return t;
}

void progression(const std::string& path, const std::string& dir, const nlohmann::json& info,
                 const std::vector<ControllerKind>& ks, double vol) {
  const auto seed = info.value("base_seed", std::uint64_t{1});
  const double warmup = info.value("warmup", 0.0);
  const double stop_bar = info.value("stop_bar", 337.0);
  const double ymax_route = stop_bar + info.value("turn_arc_length", 0.0);
  Svg svg(760, 440);
  svg.text(380, 24, "Time-space trajectories at " + f2(vol) + " vphpln, seed " + std::to_string(seed), "middle", 14);
  std::vector<std::pair<ControllerKind, Track>> tracks;
  double tmax = 1.0;
  for (auto k : ks) {
    const std::string file = dir + "/trace_" + scenario_id(vol, k) + "_" + std::to_string(seed) + ".csv";
    if (!std::filesystem::exists(file)) continue;
    Track t = read_trace(file);
    for (const auto* v : {&t.subject, &t.follower})
      if (!v->empty()) tmax = std::max(tmax, v->back().first - warmup);
    tracks.emplace_back(k, std::move(t));
  }
  const Axis x{0.0, tmax, 80.0, 730.0};
  const Axis y{0.0, ymax_route, 380.0, 50.0};
  svg.axes("time-space", x.lo, x.hi, y.lo, y.hi);
  y_ticks(svg, y, 80, 730, "station along route (m)");
  const double step = nice_step(tmax);
  for (double v = 0.0; v <= tmax + 1e-9; v += step) svg.text(x(v), 396, f2(v), "middle", 10);
  svg.text(405, 414, "time since subject entry (s)", "middle");
  svg.line(80, y(stop_bar), 730, y(stop_bar), "#888888", 1.0, "4,3");
  svg.text(726, y(stop_bar) - 4, "stop bar", "end", 9);
  if (tracks.empty()) svg.text(405, 215, "no trace files found", "middle", 12);
  for (const auto& [k, t] : tracks) {
    auto clip = [&](const std::vector<std::pair<double, double>>& pts) {
      std::vector<std::pair<double, double>> out;
      for (const auto& [tt, st] : pts) out.emplace_back(x(tt - warmup), y(std::min(st, ymax_route)));
      return out;
    };
    svg.polyline(clip(t.subject), colour(static_cast<int>(k)), 1.8);
    svg.polyline(clip(t.follower), colour(static_cast<int>(k)), 1.4, "5,3");
  }
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    svg.line(90 + i * 180, 428, 110 + i * 180, 428, colour(static_cast<int>(tracks[i].first)), 2.0);
    svg.text(114 + i * 180, 432, std::string(to_string(tracks[i].first)) + " (dashed: follower)", "start", 9);
  }
  write_svg(path, svg);
}

}  // namespace

std::vector<std::string> emit_plots(const std::string& dir) {
  const std::string metrics = dir + "/metrics.csv";
  if (!std::filesystem::exists(metrics)) throw IoError("no metrics.csv in '" + dir + "'");
  const auto records = read_metrics_csv(metrics);
  if (records.empty()) throw std::runtime_error("metrics.csv in '" + dir + "' has no runs");
  nlohmann::json info = nlohmann::json::object();
  if (std::ifstream in(dir + "/run_info.json"); in) info = nlohmann::json::parse(in);

  std::vector<double> vols;
  std::vector<ControllerKind> ks;
  for (const auto& r : records) {
    if (std::find(vols.begin(), vols.end(), r.volume) == vols.end()) vols.push_back(r.volume);
    if (std::find(ks.begin(), ks.end(), r.controller) == ks.end()) ks.push_back(r.controller);
  }
  const auto rows = aggregate(records);
  std::vector<std::string> out{dir + "/brake_reduction.svg", dir + "/travel_time_boxplot.svg",
                               dir + "/progression.svg"};
  brake_plot(out[0], rows, vols, ks);
  boxplot(out[1], rows, vols, ks);
  progression(out[2], dir, info, ks, vols.front());
  return out;
}

}  // namespace lefturn
