#include "roundabout/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "roundabout/errors.hpp"
#include "roundabout/geometry.hpp"

namespace roundabout {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad(double frac) {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double d = (hi - lo) * frac;
    lo -= d;
    hi += d;
  }
};

// One plotting panel; data coordinates mapped into a pixel box.
class Panel {
 public:
  Panel(std::ostringstream& out, double x0, double y0, double w, double h, Range xr, Range yr)
      : out_(out), x0_(x0), y0_(y0), w_(w), h_(h), xr_(xr), yr_(yr) {}

  double px(double x) const { return x0_ + (x - xr_.lo) / (xr_.hi - xr_.lo) * w_; }
  double py(double y) const { return y0_ + h_ - (y - yr_.lo) / (yr_.hi - yr_.lo) * h_; }

  void frame(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
    out_ << "<rect x=\"" << num(x0_) << "\" y=\"" << num(y0_) << "\" width=\"" << num(w_) << "\" height=\""
         << num(h_) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out_ << "<text x=\"" << num(x0_ + w_ / 2) << "\" y=\"" << num(y0_ - 8)
         << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    out_ << "<text x=\"" << num(x0_ + w_ / 2) << "\" y=\"" << num(y0_ + h_ + 34)
         << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
    out_ << "<text transform=\"translate(" << num(x0_ - 44) << "," << num(y0_ + h_ / 2)
         << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << ylabel << "</text>\n";
    for (int k = 0; k <= 4; ++k) {
      const double xv = xr_.lo + (xr_.hi - xr_.lo) * k / 4;
      const double yv = yr_.lo + (yr_.hi - yr_.lo) * k / 4;
      out_ << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(y0_ + h_ + 16)
           << "\" text-anchor=\"middle\" font-size=\"10\">" << num(xv) << "</text>\n";
      out_ << "<text x=\"" << num(x0_ - 6) << "\" y=\"" << num(py(yv) + 3)
           << "\" text-anchor=\"end\" font-size=\"10\">" << num(yv) << "</text>\n";
    }
  }

  void polyline(std::span<const Vec2> pts, const std::string& color, double width, const std::string& extra = "") {
    out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\" " << extra
         << " points=\"";
    for (const auto& p : pts) out_ << num(px(p.x())) << ',' << num(py(p.y())) << ' ';
    out_ << "\"/>\n";
  }

  void hline(double y, const std::string& color, const std::string& label) {
    out_ << "<line x1=\"" << num(x0_) << "\" x2=\"" << num(x0_ + w_) << "\" y1=\"" << num(py(y)) << "\" y2=\""
         << num(py(y)) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\" stroke-dasharray=\"6,3\"/>\n";
    out_ << "<text x=\"" << num(x0_ + w_ - 4) << "\" y=\"" << num(py(y) - 4)
         << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << color << "\">" << label << "</text>\n";
  }

  void dot(const Vec2& p, const std::string& color, double r) {
    out_ << "<circle cx=\"" << num(px(p.x())) << "\" cy=\"" << num(py(p.y())) << "\" r=\"" << num(r)
         << "\" fill=\"" << color << "\"/>\n";
  }

 private:
  std::ostringstream& out_;
  double x0_, y0_, w_, h_;
  Range xr_, yr_;
};

std::string open_svg(int w, int h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " +
         std::to_string(h) + "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

const char* group_color(int group) { return kPalette[(std::max(group, 1) - 1) % 8]; }

std::string overhead(const Scenario& sc, std::span<const Trajectory> trajs) {
  Range xr, yr;
  for (const auto& p : sc.boundary.points) {
    xr.add(p.x());
    yr.add(p.y());
  }
  for (const auto& tr : trajs)
    for (const auto& x : tr.states) {
      xr.add(x.px);
      yr.add(x.py);
    }
  xr.pad(0.03);
  yr.pad(0.03);
  // Equal axis scaling.
  const double span = std::max(xr.hi - xr.lo, yr.hi - yr.lo);
  const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
  xr = {cx - span / 2, cx + span / 2};
  yr = {cy - span / 2, cy + span / 2};

  std::ostringstream os;
  os << open_svg(820, 860);
  Panel panel(os, 70, 40, 720, 720, xr, yr);
  panel.frame("Trajectories", "x [m]", "y [m]");
  for (const auto& p : sc.boundary.points) panel.dot(p, "#999", 0.8);
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    std::vector<Vec2> pts;
    for (const auto& x : trajs[i].states) pts.push_back(x.position());
    const char* color = group_color(sc.vehicles[i].group);
    panel.polyline(pts, color, 1.6);
    panel.dot(pts.front(), color, 3.0);
  }
  os << "</svg>\n";
  return os.str();
}

std::string inputs_plot(const Scenario& sc, std::span<const Trajectory> trajs) {
  const auto& p = sc.params;
  const double t_end = p.tau_s * std::max(1, trajs.front().horizon() - 1);
  std::ostringstream os;
  os << open_svg(820, 700);
  Range tr{0.0, t_end};
  Range dr{p.delta_min, p.delta_max}, ar{p.a_min, p.a_max};
  for (const auto& traj : trajs)
    for (const auto& u : traj.inputs) {
      dr.add(u.delta);
      ar.add(u.a);
    }
  dr.pad(0.08);
  ar.pad(0.08);
  Panel steer(os, 80, 40, 700, 250, tr, dr);
  steer.frame("Steering angle", "time [s]", "delta [rad]");
  Panel accel(os, 80, 380, 700, 250, tr, ar);
  accel.frame("Acceleration", "time [s]", "a [m/s^2]");
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    std::vector<Vec2> ds, as;
    for (std::size_t t = 0; t < trajs[i].inputs.size(); ++t) {
      ds.push_back({p.tau_s * t, trajs[i].inputs[t].delta});
      as.push_back({p.tau_s * t, trajs[i].inputs[t].a});
    }
    const char* color = group_color(sc.vehicles[i].group);
    steer.polyline(ds, color, 1.0);
    accel.polyline(as, color, 1.0);
  }
  steer.hline(p.delta_max, "#d4a000", "delta_max");
  steer.hline(p.delta_min, "#d4a000", "delta_min");
  accel.hline(p.a_max, "#d4a000", "a_max");
  accel.hline(p.a_min, "#d4a000", "a_min");
  os << "</svg>\n";
  return os.str();
}

std::string distance_plot(const Scenario& sc, std::span<const Trajectory> trajs) {
  const auto& p = sc.params;
  std::vector<Vec2> pts;
  Range dr{p.d_safe, p.d_safe};
  const int steps = static_cast<int>(trajs.front().states.size());
  for (int t = 0; t < steps; ++t) {
    const double d = trajs.size() > 1 ? min_pairwise_distance_at(trajs, t, p) : p.d_safe;
    pts.push_back({p.tau_s * t, d});
    dr.add(d);
  }
  dr.lo = std::min(dr.lo, 0.0);
  dr.pad(0.05);
  std::ostringstream os;
  os << open_svg(820, 400);
  Panel panel(os, 80, 40, 700, 280, {0.0, p.tau_s * (steps - 1)}, dr);
  panel.frame("Minimal distance between circle centers", "time [s]", "distance [m]");
  panel.polyline(pts, "#1f77b4", 1.8);
  panel.hline(p.d_safe, "#d62728", "d_safe");
  os << "</svg>\n";
  return os.str();
}

}  // namespace

PlotSet render_plots(const Scenario& scenario, std::span<const Trajectory> trajs) {
  if (trajs.empty()) throw ValidationError("nothing to plot: no trajectories");
  if (trajs.size() != scenario.vehicles.size())
    throw ValidationError("trajectory file has " + std::to_string(trajs.size()) + " vehicles, scenario has " +
                          std::to_string(scenario.vehicles.size()));
  const std::size_t steps = trajs.front().states.size();
  for (const auto& tr : trajs) {
    if (tr.states.size() < 2 || tr.states.size() != steps || tr.inputs.size() + 1 != steps)
      throw ValidationError("trajectories are empty or have inconsistent lengths");
  }
  return {overhead(scenario, trajs), inputs_plot(scenario, trajs), distance_plot(scenario, trajs)};
}

void write_plots(const PlotSet& plots, const std::filesystem::path& dir, const std::string& prefix) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, const std::string*> files[] = {
      {"trajectories.svg", &plots.trajectories}, {"inputs.svg", &plots.inputs}, {"min_distance.svg", &plots.min_distance}};
  for (const auto& [name, body] : files) {
    std::ofstream out(dir / (prefix + name), std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / (prefix + name)).string());
    out << *body;
  }
}

}  // namespace roundabout
