#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace fieldcbf::plot {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 480;
constexpr double kMarginLeft = 62;
constexpr double kMarginRight = 18;
constexpr double kMarginTop = 34;
constexpr double kMarginBottom = 46;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Largest {1,2,5}*10^k step that yields at least ~5 intervals.
double nice_step(double range) {
  if (!(range > 0)) return 1.0;
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {5.0, 2.0, 1.0}) {
    if (mag * m <= raw) return mag * m;
  }
  return mag;
}

struct Axes {
  double xmin, xmax, ymin, ymax;

  double px(double x) const {
    return kMarginLeft + (x - xmin) / (xmax - xmin) * (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    return kHeight - kMarginBottom - (y - ymin) / (ymax - ymin) * (kHeight - kMarginTop - kMarginBottom);
  }
};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::ofstream open_svg(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io::IoError("cannot write output file: " + path.string());
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  return out;
}

void draw_frame(std::ofstream& out, const Axes& ax, const std::string& title,
                const std::string& x_label, const std::string& y_label) {
  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y1) << "\" width=\"" << fmt(x1 - x0)
      << "\" height=\"" << fmt(y0 - y1) << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  const double sx = nice_step(ax.xmax - ax.xmin);
  for (double v = std::ceil(ax.xmin / sx) * sx; v <= ax.xmax + 1e-12; v += sx) {
    const double p = ax.px(v);
    out << "<line x1=\"" << fmt(p) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(p) << "\" y2=\""
        << fmt(y0 + 4) << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << fmt(p) << "\" y=\"" << fmt(y0 + 17)
        << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" << fmt_tick(v)
        << "</text>\n";
  }
  const double sy = nice_step(ax.ymax - ax.ymin);
  for (double v = std::ceil(ax.ymin / sy) * sy; v <= ax.ymax + 1e-12; v += sy) {
    const double p = ax.py(v);
    out << "<line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(p) << "\" x2=\"" << fmt(x0) << "\" y2=\""
        << fmt(p) << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << fmt(x0 - 7) << "\" y=\"" << fmt(p + 4)
        << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" << fmt_tick(v)
        << "</text>\n";
  }

  out << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"20\" font-family=\"monospace\" font-size=\"13\""
      << " text-anchor=\"middle\">" << xml_escape(title) << "</text>\n";
  out << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(kHeight - 8)
      << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">" << xml_escape(x_label)
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << fmt((y0 + y1) / 2) << "\" font-family=\"monospace\" font-size=\"12\""
      << " text-anchor=\"middle\" transform=\"rotate(-90 14 " << fmt((y0 + y1) / 2) << ")\">"
      << xml_escape(y_label) << "</text>\n";
}

void draw_polyline(std::ofstream& out, const Axes& ax, const std::vector<double>& xs,
                   const std::vector<double>& ys, const std::string& color, bool dashed,
                   double width = 1.5) {
  if (xs.empty()) return;
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"";
  if (dashed) out << " stroke-dasharray=\"6 4\"";
  out << " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ' ';
    out << fmt(ax.px(xs[i])) << ',' << fmt(ax.py(ys[i]));
  }
  out << "\"/>\n";
}

void draw_legend(std::ofstream& out, const std::vector<Series>& series) {
  const double x = kWidth - kMarginRight - 190;
  double y = kMarginTop + 14;
  out << "<rect x=\"" << fmt(x - 8) << "\" y=\"" << fmt(y - 12) << "\" width=\"190\" height=\""
      << fmt(series.size() * 16 + 8.0) << "\" fill=\"white\" fill-opacity=\"0.85\""
      << " stroke=\"#999999\"/>\n";
  for (const auto& s : series) {
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y - 3) << "\" x2=\"" << fmt(x + 22)
        << "\" y2=\"" << fmt(y - 3) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
    out << "<text x=\"" << fmt(x + 28) << "\" y=\"" << fmt(y)
        << "\" font-family=\"monospace\" font-size=\"11\">" << xml_escape(s.label) << "</text>\n";
    y += 16;
  }
}

}  // namespace

const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                               "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
  return colors;
}

void write_time_series(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (!any) {
        xmin = xmax = s.t[i];
        ymin = ymax = s.y[i];
        any = true;
      }
      xmin = std::min(xmin, s.t[i]);
      xmax = std::max(xmax, s.t[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  ymin = std::min(ymin, 0.0);
  const double pad = (ymax - ymin < 1e-12) ? 1.0 : 0.06 * (ymax - ymin);
  Axes ax{xmin, xmax, ymin, ymax + pad};

  auto out = open_svg(path);
  draw_frame(out, ax, title, x_label, y_label);
  for (const auto& s : series) draw_polyline(out, ax, s.t, s.y, s.color, s.dashed);
  draw_legend(out, series);
  out << "</svg>\n";
}

void write_trajectory(const std::filesystem::path& path, const io::Config& cfg,
                      const SimLog<double>& log) {
  std::vector<double> xs, ys;
  xs.reserve(log.records.size() + 1);
  ys.reserve(log.records.size() + 1);
  for (const auto& rec : log.records) {
    xs.push_back(rec.x.x());
    ys.push_back(rec.x.y());
  }
  xs.push_back(log.final_x.x());
  ys.push_back(log.final_x.y());

  double xmin = cfg.box.min_corner.x(), xmax = cfg.box.max_corner.x();
  double ymin = cfg.box.min_corner.y(), ymax = cfg.box.max_corner.y();
  const auto include = [&](double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (std::size_t i = 0; i < xs.size(); ++i) include(xs[i], ys[i]);
  include(cfg.x_goal.x(), cfg.x_goal.y());

  // Equal-aspect data window with a margin.
  const double cx = (xmin + xmax) / 2, cy = (ymin + ymax) / 2;
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  double half_w = std::max(xmax - xmin, 0.2) * 0.55;
  double half_h = std::max(ymax - ymin, 0.2) * 0.55;
  if (half_w / plot_w > half_h / plot_h) half_h = half_w * plot_h / plot_w;
  else half_w = half_h * plot_w / plot_h;
  Axes ax{cx - half_w, cx + half_w, cy - half_h, cy + half_h};

  auto out = open_svg(path);
  draw_frame(out, ax, cfg.name + " trajectory", "x1 [m]", "x2 [m]");

  out << "<rect x=\"" << fmt(ax.px(cfg.box.min_corner.x())) << "\" y=\""
      << fmt(ax.py(cfg.box.max_corner.y())) << "\" width=\""
      << fmt(ax.px(cfg.box.max_corner.x()) - ax.px(cfg.box.min_corner.x())) << "\" height=\""
      << fmt(ax.py(cfg.box.min_corner.y()) - ax.py(cfg.box.max_corner.y()))
      << "\" fill=\"#c8c8c8\" stroke=\"#555555\"/>\n";

  draw_polyline(out, ax, xs, ys, "#1f77b4", false, 1.8);

  // Start marker.
  out << "<circle cx=\"" << fmt(ax.px(cfg.x0.x())) << "\" cy=\"" << fmt(ax.py(cfg.x0.y()))
      << "\" r=\"5\" fill=\"#ff7f0e\" stroke=\"#8c4600\"/>\n";

  // Goal star.
  const double gx = ax.px(cfg.x_goal.x()), gy = ax.py(cfg.x_goal.y());
  out << "<polygon fill=\"#2ca02c\" stroke=\"#145214\" points=\"";
  for (int i = 0; i < 10; ++i) {
    const double r = (i % 2 == 0) ? 8.0 : 3.4;
    const double th = -M_PI / 2 + i * M_PI / 5;
    if (i) out << ' ';
    out << fmt(gx + r * std::cos(th)) << ',' << fmt(gy + r * std::sin(th));
  }
  out << "\"/>\n";

  const std::vector<Series> legend{{"trajectory", {}, {}, "#1f77b4", false},
                                   {"start", {}, {}, "#ff7f0e", false},
                                   {"goal", {}, {}, "#2ca02c", false},
                                   {"obstacle", {}, {}, "#c8c8c8", false}};
  draw_legend(out, legend);
  out << "</svg>\n";
}

void write_jcurves(const std::filesystem::path& path, const io::Config& cfg,
                   const SimLog<double>& log) {
  std::vector<double> t;
  t.reserve(log.records.size());
  for (const auto& rec : log.records) t.push_back(rec.t);

  std::vector<Series> series;
  const auto& colors = palette();
  if (cfg.noise_mode == NoiseMode::Bound) {
    for (std::size_t e = 0; e < 4; ++e) {
      Series s{"J_bar_edge_" + std::to_string(e), t, {}, colors[(e + 2) % colors.size()], false};
      for (const auto& rec : log.records) s.y.push_back(rec.edge_J_bar[e]);
      series.push_back(std::move(s));
    }
  } else if (cfg.noise_mode == NoiseMode::Discretized) {
    std::vector<double> sample_max;
    for (const auto& rec : log.records)
      sample_max.push_back(*std::max_element(rec.point_J.begin(), rec.point_J.end()));
    series.push_back({"J_samples_max", t, sample_max, colors[2], false});
  }
  {
    Series s{"J_monitor_max", t, {}, colors[0], false};
    for (const auto& rec : log.records) s.y.push_back(rec.J_monitor_max);
    series.push_back(std::move(s));
  }
  series.push_back({"J_limit", {t.empty() ? 0.0 : t.front(), t.empty() ? 1.0 : t.back()},
                    {cfg.J_limit, cfg.J_limit}, colors[1], true});

  write_time_series(path, cfg.name + " exposure", "t [s]", "J", series);
}

}  // namespace fieldcbf::plot
