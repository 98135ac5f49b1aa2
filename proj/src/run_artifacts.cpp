#include "run_artifacts.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace fieldcbf::io {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write output file: " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RunMetrics compute_metrics(const Config& cfg, const SimLog<double>& log) {
  RunMetrics m;
  m.steps = static_cast<int>(log.records.size());
  m.min_h_obs = std::numeric_limits<double>::infinity();
  for (const auto& rec : log.records) m.min_h_obs = std::min(m.min_h_obs, rec.h_obs);
  if (log.status != TerminalStatus::PenetrationFault) {
    // The terminal state is not part of the step records.
    m.min_h_obs = std::min(m.min_h_obs, h_obstacle(QuadFootprint<double>{log.final_x, cfg.r_quad}, cfg.box));
  }
  if (!log.final_edges.empty()) {
    double bar = 0.0;
    for (const auto& acc : log.final_edges) bar = std::max(bar, acc.J_bar);
    m.max_J_bar = bar;
  }
  m.max_J_max = jmax_discretized(log.final_monitors);
  m.final_distance_to_goal = (log.final_x - cfg.x_goal).norm();
  return m;
}

std::vector<double> headline_series(const Config& cfg, const SimLog<double>& log) {
  std::vector<double> series;
  series.reserve(log.records.size());
  for (const auto& rec : log.records) {
    switch (cfg.noise_mode) {
      case NoiseMode::Off:
        series.push_back(rec.J_monitor_max);
        break;
      case NoiseMode::Discretized:
        series.push_back(*std::max_element(rec.point_J.begin(), rec.point_J.end()));
        break;
      case NoiseMode::Bound:
        series.push_back(*std::max_element(rec.edge_J_bar.begin(), rec.edge_J_bar.end()));
        break;
    }
  }
  return series;
}

std::string headline_label(const Config& cfg) {
  switch (cfg.noise_mode) {
    case NoiseMode::Off: return "J_monitor_max";
    case NoiseMode::Discretized: return "J_samples_max";
    case NoiseMode::Bound: return "J_bar_max";
  }
  return "J";
}

void write_trajectory_csv(const std::filesystem::path& path, const Config& cfg,
                          const SimLog<double>& log) {
  auto out = open_output(path);
  out << "t,x1,x2,u1,u2,uref1,uref2,h_obs,qp_status";
  if (cfg.noise_mode == NoiseMode::Bound) {
    for (std::size_t e = 0; e < 4; ++e) out << ",J_bar_edge_" << e;
  } else if (cfg.noise_mode == NoiseMode::Discretized) {
    for (int k = 0; k < cfg.discretization_points; ++k) out << ",J_pt_" << k;
  }
  out << ",J_monitor_max\n";

  for (const auto& rec : log.records) {
    out << format_double(rec.t) << ',' << format_double(rec.x.x()) << ',' << format_double(rec.x.y())
        << ',' << format_double(rec.u.x()) << ',' << format_double(rec.u.y()) << ','
        << format_double(rec.u_ref.x()) << ',' << format_double(rec.u_ref.y()) << ','
        << format_double(rec.h_obs) << ',' << to_string(rec.qp_status);
    for (double v : rec.edge_J_bar) out << ',' << format_double(v);
    for (double v : rec.point_J) out << ',' << format_double(v);
    out << ',' << format_double(rec.J_monitor_max) << '\n';
  }
}

void write_accumulators_csv(const std::filesystem::path& path, const Config& cfg,
                            const SimLog<double>& log) {
  auto out = open_output(path);
  out << "t";
  if (cfg.noise_mode == NoiseMode::Bound) {
    for (std::size_t e = 0; e < 4; ++e) out << ",J_bar_edge_" << e;
  } else if (cfg.noise_mode == NoiseMode::Discretized) {
    for (int k = 0; k < cfg.discretization_points; ++k) out << ",J_pt_" << k;
  }
  out << ",J_monitor_max\n";
  for (const auto& rec : log.records) {
    out << format_double(rec.t);
    for (double v : rec.edge_J_bar) out << ',' << format_double(v);
    for (double v : rec.point_J) out << ',' << format_double(v);
    out << ',' << format_double(rec.J_monitor_max) << '\n';
  }
}

void write_manifest(const std::filesystem::path& path, const Config& cfg, const SimLog<double>& log,
                    const RunMetrics& metrics, const std::map<std::string, std::string>& outputs) {
  nlohmann::json doc;
  doc["scenario"] = cfg.name;
  doc["config_hash"] = config_hash(cfg);
  doc["config"] = canonical_json(cfg);
  doc["status"] = to_string(log.status);
  doc["metrics"] = {
      {"steps", metrics.steps},
      {"min_h_obs", metrics.min_h_obs},
      {"max_J_max", metrics.max_J_max},
      {"final_distance_to_goal", metrics.final_distance_to_goal},
  };
  if (metrics.max_J_bar) doc["metrics"]["max_J_bar"] = *metrics.max_J_bar;
  else doc["metrics"]["max_J_bar"] = nullptr;
  doc["outputs"] = outputs;

  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

}  // namespace fieldcbf::io
