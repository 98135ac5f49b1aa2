#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scenario_io.hpp"

namespace fieldcbf::io {

/// Headline numbers for a finished run.
struct RunMetrics {
  int steps{0};
  double min_h_obs{0};
  std::optional<double> max_J_bar;  // only in bound mode
  double max_J_max{0};              // over the monitor points
  double final_distance_to_goal{0};
};

RunMetrics compute_metrics(const Config& cfg, const SimLog<double>& log);

/// The per-run exposure headline: monitored max (off), constrained-sample max
/// (discretized), or max edge bound (bound). One value per logged step.
std::vector<double> headline_series(const Config& cfg, const SimLog<double>& log);
std::string headline_label(const Config& cfg);

/// Lossless, locale-independent float formatting shared by the CSV writers.
std::string format_double(double v);

void write_trajectory_csv(const std::filesystem::path& path, const Config& cfg,
                          const SimLog<double>& log);
void write_accumulators_csv(const std::filesystem::path& path, const Config& cfg,
                            const SimLog<double>& log);
void write_manifest(const std::filesystem::path& path, const Config& cfg, const SimLog<double>& log,
                    const RunMetrics& metrics, const std::map<std::string, std::string>& outputs);

}  // namespace fieldcbf::io
