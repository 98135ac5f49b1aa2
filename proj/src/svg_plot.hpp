#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "run_artifacts.hpp"

namespace fieldcbf::plot {

struct Series {
  std::string label;
  std::vector<double> t;
  std::vector<double> y;
  std::string color;
  bool dashed = false;
};

/// Static time-series chart with axes, ticks, and a legend. Output is a pure
/// function of the inputs (no timestamps), so repeated runs are byte-equal.
void write_time_series(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

/// Top-down view of one run: obstacle box, trajectory, start and goal markers.
void write_trajectory(const std::filesystem::path& path, const io::Config& cfg,
                      const SimLog<double>& log);

/// Exposure curves of one run (per-edge bounds or per-sample exposures, the
/// monitored maximum, and the budget line).
void write_jcurves(const std::filesystem::path& path, const io::Config& cfg, const SimLog<double>& log);

/// Palette used for multi-series charts, in deterministic order.
const std::vector<std::string>& palette();

}  // namespace fieldcbf::plot
