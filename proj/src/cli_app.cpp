#include "cli_app.hpp"

#include <cstdio>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <vector>

#include <CLI11.hpp>

#include "run_artifacts.hpp"
#include "scenario_io.hpp"
#include "svg_plot.hpp"

namespace fieldcbf::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;
constexpr int kExitIo = 4;

struct GlobalOpts {
  std::optional<double> dt_override;
  bool quiet = false;
};

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

io::Config load_config(const fs::path& path, const GlobalOpts& global) {
  io::Config cfg = io::load_scenario(path);
  if (global.dt_override) {
    cfg.dt = *global.dt_override;
    try {
      validate(cfg);
    } catch (const std::invalid_argument& e) {
      throw io::ConfigError(std::string("config field `") + e.what() + "` (after --dt-override)");
    }
  }
  return cfg;
}

struct RunOutput {
  io::Config cfg;
  SimLog<double> log;
  io::RunMetrics metrics;
};

RunOutput execute(io::Config cfg) {
  SimLog<double> log = run(cfg);
  io::RunMetrics metrics = io::compute_metrics(cfg, log);
  return {std::move(cfg), std::move(log), metrics};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io::IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

bool is_fault(TerminalStatus status) {
  return status == TerminalStatus::InfeasibleHalt || status == TerminalStatus::PenetrationFault;
}

void print_summary(const RunOutput& r, const fs::path& dir) {
  std::cout << r.cfg.name << ": " << to_string(r.log.status) << " steps=" << r.metrics.steps
            << " min_h_obs=" << r.metrics.min_h_obs << " max_J_max=" << r.metrics.max_J_max;
  if (r.metrics.max_J_bar) std::cout << " max_J_bar=" << *r.metrics.max_J_bar;
  std::cout << " final_dist=" << r.metrics.final_distance_to_goal << " out=" << dir.string() << "\n";
}

/// Writes the full per-run artifact set into dir.
void write_artifacts(const RunOutput& r, const fs::path& dir) {
  ensure_dir(dir);
  const std::map<std::string, std::string> outputs{
      {"trajectory_csv", "trajectory.csv"},  {"accumulators_csv", "accumulators.csv"},
      {"manifest_json", "manifest.json"},    {"trajectory_svg", "trajectory.svg"},
      {"jcurves_svg", "jcurves.svg"},
  };
  io::write_trajectory_csv(dir / "trajectory.csv", r.cfg, r.log);
  io::write_accumulators_csv(dir / "accumulators.csv", r.cfg, r.log);
  io::write_manifest(dir / "manifest.json", r.cfg, r.log, r.metrics, outputs);
  plot::write_trajectory(dir / "trajectory.svg", r.cfg, r.log);
  plot::write_jcurves(dir / "jcurves.svg", r.cfg, r.log);
}

int cmd_run(const fs::path& config_path, const fs::path& out_dir, const GlobalOpts& global) {
  const RunOutput r = execute(load_config(config_path, global));
  write_artifacts(r, out_dir);
  if (!global.quiet) print_summary(r, out_dir);
  return is_fault(r.log.status) ? kExitFault : kExitOk;
}

int cmd_compare(const std::vector<fs::path>& config_paths, const fs::path& out_dir,
                const GlobalOpts& global) {
  std::vector<io::Config> configs;
  for (const auto& path : config_paths) configs.push_back(load_config(path, global));
  for (std::size_t i = 1; i < configs.size(); ++i) {
    if (configs[i].J_limit != configs[0].J_limit)
      throw io::ConfigError("config field `J_limit`: compare requires identical budgets across configs");
    if (configs[i].kernel.A != configs[0].kernel.A || configs[i].kernel.sigma != configs[0].kernel.sigma)
      throw io::ConfigError("config field `kernel`: compare requires identical kernels across configs");
    if (configs[i].dt != configs[0].dt)
      throw io::ConfigError("config field `dt`: compare requires identical time steps across configs");
  }

  std::vector<std::future<RunOutput>> futures;
  futures.reserve(configs.size());
  for (const auto& cfg : configs)
    futures.push_back(std::async(std::launch::async, [cfg] { return execute(cfg); }));
  std::vector<RunOutput> outs;
  outs.reserve(futures.size());
  for (auto& f : futures) outs.push_back(f.get());

  ensure_dir(out_dir);

  // Column labels: scenario names, deduplicated in input order.
  std::vector<std::string> labels;
  std::map<std::string, int> seen;
  for (const auto& r : outs) {
    const int n = ++seen[r.cfg.name];
    labels.push_back(n == 1 ? "J_" + r.cfg.name : "J_" + r.cfg.name + "_" + std::to_string(n));
  }

  std::size_t rows = 0;
  for (const auto& r : outs) rows = std::max(rows, r.log.records.size());
  const double dt = configs[0].dt;

  {
    std::ofstream csv(out_dir / "jcurves_combined.csv");
    if (!csv) throw io::IoError("cannot write output file: " + (out_dir / "jcurves_combined.csv").string());
    csv << "t";
    for (const auto& label : labels) csv << ',' << label;
    csv << ",J_limit\n";
    std::vector<std::vector<double>> series;
    for (const auto& r : outs) series.push_back(io::headline_series(r.cfg, r.log));
    for (std::size_t i = 0; i < rows; ++i) {
      csv << io::format_double(static_cast<double>(i) * dt);
      for (const auto& s : series) {
        csv << ',';
        if (i < s.size()) csv << io::format_double(s[i]);
      }
      csv << ',' << io::format_double(configs[0].J_limit) << '\n';
    }
  }

  {
    std::vector<plot::Series> series;
    const auto& colors = plot::palette();
    for (std::size_t k = 0; k < outs.size(); ++k) {
      plot::Series s{labels[k], {}, io::headline_series(outs[k].cfg, outs[k].log),
                     colors[k % colors.size()], false};
      for (std::size_t i = 0; i < s.y.size(); ++i) s.t.push_back(static_cast<double>(i) * dt);
      series.push_back(std::move(s));
    }
    series.push_back({"J_limit",
                      {0.0, rows == 0 ? 1.0 : static_cast<double>(rows - 1) * dt},
                      {configs[0].J_limit, configs[0].J_limit},
                      "#d62728",
                      true});
    plot::write_time_series(out_dir / "jcurves_overlay.svg", "exposure comparison", "t [s]", "J", series);
  }

  int code = kExitOk;
  for (const auto& r : outs) {
    if (!global.quiet) print_summary(r, out_dir);
    if (is_fault(r.log.status)) code = kExitFault;
  }
  return code;
}

void apply_sweep_value(io::Config& cfg, const std::string& param, double value) {
  try {
    if (param == "A") cfg.kernel = KernelParams<double>{value, cfg.kernel.sigma};
    else if (param == "sigma") cfg.kernel = KernelParams<double>{cfg.kernel.A, value};
    else if (param == "J_limit") cfg.J_limit = value;
    else if (param == "alpha1") cfg.alpha1 = value;
    else if (param == "alpha2") cfg.alpha2 = value;
    else if (param == "dt") cfg.dt = value;
    else
      throw io::ConfigError("sweep parameter `" + param +
                            "`: unknown; valid names: A, sigma, J_limit, alpha1, alpha2, dt");
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw io::ConfigError("sweep value " + format_value(value) + " for `" + param + "`: " + e.what());
  }
}

int cmd_sweep(const fs::path& config_path, const std::string& param, const std::vector<double>& values,
              const fs::path& out_dir, const GlobalOpts& global) {
  const io::Config base = load_config(config_path, global);
  if (values.empty()) throw io::ConfigError("sweep: at least one value required");

  std::vector<io::Config> configs;
  for (double v : values) {
    io::Config cfg = base;
    apply_sweep_value(cfg, param, v);
    cfg.name = base.name + "_" + param + "_" + format_value(v);
    configs.push_back(std::move(cfg));
  }

  std::vector<std::future<RunOutput>> futures;
  futures.reserve(configs.size());
  for (const auto& cfg : configs)
    futures.push_back(std::async(std::launch::async, [cfg] { return execute(cfg); }));

  ensure_dir(out_dir);
  std::ofstream summary(out_dir / "sweep_summary.csv");
  if (!summary) throw io::IoError("cannot write output file: " + (out_dir / "sweep_summary.csv").string());
  summary << "param,value,scenario,status,steps,min_h_obs,max_J_bar,max_J_max,final_distance_to_goal,"
             "out_dir\n";

  int code = kExitOk;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    const RunOutput r = futures[i].get();
    const fs::path dir = out_dir / (param + "_" + format_value(values[i]));
    write_artifacts(r, dir);
    if (!global.quiet) print_summary(r, dir);
    summary << param << ',' << io::format_double(values[i]) << ',' << r.cfg.name << ','
            << to_string(r.log.status) << ',' << r.metrics.steps << ','
            << io::format_double(r.metrics.min_h_obs) << ',';
    if (r.metrics.max_J_bar) summary << io::format_double(*r.metrics.max_J_bar);
    summary << ',' << io::format_double(r.metrics.max_J_max) << ','
            << io::format_double(r.metrics.final_distance_to_goal) << ','
            << dir.filename().string() << '\n';
    if (is_fault(r.log.status)) code = kExitFault;
  }
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Exposure-bounded agent control: scenario simulator and safety-filter playground"};
  app.require_subcommand(1);

  GlobalOpts global;
  double dt_override = 0.0;
  auto* dt_opt = app.add_option("--dt-override", dt_override,
                                "Replace dt in every loaded config (convergence studies)");
  long seed = 0;
  app.add_option("--seed", seed, "Reserved; runs are fully deterministic")->group("");
  app.add_flag("--quiet", global.quiet, "Suppress per-run summaries");

  std::string run_config, run_out;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and write its artifacts");
  run_cmd->add_option("config", run_config, "Scenario config (JSON)")->required();
  run_cmd->add_option("--out", run_out, "Output directory")->required();

  std::vector<std::string> cmp_configs;
  std::string cmp_out;
  auto* cmp_cmd = app.add_subcommand("compare", "Overlay the exposure headline of several runs");
  cmp_cmd->add_option("configs", cmp_configs, "Scenario configs (JSON)")->expected(2, -1)->required();
  cmp_cmd->add_option("--out", cmp_out, "Output directory")->required();

  std::string sweep_config, sweep_param, sweep_out;
  std::vector<double> sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one scenario across parameter values");
  sweep_cmd->add_option("config", sweep_config, "Scenario config (JSON)")->required();
  sweep_cmd->add_option("--param", sweep_param, "One of: A, sigma, J_limit, alpha1, alpha2, dt")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
    if (*dt_opt) global.dt_override = dt_override;

    if (run_cmd->parsed()) return cmd_run(run_config, run_out, global);
    if (cmp_cmd->parsed()) {
      std::vector<fs::path> paths(cmp_configs.begin(), cmp_configs.end());
      return cmd_compare(paths, cmp_out, global);
    }
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_config, sweep_param, sweep_values, sweep_out, global);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const io::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace fieldcbf::cli
