#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldcbf/accumulator.hpp"
#include "fieldcbf/barrier.hpp"
#include "fieldcbf/geometry.hpp"
#include "fieldcbf/noise_kernel.hpp"
#include "fieldcbf/qp_solver.hpp"

namespace fieldcbf {

enum class NoiseMode { Off, Discretized, Bound };
enum class InfeasiblePolicy { Halt, ZeroInput };
enum class TerminalStatus { ReachedGoal, MaxSteps, InfeasibleHalt, PenetrationFault };
enum class QpStatus { Optimal, Infeasible };

inline std::string to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::ReachedGoal: return "reached_goal";
    case TerminalStatus::MaxSteps: return "max_steps";
    case TerminalStatus::InfeasibleHalt: return "infeasible_halt";
    case TerminalStatus::PenetrationFault: return "penetration_fault";
  }
  return "unknown";
}

inline std::string to_string(QpStatus status) {
  return status == QpStatus::Optimal ? "optimal" : "infeasible";
}

/// Full description of one closed-loop experiment.
template <typename Scalar>
struct ScenarioConfig {
  std::string name;
  Vec2<Scalar> x0;
  Vec2<Scalar> x_goal;
  BoxObstacle<Scalar> box;
  Scalar r_quad;
  Scalar dt;
  int max_steps{500};
  Scalar alpha1{3};
  Scalar alpha2{6};
  KernelParams<Scalar> kernel;
  Scalar J_limit;
  NoiseMode noise_mode{NoiseMode::Off};
  int discretization_points{8};  // K; only used when noise_mode == Discretized
  int monitor_points{100};
  Phi2Formula phi2_formula{Phi2Formula::Recursion};
  InfeasiblePolicy infeasible_policy{InfeasiblePolicy::Halt};
  Scalar goal_tolerance{Scalar(0.05)};
  Scalar initial_exposure{0};     // seeds J(q,0) and J_bar(0)
  std::optional<Scalar> u_max{};  // componentwise input clamp; off by default
};

/// Throws std::invalid_argument naming the offending field.
template <typename Scalar>
void validate(const ScenarioConfig<Scalar>& cfg) {
  detail::require_finite(cfg.x0, "x0");
  detail::require_finite(cfg.x_goal, "x_goal");
  if (!(cfg.r_quad > Scalar(0))) throw std::invalid_argument("r_quad: must be > 0");
  if (!(cfg.dt > Scalar(0))) throw std::invalid_argument("dt: must be > 0");
  if (cfg.max_steps < 1) throw std::invalid_argument("max_steps: must be >= 1");
  if (!(cfg.alpha1 > Scalar(0))) throw std::invalid_argument("alpha1: must be > 0");
  if (!(cfg.alpha2 > Scalar(0))) throw std::invalid_argument("alpha2: must be > 0");
  if (!(cfg.J_limit > Scalar(0))) throw std::invalid_argument("J_limit: must be > 0");
  if (cfg.noise_mode == NoiseMode::Discretized) {
    if (cfg.discretization_points < 1) throw std::invalid_argument("discretization_points: must be >= 1");
    if (cfg.discretization_points > kMaxQpConstraints - 1)
      throw std::invalid_argument("discretization_points: at most " +
                                  std::to_string(kMaxQpConstraints - 1) +
                                  " sample constraints fit in one program");
  }
  if (cfg.monitor_points < 1) throw std::invalid_argument("monitor_points: must be >= 1");
  if (!(cfg.goal_tolerance >= Scalar(0))) throw std::invalid_argument("goal_tolerance: must be >= 0");
  if (!(cfg.initial_exposure >= Scalar(0))) throw std::invalid_argument("initial_exposure: must be >= 0");
  if (cfg.u_max && !(*cfg.u_max > Scalar(0))) throw std::invalid_argument("u_max: must be > 0 when set");
}

/// Mutable closed-loop state: agent position plus every accumulator. Monitor
/// points are pure observers and never generate constraints.
template <typename Scalar>
struct SimState {
  Vec2<Scalar> x;
  std::vector<PointAccumulator<Scalar>> points;        // constrained samples (Discretized)
  std::vector<SegmentBoundAccumulator<Scalar>> edges;  // per-edge bounds (Bound)
  std::vector<PointAccumulator<Scalar>> monitors;
};

template <typename Scalar>
SimState<Scalar> initial_state(const ScenarioConfig<Scalar>& cfg) {
  SimState<Scalar> state{cfg.x0, {}, {}, {}};
  if (cfg.noise_mode == NoiseMode::Discretized) {
    for (const auto& q : boundary_samples(cfg.box, cfg.discretization_points))
      state.points.push_back({q, cfg.initial_exposure});
  }
  if (cfg.noise_mode == NoiseMode::Bound) {
    for (const auto& edge : polygon_edges(box_vertices(cfg.box)))
      state.edges.push_back({edge, cfg.initial_exposure});
  }
  for (const auto& q : boundary_samples(cfg.box, cfg.monitor_points))
    state.monitors.push_back({q, cfg.initial_exposure});
  return state;
}

/// Proportional reference controller with unit gain.
template <typename Scalar>
Vec2<Scalar> k_ref(const Vec2<Scalar>& x, const Vec2<Scalar>& goal) {
  return goal - x;
}

/// Collision row always; exposure rows according to the noise mode.
template <typename Scalar>
std::vector<HalfPlaneConstraint<Scalar>> assemble_constraints(const ScenarioConfig<Scalar>& cfg,
                                                              const SimState<Scalar>& state) {
  const QuadFootprint<Scalar> fp{state.x, cfg.r_quad};
  const ClassK<Scalar> alpha1{cfg.alpha1};
  const ClassK<Scalar> alpha2{cfg.alpha2};
  const NoiseBudget<Scalar> budget{cfg.J_limit};

  std::vector<HalfPlaneConstraint<Scalar>> constraints;
  constraints.push_back(obstacle_constraint(fp, cfg.box, alpha1));
  switch (cfg.noise_mode) {
    case NoiseMode::Off:
      break;
    case NoiseMode::Discretized:
      for (std::size_t k = 0; k < state.points.size(); ++k) {
        constraints.push_back(point_noise_constraint(state.points[k], cfg.kernel, state.x, budget, alpha1,
                                                     alpha2, cfg.phi2_formula,
                                                     ConstraintTag{ConstraintKind::Point, static_cast<int>(k)}));
      }
      break;
    case NoiseMode::Bound: {
      const auto edges = polygon_edges(box_vertices(cfg.box));
      for (auto&& c : polygon_noise_constraints(edges, state.edges, cfg.kernel, state.x, budget, alpha1,
                                                alpha2, cfg.phi2_formula))
        constraints.push_back(std::move(c));
      break;
    }
  }
  return constraints;
}

template <typename Scalar>
struct ConstraintRecord {
  HalfPlaneConstraint<Scalar> constraint;
  Scalar slack;  // a.dot(u) - b at the applied input
};

/// One executed step. State, exposure values and h_obs are pre-step; u is the
/// input applied over [t, t + dt).
template <typename Scalar>
struct StepRecord {
  Scalar t;
  Vec2<Scalar> x;
  Vec2<Scalar> u_ref;
  Vec2<Scalar> u;
  Scalar h_obs;
  QpStatus qp_status;
  std::vector<int> active_set;
  std::vector<ConstraintRecord<Scalar>> constraints;
  std::vector<Scalar> point_J;
  std::vector<Scalar> edge_J_bar;
  Scalar J_monitor_max;
};

template <typename Scalar>
struct SimLog {
  std::vector<StepRecord<Scalar>> records;
  TerminalStatus status{TerminalStatus::MaxSteps};
  Vec2<Scalar> final_x;
  Scalar final_t{0};
  std::vector<PointAccumulator<Scalar>> final_points;
  std::vector<SegmentBoundAccumulator<Scalar>> final_edges;
  std::vector<PointAccumulator<Scalar>> final_monitors;
};

/// Advances one explicit-Euler step: assemble constraints at the current
/// state, filter the reference through the program, then move the state and
/// every accumulator with the same pre-step position (left-endpoint
/// convention on both). Throws PenetrationError on geometric fault; on an
/// infeasible program the record carries u = 0 and the caller applies the
/// configured policy (state is only advanced when the policy continues).
template <typename Scalar>
StepRecord<Scalar> step(const ScenarioConfig<Scalar>& cfg, SimState<Scalar>& state, Scalar t) {
  StepRecord<Scalar> rec{};
  rec.t = t;
  rec.x = state.x;
  rec.u_ref = k_ref(state.x, cfg.x_goal);
  rec.h_obs = h_obstacle(QuadFootprint<Scalar>{state.x, cfg.r_quad}, cfg.box);
  for (const auto& acc : state.points) rec.point_J.push_back(acc.J);
  for (const auto& acc : state.edges) rec.edge_J_bar.push_back(acc.J_bar);
  rec.J_monitor_max = jmax_discretized(state.monitors);

  const auto constraints = assemble_constraints(cfg, state);
  const auto solution = solve(QpProblem<Scalar>{rec.u_ref, constraints});

  if (!solution) {
    rec.qp_status = QpStatus::Infeasible;
    rec.u = Vec2<Scalar>::Zero();
  } else {
    rec.qp_status = QpStatus::Optimal;
    rec.u = solution->u;
    rec.active_set = solution->active_set;
    if (cfg.u_max) rec.u = rec.u.cwiseMax(-*cfg.u_max).cwiseMin(*cfg.u_max);
  }
  rec.constraints.reserve(constraints.size());
  for (const auto& c : constraints) rec.constraints.push_back({c, c.slack(rec.u)});

  if (!solution && cfg.infeasible_policy == InfeasiblePolicy::Halt) return rec;

  for (auto& acc : state.points) acc = step_point(acc, cfg.kernel, state.x, cfg.dt);
  for (auto& acc : state.edges) acc = step_bound(acc, cfg.kernel, state.x, cfg.dt);
  for (auto& acc : state.monitors) acc = step_point(acc, cfg.kernel, state.x, cfg.dt);
  state.x += cfg.dt * rec.u;
  return rec;
}

/// Runs the closed loop until the goal is within goal_tolerance, max_steps
/// is exhausted, or a fault ends the run. Deterministic: identical configs
/// produce identical logs.
template <typename Scalar>
SimLog<Scalar> run(const ScenarioConfig<Scalar>& cfg) {
  validate(cfg);
  SimState<Scalar> state = initial_state(cfg);
  SimLog<Scalar> log;

  int steps = 0;     // records appended
  int advanced = 0;  // steps that actually moved time forward
  while (true) {
    if ((state.x - cfg.x_goal).norm() <= cfg.goal_tolerance) {
      log.status = TerminalStatus::ReachedGoal;
      break;
    }
    if (steps >= cfg.max_steps) {
      log.status = TerminalStatus::MaxSteps;
      break;
    }
    try {
      StepRecord<Scalar> rec = step(cfg, state, Scalar(advanced) * cfg.dt);
      const bool halted = rec.qp_status == QpStatus::Infeasible &&
                          cfg.infeasible_policy == InfeasiblePolicy::Halt;
      log.records.push_back(std::move(rec));
      ++steps;
      if (halted) {
        log.status = TerminalStatus::InfeasibleHalt;
        break;
      }
      ++advanced;
    } catch (const PenetrationError&) {
      log.status = TerminalStatus::PenetrationFault;
      break;
    }
  }

  log.final_x = state.x;
  log.final_t = Scalar(advanced) * cfg.dt;
  log.final_points = state.points;
  log.final_edges = state.edges;
  log.final_monitors = state.monitors;
  return log;
}

}  // namespace fieldcbf
