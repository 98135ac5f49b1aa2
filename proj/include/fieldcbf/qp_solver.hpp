#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fieldcbf/barrier.hpp"

namespace fieldcbf {

inline constexpr int kMaxQpConstraints = 16;

/// Projection of a reference input onto a small intersection of half-planes:
///   min_u |u - k_ref|^2   s.t.   a_i.dot(u) >= b_i.
template <typename Scalar>
struct QpProblem {
  Vec2<Scalar> k_ref;
  std::vector<HalfPlaneConstraint<Scalar>> constraints;
};

template <typename Scalar>
struct QpSolution {
  Vec2<Scalar> u;
  std::vector<int> active_set;  // indices of the constraints tight at u
  Scalar objective;             // |u - k_ref|^2
};

namespace detail {

template <typename Scalar>
constexpr Scalar qp_feasibility_tol() {
  return Scalar(1e-9);
}

// Rows with a (numerically) vanishing normal cannot constrain u; they are
// feasibility checks. A barrier row only degenerates to zero when the agent
// sits exactly on the tracked point.
template <typename Scalar>
bool zero_normal(const Vec2<Scalar>& a) {
  return a.squaredNorm() <= Scalar(1e-24);
}

template <typename Scalar>
bool feasible(const std::vector<HalfPlaneConstraint<Scalar>>& rows, const Vec2<Scalar>& u) {
  for (const auto& row : rows) {
    if (zero_normal(row.a)) continue;  // checked up front in solve()
    if (row.slack(u) < -qp_feasibility_tol<Scalar>()) return false;
  }
  return true;
}

}  // namespace detail

/// Exact solve by enumerating candidate active sets of size 0, 1 and 2; in
/// two dimensions the optimal active set never needs more than two
/// independent rows. Returns nullopt when the feasible set is empty.
/// Candidates are scanned in a fixed order (unconstrained, then single rows
/// in input order, then pairs lexicographically) and ties keep the earliest,
/// so the result is deterministic even for degenerate geometry.
template <typename Scalar>
std::optional<QpSolution<Scalar>> solve(const QpProblem<Scalar>& problem) {
  const auto& rows = problem.constraints;
  if (rows.size() > static_cast<std::size_t>(kMaxQpConstraints))
    throw std::invalid_argument("solve: too many constraints for the active-set enumeration");
  const Scalar tol = detail::qp_feasibility_tol<Scalar>();

  for (const auto& row : rows) {
    if (detail::zero_normal(row.a) && row.b > tol) return std::nullopt;
  }

  // Size 0: the reference input itself.
  if (detail::feasible(rows, problem.k_ref)) {
    return QpSolution<Scalar>{problem.k_ref, {}, Scalar(0)};
  }

  std::optional<QpSolution<Scalar>> best;

  const auto consider = [&](const Vec2<Scalar>& u, std::vector<int> active) {
    if (!u.allFinite() || !detail::feasible(rows, u)) return;
    const Scalar objective = (u - problem.k_ref).squaredNorm();
    if (!best || objective < best->objective) best = QpSolution<Scalar>{u, std::move(active), objective};
  };

  // Size 1: projection onto each constraint line.
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    if (detail::zero_normal(rows[i].a)) continue;
    const Vec2<Scalar>& a = rows[i].a;
    const Vec2<Scalar> u = problem.k_ref + (rows[i].b - a.dot(problem.k_ref)) / a.squaredNorm() * a;
    consider(u, {i});
  }

  // Size 2: intersection of each pair with independent normals.
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    if (detail::zero_normal(rows[i].a)) continue;
    for (int j = i + 1; j < static_cast<int>(rows.size()); ++j) {
      if (detail::zero_normal(rows[j].a)) continue;
      const Vec2<Scalar>& ai = rows[i].a;
      const Vec2<Scalar>& aj = rows[j].a;
      const Scalar det = ai.x() * aj.y() - ai.y() * aj.x();
      if (std::abs(det) <= Scalar(1e-12) * ai.norm() * aj.norm()) continue;  // parallel normals
      const Vec2<Scalar> u((rows[i].b * aj.y() - rows[j].b * ai.y()) / det,
                           (rows[j].b * ai.x() - rows[i].b * aj.x()) / det);
      consider(u, {i, j});
    }
  }

  return best;
}

}  // namespace fieldcbf
