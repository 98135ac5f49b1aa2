#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fieldcbf/accumulator.hpp"
#include "fieldcbf/geometry.hpp"
#include "fieldcbf/noise_kernel.hpp"

namespace fieldcbf {

/// Linear class-K function alpha(h) = gain * h.
template <typename Scalar>
struct ClassK {
  Scalar gain;

  explicit ClassK(Scalar g) : gain(g) {
    if (!(gain > Scalar(0))) throw std::invalid_argument("ClassK: gain must be positive");
  }
  Scalar operator()(Scalar h) const { return gain * h; }
};

/// Maximum permissible cumulative exposure at any protected location.
template <typename Scalar>
struct NoiseBudget {
  Scalar J_limit;

  explicit NoiseBudget(Scalar limit) : J_limit(limit) {
    if (!(J_limit > Scalar(0))) throw std::invalid_argument("NoiseBudget: J_limit must be positive");
  }
};

enum class ConstraintKind { Obstacle, Point, Segment };

/// Origin of a constraint row, for logging and active-set reporting.
struct ConstraintTag {
  ConstraintKind kind{ConstraintKind::Obstacle};
  int index{0};  // sample-point or edge index; unused for the obstacle row
};

inline std::string to_string(const ConstraintTag& tag) {
  switch (tag.kind) {
    case ConstraintKind::Obstacle: return "obstacle";
    case ConstraintKind::Point: return "point_" + std::to_string(tag.index);
    case ConstraintKind::Segment: return "segment_" + std::to_string(tag.index);
  }
  return "unknown";
}

/// One half-plane constraint on the control input: a.dot(u) >= b.
template <typename Scalar>
struct HalfPlaneConstraint {
  Vec2<Scalar> a;
  Scalar b;
  ConstraintTag tag;

  Scalar slack(const Vec2<Scalar>& u) const { return a.dot(u) - b; }
};

/// Second-order constraint assembly variant. Recursion carries the full
/// expansion of Phi2 = d(Phi1)/dt + alpha2*Phi1; DropDamping omits the
/// alpha1*p term from the b side (selectable for figure reproduction).
enum class Phi2Formula { Recursion, DropDamping };

/// Distance from the nearest propeller disk to the box surface.
template <typename Scalar>
Scalar h_obstacle(const QuadFootprint<Scalar>& fp, const BoxObstacle<Scalar>& box) {
  const auto pair = closest_pair(fp, box);
  return (pair.x_quad - pair.x_box).norm() - fp.r_quad;
}

/// Collision constraint hdot + alpha1*h >= 0 under single-integrator dynamics.
/// The propeller offset is a constant translation, so the gradient with
/// respect to the agent center equals the gradient with respect to x_quad.
template <typename Scalar>
HalfPlaneConstraint<Scalar> obstacle_constraint(const QuadFootprint<Scalar>& fp,
                                                const BoxObstacle<Scalar>& box,
                                                const ClassK<Scalar>& alpha1) {
  const auto pair = closest_pair(fp, box);
  const Vec2<Scalar> sep = pair.x_quad - pair.x_box;
  const Scalar dist = sep.norm();
  if (dist == Scalar(0))
    throw PenetrationError("obstacle_constraint: propeller center in contact with the obstacle surface");
  const Scalar h = dist - fp.r_quad;
  return {sep / dist, -alpha1(h), ConstraintTag{ConstraintKind::Obstacle, 0}};
}

/// Exposure constraint for a single tracked point. The budget function
/// h = J_limit - J has relative degree 2 (hdot = -p carries no input), so the
/// constraint comes from the order-2 recursion:
///   Phi1 = -p + alpha1 * h
///   Phi2 = -grad_x(p).u - alpha1 * p + alpha2 * Phi1 >= 0.
/// The row is built from the smooth parabola A - sigma*|q - x|^2 without the
/// support clamp. Inside the support it equals the emission kernel; the
/// kernel is its positive part, so the recursion on the parabola caps the
/// true accrual rate everywhere, and the row keeps a usable gradient that
/// brakes an approach before the support ring instead of vanishing there.
/// Far from q the row is satisfied by any reasonable input (b is strongly
/// negative); the gradient degenerates to zero only at x == q exactly.
template <typename Scalar>
HalfPlaneConstraint<Scalar> point_noise_constraint(const PointAccumulator<Scalar>& acc,
                                                   const KernelParams<Scalar>& kernel,
                                                   const Vec2Arg<Scalar>& x, const NoiseBudget<Scalar>& budget,
                                                   const ClassK<Scalar>& alpha1, const ClassK<Scalar>& alpha2,
                                                   Phi2Formula formula = Phi2Formula::Recursion,
                                                   ConstraintTag tag = {ConstraintKind::Point, 0}) {
  const Vec2<Scalar> toward = acc.q - x;
  const Scalar p = kernel.A - kernel.sigma * toward.squaredNorm();
  const Vec2<Scalar> grad = Scalar(2) * kernel.sigma * toward;
  const Scalar phi1 = -p + alpha1(budget.J_limit - acc.J);
  Scalar b = -alpha2(phi1);
  if (formula == Phi2Formula::Recursion) b += alpha1(p);
  return {-grad, b, tag};
}

/// Exposure constraint for a whole segment through the running bound J_bar.
/// Identical algebra to the point constraint evaluated at the kernel
/// maximizer q_star: at an interior maximizer the envelope argument makes
/// treating q_star as constant exact for the first derivative, and at a
/// clamped maximizer q_star is locally fixed anyway.
template <typename Scalar>
HalfPlaneConstraint<Scalar> segment_noise_constraint(const SegmentBoundAccumulator<Scalar>& acc,
                                                     const KernelParams<Scalar>& kernel,
                                                     const Vec2Arg<Scalar>& x,
                                                     const NoiseBudget<Scalar>& budget,
                                                     const ClassK<Scalar>& alpha1,
                                                     const ClassK<Scalar>& alpha2,
                                                     Phi2Formula formula = Phi2Formula::Recursion,
                                                     ConstraintTag tag = {ConstraintKind::Segment, 0}) {
  const auto mx = argmax_on_segment(kernel, acc.seg, x);
  return point_noise_constraint(PointAccumulator<Scalar>{mx.q_star, acc.J_bar}, kernel, x, budget, alpha1,
                                alpha2, formula, tag);
}

/// One segment constraint per polygon edge. The collision constraint for the
/// polygon itself must be supplied alongside by the caller.
template <typename Scalar>
std::vector<HalfPlaneConstraint<Scalar>> polygon_noise_constraints(
    const std::vector<Segment2<Scalar>>& edges, const std::vector<SegmentBoundAccumulator<Scalar>>& accs,
    const KernelParams<Scalar>& kernel, const Vec2Arg<Scalar>& x, const NoiseBudget<Scalar>& budget,
    const ClassK<Scalar>& alpha1, const ClassK<Scalar>& alpha2,
    Phi2Formula formula = Phi2Formula::Recursion) {
  if (edges.size() != accs.size())
    throw std::invalid_argument("polygon_noise_constraints: one accumulator per edge required");
  std::vector<HalfPlaneConstraint<Scalar>> constraints;
  constraints.reserve(accs.size());
  for (std::size_t i = 0; i < accs.size(); ++i) {
    constraints.push_back(segment_noise_constraint(accs[i], kernel, x, budget, alpha1, alpha2, formula,
                                                   ConstraintTag{ConstraintKind::Segment, static_cast<int>(i)}));
  }
  return constraints;
}

}  // namespace fieldcbf
