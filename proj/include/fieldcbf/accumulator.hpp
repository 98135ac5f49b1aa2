#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "fieldcbf/noise_kernel.hpp"

namespace fieldcbf {

/// Cumulative exposure J(q, t) at one fixed location, advanced with
/// left-endpoint rectangles so that the integral and the explicit-Euler state
/// update share the same time discretization.
template <typename Scalar>
struct PointAccumulator {
  Vec2<Scalar> q;
  Scalar J{0};
};

/// Scalar over-approximation of the segment-wise exposure maximum, advanced by
/// integrating the pointwise kernel maximum over the segment.
template <typename Scalar>
struct SegmentBoundAccumulator {
  Segment2<Scalar> seg;
  Scalar J_bar{0};
};

template <typename Scalar>
PointAccumulator<Scalar> step_point(PointAccumulator<Scalar> acc, const KernelParams<Scalar>& kernel,
                                    const Vec2Arg<Scalar>& x, Scalar dt) {
  if (!(dt > Scalar(0))) throw std::invalid_argument("step_point: dt must be positive");
  acc.J += dt * eval(kernel, acc.q, x);
  return acc;
}

template <typename Scalar>
SegmentBoundAccumulator<Scalar> step_bound(SegmentBoundAccumulator<Scalar> acc,
                                           const KernelParams<Scalar>& kernel, const Vec2Arg<Scalar>& x,
                                           Scalar dt) {
  if (!(dt > Scalar(0))) throw std::invalid_argument("step_bound: dt must be positive");
  acc.J_bar += dt * argmax_on_segment(kernel, acc.seg, x).p_star;
  return acc;
}

/// Maximum exposure among a finite set of tracked points.
template <typename Scalar>
Scalar jmax_discretized(const std::vector<PointAccumulator<Scalar>>& points) {
  if (points.empty()) throw std::invalid_argument("jmax_discretized: empty point set");
  Scalar m = points.front().J;
  for (const auto& acc : points) m = std::max(m, acc.J);
  return m;
}

}  // namespace fieldcbf
