#pragma once

#include <cmath>
#include <stdexcept>

#include "fieldcbf/geometry.hpp"

namespace fieldcbf {

/// Compactly supported parabolic emission kernel
///   p(q, x) = A - sigma * |q - x|^2   for |q - x| <= sqrt(A / sigma),
///   p(q, x) = 0                       otherwise.
template <typename Scalar>
struct KernelParams {
  Scalar A;      // peak value at zero distance
  Scalar sigma;  // quadratic falloff rate

  KernelParams(Scalar peak, Scalar falloff) : A(peak), sigma(falloff) {
    if (!(A > Scalar(0)) || !std::isfinite(static_cast<double>(A)))
      throw std::invalid_argument("KernelParams: A must be positive and finite");
    if (!(sigma > Scalar(0)) || !std::isfinite(static_cast<double>(sigma)))
      throw std::invalid_argument("KernelParams: sigma must be positive and finite");
  }

  Scalar support_radius() const { return std::sqrt(A / sigma); }
  Scalar support_radius_sq() const { return A / sigma; }
};

template <typename Scalar>
Scalar eval(const KernelParams<Scalar>& kernel, const Vec2Arg<Scalar>& q, const Vec2Arg<Scalar>& x) {
  const Scalar d2 = (q - x).squaredNorm();
  return d2 <= kernel.support_radius_sq() ? kernel.A - kernel.sigma * d2 : Scalar(0);
}

/// Gradient of eval with respect to the agent position x: 2*sigma*(q - x)
/// inside the support, zero outside. The kernel is only C0 at the support
/// boundary; we use the inside formula on the closed disk.
template <typename Scalar>
Vec2<Scalar> grad_x(const KernelParams<Scalar>& kernel, const Vec2Arg<Scalar>& q, const Vec2Arg<Scalar>& x) {
  const Vec2<Scalar> d = q - x;
  if (d.squaredNorm() <= kernel.support_radius_sq()) return Scalar(2) * kernel.sigma * d;
  return Vec2<Scalar>::Zero();
}

/// Result of maximizing the kernel over a segment for a fixed agent position.
template <typename Scalar>
struct SegmentMax {
  Scalar s_star;        // unclamped projection parameter of x onto the segment line
  Vec2<Scalar> q_star;  // clamped maximizer on the segment
  Scalar p_star;        // kernel value at q_star
};

/// Closed-form maximizer of p(q(s), x) over s in [0,1]. The kernel decreases
/// with distance, so the maximizer is the orthogonal projection of x onto the
/// segment line, clamped to the endpoints.
template <typename Scalar>
SegmentMax<Scalar> argmax_on_segment(const KernelParams<Scalar>& kernel, const Segment2<Scalar>& seg,
                                     const Vec2Arg<Scalar>& x) {
  const Vec2<Scalar> dir = seg.direction();
  const Scalar s = (x - seg.q0).dot(dir) / dir.squaredNorm();
  Vec2<Scalar> q;
  if (s < Scalar(0)) {
    q = seg.q0;
  } else if (s > Scalar(1)) {
    q = seg.qK;
  } else {
    q = param_point(seg, s);
  }
  return {s, q, eval(kernel, q, x)};
}

}  // namespace fieldcbf
