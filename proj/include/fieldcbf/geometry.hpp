#pragma once

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace fieldcbf {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

/// Non-deduced parameter position: lets callers pass Eigen expressions (or
/// braced scalars) anywhere a Vec2 is expected while Scalar is deduced from
/// the accompanying domain object.
template <typename Scalar>
using Vec2Arg = std::type_identity_t<Vec2<Scalar>>;

/// Thrown when the agent's footprint ends up overlapping the obstacle. The
/// barrier constraints are supposed to make this state unreachable, so it is
/// surfaced as a fault instead of being projected away.
class PenetrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
template <typename Scalar>
void require_finite(const Vec2<Scalar>& v, const char* what) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": components must be finite");
}
}  // namespace detail

/// Directed line segment with distinct endpoints.
template <typename Scalar>
struct Segment2 {
  Vec2<Scalar> q0;
  Vec2<Scalar> qK;

  Segment2(const Vec2<Scalar>& start, const Vec2<Scalar>& end) : q0(start), qK(end) {
    detail::require_finite(q0, "Segment2");
    detail::require_finite(qK, "Segment2");
    if ((qK - q0).squaredNorm() == Scalar(0))
      throw std::invalid_argument("Segment2: endpoints must be distinct");
  }

  Vec2<Scalar> direction() const { return qK - q0; }
  Scalar length() const { return direction().norm(); }
};

/// Axis-aligned box with nonempty interior.
template <typename Scalar>
struct BoxObstacle {
  Vec2<Scalar> min_corner;
  Vec2<Scalar> max_corner;

  BoxObstacle(const Vec2<Scalar>& lo, const Vec2<Scalar>& hi) : min_corner(lo), max_corner(hi) {
    detail::require_finite(min_corner, "BoxObstacle");
    detail::require_finite(max_corner, "BoxObstacle");
    if (!(min_corner.array() < max_corner.array()).all())
      throw std::invalid_argument("BoxObstacle: min_corner must be strictly below max_corner");
  }
};

/// Agent footprint: four equal propeller disks of radius r_quad around the
/// center. Disk centers are derived, not stored.
template <typename Scalar>
struct QuadFootprint {
  Vec2<Scalar> center;
  Scalar r_quad;

  QuadFootprint(const Vec2<Scalar>& c, Scalar radius) : center(c), r_quad(radius) {
    detail::require_finite(center, "QuadFootprint");
    if (!(r_quad > Scalar(0))) throw std::invalid_argument("QuadFootprint: r_quad must be positive");
  }
};

/// Affine point (1-s)*q0 + s*qK for s in [0,1].
template <typename Scalar>
Vec2<Scalar> param_point(const Segment2<Scalar>& seg, Scalar s) {
  if (!(s >= Scalar(0) && s <= Scalar(1)))
    throw std::invalid_argument("param_point: s must lie in [0, 1]");
  return (Scalar(1) - s) * seg.q0 + s * seg.qK;
}

/// The unique mutually-tangent 2x2 arrangement: centers at center + (±r, ±r).
/// Enumeration order is (+,+), (+,-), (-,+), (-,-); ties elsewhere resolve by
/// this order.
template <typename Scalar>
std::array<Vec2<Scalar>, 4> propeller_centers(const QuadFootprint<Scalar>& fp) {
  const Scalar r = fp.r_quad;
  return {Vec2<Scalar>(fp.center + Vec2<Scalar>(r, r)), Vec2<Scalar>(fp.center + Vec2<Scalar>(r, -r)),
          Vec2<Scalar>(fp.center + Vec2<Scalar>(-r, r)), Vec2<Scalar>(fp.center + Vec2<Scalar>(-r, -r))};
}

/// Boundary point of the box nearest to p (componentwise clamp). A query
/// strictly inside the box is a penetration fault, not a projection.
template <typename Scalar>
Vec2<Scalar> closest_point_on_box(const BoxObstacle<Scalar>& box, const Vec2Arg<Scalar>& p) {
  if ((p.array() > box.min_corner.array()).all() && (p.array() < box.max_corner.array()).all())
    throw PenetrationError("closest_point_on_box: query point strictly inside the obstacle");
  return p.cwiseMax(box.min_corner).cwiseMin(box.max_corner);
}

template <typename Scalar>
struct ClosestPair {
  Vec2<Scalar> x_quad;  // propeller center nearest to the box
  Vec2<Scalar> x_box;   // box boundary point nearest to x_quad
};

template <typename Scalar>
ClosestPair<Scalar> closest_pair(const QuadFootprint<Scalar>& fp, const BoxObstacle<Scalar>& box) {
  const auto centers = propeller_centers(fp);
  ClosestPair<Scalar> best{centers[0], closest_point_on_box(box, centers[0])};
  Scalar best_d2 = (best.x_quad - best.x_box).squaredNorm();
  for (std::size_t i = 1; i < centers.size(); ++i) {
    const Vec2<Scalar> on_box = closest_point_on_box(box, centers[i]);
    const Scalar d2 = (centers[i] - on_box).squaredNorm();
    if (d2 < best_d2) {  // strict: first candidate wins ties
      best = {centers[i], on_box};
      best_d2 = d2;
    }
  }
  return best;
}

/// Closed boundary of a polygon: edges [v_i, v_{i+1}] with wraparound.
template <typename Scalar>
std::vector<Segment2<Scalar>> polygon_edges(const std::vector<Vec2<Scalar>>& vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("polygon_edges: need at least 3 vertices");
  std::vector<Segment2<Scalar>> edges;
  edges.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2<Scalar>& a = vertices[i];
    const Vec2<Scalar>& b = vertices[(i + 1) % vertices.size()];
    if ((b - a).squaredNorm() == Scalar(0))
      throw std::invalid_argument("polygon_edges: repeated consecutive vertex");
    edges.emplace_back(a, b);
  }
  return edges;
}

/// Box corners counterclockwise starting at the min corner. Fixes the edge
/// indexing used for per-edge accumulators and log columns.
template <typename Scalar>
std::vector<Vec2<Scalar>> box_vertices(const BoxObstacle<Scalar>& box) {
  return {box.min_corner, Vec2<Scalar>(box.max_corner.x(), box.min_corner.y()), box.max_corner,
          Vec2<Scalar>(box.min_corner.x(), box.max_corner.y())};
}

/// count points uniformly spaced by arc length along the box boundary,
/// counterclockwise from the min corner.
template <typename Scalar>
std::vector<Vec2<Scalar>> boundary_samples(const BoxObstacle<Scalar>& box, int count) {
  if (count < 1) throw std::invalid_argument("boundary_samples: count must be >= 1");
  const auto edges = polygon_edges(box_vertices(box));
  std::array<Scalar, 4> lengths{};
  Scalar perimeter = Scalar(0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    lengths[i] = edges[i].length();
    perimeter += lengths[i];
  }
  std::vector<Vec2<Scalar>> samples;
  samples.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Scalar arc = perimeter * Scalar(i) / Scalar(count);
    std::size_t e = 0;
    while (e + 1 < edges.size() && arc >= lengths[e]) {
      arc -= lengths[e];
      ++e;
    }
    const Scalar s = std::min(std::max(arc / lengths[e], Scalar(0)), Scalar(1));
    samples.push_back(param_point(edges[e], s));
  }
  return samples;
}

}  // namespace fieldcbf
