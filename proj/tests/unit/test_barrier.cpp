#include <doctest.h>

#include <cmath>
#include <random>

#include "fieldcbf/barrier.hpp"

using fieldcbf::BoxObstacle;
using fieldcbf::ClassK;
using fieldcbf::ConstraintKind;
using fieldcbf::eval;
using fieldcbf::grad_x;
using fieldcbf::h_obstacle;
using fieldcbf::HalfPlaneConstraint;
using fieldcbf::KernelParams;
using fieldcbf::NoiseBudget;
using fieldcbf::obstacle_constraint;
using fieldcbf::PenetrationError;
using fieldcbf::Phi2Formula;
using fieldcbf::point_noise_constraint;
using fieldcbf::PointAccumulator;
using fieldcbf::polygon_edges;
using fieldcbf::polygon_noise_constraints;
using fieldcbf::QuadFootprint;
using fieldcbf::Segment2;
using fieldcbf::segment_noise_constraint;
using fieldcbf::SegmentBoundAccumulator;
using fieldcbf::step_point;
using fieldcbf::Vec2;

namespace {
const BoxObstacle<double> kUnitBox{{0, 0}, {1, 1}};
const KernelParams<double> kKernel{0.5, 0.35};
const NoiseBudget<double> kBudget{0.2};
const ClassK<double> kAlpha1{3.0};
const ClassK<double> kAlpha2{6.0};
}  // namespace

TEST_CASE("gain and budget invariants") {
  CHECK_THROWS_AS(ClassK<double>(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ClassK<double>(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseBudget<double>(0.0), std::invalid_argument);
  CHECK(kAlpha1(0.2) == doctest::Approx(0.6));
}

TEST_CASE("obstacle clearance from the corner region") {
  const QuadFootprint<double> fp{{3, 3}, 0.1};
  // Nearest disk center (2.9, 2.9), nearest box point (1, 1).
  CHECK(h_obstacle(fp, kUnitBox) == doctest::Approx(1.9 * std::sqrt(2.0) - 0.1));
}

TEST_CASE("obstacle clearance is zero at contact and translates along the normal") {
  // Disk center at (1.1, 0.5): distance to the face is exactly r_quad.
  const QuadFootprint<double> touching{{1.2, 0.4}, 0.1};
  CHECK(h_obstacle(touching, kUnitBox) == doctest::Approx(0.0));

  const double d = 0.37;
  const QuadFootprint<double> retreated{{1.2 + d, 0.4}, 0.1};
  CHECK(h_obstacle(retreated, kUnitBox) - h_obstacle(touching, kUnitBox) == doctest::Approx(d));
}

TEST_CASE("obstacle constraint in the face region") {
  // Nearest disk center lands at (2.0, 0.5) against the right face.
  const QuadFootprint<double> fp{{2.1, 0.4}, 0.1};
  const auto c = obstacle_constraint(fp, kUnitBox, kAlpha1);
  CHECK(c.a.isApprox(Vec2<double>(1, 0)));
  CHECK(c.b == doctest::Approx(-2.7));
  CHECK(c.tag.kind == ConstraintKind::Obstacle);
  // Inactive for a reference heading away or tangentially.
  CHECK(c.slack({0.0, -1.0}) > 0.0);
}

TEST_CASE("obstacle constraint normal is a unit vector") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> coord(-4.0, 5.0);
  int checked = 0;
  while (checked < 2000) {
    const Vec2<double> center(coord(rng), coord(rng));
    try {
      const auto c = obstacle_constraint(QuadFootprint<double>{center, 0.1}, kUnitBox, kAlpha1);
      CHECK(c.a.norm() == doctest::Approx(1.0));
      ++checked;
    } catch (const PenetrationError&) {
      // disk center inside or on the box; not part of this property
    }
  }
}

TEST_CASE("obstacle constraint faults on zero separation") {
  // (-,-) disk center exactly on the right face of the box.
  const QuadFootprint<double> fp{{1.1, 0.6}, 0.1};
  CHECK_THROWS_AS(obstacle_constraint(fp, kUnitBox, kAlpha1), PenetrationError);
}

TEST_CASE("point exposure constraint far from the tracked point is inactive") {
  const PointAccumulator<double> acc{{0, 1}, 0.0};
  const Vec2<double> x(5, 5);
  const auto c = point_noise_constraint(acc, kKernel, x, kBudget, kAlpha1, kAlpha2);
  // Row normal points away from the tracked point; b is strongly negative.
  CHECK(c.a.isApprox(2.0 * 0.35 * (x - Vec2<double>(0, 1))));
  CHECK(c.b < -3.0 * 6.0 * 0.2);
  CHECK(c.slack({0, 0}) > 0.0);
  CHECK(c.slack({-5, -5}) > 0.0);  // even heading straight at it at full tilt
}

TEST_CASE("point exposure constraint matches the hand-expanded recursion") {
  const PointAccumulator<double> acc{{0, 1}, 0.0};
  const auto c = point_noise_constraint(acc, kKernel, {0, 0}, kBudget, kAlpha1, kAlpha2);
  // p = 0.15, grad = (0, 0.7), phi1 = -0.15 + 3 * 0.2 = 0.45.
  CHECK(c.a.isApprox(Vec2<double>(0, -0.7)));
  CHECK(c.b == doctest::Approx(3 * 0.15 - 6 * 0.45));
  CHECK(c.b == doctest::Approx(-2.25));
}

TEST_CASE("dropping the damping term changes b by exactly alpha1 * p") {
  const PointAccumulator<double> acc{{0, 1}, 0.05};
  const Vec2<double> x(0.2, 0.1);
  const auto full = point_noise_constraint(acc, kKernel, x, kBudget, kAlpha1, kAlpha2,
                                           Phi2Formula::Recursion);
  const auto dropped = point_noise_constraint(acc, kKernel, x, kBudget, kAlpha1, kAlpha2,
                                              Phi2Formula::DropDamping);
  const double p = eval(kKernel, acc.q, x);
  CHECK(full.a.isApprox(dropped.a));
  CHECK(full.b - dropped.b == doctest::Approx(3.0 * p));
}

TEST_CASE("second-order constraint tracks the finite-difference recursion") {
  // Straight run through the support with the accumulator co-simulated; the
  // slack at u must equal d(phi1)/dt + alpha2 * phi1 up to O(dt).
  const Vec2<double> q(0.0, 1.0);
  const Vec2<double> u(0.8, 0.35);

  const auto max_error = [&](double dt) {
    PointAccumulator<double> acc{q, 0.0};
    Vec2<double> x(-0.6, 0.4);
    double worst = 0.0;
    const int steps = static_cast<int>(std::floor(1.0 / dt));
    for (int i = 0; i < steps; ++i) {
      const double p_now = eval(kKernel, acc.q, x);
      const double phi1_now = -p_now + kAlpha1(kBudget.J_limit - acc.J);
      const auto c = point_noise_constraint(acc, kKernel, x, kBudget, kAlpha1, kAlpha2);
      const double phi2 = c.slack(u);

      const PointAccumulator<double> acc_next = step_point(acc, kKernel, x, dt);
      const Vec2<double> x_next = x + dt * u;
      const double phi1_next = -eval(kKernel, acc_next.q, x_next) + kAlpha1(kBudget.J_limit - acc_next.J);
      const double fd = (phi1_next - phi1_now) / dt + kAlpha2(phi1_now);
      if ((q - x).norm() < kKernel.support_radius() - 1.0 * dt)
        worst = std::max(worst, std::abs(phi2 - fd));
      acc = acc_next;
      x = x_next;
    }
    return worst;
  };

  CHECK(max_error(1e-4) < 1e-3);
  // First-order convergence of the mismatch.
  CHECK(max_error(1e-5) < 0.2 * max_error(1e-4));
}

TEST_CASE("segment constraint reduces to the point constraint at the maximizer") {
  const SegmentBoundAccumulator<double> acc{Segment2<double>{{0, 1}, {1, 1}}, 0.0};
  const auto c = segment_noise_constraint(acc, kKernel, {0.5, 0.0}, kBudget, kAlpha1, kAlpha2);
  CHECK(c.a.isApprox(Vec2<double>(0, -0.7)));
  CHECK(c.b == doctest::Approx(-2.25));

  const SegmentBoundAccumulator<double> far{Segment2<double>{{0, 1}, {1, 1}}, 0.0};
  const auto inactive = segment_noise_constraint(far, kKernel, {9, 9}, kBudget, kAlpha1, kAlpha2);
  CHECK(inactive.b < 0.0);
  CHECK(inactive.slack({0, 0}) > 0.0);
  CHECK(inactive.slack({-10, -10}) > 0.0);
}

TEST_CASE("saturated bound forces retreat") {
  const SegmentBoundAccumulator<double> acc{Segment2<double>{{0, 1}, {1, 1}}, 0.2};
  const Vec2<double> x(0.5, 0.2);
  const auto c = segment_noise_constraint(acc, kKernel, x, kBudget, kAlpha1, kAlpha2);
  const double p = eval(kKernel, {0.5, 1.0}, x);
  CHECK(c.b == doctest::Approx((3.0 + 6.0) * p));
  CHECK(c.b > 0.0);
  // Moving straight away from the maximizer satisfies the row.
  const Vec2<double> away = (x - Vec2<double>(0.5, 1.0)).normalized();
  CHECK(c.slack(100.0 * away) > 0.0);
}

TEST_CASE("segment constraint converges to the point constraint as the segment degenerates") {
  const Vec2<double> q(0.3, 0.9);
  const Vec2<double> x(0.1, 0.2);
  const PointAccumulator<double> pacc{q, 0.07};
  const auto pc = point_noise_constraint(pacc, kKernel, x, kBudget, kAlpha1, kAlpha2);

  const Vec2<double> dir = Vec2<double>(0.6, -0.8);
  const SegmentBoundAccumulator<double> sacc{Segment2<double>{q, q + 1e-6 * dir}, 0.07};
  const auto sc = segment_noise_constraint(sacc, kKernel, x, kBudget, kAlpha1, kAlpha2);
  CHECK((sc.a - pc.a).norm() < 1e-6);
  CHECK(std::abs(sc.b - pc.b) < 1e-6);
}

TEST_CASE("feasible half-plane always allows motion away from the maximizer") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> coord(-3.0, 4.0);
  for (int i = 0; i < 2000; ++i) {
    const Vec2<double> a(coord(rng), coord(rng));
    Vec2<double> b(coord(rng), coord(rng));
    if ((b - a).squaredNorm() < 1e-12) b.x() += 1.0;
    const SegmentBoundAccumulator<double> acc{Segment2<double>{a, b}, 0.0};
    const Vec2<double> x(coord(rng), coord(rng));
    const auto mx = fieldcbf::argmax_on_segment(kKernel, acc.seg, x);
    const auto c = segment_noise_constraint(acc, kKernel, x, kBudget, kAlpha1, kAlpha2);
    const double along = c.a.dot(x - mx.q_star);
    CHECK(along >= -1e-15);
    CHECK(along == doctest::Approx(2 * 0.35 * (x - mx.q_star).squaredNorm()).epsilon(1e-9));
  }
}

TEST_CASE("polygon constraints map one row per edge") {
  const auto edges = polygon_edges(fieldcbf::box_vertices(kUnitBox));
  std::vector<SegmentBoundAccumulator<double>> accs;
  for (const auto& e : edges) accs.push_back({e, 0.0});

  const auto far = polygon_noise_constraints(edges, accs, kKernel, {8, 8}, kBudget, kAlpha1, kAlpha2);
  REQUIRE(far.size() == 4);
  for (const auto& c : far) {
    CHECK(c.b < 0.0);
    CHECK(c.slack({0, 0}) > 0.0);
    CHECK(c.tag.kind == ConstraintKind::Segment);
  }

  // Each row's normal is the parabola gradient at that edge's maximizer.
  const Vec2<double> x(0.5, -0.8);
  const auto near = polygon_noise_constraints(edges, accs, kKernel, x, kBudget, kAlpha1, kAlpha2);
  for (std::size_t i = 0; i < near.size(); ++i) {
    const auto mx = fieldcbf::argmax_on_segment(kKernel, edges[i], x);
    CHECK(near[i].a.isApprox(2.0 * 0.35 * (x - mx.q_star)));
    CHECK(near[i].tag.index == static_cast<int>(i));
  }

  accs.pop_back();
  CHECK_THROWS_AS(polygon_noise_constraints(edges, accs, kKernel, x, kBudget, kAlpha1, kAlpha2),
                  std::invalid_argument);
}
