#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fieldcbf/accumulator.hpp"

using fieldcbf::eval;
using fieldcbf::jmax_discretized;
using fieldcbf::KernelParams;
using fieldcbf::param_point;
using fieldcbf::PointAccumulator;
using fieldcbf::Segment2;
using fieldcbf::SegmentBoundAccumulator;
using fieldcbf::step_bound;
using fieldcbf::step_point;
using fieldcbf::Vec2;

TEST_CASE("stationary agent at the tracked point accumulates peak * time") {
  const KernelParams<double> k{0.5, 0.35};
  PointAccumulator<double> acc{{1, 1}, 0.0};
  const Vec2<double> x(1, 1);
  for (int i = 0; i < 4; ++i) acc = step_point(acc, k, x, 0.1);
  CHECK(acc.J == doctest::Approx(0.2));
}

TEST_CASE("agent outside the support leaves the accumulator untouched") {
  const KernelParams<double> k{0.5, 0.35};
  PointAccumulator<double> acc{{0, 0}, 0.0};
  for (int i = 0; i < 10; ++i) acc = step_point(acc, k, {5, 5}, 0.1);
  CHECK(acc.J == 0.0);

  // Exactly on the support boundary the integrand is zero as well.
  const Vec2<double> on_boundary(k.support_radius(), 0.0);
  acc = step_point(acc, k, on_boundary, 0.1);
  CHECK(acc.J == 0.0);
}

TEST_CASE("step functions reject nonpositive dt") {
  const KernelParams<double> k{0.5, 0.35};
  PointAccumulator<double> acc{{0, 0}, 0.0};
  CHECK_THROWS_AS(step_point(acc, k, {0, 0}, 0.0), std::invalid_argument);
  SegmentBoundAccumulator<double> bacc{Segment2<double>{{0, 0}, {1, 0}}, 0.0};
  CHECK_THROWS_AS(step_bound(bacc, k, {0, 0}, -0.1), std::invalid_argument);
}

TEST_CASE("bound grows at the peak rate when the agent sits on the segment") {
  const KernelParams<double> k{0.5, 0.35};
  SegmentBoundAccumulator<double> acc{Segment2<double>{{0, 0}, {2, 0}}, 0.0};
  for (int i = 0; i < 6; ++i) acc = step_bound(acc, k, {1.0, 0.0}, 0.1);
  CHECK(acc.J_bar == doctest::Approx(6 * 0.1 * 0.5));
}

TEST_CASE("bound dominates co-simulated samples for any trajectory") {
  const KernelParams<double> k{0.8, 0.3};
  const Segment2<double> seg{{-1, 0.5}, {2, 1.5}};
  SegmentBoundAccumulator<double> bound{seg, 0.0};
  std::vector<PointAccumulator<double>> samples;
  for (int i = 0; i < 100; ++i)
    samples.push_back({param_point(seg, i / 99.0), 0.0});

  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> vel(-1.0, 1.0);
  Vec2<double> x(0.5, 2.0);
  const double dt = 0.05;
  for (int stepi = 0; stepi < 400; ++stepi) {
    bound = step_bound(bound, k, x, dt);
    for (auto& s : samples) s = step_point(s, k, x, dt);
    CHECK(jmax_discretized(samples) <= bound.J_bar + 1e-9);
    x += dt * Vec2<double>(vel(rng), vel(rng));
  }
}

TEST_CASE("exposure is nondecreasing along any trajectory") {
  const KernelParams<double> k{0.5, 0.35};
  PointAccumulator<double> acc{{0.5, 0.5}, 0.0};
  SegmentBoundAccumulator<double> bound{Segment2<double>{{0, 0}, {1, 0}}, 0.0};
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  double prev_J = 0.0, prev_bar = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2<double> x(coord(rng), coord(rng));
    acc = step_point(acc, k, x, 0.01);
    bound = step_bound(bound, k, x, 0.01);
    CHECK(acc.J >= prev_J);
    CHECK(bound.J_bar >= prev_bar);
    prev_J = acc.J;
    prev_bar = bound.J_bar;
  }
}

TEST_CASE("left-endpoint quadrature converges at first order") {
  const KernelParams<double> k{1.0, 0.5};
  const Vec2<double> q(0.8, 0.0);

  // Smooth synthetic trajectory crossing the support.
  const auto position = [](double t) { return Vec2<double>(std::cos(t), std::sin(t)); };
  const double T = 2.0;

  const auto integrate = [&](double dt) {
    PointAccumulator<double> acc{q, 0.0};
    const int n = static_cast<int>(std::round(T / dt));
    for (int i = 0; i < n; ++i) acc = step_point(acc, k, position(i * dt), dt);
    return acc.J;
  };

  const double reference = integrate(1e-5);
  const double err_coarse = std::abs(integrate(0.02) - reference);
  const double err_fine = std::abs(integrate(0.01) - reference);
  CHECK(err_fine < err_coarse);
  // First order: halving dt roughly halves the error.
  CHECK(err_coarse / err_fine == doctest::Approx(2.0).epsilon(0.35));
}

TEST_CASE("jmax_discretized basics") {
  CHECK_THROWS_AS(jmax_discretized<double>({}), std::invalid_argument);
  CHECK(jmax_discretized<double>({{{0, 0}, 0.7}}) == doctest::Approx(0.7));
  CHECK(jmax_discretized<double>({{{0, 0}, 0.4}, {{1, 0}, 0.4}, {{2, 0}, 0.4}}) == doctest::Approx(0.4));
  CHECK(jmax_discretized<double>({{{0, 0}, 0.1}, {{1, 0}, 0.9}, {{2, 0}, 0.3}}) == doctest::Approx(0.9));
}
