#include <cmath>
#include <random>

#include "billiards/error.hpp"
#include "billiards/geometry.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace billiards;
using billiards::testing::ellipse21;

namespace {

// Closed form written out independently of the library.
double ellipse_h(double a1, double a2, double psi) {
  return std::sqrt(a1 * a1 * std::cos(psi) * std::cos(psi) + a2 * a2 * std::sin(psi) * std::sin(psi));
}

}  // namespace

TEST_CASE("angle wrapping") {
  CHECK(wrap_two_pi(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_two_pi(kTwoPi) == 0.0);
  CHECK(wrap_two_pi(-1e-300) < kTwoPi);
  CHECK(wrap_pi(1.5 * kPi) == doctest::Approx(-0.5 * kPi));
  CHECK(forward_gap(6.0, 0.5) == doctest::Approx(0.5 + kTwoPi - 6.0));
}

TEST_CASE("oriented line normalizes phi and satisfies its equation") {
  const OrientedLine line(0.7, -1.0);
  CHECK(line.phi() >= 0.0);
  CHECK(line.phi() < kTwoPi);
  const Point2 x = line.p() * line.normal() + 3.0 * line.direction();
  CHECK(std::abs(std::cos(line.phi()) * x.x1 + std::sin(line.phi()) * x.x2 - 0.7) < 1e-14);

  const auto through = OrientedLine::through({1.0, 2.0}, 0.3);
  CHECK(std::abs(through.signed_distance({1.0, 2.0})) < 1e-15);
  CHECK(through.direction_angle() == doctest::Approx(0.3));
  const auto back = through.reversed();
  CHECK(back.p() == doctest::Approx(-through.p()));
  CHECK(std::abs(wrap_pi(back.phi() - through.phi() - kPi)) < 1e-15);
}

TEST_CASE("support_eval on the ellipse") {
  const auto e = ellipse21();
  const auto v = support_eval(e, 0.0);
  CHECK(v.h == doctest::Approx(2.0));
  CHECK(v.h1 == doctest::Approx(0.0));
  // Central differences of the closed form, step 1e-5: h''(0) = −1.5.
  const double step = 1e-5;
  const double fd = (ellipse_h(2, 1, step) - 2.0 * ellipse_h(2, 1, 0.0) + ellipse_h(2, 1, -step)) /
                    (step * step);
  CHECK(fd == doctest::Approx(-1.5).epsilon(1e-5));
  CHECK(v.h2 == doctest::Approx(-1.5).epsilon(1e-14));

  const auto circle = SupportCurve::circle(1.0);
  for (double psi : {0.0, 0.4, 2.0, 5.5}) {
    const auto c = support_eval(circle, psi);
    CHECK(c.h == 1.0);
    CHECK(c.h1 == 0.0);
    CHECK(c.h2 == 0.0);
    CHECK(support_eval(e, psi).h == doctest::Approx(ellipse_h(2, 1, psi)).epsilon(1e-15));
  }
}

TEST_CASE("support derivatives agree with finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const SupportCurve curves[] = {ellipse21(), SupportCurve::ellipse(3.0, 0.5),
                                 billiards::testing::wavy_table(), random_trig_poly(3, 4)};
  constexpr double step = 1e-6;
  for (const auto& curve : curves) {
    const double scale = curve.scale();
    for (int trial = 0; trial < 50; ++trial) {
      const double psi = angle(rng);
      const auto v = curve.eval(psi);
      const auto plus = curve.eval(psi + step);
      const auto minus = curve.eval(psi - step);
      const double d1 = (plus.h - minus.h) / (2 * step);
      const double d2 = (plus.h1 - minus.h1) / (2 * step);
      CHECK(std::abs(d1 - v.h1) <= 1e-6 * std::max(std::abs(v.h1), scale));
      CHECK(std::abs(d2 - v.h2) <= 1e-6 * std::max(std::abs(v.h2), scale));
    }
  }
}

TEST_CASE("curve_point") {
  const auto e = ellipse21();
  const auto m0 = curve_point(e, 0.0);
  CHECK(m0.x1 == doctest::Approx(2.0));
  CHECK(std::abs(m0.x2) < 1e-15);
  const auto m1 = curve_point(e, 0.5 * kPi);
  CHECK(std::abs(m1.x1) < 1e-15);
  CHECK(m1.x2 == doctest::Approx(1.0));

  // ξ₁ = a1² ℓ cos ψ, ξ₂ = a2² ℓ sin ψ with ℓ = 1/h(ψ).
  const double psi = 0.25 * kPi;
  const double ell = 1.0 / ellipse_h(2, 1, psi);
  const auto m = curve_point(e, psi);
  CHECK(std::abs(m.x1 - 4.0 * ell * std::cos(psi)) < 1e-12);
  CHECK(std::abs(m.x2 - 1.0 * ell * std::sin(psi)) < 1e-12);
}

TEST_CASE("outer normal and on-curve properties") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const SupportCurve curves[] = {ellipse21(), billiards::testing::wavy_table(),
                                 random_trig_poly(5, 5)};
  for (const auto& curve : curves) {
    for (int trial = 0; trial < 100; ++trial) {
      const double psi = angle(rng);
      const Point2 t = curve_tangent(curve, psi);
      CHECK(std::abs(dot(t, unit(psi))) < 1e-12 * norm(t));
    }
  }
  const auto e = ellipse21();
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = curve_point(e, angle(rng));
    CHECK(std::abs(m.x1 * m.x1 / 4.0 + m.x2 * m.x2 - 1.0) < 1e-12);
  }
}

TEST_CASE("pedal_foot") {
  const auto q = pedal_foot(OrientedLine(1.0, 0.0), {0.0, 0.0});
  CHECK(q.x1 == doctest::Approx(1.0));
  CHECK(std::abs(q.x2) < 1e-15);

  const OrientedLine line(0.5, kPi / 3.0);
  const Point2 on = line.p() * line.normal() + 0.8 * line.direction();
  const auto fixed = pedal_foot(line, on);
  CHECK(distance(fixed, on) < 1e-15);

  // Dense 1-D minimization of |X − P| over the line, then a golden-section polish.
  const Point2 P{0.3, 0.2};
  const Point2 base = line.p() * line.normal();
  auto dist = [&](double s) { return distance(base + s * line.direction(), P); };
  double best = -5.0;
  for (int i = 0; i <= 100000; ++i) {
    const double s = -5.0 + 1e-4 * i;
    if (dist(s) < dist(best)) best = s;
  }
  double lo = best - 1e-4;
  double hi = best + 1e-4;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x1 = hi - g * (hi - lo);
    const double x2 = lo + g * (hi - lo);
    (dist(x1) < dist(x2) ? hi : lo) = dist(x1) < dist(x2) ? x2 : x1;
  }
  const Point2 oracle = base + (0.5 * (lo + hi)) * line.direction();
  CHECK(distance(pedal_foot(line, P), oracle) < 1e-9);
  // Q − P is parallel to the normal.
  CHECK(std::abs(cross(pedal_foot(line, P) - P, line.normal())) < 1e-15);
}

TEST_CASE("focal_distances") {
  const auto d = focal_distances(OrientedLine(1.0, 0.5 * kPi), 1.7);
  CHECK(d.d1 == doctest::Approx(1.0));
  CHECK(d.d2 == doctest::Approx(1.0));
  const auto z = focal_distances(OrientedLine(-0.4, 1.2), 0.0);
  CHECK(z.d1 == doctest::Approx(0.4));
  CHECK(z.d2 == doctest::Approx(0.4));

  // Lines tangent to the ellipse with semi-axes (√3.2, √0.2), foci (±√3, 0).
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = angle(rng);
    const OrientedLine tangent(ellipse_h(std::sqrt(3.2), std::sqrt(0.2), alpha), alpha);
    const auto f = focal_distances(tangent, std::sqrt(3.0));
    CHECK(std::abs(f.d1 * f.d2 - 0.2) < 1e-12 * 0.2);
  }
}

TEST_CASE("curve validation") {
  CHECK_THROWS_AS(SupportCurve::ellipse(1.0, 2.0), Error);
  CHECK_THROWS_AS(SupportCurve::ellipse(1.0, 0.0), Error);
  CHECK_THROWS_AS(SupportCurve::trig_poly(1.0, {{1, 0.1, 0.0}}), Error);
  CHECK_THROWS_AS(SupportCurve::trig_poly(0.0, {}), Error);
  try {
    // h + h'' = 1 − 1.5 cos 2ψ is negative near ψ = 0.
    SupportCurve::trig_poly(1.0, {{2, 0.5, 0.0}});
    FAIL("non-convex table accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidCurve);
  }
  CHECK_NOTHROW(SupportCurve::trig_poly(1.0, {{2, 0.3, 0.0}}));
  CHECK(min_curvature_radius(TrigPoly{1.0, {{2, 0.3, 0.0}}, {}}) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("origin offset translates the curve") {
  const auto base = billiards::testing::wavy_table();
  const auto moved = SupportCurve::trig_poly(1.0, {{3, 0.05, 0.0}}, {0.2, -0.1});
  for (double psi : {0.1, 1.3, 4.0}) {
    const Point2 shift = curve_point(moved, psi) - curve_point(base, psi);
    CHECK(shift.x1 == doctest::Approx(0.2));
    CHECK(shift.x2 == doctest::Approx(-0.1));
  }
}

TEST_CASE("random tables are deterministic and convex") {
  const auto a = random_trig_poly(9, 5);
  const auto b = random_trig_poly(9, 5);
  REQUIRE(a.as_trig_poly() != nullptr);
  CHECK(a.as_trig_poly()->harmonics.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a.as_trig_poly()->harmonics[i].a == b.as_trig_poly()->harmonics[i].a);
  }
  CHECK(min_curvature_radius(*a.as_trig_poly()) > 0.2);
  const auto circle = random_trig_poly(1, 0);
  CHECK(circle.as_trig_poly()->harmonics.empty());
  CHECK(circle.diameter() == doctest::Approx(2.0));
}
