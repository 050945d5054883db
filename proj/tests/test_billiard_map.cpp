#include <cmath>
#include <random>

#include "billiards/billiard_map.hpp"
#include "billiards/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace billiards;
using billiards::testing::ellipse21;
using billiards::testing::random_interior_line;
using billiards::testing::random_state;
using billiards::testing::wavy_table;

namespace {

double joachimsthal_of(const SupportCurve& curve, const VertexState& state) {
  return std::sin(reflection_angle(state)) / curve.eval(state.psi).h;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("generating_function examples") {
  const auto circle = SupportCurve::circle(1.0);
  CHECK(generating_function(circle, 0.0, 0.5 * kPi) == doctest::Approx(std::sqrt(2.0)));
  CHECK(generating_function(ellipse21(), 0.0, kPi) == doctest::Approx(2.0));
  CHECK(kind_of([&] { generating_function(circle, 1.0, 1.0); }) == ErrorKind::DegenerateChord);
  CHECK(kind_of([&] { generating_function(circle, 0.0, 4.0); }) == ErrorKind::DegenerateChord);
}

TEST_CASE("generating function equals the chord length on circles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> gap(0.05, kPi - 0.05);
  for (double r : {0.4, 1.0, 1.3}) {
    const auto circle = SupportCurve::circle(r);
    for (int trial = 0; trial < 100; ++trial) {
      const double phi1 = angle(rng);
      const double phi2 = phi1 + gap(rng);
      const auto chord = chord_data(circle, phi1, phi2);
      const double length = 2.0 * std::sqrt(r * r - chord.incoming.p() * chord.incoming.p());
      CHECK(std::abs(generating_function(circle, phi1, phi2) - length) < 1e-12 * r);
    }
  }
}

TEST_CASE("gen_partials examples") {
  const auto circle = SupportCurve::circle(1.0);
  const auto pp = gen_partials(circle, 0.0, 0.5 * kPi);
  CHECK(pp.p1 == doctest::Approx(std::cos(0.25 * kPi)));
  CHECK(pp.p2 == doctest::Approx(std::cos(0.25 * kPi)));
  const auto diam = gen_partials(ellipse21(), 0.0, kPi);
  CHECK(std::abs(diam.p1) < 1e-15);
  CHECK(std::abs(diam.p2) < 1e-15);
}

TEST_CASE("gen_partials match finite differences of S") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> gap(0.1, kPi - 0.1);
  const SupportCurve curves[] = {ellipse21(), wavy_table(), random_trig_poly(4, 5)};
  constexpr double step = 1e-6;
  for (const auto& curve : curves) {
    for (int trial = 0; trial < 200; ++trial) {
      const double phi1 = angle(rng);
      const double phi2 = phi1 + gap(rng);
      const auto pp = gen_partials(curve, phi1, phi2);
      const double d1 = (generating_function(curve, phi1 + step, phi2) -
                         generating_function(curve, phi1 - step, phi2)) / (2 * step);
      const double d2 = (generating_function(curve, phi1, phi2 + step) -
                         generating_function(curve, phi1, phi2 - step)) / (2 * step);
      CHECK(std::abs(-d1 - pp.p1) < 1e-6 * curve.scale());
      CHECK(std::abs(d2 - pp.p2) < 1e-6 * curve.scale());
    }
  }
  const auto e = ellipse21();
  const auto pp = gen_partials(e, 0.3, 1.7);
  const double d1 = (generating_function(e, 0.3 + step, 1.7) - generating_function(e, 0.3 - step, 1.7)) /
                    (2 * step);
  CHECK(std::abs(-d1 - pp.p1) < 1e-6);
}

TEST_CASE("chord lines pass through the shared vertex") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> gap(0.1, kPi - 0.1);
  const auto curve = wavy_table();
  for (int trial = 0; trial < 100; ++trial) {
    const double phi1 = angle(rng);
    const double phi2 = phi1 + gap(rng);
    const auto chord = chord_data(curve, phi1, phi2);
    const auto pp = gen_partials(curve, phi1, phi2);
    CHECK(std::abs(OrientedLine(pp.p1, phi1).signed_distance(chord.vertex)) < 1e-12);
    CHECK(std::abs(OrientedLine(pp.p2, phi2).signed_distance(chord.vertex)) < 1e-12);
    CHECK(distance(chord.vertex, curve_point(curve, chord.psi)) < 1e-12);
  }
}

TEST_CASE("reflect on the ellipse") {
  const auto e = ellipse21();
  // (2,0) heading in −x lands at (−2,0) and returns along +x.
  const auto next = reflect_ellipse(e, {0.0, kPi});
  CHECK(std::abs(wrap_pi(next.psi - kPi)) < 1e-12);
  CHECK(std::abs(wrap_pi(next.theta)) < 1e-12);

  // Slope −1/2 from (2,0) upward-left reaches (0,1).
  const VertexState start{0.0, std::atan2(1.0, -2.0)};
  const auto v = reflect_ellipse(e, start);
  CHECK(std::abs(wrap_pi(v.psi - 0.5 * kPi)) < 1e-12);
  CHECK(std::abs(joachimsthal_of(e, v) - joachimsthal_of(e, start)) < 1e-12);
  CHECK(joachimsthal_of(e, start) == doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("reflect on circles advances by twice the angle") {
  std::mt19937_64 rng(19);
  const auto circle = SupportCurve::circle(1.0);
  const auto as_poly = SupportCurve::trig_poly(1.0, {});
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_state(rng);
    const double delta = reflection_angle(s);
    for (const auto* curve : {&circle, &as_poly}) {
      const auto next = reflect(*curve, s);
      CHECK(std::abs(wrap_pi(next.psi - s.psi - 2.0 * delta)) < 1e-10);
      CHECK(std::abs(reflection_angle(next) - delta) < 1e-10);
    }
  }
}

TEST_CASE("reflect_generic agrees with reflect_ellipse") {
  std::mt19937_64 rng(23);
  const auto e = SupportCurve::ellipse(2.0, 1.2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_state(rng, 0.01);
    const auto a = reflect_ellipse(e, s);
    const auto b = reflect_generic(e, s);
    CHECK(std::abs(wrap_pi(a.psi - b.psi)) < 1e-10);
    CHECK(std::abs(wrap_pi(a.theta - b.theta)) < 1e-10);
  }
}

TEST_CASE("reflection law holds geometrically on a trig table") {
  std::mt19937_64 rng(29);
  const SupportCurve curves[] = {wavy_table(), random_trig_poly(8, 5)};
  for (const auto& curve : curves) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = random_state(rng, 0.05);
      const auto next = reflect(curve, s);
      const Point2 from = curve_point(curve, s.psi);
      const Point2 to = curve_point(curve, next.psi);
      CHECK(std::abs(cross(unit(s.theta), to - from)) < 1e-12 * curve.scale());
      CHECK(dot(unit(s.theta), to - from) > 0.0);
      const Point2 t = curve_tangent(curve, next.psi);
      const double tau = std::atan2(t.x2, t.x1);
      CHECK(std::abs(wrap_pi((next.theta - tau) - (tau - s.theta))) < 1e-9);
    }
  }
}

TEST_CASE("grazing states are rejected") {
  const auto e = ellipse21();
  CHECK(kind_of([&] { reflect(e, {0.3, 0.3 + 0.5 * kPi + 1e-10}); }) == ErrorKind::TangentRay);
  CHECK(kind_of([&] { reflect(e, {0.3, 0.3 + 1.5 * kPi - 1e-10}); }) == ErrorKind::TangentRay);
}

TEST_CASE("map_line examples") {
  const auto circle = SupportCurve::circle(1.0);
  const auto a = map_line(circle, OrientedLine(0.5, 0.0));
  CHECK(a.p() == doctest::Approx(0.5));
  CHECK(a.phi() == doctest::Approx(2.0 * kPi / 3.0));
  const auto b = map_line(ellipse21(), OrientedLine(0.0, 0.0));
  CHECK(std::abs(b.p()) < 1e-12);
  CHECK(b.phi() == doctest::Approx(kPi));
  CHECK(kind_of([&] { map_line(circle, OrientedLine(1.5, 0.0)); }) == ErrorKind::MissesTable);
  CHECK(kind_of([&] { map_line(circle, OrientedLine(-1.5, 0.0)); }) == ErrorKind::MissesTable);
}

TEST_CASE("map_line agrees with the vertex map") {
  std::mt19937_64 rng(31);
  const SupportCurve curves[] = {ellipse21(), wavy_table()};
  for (const auto& curve : curves) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = random_state(rng);
      const auto line = outgoing_line(curve, s);
      const auto next = reflect(curve, s);
      const auto expected = outgoing_line(curve, next);
      const auto mapped = map_line(curve, line);
      CHECK(std::abs(mapped.p() - expected.p()) < 1e-10);
      CHECK(std::abs(wrap_pi(mapped.phi() - expected.phi())) < 1e-10);
    }
  }
  const auto e = ellipse21();
  const auto mapped = map_line(e, OrientedLine(0.4, 1.0));
  const double psi = exit_normal_angle(e, OrientedLine(0.4, 1.0));
  CHECK(std::abs(OrientedLine(0.4, 1.0).signed_distance(curve_point(e, psi))) < 1e-12);
  CHECK(std::abs(mapped.signed_distance(curve_point(e, psi))) < 1e-12);
}

TEST_CASE("time reversal undoes the map") {
  std::mt19937_64 rng(37);
  const SupportCurve curves[] = {ellipse21(), random_trig_poly(2, 3)};
  for (const auto& curve : curves) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto line = random_interior_line(curve, rng);
      const auto back = map_line(curve, map_line(curve, line).reversed()).reversed();
      CHECK(std::abs(back.p() - line.p()) < 1e-9);
      CHECK(std::abs(wrap_pi(back.phi() - line.phi())) < 1e-9);
    }
  }
}

TEST_CASE("jacobian_det is one") {
  std::mt19937_64 rng(41);
  const auto circle = SupportCurve::circle(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(std::abs(jacobian_det(circle, random_interior_line(circle, rng)) - 1.0) < 1e-7);
  }
  const auto e = ellipse21();
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(std::abs(jacobian_det(e, random_interior_line(e, rng)) - 1.0) < 1e-6);
  }
  const auto t = wavy_table();
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(std::abs(jacobian_det(t, random_interior_line(t, rng)) - 1.0) < 1e-5);
  }
}

TEST_CASE("Joachimsthal constant along an ellipse orbit") {
  std::mt19937_64 rng(43);
  const auto e = SupportCurve::ellipse(2.5, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto s = random_state(rng);
    const double j0 = joachimsthal_of(e, s);
    for (int bounce = 0; bounce < 50; ++bounce) {
      s = reflect(e, s);
      CHECK(std::abs(joachimsthal_of(e, s) - j0) < 1e-11 * j0);
    }
  }
}
