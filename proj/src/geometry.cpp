#include "billiards/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "billiards/error.hpp"

namespace billiards {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidCurve: return "InvalidCurve";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateChord: return "DegenerateChord";
    case ErrorKind::TangentRay: return "TangentRay";
    case ErrorKind::NoIntersection: return "NoIntersection";
    case ErrorKind::MissesTable: return "MissesTable";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotBracketed: return "NotBracketed";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ClosureFailure: return "ClosureFailure";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::NearSingular: return "NearSingular";
    case ErrorKind::WrongPeriod: return "WrongPeriod";
  }
  return "Unknown";
}

double wrap_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2π.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_pi(double angle) {
  double r = wrap_two_pi(angle);
  return r > kPi ? r - kTwoPi : r;
}

OrientedLine OrientedLine::through(Point2 point, double theta) {
  const double phi = theta - 0.5 * kPi;
  return {dot(unit(phi), point), phi};
}

namespace {

SupportValue eval_ellipse(const Ellipse& e, double psi) {
  // h² = q(ψ) = (a1²+a2²)/2 + d cos 2ψ, d = (a1²−a2²)/2.
  const double d = 0.5 * (e.a1 - e.a2) * (e.a1 + e.a2);
  const double c2 = std::cos(2.0 * psi);
  const double s2 = std::sin(2.0 * psi);
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  const double q = e.a1 * e.a1 * c * c + e.a2 * e.a2 * s * s;
  const double q1 = -2.0 * d * s2;
  const double q2 = -4.0 * d * c2;
  const double h = std::sqrt(q);
  const double h1 = q1 / (2.0 * h);
  const double h2 = q2 / (2.0 * h) - q1 * q1 / (4.0 * h * q);
  return {h, h1, h2};
}

SupportValue eval_trig(const TrigPoly& t, double psi) {
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  double h = t.c0 + t.origin_offset.x1 * c + t.origin_offset.x2 * s;
  double h1 = -t.origin_offset.x1 * s + t.origin_offset.x2 * c;
  double h2 = -t.origin_offset.x1 * c - t.origin_offset.x2 * s;
  for (const auto& hk : t.harmonics) {
    const double k = hk.k;
    const double ck = std::cos(k * psi);
    const double sk = std::sin(k * psi);
    h += hk.a * ck + hk.b * sk;
    h1 += k * (-hk.a * sk + hk.b * ck);
    h2 += -k * k * (hk.a * ck + hk.b * sk);
  }
  return {h, h1, h2};
}

}  // namespace

double min_curvature_radius(const TrigPoly& poly, int grid) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const auto v = eval_trig(poly, kTwoPi * i / grid);
    lo = std::min(lo, v.h + v.h2);
  }
  return lo;
}

SupportCurve::SupportCurve(std::variant<Ellipse, TrigPoly> shape) : shape_(std::move(shape)) {
  if (const auto* e = as_ellipse()) {
    diameter_ = 2.0 * e->a1;
    return;
  }
  double width = 0.0;
  for (int i = 0; i < kValidationGrid / 2; ++i) {
    const double psi = kTwoPi * i / kValidationGrid;
    width = std::max(width, eval(psi).h + eval(psi + kPi).h);
  }
  diameter_ = width;
}

SupportCurve SupportCurve::ellipse(double a1, double a2) {
  if (!(std::isfinite(a1) && std::isfinite(a2)) || !(a2 > 0.0) || a1 < a2) {
    std::ostringstream msg;
    msg << "ellipse requires a1 >= a2 > 0 (got a1=" << a1 << ", a2=" << a2 << ")";
    throw Error(ErrorKind::InvalidCurve, msg.str());
  }
  return SupportCurve(Ellipse{a1, a2});
}

SupportCurve SupportCurve::trig_poly(double c0, std::vector<Harmonic> harmonics,
                                     Point2 origin_offset) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) {
    throw Error(ErrorKind::InvalidCurve, "trig-poly mean term c0 must be positive");
  }
  for (const auto& hk : harmonics) {
    if (hk.k < 2) {
      throw Error(ErrorKind::InvalidCurve,
                  "trig-poly harmonics start at k = 2; k = 1 terms are translations");
    }
    if (!std::isfinite(hk.a) || !std::isfinite(hk.b)) {
      throw Error(ErrorKind::InvalidCurve, "non-finite trig-poly coefficient");
    }
  }
  TrigPoly poly{c0, std::move(harmonics), origin_offset};
  double min_h = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kValidationGrid; ++i) {
    min_h = std::min(min_h, eval_trig(poly, kTwoPi * i / kValidationGrid).h);
  }
  if (!(min_h > 0.0)) {
    throw Error(ErrorKind::InvalidCurve, "support function is not positive (origin outside)");
  }
  const double min_radius = min_curvature_radius(poly);
  if (!(min_radius > 1e-6 * c0)) {
    std::ostringstream msg;
    msg << "curve is not strictly convex: min(h + h'') = " << min_radius;
    throw Error(ErrorKind::InvalidCurve, msg.str());
  }
  return SupportCurve(std::move(poly));
}

SupportValue SupportCurve::eval(double psi) const {
  if (const auto* e = as_ellipse()) return eval_ellipse(*e, psi);
  return eval_trig(std::get<TrigPoly>(shape_), psi);
}

double SupportCurve::scale() const noexcept {
  if (const auto* e = as_ellipse()) return e->a1;
  return std::get<TrigPoly>(shape_).c0;
}

SupportCurve random_trig_poly(std::uint64_t seed, int harmonics, double c0) {
  if (harmonics < 0) throw Error(ErrorKind::InvalidArgument, "harmonic count must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit_draw(-1.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Harmonic> terms;
    for (int k = 2; k < harmonics + 2; ++k) {
      const double amplitude = 0.25 * c0 / (k * k - 1.0);
      const double a = amplitude * unit_draw(rng);
      const double b = amplitude * unit_draw(rng);
      terms.push_back({k, a, b});
    }
    TrigPoly candidate{c0, terms, {}};
    if (min_curvature_radius(candidate) > 0.2 * c0) return SupportCurve::trig_poly(c0, terms);
  }
  throw Error(ErrorKind::InvalidCurve, "no convex table drawn in 1000 attempts");
}

Point2 curve_point(const SupportCurve& curve, double psi) {
  const auto v = curve.eval(psi);
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  return {v.h * c - v.h1 * s, v.h * s + v.h1 * c};
}

Point2 curve_tangent(const SupportCurve& curve, double psi) {
  const auto v = curve.eval(psi);
  const double r = v.h + v.h2;
  return {-r * std::sin(psi), r * std::cos(psi)};
}

Point2 pedal_foot(const OrientedLine& line, Point2 point) {
  return point - line.signed_distance(point) * line.normal();
}

FocalDistances focal_distances(const OrientedLine& line, double c) {
  const double shift = c * std::cos(line.phi());
  return {std::abs(line.p() - shift), std::abs(line.p() + shift)};
}

}  // namespace billiards
