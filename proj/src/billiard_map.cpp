#include "billiards/billiard_map.hpp"

#include <cmath>
#include <sstream>

#include "billiards/error.hpp"
#include "numeric.hpp"

namespace billiards {

namespace {

constexpr int kBracketGrid = 2048;

void require_not_grazing(const VertexState& state) {
  const double delta = reflection_angle(state);
  if (!(delta > kGrazingAngle && delta < kPi - kGrazingAngle)) {
    std::ostringstream msg;
    msg << "reflection angle " << delta << " at psi=" << state.psi << " is grazing or outward";
    throw Error(ErrorKind::TangentRay, msg.str());
  }
}

VertexState mirror(double psi_next, double theta) {
  // Reflecting direction θ across the tangent direction ψ + π/2.
  return {wrap_two_pi(psi_next), wrap_two_pi(2.0 * psi_next + kPi - theta)};
}

}  // namespace

double reflection_angle(const VertexState& state) {
  return wrap_two_pi(state.theta - state.psi - 0.5 * kPi);
}

ChordData chord_data(const SupportCurve& curve, double phi1, double phi2) {
  const double gap = forward_gap(phi1, phi2);
  if (!(gap > 0.0) || gap > kPi * (1.0 + 1e-14)) {
    std::ostringstream msg;
    msg << "wrapped gap phi2 - phi1 = " << gap << " is outside (0, pi]";
    throw Error(ErrorKind::DegenerateChord, msg.str());
  }
  const double delta = 0.5 * gap;
  const double psi = phi1 + delta;
  const auto v = curve.eval(psi);
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  return ChordData{
      .incoming = OrientedLine(v.h * c - v.h1 * s, phi1),
      .outgoing = OrientedLine(v.h * c + v.h1 * s, phi1 + gap),
      .phi1 = wrap_two_pi(phi1),
      .phi2 = wrap_two_pi(phi1 + gap),
      .psi = wrap_two_pi(psi),
      .delta = delta,
      .vertex = curve_point(curve, psi),
  };
}

double generating_function(const SupportCurve& curve, double phi1, double phi2) {
  const auto chord = chord_data(curve, phi1, phi2);
  return 2.0 * curve.eval(chord.psi).h * std::sin(chord.delta);
}

PedalPair gen_partials(const SupportCurve& curve, double phi1, double phi2) {
  const auto chord = chord_data(curve, phi1, phi2);
  return {chord.incoming.p(), chord.outgoing.p()};
}

VertexState reflect_ellipse(const SupportCurve& ellipse, const VertexState& state) {
  const auto* e = ellipse.as_ellipse();
  if (e == nullptr) throw Error(ErrorKind::InvalidArgument, "reflect_ellipse needs an ellipse");
  require_not_grazing(state);

  const Point2 m = curve_point(ellipse, state.psi);
  const Point2 u = unit(state.theta);
  const double ia = 1.0 / (e->a1 * e->a1);
  const double ib = 1.0 / (e->a2 * e->a2);
  // |m + t u|_E² = 1  ⇔  A t² + 2 B t + C = 0, with C ≈ 0 since m is on the ellipse.
  const double A = u.x1 * u.x1 * ia + u.x2 * u.x2 * ib;
  const double B = m.x1 * u.x1 * ia + m.x2 * u.x2 * ib;
  const double C = m.x1 * m.x1 * ia + m.x2 * m.x2 * ib - 1.0;
  const double disc = std::max(B * B - A * C, 0.0);
  const double q = -B + std::sqrt(disc);
  const double t = q / A;
  if (!(B < 0.0) || !(t > 1e-12 * e->a1)) {
    throw Error(ErrorKind::TangentRay, "second intersection coincides with the start point");
  }
  const Point2 next = m + t * u;
  const double psi_next = std::atan2(next.x2 * ib, next.x1 * ia);
  return mirror(psi_next, state.theta);
}

VertexState reflect_generic(const SupportCurve& curve, const VertexState& state) {
  require_not_grazing(state);
  const Point2 m = curve_point(curve, state.psi);
  const Point2 u = unit(state.theta);
  // Signed offset of γ(ψ) from the ray's line; negative on the arc right after
  // the start point, positive once the ray's exit point has been passed.
  auto offset = [&](double psi) { return cross(u, curve_point(curve, psi) - m); };

  const double step = kTwoPi / kBracketGrid;
  double lo = state.psi;
  double hi = state.psi;
  bool found = false;
  for (int j = 1; j < kBracketGrid; ++j) {
    const double psi = state.psi + j * step;
    if (offset(psi) > 0.0) {
      hi = psi;
      lo = psi - step;
      found = true;
      break;
    }
  }
  if (!found) {
    throw Error(ErrorKind::NoIntersection, "no sign change of the chord offset on the grid");
  }
  const double psi_next = detail::bisect(offset, lo, hi, /*lo_negative=*/true);
  const double gap = forward_gap(state.psi, psi_next);
  if (gap < 1e-12 || gap > kTwoPi - 1e-12) {
    throw Error(ErrorKind::TangentRay, "next impact coincides with the start point");
  }
  if (std::abs(offset(psi_next)) > 1e-12 * curve.diameter()) {
    throw Error(ErrorKind::NoConvergence, "bisection did not reach the chord");
  }
  return mirror(psi_next, state.theta);
}

VertexState reflect(const SupportCurve& curve, const VertexState& state) {
  return curve.is_ellipse() ? reflect_ellipse(curve, state) : reflect_generic(curve, state);
}

OrientedLine outgoing_line(const SupportCurve& curve, const VertexState& state) {
  return OrientedLine::through(curve_point(curve, state.psi), state.theta);
}

double exit_normal_angle(const SupportCurve& curve, const OrientedLine& line) {
  const double phi = line.phi();
  const double p = line.p();
  if (!(p < curve.eval(phi).h) || !(p > -curve.eval(phi + kPi).h)) {
    std::ostringstream msg;
    msg << "line (p=" << p << ", phi=" << phi << ") does not cross the table";
    throw Error(ErrorKind::MissesTable, msg.str());
  }
  // γ(ψ)·n − p decreases strictly on (φ, φ + π), from h(φ) − p > 0 to −h(φ+π) − p < 0.
  const Point2 n = line.normal();
  auto f = [&](double psi) { return dot(curve_point(curve, psi), n) - p; };
  return wrap_two_pi(detail::bisect(f, phi, phi + kPi, /*lo_negative=*/false));
}

OrientedLine map_line(const SupportCurve& curve, const OrientedLine& line) {
  const double psi = exit_normal_angle(curve, line);
  const double delta = forward_gap(line.phi(), psi);
  const auto v = curve.eval(psi);
  return {v.h * std::cos(delta) + v.h1 * std::sin(delta), psi + delta};
}

double jacobian_det(const SupportCurve& curve, const OrientedLine& line, double step) {
  const auto plus_p = map_line(curve, {line.p() + step, line.phi()});
  const auto minus_p = map_line(curve, {line.p() - step, line.phi()});
  const auto plus_phi = map_line(curve, {line.p(), line.phi() + step});
  const auto minus_phi = map_line(curve, {line.p(), line.phi() - step});
  const double inv = 1.0 / (2.0 * step);
  const double dp_dp = (plus_p.p() - minus_p.p()) * inv;
  const double dphi_dp = wrap_pi(plus_p.phi() - minus_p.phi()) * inv;
  const double dp_dphi = (plus_phi.p() - minus_phi.p()) * inv;
  const double dphi_dphi = wrap_pi(plus_phi.phi() - minus_phi.phi()) * inv;
  return dp_dp * dphi_dphi - dp_dphi * dphi_dp;
}

}  // namespace billiards
