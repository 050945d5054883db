#pragma once

#include "billiards/geometry.hpp"

namespace billiards {

/// An impact point, identified by its outer-normal angle ψ, and the direction
/// θ of the outgoing ray. The reflection angle δ = θ − ψ − π/2 lies in (0, π).
struct VertexState {
  double psi;
  double theta;
};

/// Reflection angle of the outgoing ray measured from the counter-clockwise
/// tangent, in [0, 2π); valid states have it in (0, π).
double reflection_angle(const VertexState& state);

/// Shots with min(δ, π − δ) below this are rejected as grazing.
inline constexpr double kGrazingAngle = 1e-8;

/// Two consecutive oriented lines of a trajectory, meeting at `vertex` on the
/// curve: φ1 = ψ − δ (incoming), φ2 = ψ + δ (outgoing).
struct ChordData {
  OrientedLine incoming;
  OrientedLine outgoing;
  double phi1;
  double phi2;
  double psi;
  double delta;
  Point2 vertex;
};

/// Resolves (φ1, φ2) with wrapped gap in (0, π] into the reflection data at the
/// common vertex. Throws DegenerateChord outside that range.
ChordData chord_data(const SupportCurve& curve, double phi1, double phi2);

/// S(φ1, φ2) = 2 h(ψ) sin δ.
double generating_function(const SupportCurve& curve, double phi1, double phi2);

struct PedalPair {
  double p1;  ///< −∂S/∂φ1 = h cos δ − h' sin δ
  double p2;  ///< ∂S/∂φ2 = h cos δ + h' sin δ
};

PedalPair gen_partials(const SupportCurve& curve, double phi1, double phi2);

/// Closed-form ellipse reflection: second root of the chord–conic quadratic,
/// then mirror the direction across the tangent there.
VertexState reflect_ellipse(const SupportCurve& ellipse, const VertexState& state);

/// Reflection on any strictly convex curve: bracket the next impact on a
/// 2048-point normal-angle grid and refine by bisection.
VertexState reflect_generic(const SupportCurve& curve, const VertexState& state);

/// Uses the closed form on ellipses and the generic solver otherwise.
VertexState reflect(const SupportCurve& curve, const VertexState& state);

/// The oriented line carrying the outgoing ray of `state`.
OrientedLine outgoing_line(const SupportCurve& curve, const VertexState& state);

/// The billiard map T on oriented lines: reflect `line` at the point where it
/// leaves the table. Throws MissesTable if the line does not cross the curve.
OrientedLine map_line(const SupportCurve& curve, const OrientedLine& line);

/// Normal angle of the point where `line` exits the table.
double exit_normal_angle(const SupportCurve& curve, const OrientedLine& line);

/// Central-difference Jacobian determinant of map_line in (p, φ); ≈ 1 because T
/// preserves dp ∧ dφ.
double jacobian_det(const SupportCurve& curve, const OrientedLine& line, double step = 1e-5);

}  // namespace billiards
