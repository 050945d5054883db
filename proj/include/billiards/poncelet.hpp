#pragma once

#include <cstdint>
#include <vector>

#include "billiards/billiard_map.hpp"
#include "billiards/geometry.hpp"

namespace billiards {

/// Confocal ellipse x₁²/(a1²−λ) + x₂²/(a2²−λ) = 1 inside the table.
struct Caustic {
  double ac;
  double bc;
  double lambda;

  double support(double phi) const;
  /// Point at tangency phase t: (ac cos t, bc sin t).
  Point2 point_at(double t) const;
  /// Counter-clockwise tangent line at phase t, with the caustic on its left.
  OrientedLine tangent_line(double t) const;
  /// Tangency phase of the support line with normal angle φ.
  double phase_of_normal(double phi) const;
  /// Angle coordinate in which the billiard map acts on tangents as a rotation
  /// (measure dφ/h_c). Lifted: u(t + 2π) = u(t) + 2π, and u = t at multiples of π/2.
  double invariant_angle(double t) const;
  /// Inverse of invariant_angle.
  double phase_of_invariant_angle(double u) const;
};

/// Throws OutOfRange unless 0 < λ < a2².
Caustic caustic_from_lambda(const SupportCurve& ellipse, double lambda);

/// Average ψ-advance per bounce / 2π along the trajectory tangent to the
/// caustic λ, using a smooth-window weighted average over `iterations` bounces.
double rotation_number(const SupportCurve& ellipse, double lambda, int iterations = 2048);

struct PonceletFamily {
  SupportCurve table;
  Caustic caustic;
  int n;
  int k;
  double J;  ///< Joachimsthal constant sin δ / h(ψ), measured on the phase-0 orbit.
};

/// Signed closure defect of the n-step map: lifted ψ-advance over n bounces
/// from the phase-0 vertex minus 2πk. Has the sign of ρ(λ) − k/n.
double closure_defect(const SupportCurve& ellipse, double lambda, int n, int k);

/// Locates the caustic carrying the (n, k) Poncelet family: bisection on the
/// rotation number followed by a bracketed polish of the closure defect.
PonceletFamily find_caustic(const SupportCurve& ellipse, int n, int k, double tol = 1e-10);

/// An n-periodic billiard polygon. Side i joins vertex i to vertex i+1 and has
/// pedal coordinates side_lines[i] = (p_i, φ_i), with φ_i = ψ_i + δ_i.
struct BilliardPolygon {
  int n = 0;
  int winding = 0;
  std::vector<Point2> vertices;
  std::vector<double> psis;
  std::vector<double> deltas;
  std::vector<OrientedLine> side_lines;
  double perimeter = 0.0;
  /// max(|M_{n+1} − M_1|, a·|θ_{n+1} − θ_1|) after n map iterations.
  double closure_residual = 0.0;
  /// Family phase (caustic tangency angle) for Poncelet orbits; 0 otherwise.
  double phase = 0.0;
};

/// Traces n reflections starting from `start` and records the polygon.
BilliardPolygon trace_orbit(const SupportCurve& curve, const VertexState& start, int n);

/// Orbit of the family whose first vertex is where the caustic tangent at phase t
/// leaves the table. Throws ClosureFailure if the residual exceeds 1e−7·a1.
BilliardPolygon build_orbit(const PonceletFamily& family, double phase);

/// Orbit of the family whose first vertex has outer normal ψ1.
BilliardPolygon build_orbit_at_vertex(const PonceletFamily& family, double psi1);

enum class Axis { Major, Minor };

/// The 2-periodic bounce along an axis of the ellipse.
BilliardPolygon axis_orbit(const SupportCurve& ellipse, Axis axis);

enum class Execution { Sequential, Parallel };

/// TangencyPhase spaces the tangency phases evenly. InvariantAngle spaces the
/// invariant angle evenly, which keeps every vertex resolved on thin caustics.
enum class Sampling { TangencyPhase, InvariantAngle };

/// build_orbit at 2πj/samples, j = 0..samples−1, returned in sample order.
std::vector<BilliardPolygon> family_sweep(const PonceletFamily& family, int samples,
                                          Execution execution = Execution::Sequential,
                                          Sampling sampling = Sampling::TangencyPhase);

struct JoachimsthalStats {
  double mean;
  double max_deviation;
};

JoachimsthalStats joachimsthal(const SupportCurve& ellipse, const BilliardPolygon& polygon);

/// Birkhoff (n, k) orbit: maximizes the perimeter of inscribed n-gons with
/// winding k over their vertex normal angles.
BilliardPolygon birkhoff_orbit(const SupportCurve& curve, int n, int k, std::uint64_t seed);

/// Polygon with the given vertex normal angles (cyclically ordered with total
/// advance 2πk). Closure residual is measured by tracing the map.
BilliardPolygon polygon_from_normals(const SupportCurve& curve, const std::vector<double>& psis);

/// max_i |δ_in − δ_out| at each vertex, from the chord directions.
double reflection_law_residual(const BilliardPolygon& polygon);

}  // namespace billiards
