#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <variant>
#include <vector>

namespace billiards {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2π).
double wrap_two_pi(double angle);
/// Wraps an angle into (−π, π].
double wrap_pi(double angle);
/// Wrapped forward gap from `from` to `to`, in [0, 2π).
inline double forward_gap(double from, double to) { return wrap_two_pi(to - from); }

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point2 operator-(Point2 a) { return {-a.x1, -a.x2}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Point2, Point2) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double cross(Point2 a, Point2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(Point2 a) { return std::hypot(a.x1, a.x2); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// The line cos φ·x₁ + sin φ·x₂ = p, oriented so that (cos φ, sin φ) is its
/// right normal. The direction of travel is φ + π/2.
class OrientedLine {
 public:
  OrientedLine(double p, double phi) : p_(p), phi_(wrap_two_pi(phi)) {}

  /// The line through `point` travelling in direction `theta`.
  static OrientedLine through(Point2 point, double theta);

  double p() const noexcept { return p_; }
  double phi() const noexcept { return phi_; }
  Point2 normal() const { return unit(phi_); }
  double direction_angle() const { return wrap_two_pi(phi_ + 0.5 * kPi); }
  Point2 direction() const { return unit(phi_ + 0.5 * kPi); }
  /// Same point set, opposite orientation.
  OrientedLine reversed() const { return {-p_, phi_ + kPi}; }
  /// Positive on the right-hand side of the line.
  double signed_distance(Point2 x) const { return dot(normal(), x) - p_; }

 private:
  double p_;
  double phi_;
};

/// h(ψ) and its first two derivatives.
struct SupportValue {
  double h;
  double h1;
  double h2;
};

struct Ellipse {
  double a1;
  double a2;
};

struct Harmonic {
  int k;
  double a;
  double b;
  friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// h(ψ) = c0 + Σ a_k cos kψ + b_k sin kψ + ox cos ψ + oy sin ψ, k ≥ 2.
/// The (ox, oy) term is a rigid translation of the curve; it is zero unless set.
struct TrigPoly {
  double c0;
  std::vector<Harmonic> harmonics;
  Point2 origin_offset{};
};

/// A smooth strictly convex curve described by its support function.
/// Construction validates positivity of h and of the radius of curvature h + h''.
class SupportCurve {
 public:
  static SupportCurve ellipse(double a1, double a2);
  static SupportCurve circle(double radius) { return ellipse(radius, radius); }
  static SupportCurve trig_poly(double c0, std::vector<Harmonic> harmonics,
                                Point2 origin_offset = {});

  bool is_ellipse() const { return std::holds_alternative<Ellipse>(shape_); }
  const Ellipse* as_ellipse() const { return std::get_if<Ellipse>(&shape_); }
  const TrigPoly* as_trig_poly() const { return std::get_if<TrigPoly>(&shape_); }

  SupportValue eval(double psi) const;
  /// Maximal width max_ψ h(ψ) + h(ψ + π); for a convex curve this is its diameter.
  double diameter() const noexcept { return diameter_; }
  /// Characteristic size used to scale absolute tolerances (a1, or c0).
  double scale() const noexcept;

  /// Number of grid points used to validate TrigPoly curves.
  static constexpr int kValidationGrid = 4096;

 private:
  explicit SupportCurve(std::variant<Ellipse, TrigPoly> shape);

  std::variant<Ellipse, TrigPoly> shape_;
  double diameter_ = 0.0;
};

/// Random strictly convex TrigPoly table with harmonics k = 2..harmonics+1.
/// Coefficients are drawn uniformly with amplitude 0.25/(k²−1)·c0 and the draw
/// is repeated until min(h + h'') > 0.2·c0. harmonics = 0 gives the circle
/// of radius c0.
SupportCurve random_trig_poly(std::uint64_t seed, int harmonics, double c0 = 1.0);

/// Minimum of h + h'' over the validation grid.
double min_curvature_radius(const TrigPoly& poly, int grid = SupportCurve::kValidationGrid);

inline SupportValue support_eval(const SupportCurve& curve, double psi) { return curve.eval(psi); }

/// The point of the curve with outer normal (cos ψ, sin ψ):
/// γ(ψ) = h(ψ)(cos ψ, sin ψ) + h'(ψ)(−sin ψ, cos ψ).
Point2 curve_point(const SupportCurve& curve, double psi);
/// γ'(ψ) = (h + h'')(−sin ψ, cos ψ).
Point2 curve_tangent(const SupportCurve& curve, double psi);

/// Orthogonal projection of `point` onto `line`.
Point2 pedal_foot(const OrientedLine& line, Point2 point);

struct FocalDistances {
  double d1;  ///< from (c, 0)
  double d2;  ///< from (−c, 0)
};

/// Distances from the foci (±c, 0) to `line`.
FocalDistances focal_distances(const OrientedLine& line, double c);

}  // namespace billiards
