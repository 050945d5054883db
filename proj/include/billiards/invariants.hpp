#pragma once

#include <optional>
#include <vector>

#include "billiards/geometry.hpp"
#include "billiards/poncelet.hpp"

namespace billiards {

/// Residuals of Σ 2h(ψ_i) sin δ_i = L and Σ h'(ψ_i) sin δ_i = 0, valid on any
/// smooth convex table. Throws NotClosed when the polygon does not close.
struct ActionResiduals {
  double sum_s_minus_l;
  double sum_hprime_sin;
};

ActionResiduals check_theorem1(const SupportCurve& curve, const BilliardPolygon& polygon);

/// max_i |h_i cos δ_i + h'_i sin δ_i − (h_{i+1} cos δ_{i+1} − h'_{i+1} sin δ_{i+1})|.
double check_vertex_identity(const SupportCurve& curve, const BilliardPolygon& polygon);

/// The five family sums for ellipses. Each residual comes with the magnitude
/// against which it should be judged relatively.
struct TrigSumResiduals {
  double sin2_delta;  ///< 2Σ sin²δ − J L
  double cos_alpha;   ///< Σ cos α − (J L − n), α = π − 2δ
  double h_squared;   ///< 2J Σ h² − L
  double cos_2psi;    ///< Σ cos 2ψ − (L/J − n(a1² + a2²))/(a1² − a2²); 0 when skipped
  double sin_2psi;    ///< Σ sin 2ψ
  bool cos_2psi_skipped;  ///< circular table: the identity divides by a1² − a2²
  double JL;
  double L;
  double n;
};

TrigSumResiduals corollary_sums(const SupportCurve& ellipse, const BilliardPolygon& polygon,
                                  double J);

/// Π cos β_i with β_i = π − (ψ_{i+1} − ψ_i), the angles of the tangential polygon.
double product_cos_beta(const BilliardPolygon& polygon);

/// Max over the sweep of |dψ_i/dψ_j − sin 2δ_i / sin 2δ_j| with the derivative
/// estimated along the family phase (0-based vertex indices). The family
/// overload samples evenly in the invariant angle; a given sweep must be evenly
/// spaced in some smooth periodic parameter.
double check_eq_sin(const PonceletFamily& family, int samples, int i, int j);
double check_eq_sin(const std::vector<BilliardPolygon>& sweep, int i, int j);

/// Feet of the perpendiculars from P to the tangent lines at the vertices.
struct PedalStats {
  Point2 P;
  std::vector<Point2> feet;
  Point2 center_of_mass;
  double sum_sq;
};

PedalStats pedal_stats(const BilliardPolygon& polygon, Point2 P);

/// Products of distances from F1 = (c, 0), F2 = (−c, 0) and O to the side lines.
/// Expected values bc^n (even n) and (ac·bc)^{n/2} (n divisible by 4) are
/// attached when the caustic is known.
struct FocalProducts {
  double prod_f1;
  double prod_f2;
  double prod_o;
  std::optional<double> expected_f;
  std::optional<double> expected_o;
};

FocalProducts focal_products(const BilliardPolygon& polygon, const SupportCurve& ellipse,
                             const std::optional<Caustic>& caustic = std::nullopt);

/// Relations specific to 4-periodic families, evaluated on one member.
struct QuadResiduals {
  double pair_major;       ///< a1² − (ac² + ac·bc)
  double pair_minor;       ///< a2² − (bc² + ac·bc)
  double tangent_orthogonality;  ///< max |cos(ψ_{i+1} − ψ_i)|
  double psi_gap;          ///< max |(ψ_{i+1} − ψ_i) − π/2|
  double delta_sum;        ///< max |δ_i + δ_{i+1} − π/2|
  double support_cos;      ///< max |H(ψ_{i+1}) cos δ_{i+1} − H(ψ_i) cos δ_i|
  double tan_delta;        ///< |tan δ_1 − H(ψ_1)/H(ψ_1 + π/2)|
  double p1p2;             ///< max |p_i p_{i+1} − ac·bc|
  double p1p2_closed_form; ///< |k/(J²(k+1)²) − ac·bc|, k = ac/bc
  double ratio;            ///< max |[P,Q]²/(|P−Q||P+Q|) − ac·bc|
  double joachimsthal;     ///< |J − 1/(ac + bc)|
  double orthogonality_eq; ///< max |(a+b)cos(α−β) − (a−b)cos(α+β)|, eccentric anomalies
  double orthoptic;        ///< max ||X_i| − √(a1² + a2²)|, X_i = tangent intersections

  double max() const;
};

QuadResiduals check_quad_relations(const PonceletFamily& family, double phase = 0.0);
QuadResiduals check_quad_relations(const PonceletFamily& family, const BilliardPolygon& polygon);

/// (Σ sin δ_i cos ψ_i, Σ sin δ_i sin ψ_i); both vanish on any closed billiard polygon.
struct PedalSums {
  double s1;
  double s2;
};

PedalSums vanishing_pedal_sums(const BilliardPolygon& polygon);

/// Product accumulated in log space with sign tracking.
class LogProduct {
 public:
  void multiply(double factor);
  double value() const;
  double log_abs() const { return log_abs_; }
  bool is_zero() const { return zero_; }

 private:
  double log_abs_ = 0.0;
  bool negative_ = false;
  bool zero_ = false;
};

}  // namespace billiards
