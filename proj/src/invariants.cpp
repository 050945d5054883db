#include "billiards/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "billiards/error.hpp"

namespace billiards {

namespace {

void require_closed(const SupportCurve& curve, const BilliardPolygon& polygon) {
  if (!(polygon.closure_residual <= 1e-7 * curve.diameter())) {
    std::ostringstream msg;
    msg << "closure residual " << polygon.closure_residual << " exceeds 1e-7 * diameter";
    throw Error(ErrorKind::NotClosed, msg.str());
  }
}

// For operations that only see the polygon: judge closure against its extent.
void require_closed(const BilliardPolygon& polygon) {
  double extent = 0.0;
  for (const auto& m : polygon.vertices) extent = std::max(extent, 2.0 * norm(m));
  if (!(polygon.closure_residual <= 1e-7 * extent)) {
    std::ostringstream msg;
    msg << "closure residual " << polygon.closure_residual << " exceeds 1e-7 * extent";
    throw Error(ErrorKind::NotClosed, msg.str());
  }
}

const Ellipse& require_ellipse(const SupportCurve& curve) {
  const auto* e = curve.as_ellipse();
  if (e == nullptr) throw Error(ErrorKind::InvalidArgument, "an elliptical table is required");
  return *e;
}

double next_gap(const BilliardPolygon& polygon, int i) {
  return forward_gap(polygon.psis[i], polygon.psis[(i + 1) % polygon.n]);
}

}  // namespace

void LogProduct::multiply(double factor) {
  if (factor == 0.0) {
    zero_ = true;
    return;
  }
  if (factor < 0.0) negative_ = !negative_;
  log_abs_ += std::log(std::abs(factor));
}

double LogProduct::value() const {
  if (zero_) return 0.0;
  const double magnitude = std::exp(log_abs_);
  return negative_ ? -magnitude : magnitude;
}

ActionResiduals check_theorem1(const SupportCurve& curve, const BilliardPolygon& polygon) {
  require_closed(curve, polygon);
  double action = 0.0;
  double drift = 0.0;
  for (int i = 0; i < polygon.n; ++i) {
    const auto v = curve.eval(polygon.psis[i]);
    const double s = std::sin(polygon.deltas[i]);
    action += 2.0 * v.h * s;
    drift += v.h1 * s;
  }
  return {action - polygon.perimeter, drift};
}

double check_vertex_identity(const SupportCurve& curve, const BilliardPolygon& polygon) {
  require_closed(curve, polygon);
  double worst = 0.0;
  for (int i = 0; i < polygon.n; ++i) {
    const int j = (i + 1) % polygon.n;
    const auto vi = curve.eval(polygon.psis[i]);
    const auto vj = curve.eval(polygon.psis[j]);
    const double lhs = vi.h * std::cos(polygon.deltas[i]) + vi.h1 * std::sin(polygon.deltas[i]);
    const double rhs = vj.h * std::cos(polygon.deltas[j]) - vj.h1 * std::sin(polygon.deltas[j]);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

TrigSumResiduals corollary_sums(const SupportCurve& ellipse, const BilliardPolygon& polygon,
                                  double J) {
  const auto& e = require_ellipse(ellipse);
  require_closed(ellipse, polygon);
  double sin2 = 0.0;
  double cos_alpha = 0.0;
  double h2 = 0.0;
  double cos2psi = 0.0;
  double sin2psi = 0.0;
  for (int i = 0; i < polygon.n; ++i) {
    const double d = polygon.deltas[i];
    const double psi = polygon.psis[i];
    const double s = std::sin(d);
    sin2 += s * s;
    cos_alpha += std::cos(kPi - 2.0 * d);
    const double h = ellipse.eval(psi).h;
    h2 += h * h;
    cos2psi += std::cos(2.0 * psi);
    sin2psi += std::sin(2.0 * psi);
  }
  const double n = polygon.n;
  const double L = polygon.perimeter;
  TrigSumResiduals r{};
  r.sin2_delta = 2.0 * sin2 - J * L;
  r.cos_alpha = cos_alpha - (J * L - n);
  r.h_squared = 2.0 * J * h2 - L;
  const double spread = (e.a1 - e.a2) * (e.a1 + e.a2);
  r.cos_2psi_skipped = spread == 0.0;
  r.cos_2psi = r.cos_2psi_skipped
                   ? 0.0
                   : cos2psi - (L / J - n * (e.a1 * e.a1 + e.a2 * e.a2)) / spread;
  r.sin_2psi = sin2psi;
  r.JL = J * L;
  r.L = L;
  r.n = n;
  return r;
}

double product_cos_beta(const BilliardPolygon& polygon) {
  require_closed(polygon);
  LogProduct product;
  for (int i = 0; i < polygon.n; ++i) product.multiply(std::cos(kPi - next_gap(polygon, i)));
  return product.value();
}

double check_eq_sin(const std::vector<BilliardPolygon>& sweep, int i, int j) {
  const int samples = static_cast<int>(sweep.size());
  if (samples < 9) throw Error(ErrorKind::InvalidArgument, "check_eq_sin needs >= 9 samples");
  const int n = sweep.front().n;
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorKind::InvalidArgument, "vertex index out of range");
  }
  for (const auto& poly : sweep) {
    if (!(std::abs(std::sin(2.0 * poly.deltas[j])) > 1e-3)) {
      std::ostringstream msg;
      msg << "|sin 2 delta_j| <= 1e-3 at phase " << poly.phase;
      throw Error(ErrorKind::NearSingular, msg.str());
    }
  }
  if (i == j) return 0.0;
  // Eighth-order central stencil in the (periodic, equally spaced) parameter;
  // the common 1/h factor cancels in the ratio.
  static constexpr double kWeights[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  auto derivative = [&](int s, int vertex) {
    double sum = 0.0;
    for (int m = 1; m <= 4; ++m) {
      const double ahead = sweep[(s + m) % samples].psis[vertex];
      const double behind = sweep[(s - m + samples) % samples].psis[vertex];
      sum += kWeights[m - 1] * wrap_pi(ahead - behind);
    }
    return sum;
  };
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double estimate = derivative(s, i) / derivative(s, j);
    const double exact = std::sin(2.0 * sweep[s].deltas[i]) / std::sin(2.0 * sweep[s].deltas[j]);
    worst = std::max(worst, std::abs(estimate - exact));
  }
  return worst;
}

double check_eq_sin(const PonceletFamily& family, int samples, int i, int j) {
  return check_eq_sin(family_sweep(family, samples, Execution::Sequential, Sampling::InvariantAngle),
                      i, j);
}

PedalStats pedal_stats(const BilliardPolygon& polygon, Point2 P) {
  require_closed(polygon);
  PedalStats stats{P, {}, {}, 0.0};
  stats.feet.reserve(polygon.n);
  Point2 sum{};
  for (int i = 0; i < polygon.n; ++i) {
    const OrientedLine tangent(dot(unit(polygon.psis[i]), polygon.vertices[i]), polygon.psis[i]);
    const Point2 q = pedal_foot(tangent, P);
    stats.feet.push_back(q);
    sum = sum + q;
    const double d = distance(q, P);
    stats.sum_sq += d * d;
  }
  stats.center_of_mass = (1.0 / polygon.n) * sum;
  return stats;
}

FocalProducts focal_products(const BilliardPolygon& polygon, const SupportCurve& ellipse,
                             const std::optional<Caustic>& caustic) {
  const auto& e = require_ellipse(ellipse);
  require_closed(ellipse, polygon);
  const double c = std::sqrt((e.a1 - e.a2) * (e.a1 + e.a2));
  LogProduct f1;
  LogProduct f2;
  LogProduct o;
  for (const auto& line : polygon.side_lines) {
    const auto d = focal_distances(line, c);
    f1.multiply(d.d1);
    f2.multiply(d.d2);
    o.multiply(std::abs(line.p()));
  }
  FocalProducts out{f1.value(), f2.value(), o.value(), std::nullopt, std::nullopt};
  if (caustic) {
    if (polygon.n % 2 == 0) out.expected_f = std::pow(caustic->bc, polygon.n);
    if (polygon.n % 4 == 0) out.expected_o = std::pow(caustic->ac * caustic->bc, polygon.n / 2);
  }
  return out;
}

double QuadResiduals::max() const {
  return std::max({std::abs(pair_major), std::abs(pair_minor), tangent_orthogonality, psi_gap,
                   delta_sum, support_cos, tan_delta, p1p2, p1p2_closed_form, ratio,
                   std::abs(joachimsthal), orthogonality_eq, orthoptic});
}

QuadResiduals check_quad_relations(const PonceletFamily& family, const BilliardPolygon& polygon) {
  if (family.n != 4 || polygon.n != 4) {
    throw Error(ErrorKind::WrongPeriod, "quadrilateral relations need n = 4");
  }
  const auto& e = require_ellipse(family.table);
  require_closed(family.table, polygon);
  const double ac = family.caustic.ac;
  const double bc = family.caustic.bc;
  const auto H = [&](double psi) { return family.table.eval(psi).h; };

  QuadResiduals r{};
  r.pair_major = e.a1 * e.a1 - (ac * ac + ac * bc);
  r.pair_minor = e.a2 * e.a2 - (bc * bc + ac * bc);
  for (int i = 0; i < 4; ++i) {
    const int j = (i + 1) % 4;
    const double gap = next_gap(polygon, i);
    const double di = polygon.deltas[i];
    const double dj = polygon.deltas[j];
    r.tangent_orthogonality = std::max(r.tangent_orthogonality, std::abs(std::cos(gap)));
    r.psi_gap = std::max(r.psi_gap, std::abs(gap - 0.5 * kPi));
    r.delta_sum = std::max(r.delta_sum, std::abs(di + dj - 0.5 * kPi));
    r.support_cos = std::max(
        r.support_cos, std::abs(H(polygon.psis[j]) * std::cos(dj) - H(polygon.psis[i]) * std::cos(di)));
    r.p1p2 = std::max(r.p1p2, std::abs(polygon.side_lines[i].p() * polygon.side_lines[j].p() -
                                       ac * bc));

    const Point2 P = polygon.vertices[i];
    const Point2 Q = polygon.vertices[j];
    const double bracket = cross(P, Q);
    r.ratio = std::max(r.ratio, std::abs(bracket * bracket / (distance(P, Q) * norm(P + Q)) -
                                         ac * bc));

    const double alpha = std::atan2(P.x2 / e.a2, P.x1 / e.a1);
    const double beta = std::atan2(Q.x2 / e.a2, Q.x1 / e.a1);
    r.orthogonality_eq = std::max(
        r.orthogonality_eq,
        std::abs((ac + bc) * std::cos(alpha - beta) - (ac - bc) * std::cos(alpha + beta)));

    // Tangent lines n_i·x = H(ψ_i) at consecutive vertices meet at X.
    const Point2 ni = unit(polygon.psis[i]);
    const Point2 nj = unit(polygon.psis[j]);
    const double det = cross(ni, nj);
    const double hi = H(polygon.psis[i]);
    const double hj = H(polygon.psis[j]);
    const Point2 X{(hi * nj.x2 - hj * ni.x2) / det, (ni.x1 * hj - nj.x1 * hi) / det};
    r.orthoptic = std::max(r.orthoptic,
                           std::abs(norm(X) - std::sqrt(e.a1 * e.a1 + e.a2 * e.a2)));
  }
  const double psi1 = polygon.psis[0];
  r.tan_delta = std::abs(std::tan(polygon.deltas[0]) - H(psi1) / H(psi1 + 0.5 * kPi));
  const double k = ac / bc;
  r.p1p2_closed_form = std::abs(k / (family.J * family.J * (k + 1.0) * (k + 1.0)) - ac * bc);
  r.joachimsthal = family.J - 1.0 / (ac + bc);
  return r;
}

QuadResiduals check_quad_relations(const PonceletFamily& family, double phase) {
  if (family.n != 4) throw Error(ErrorKind::WrongPeriod, "quadrilateral relations need n = 4");
  return check_quad_relations(family, build_orbit(family, phase));
}

PedalSums vanishing_pedal_sums(const BilliardPolygon& polygon) {
  require_closed(polygon);
  PedalSums sums{0.0, 0.0};
  for (int i = 0; i < polygon.n; ++i) {
    const double s = std::sin(polygon.deltas[i]);
    sums.s1 += s * std::cos(polygon.psis[i]);
    sums.s2 += s * std::sin(polygon.psis[i]);
  }
  return sums;
}

}  // namespace billiards
