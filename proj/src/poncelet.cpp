#include "billiards/poncelet.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>
#include <thread>

#include "billiards/error.hpp"
#include "numeric.hpp"

namespace billiards {

namespace {

const Ellipse& require_ellipse(const SupportCurve& curve) {
  const auto* e = curve.as_ellipse();
  if (e == nullptr) throw Error(ErrorKind::InvalidArgument, "an elliptical table is required");
  return *e;
}

double normal_angle_at(const Ellipse& e, Point2 m) {
  return wrap_two_pi(std::atan2(m.x2 / (e.a2 * e.a2), m.x1 / (e.a1 * e.a1)));
}

/// First table vertex of the trajectory carried by the caustic tangent at phase t.
VertexState launch(const SupportCurve& table, const Caustic& caustic, double t) {
  const auto& e = require_ellipse(table);
  const Point2 c = caustic.point_at(t);
  const OrientedLine line = caustic.tangent_line(t);
  const Point2 u = line.direction();
  const double ia = 1.0 / (e.a1 * e.a1);
  const double ib = 1.0 / (e.a2 * e.a2);
  const double A = u.x1 * u.x1 * ia + u.x2 * u.x2 * ib;
  const double B = c.x1 * u.x1 * ia + c.x2 * u.x2 * ib;
  const double C = c.x1 * c.x1 * ia + c.x2 * c.x2 * ib - 1.0;  // < 0 inside
  const double root = std::sqrt(std::max(B * B - A * C, 0.0));
  const double s = B <= 0.0 ? (root - B) / A : -C / (B + root);
  const Point2 m = c + s * u;
  const double psi = normal_angle_at(e, m);
  return {psi, wrap_two_pi(2.0 * psi + kPi - line.direction_angle())};
}

int gcd(int a, int b) { return std::gcd(a, b); }

}  // namespace

double Caustic::support(double phi) const {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return std::sqrt(ac * ac * c * c + bc * bc * s * s);
}

Point2 Caustic::point_at(double t) const { return {ac * std::cos(t), bc * std::sin(t)}; }

OrientedLine Caustic::tangent_line(double t) const {
  const double theta = std::atan2(bc * std::cos(t), -ac * std::sin(t));
  return OrientedLine::through(point_at(t), theta);
}

double Caustic::phase_of_normal(double phi) const {
  return wrap_two_pi(std::atan2(bc * std::sin(phi), ac * std::cos(phi)));
}

double Caustic::invariant_angle(double t) const {
  // dφ/h_c = dt/√(bc² cos²t + ac² sin²t); with t = θ + π/2 this is an
  // incomplete elliptic integral of the first kind in θ.
  const double k = std::sqrt((ac - bc) * (ac + bc)) / ac;
  if (k == 0.0) return t;
  return 0.5 * kPi * (std::ellint_1(k, t - 0.5 * kPi) / std::comp_ellint_1(k) + 1.0);
}

double Caustic::phase_of_invariant_angle(double u) const {
  auto f = [&](double t) { return invariant_angle(t) - u; };
  return detail::bisect(f, u - 0.5 * kPi, u + 0.5 * kPi, /*lo_negative=*/true);
}

Caustic caustic_from_lambda(const SupportCurve& ellipse, double lambda) {
  const auto& e = require_ellipse(ellipse);
  if (!(lambda > 0.0 && lambda < e.a2 * e.a2)) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " outside (0, a2^2 = " << e.a2 * e.a2 << ")";
    throw Error(ErrorKind::OutOfRange, msg.str());
  }
  return {std::sqrt(e.a1 * e.a1 - lambda), std::sqrt(e.a2 * e.a2 - lambda), lambda};
}

namespace {

// Near the separatrix λ → a2² the caustic is thin and λ itself carries no
// digits of bc; the search works in μ = bc² = a2² − λ instead.
Caustic caustic_from_mu(const Ellipse& e, double mu) {
  return {std::sqrt((e.a1 - e.a2) * (e.a1 + e.a2) + mu), std::sqrt(mu), e.a2 * e.a2 - mu};
}

double weighted_rotation(const SupportCurve& ellipse, const Caustic& caustic, int iterations) {
  VertexState state = launch(ellipse, caustic, 0.0);
  double weighted = 0.0;
  double total_weight = 0.0;
  for (int j = 0; j < iterations; ++j) {
    const VertexState next = reflect_ellipse(ellipse, state);
    const double x = (j + 1.0) / (iterations + 1.0);
    const double w = std::exp(-1.0 / (x * (1.0 - x)));
    weighted += w * forward_gap(state.psi, next.psi);
    total_weight += w;
    state = next;
  }
  return weighted / (total_weight * kTwoPi);
}

double defect(const SupportCurve& ellipse, const Caustic& caustic, int n, int k) {
  VertexState state = launch(ellipse, caustic, 0.0);
  double advance = 0.0;
  for (int i = 0; i < n; ++i) {
    const VertexState next = reflect_ellipse(ellipse, state);
    advance += forward_gap(state.psi, next.psi);
    state = next;
  }
  return advance - kTwoPi * k;
}

}  // namespace

double rotation_number(const SupportCurve& ellipse, double lambda, int iterations) {
  if (iterations < 256) {
    throw Error(ErrorKind::InvalidArgument, "rotation_number needs at least 256 iterations");
  }
  return weighted_rotation(ellipse, caustic_from_lambda(ellipse, lambda), iterations);
}

double closure_defect(const SupportCurve& ellipse, double lambda, int n, int k) {
  return defect(ellipse, caustic_from_lambda(ellipse, lambda), n, k);
}

PonceletFamily find_caustic(const SupportCurve& ellipse, int n, int k, double tol) {
  const auto& e = require_ellipse(ellipse);
  if (n < 3 || k < 1 || gcd(n, k) != 1) {
    std::ostringstream msg;
    msg << "(n, k) = (" << n << ", " << k << ") needs n >= 3, k >= 1 and gcd(n, k) = 1";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  const double target = static_cast<double>(k) / n;
  const double a2sq = e.a2 * e.a2;
  // ρ decreases in μ: μ_lo is next to the separatrix, μ_hi next to the table.
  double lo = 1e-24 * a2sq;
  double hi = (1.0 - 1e-9) * a2sq;
  auto rho = [&](double mu) { return weighted_rotation(ellipse, caustic_from_mu(e, mu), 2048); };
  const double rho_max = rho(lo);
  const double rho_min = rho(hi);
  if (!(target > rho_min && target < rho_max)) {
    std::ostringstream msg;
    msg << "rotation number " << k << "/" << n << " outside the attained range (" << rho_min
        << ", " << rho_max << ")";
    throw Error(ErrorKind::NotBracketed, msg.str());
  }

  bool converged = false;
  for (int step = 0; step < 200; ++step) {
    const double mid = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double r = rho(mid);
    if (std::abs(r - target) < tol || mid <= lo || mid >= hi) {
      converged = true;
      break;
    }
    (r > target ? lo : hi) = mid;
  }
  if (!converged) {
    throw Error(ErrorKind::NoConvergence, "rotation-number bisection exhausted 200 steps");
  }

  // Illinois refinement of the signed closure defect, positive at lo.
  auto f = [&](double mu) { return defect(ellipse, caustic_from_mu(e, mu), n, k); };
  double f_lo = f(lo);
  double f_hi = f(hi);
  // The rotation-number estimate carries a small bias, so the bracket may sit
  // just beside the closure root; widen it until the defect changes sign.
  const double mu_floor = 1e-24 * a2sq;
  const double mu_ceil = (1.0 - 1e-9) * a2sq;
  for (int grow = 0; grow < 60 && !(f_lo > 0.0 && f_hi < 0.0); ++grow) {
    const double width = std::max(hi - lo, 1e-15 * hi);
    if (f_hi >= 0.0 && hi < mu_ceil) {
      lo = hi;
      f_lo = f_hi;
      hi = std::min(hi + 2.0 * width, mu_ceil);
      f_hi = f(hi);
    } else if (f_lo <= 0.0 && lo > mu_floor) {
      hi = lo;
      f_hi = f_lo;
      lo = std::max(lo - 2.0 * width, mu_floor);
      f_lo = f(lo);
    } else {
      break;
    }
  }
  double mu = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
  if (f_lo > 0.0 && f_hi < 0.0) {
    int side = 0;
    for (int iter = 0; iter < 100; ++iter) {
      mu = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
      if (!(mu > lo && mu < hi)) mu = 0.5 * (lo + hi);
      const double v = f(mu);
      if (v == 0.0 || std::abs(v) < 1e-15 * k) break;
      if (v > 0.0) {
        lo = mu;
        f_lo = v;
        if (side == -1) f_hi *= 0.5;
        side = -1;
      } else {
        hi = mu;
        f_hi = v;
        if (side == 1) f_lo *= 0.5;
        side = 1;
      }
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
  }

  const Caustic caustic = caustic_from_mu(e, mu);
  const VertexState first = launch(ellipse, caustic, 0.0);
  const double J = std::sin(reflection_angle(first)) / ellipse.eval(first.psi).h;
  return PonceletFamily{ellipse, caustic, n, k, J};
}

BilliardPolygon trace_orbit(const SupportCurve& curve, const VertexState& start, int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "orbits need at least two vertices");
  BilliardPolygon poly;
  poly.n = n;
  poly.vertices.reserve(n);
  poly.psis.reserve(n);
  poly.deltas.reserve(n);
  poly.side_lines.reserve(n);
  VertexState state = start;
  for (int i = 0; i < n; ++i) {
    const Point2 m = curve_point(curve, state.psi);
    poly.vertices.push_back(m);
    poly.psis.push_back(wrap_two_pi(state.psi));
    poly.deltas.push_back(reflection_angle(state));
    poly.side_lines.push_back(OrientedLine::through(m, state.theta));
    state = reflect(curve, state);
  }
  double advance = 0.0;
  for (int i = 0; i < n; ++i) {
    poly.perimeter += distance(poly.vertices[(i + 1) % n], poly.vertices[i]);
    advance += forward_gap(poly.psis[i], poly.psis[(i + 1) % n]);
  }
  poly.winding = static_cast<int>(std::lround(advance / kTwoPi));
  poly.closure_residual =
      std::max(distance(curve_point(curve, state.psi), poly.vertices.front()),
               curve.scale() * std::abs(wrap_pi(state.theta - start.theta)));
  return poly;
}

namespace {

BilliardPolygon checked_orbit(const PonceletFamily& family, const VertexState& start,
                              double phase) {
  BilliardPolygon poly = trace_orbit(family.table, start, family.n);
  poly.phase = phase;
  if (!(poly.closure_residual <= 1e-7 * family.table.scale())) {
    std::ostringstream msg;
    msg << "orbit at phase " << phase << " misses closure by " << poly.closure_residual;
    throw Error(ErrorKind::ClosureFailure, msg.str());
  }
  return poly;
}

}  // namespace

BilliardPolygon build_orbit(const PonceletFamily& family, double phase) {
  return checked_orbit(family, launch(family.table, family.caustic, phase), wrap_two_pi(phase));
}

BilliardPolygon build_orbit_at_vertex(const PonceletFamily& family, double psi1) {
  const Point2 m = curve_point(family.table, psi1);
  // Oriented caustic tangents through m are the zeros of m·n(φ) − h_c(φ); the
  // one arriving at m has φ in (ψ1 − π, ψ1), where the function runs from − to +.
  auto g = [&](double phi) { return dot(m, unit(phi)) - family.caustic.support(phi); };
  const double phi_in = detail::bisect(g, psi1 - kPi, psi1, /*lo_negative=*/true);
  const VertexState start{wrap_two_pi(psi1), wrap_two_pi(2.0 * psi1 + kPi - (phi_in + 0.5 * kPi))};
  return checked_orbit(family, start, family.caustic.phase_of_normal(phi_in));
}

BilliardPolygon axis_orbit(const SupportCurve& ellipse, Axis axis) {
  require_ellipse(ellipse);
  const VertexState start =
      axis == Axis::Major ? VertexState{0.0, kPi} : VertexState{0.5 * kPi, 1.5 * kPi};
  return trace_orbit(ellipse, start, 2);
}

std::vector<BilliardPolygon> family_sweep(const PonceletFamily& family, int samples,
                                          Execution execution, Sampling sampling) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "a sweep needs at least 2 samples");
  std::vector<BilliardPolygon> out(samples);
  auto phase = [&](int j) {
    const double x = kTwoPi * j / samples;
    return sampling == Sampling::TangencyPhase ? x : family.caustic.phase_of_invariant_angle(x);
  };
  if (execution == Execution::Sequential) {
    for (int j = 0; j < samples; ++j) out[j] = build_orbit(family, phase(j));
    return out;
  }
  const int workers =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, samples);
  std::vector<std::future<void>> tasks;
  tasks.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (int j = w; j < samples; j += workers) out[j] = build_orbit(family, phase(j));
    }));
  }
  for (auto& t : tasks) t.get();
  return out;
}

JoachimsthalStats joachimsthal(const SupportCurve& ellipse, const BilliardPolygon& polygon) {
  require_ellipse(ellipse);
  std::vector<double> values(polygon.n);
  for (int i = 0; i < polygon.n; ++i) {
    values[i] = std::sin(polygon.deltas[i]) / ellipse.eval(polygon.psis[i]).h;
  }
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / polygon.n;
  double dev = 0.0;
  for (double v : values) dev = std::max(dev, std::abs(v - mean));
  return {mean, dev};
}

BilliardPolygon polygon_from_normals(const SupportCurve& curve, const std::vector<double>& psis) {
  const int n = static_cast<int>(psis.size());
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "polygons need at least two vertices");
  const Point2 m0 = curve_point(curve, psis[0]);
  const Point2 m1 = curve_point(curve, psis[1]);
  const double theta = std::atan2(m1.x2 - m0.x2, m1.x1 - m0.x1);
  BilliardPolygon poly = trace_orbit(curve, {wrap_two_pi(psis[0]), wrap_two_pi(theta)}, n);
  // Report the requested vertices rather than the traced ones; the trace only
  // supplies the closure residual.
  poly.vertices.clear();
  poly.side_lines.clear();
  double advance = 0.0;
  for (int i = 0; i < n; ++i) poly.vertices.push_back(curve_point(curve, psis[i]));
  poly.perimeter = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point2 a = poly.vertices[i];
    const Point2 b = poly.vertices[(i + 1) % n];
    const double dir = std::atan2(b.x2 - a.x2, b.x1 - a.x1);
    poly.psis[i] = wrap_two_pi(psis[i]);
    poly.deltas[i] = reflection_angle({poly.psis[i], dir});
    poly.side_lines.push_back(OrientedLine::through(a, dir));
    poly.perimeter += distance(b, a);
    advance += forward_gap(psis[i], psis[(i + 1) % n]);
  }
  poly.winding = static_cast<int>(std::lround(advance / kTwoPi));
  return poly;
}

double reflection_law_residual(const BilliardPolygon& polygon) {
  double worst = 0.0;
  for (int i = 0; i < polygon.n; ++i) {
    const auto& incoming = polygon.side_lines[(i + polygon.n - 1) % polygon.n];
    worst = std::max(worst,
                     std::abs(wrap_pi(polygon.psis[i] - polygon.deltas[i] - incoming.phi())));
  }
  return worst;
}

}  // namespace billiards
