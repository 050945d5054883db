#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/poncelet.hpp"

namespace billiards {

namespace {

// Normal angles are kept lifted: ψ_0 < ψ_1 < … < ψ_{n−1} < ψ_0 + 2πk.
class PerimeterFunctional {
 public:
  PerimeterFunctional(const SupportCurve& curve, int k) : curve_(curve), k_(k) {}

  double value(const Eigen::VectorXd& psi) const {
    const auto pts = points(psi);
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      total += distance(pts[(i + 1) % pts.size()], pts[i]);
    }
    return total;
  }

  /// ∂P/∂ψ_i = γ'(ψ_i)·(u_{i−1} − u_i), u_i the unit vector along side i.
  Eigen::VectorXd gradient(const Eigen::VectorXd& psi) const {
    const auto n = psi.size();
    const auto pts = points(psi);
    std::vector<Point2> sides(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Point2 d = pts[(i + 1) % n] - pts[i];
      sides[i] = (1.0 / norm(d)) * d;
    }
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      g[i] = dot(curve_tangent(curve_, psi[i]), sides[(i + n - 1) % n] - sides[i]);
    }
    return g;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& psi) const {
    const auto n = psi.size();
    constexpr double step = 1e-6;
    Eigen::MatrixXd H(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXd plus = psi;
      Eigen::VectorXd minus = psi;
      plus[j] += step;
      minus[j] -= step;
      H.col(j) = (gradient(plus) - gradient(minus)) / (2.0 * step);
    }
    return 0.5 * (H + H.transpose());
  }

  bool ordered(const Eigen::VectorXd& psi) const {
    constexpr double margin = 1e-8;
    const auto n = psi.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double next = i + 1 < n ? psi[i + 1] : psi[0] + kTwoPi * k_;
      const double gap = next - psi[i];
      if (!(gap > margin && gap < kTwoPi - margin)) return false;
    }
    return true;
  }

 private:
  std::vector<Point2> points(const Eigen::VectorXd& psi) const {
    std::vector<Point2> pts(psi.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) pts[i] = curve_point(curve_, psi[i]);
    return pts;
  }

  const SupportCurve& curve_;
  int k_;
};

/// Newton step restricted to the negative-curvature eigenspace of the Hessian.
/// Null directions (rotations on a circle, the Poncelet family on an ellipse)
/// are left untouched.
Eigen::VectorXd newton_step(const Eigen::MatrixXd& H, const Eigen::VectorXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  const auto& values = eig.eigenvalues();
  const auto& vectors = eig.eigenvectors();
  const double cutoff = 1e-9 * values.cwiseAbs().maxCoeff();
  Eigen::VectorXd step = Eigen::VectorXd::Zero(g.size());
  for (Eigen::Index e = 0; e < values.size(); ++e) {
    if (values[e] < -cutoff) step += vectors.col(e) * (vectors.col(e).dot(g) / -values[e]);
  }
  return step;
}

}  // namespace

BilliardPolygon birkhoff_orbit(const SupportCurve& curve, int n, int k, std::uint64_t seed) {
  if (n < 2 || k < 1 || 2 * k > n || std::gcd(n, k) != 1) {
    std::ostringstream msg;
    msg << "Birkhoff orbit (n, k) = (" << n << ", " << k << ") needs gcd 1 and k <= n/2";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  const PerimeterFunctional perimeter(curve, k);
  const double tol = 1e-10 * curve.diameter();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset_dist(0.0, kTwoPi);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  const double spacing = kTwoPi * k / n;
  Eigen::VectorXd psi(n);
  const double offset = offset_dist(rng);
  for (int i = 0; i < n; ++i) psi[i] = offset + spacing * (i + jitter(rng));
  if (!perimeter.ordered(psi)) {
    throw Error(ErrorKind::OrderViolation, "initial polygon violates the cyclic order");
  }

  double value = perimeter.value(psi);
  Eigen::VectorXd grad = perimeter.gradient(psi);
  double ascent_rate = 1.0 / curve.diameter();
  constexpr int kMaxIterations = 100000;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    const double gnorm = grad.cwiseAbs().maxCoeff();
    if (gnorm < 1e-3 * tol) break;

    const Eigen::VectorXd trial = psi + newton_step(perimeter.hessian(psi), grad);
    if (perimeter.ordered(trial)) {
      const double trial_value = perimeter.value(trial);
      const Eigen::VectorXd trial_grad = perimeter.gradient(trial);
      if (trial_value >= value - 1e-14 * curve.diameter() * n &&
          trial_grad.cwiseAbs().maxCoeff() < gnorm) {
        psi = trial;
        value = trial_value;
        grad = trial_grad;
        continue;
      }
    }

    // Backtracking gradient ascent.
    bool moved = false;
    bool order_blocked = true;
    double rate = ascent_rate;
    for (int halving = 0; halving < 60; ++halving, rate *= 0.5) {
      const Eigen::VectorXd next = psi + rate * grad;
      if (!perimeter.ordered(next)) continue;
      order_blocked = false;
      const double next_value = perimeter.value(next);
      if (next_value >= value + 1e-4 * rate * grad.squaredNorm()) {
        psi = next;
        value = next_value;
        grad = perimeter.gradient(psi);
        ascent_rate = 2.0 * rate;
        moved = true;
        break;
      }
    }
    if (!moved) {
      if (order_blocked) {
        throw Error(ErrorKind::OrderViolation, "no ascent step keeps the vertices ordered");
      }
      break;  // stagnated at roundoff level
    }
  }

  const double gnorm = grad.cwiseAbs().maxCoeff();
  if (!(gnorm < tol)) {
    std::ostringstream msg;
    msg << "perimeter ascent stopped after " << iter << " iterations with |grad| = " << gnorm;
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  std::vector<double> normals(psi.data(), psi.data() + n);
  BilliardPolygon poly = polygon_from_normals(curve, normals);
  const double law = reflection_law_residual(poly);
  if (!(law < 1e-8)) {
    std::ostringstream msg;
    msg << "reflection law residual " << law << " at convergence";
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  return poly;
}

}  // namespace billiards
