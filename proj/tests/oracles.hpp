#pragma once

// Reference computations that share no code with the solvers.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Solves x in p + gamma A(p) for a scalar monotone graph given by any
/// nondecreasing selection a(p) (values outside dom A may be +-infinity).
/// Bisection to 1e-12 with the bracket doubled until it straddles the root.
inline double bisect_resolvent(const std::function<double(double)>& a, double gamma, double x) {
  auto phi = [&](double p) { return p + gamma * a(p) - x; };
  double lo = x - 1.0, hi = x + 1.0, width = 1.0;
  while (phi(lo) > 0.0) lo = x - (width *= 2.0);
  width = 1.0;
  while (phi(hi) < 0.0) hi = x + (width *= 2.0);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Root of a nondecreasing scalar function that changes sign, by bisection to 1e-12.
inline double bisect_root(const std::function<double(double)>& g) {
  double lo = -1.0, hi = 1.0;
  while (g(lo) > 0.0) lo *= 2.0;
  while (g(hi) < 0.0) hi *= 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Selection of N_[lo, hi]: 0 inside, -inf left, +inf right.
inline std::function<double(double)> interval_normal_cone(double lo, double hi) {
  const double inf = std::numeric_limits<double>::infinity();
  return [=](double p) { return p < lo ? -inf : p > hi ? inf : 0.0; };
}

/// Least-squares point of the hyperplanes <u_k, x> = rho_k (rows of U).
inline Vec normal_equations(const Mat& U, const Vec& rho) {
  return (U.transpose() * U).ldlt().solve(U.transpose() * rho);
}

/// Largest eigenvalue of M^T M.
inline double squared_spectral_norm(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(M.transpose() * M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// Fixed-step projected gradient.
inline Vec projected_gradient(const std::function<Vec(const Vec&)>& grad,
                              const std::function<Vec(const Vec&)>& project, Vec x, long steps,
                              double step) {
  for (long n = 0; n < steps; ++n) x = project(x - step * grad(x));
  return x;
}

/// Minimizes sum_k omega_k d^2(x, {<u_k, .> = rho_k}) over the box [lo, hi]
/// by projected gradient: 1e6 steps of size 1e-3 from the origin.
inline Vec box_hyperplane_relaxation(const Vec& lo, const Vec& hi, const Mat& U, const Vec& rho,
                                     const Vec& omega) {
  auto grad = [&](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    for (Eigen::Index k = 0; k < U.rows(); ++k) {
      const Vec u = U.row(k).transpose();
      g += 2.0 * omega(k) * ((u.dot(x) - rho(k)) / u.squaredNorm()) * u;
    }
    return g;
  };
  auto project = [&](const Vec& x) -> Vec { return x.cwiseMax(lo).cwiseMin(hi); };
  return projected_gradient(grad, project, Vec::Zero(lo.size()), 1000000, 1e-3);
}

/// argmin of (1/2)(x1 - x2)^2 over [a1, b1] x [a2, b2] for disjoint intervals
/// with b2 < a1: the facing endpoints.
inline std::pair<double, double> closest_interval_points(double a1, double b1, double a2, double b2) {
  if (b2 < a1) return {a1, b2};
  if (b1 < a2) return {b1, a2};
  const double m = std::max(a1, a2);
  return {m, m};
}

/// Coordinatewise soft threshold sign(b) max(|b| - w, 0).
inline Vec soft_threshold(const Vec& b, double w) {
  return (b.array().sign() * (b.array().abs() - w).max(0.0)).matrix();
}

}  // namespace oracle
