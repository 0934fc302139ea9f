#pragma once

#include "monosplit/block.hpp"

#include <string>

namespace monosplit {

/// Closed convex sets with closed-form projections.
class ConvexSet {
 public:
  enum class Kind { Box, Ball, Halfspace, Hyperplane, Point };

  /// {x : lo <= x <= hi}; entries may be infinite.
  static ConvexSet box(Vector lo, Vector hi);
  static ConvexSet ball(Vector center, double radius);
  /// {x : <a, x> <= beta}
  static ConvexSet halfspace(Vector a, double beta);
  /// {x : <u, x> = rho}
  static ConvexSet hyperplane(Vector u, double rho);
  static ConvexSet point(Vector c);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return static_cast<int>(a_.size()); }
  std::string name() const;

  Vector project(const Vector& x) const;
  double distance(const Vector& x) const { return (x - project(x)).norm(); }
  /// Membership up to an absolute violation of tol * (1 + ||x||).
  bool contains(const Vector& x, double tol = 1e-9) const;
  /// sigma_C(u) = sup_{c in C} <c, u>, possibly +infinity.
  double support(const Vector& u) const;

  // Raw parameters: box (lo, hi), ball (center, radius), halfspace (a, beta),
  // hyperplane (u, rho), point (c).
  const Vector& first() const noexcept { return a_; }
  const Vector& second() const noexcept { return b_; }
  double scalar() const noexcept { return s_; }

 private:
  ConvexSet(Kind kind, Vector a, Vector b, double s)
      : kind_(kind), a_(std::move(a)), b_(std::move(b)), s_(s) {}

  Kind kind_;
  Vector a_;
  Vector b_;
  double s_ = 0.0;
};

}  // namespace monosplit
