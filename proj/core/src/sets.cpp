#include "monosplit/sets.hpp"

#include "monosplit/errors.hpp"

#include <cmath>
#include <limits>

namespace monosplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Coefficient t with u = t * a, or NaN when u is not parallel to a.
double parallel_coefficient(const Vector& u, const Vector& a) {
  const double t = u.dot(a) / a.squaredNorm();
  if ((u - t * a).norm() > 1e-9 * (1.0 + u.norm())) return std::numeric_limits<double>::quiet_NaN();
  return t;
}

}  // namespace

ConvexSet ConvexSet::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw ParameterError("box bounds must be nonempty and of equal length");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (!(lo(i) <= hi(i))) throw ParameterError("box needs lo <= hi componentwise");
  return ConvexSet(Kind::Box, std::move(lo), std::move(hi), 0.0);
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw ParameterError("ball center must be nonempty");
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw ParameterError("ball radius must be finite and nonnegative");
  return ConvexSet(Kind::Ball, std::move(center), Vector(), radius);
}

ConvexSet ConvexSet::halfspace(Vector a, double beta) {
  if (a.size() == 0 || a.norm() == 0.0) throw ParameterError("halfspace normal must be nonzero");
  return ConvexSet(Kind::Halfspace, std::move(a), Vector(), beta);
}

ConvexSet ConvexSet::hyperplane(Vector u, double rho) {
  if (u.size() == 0 || u.norm() == 0.0) throw ParameterError("hyperplane normal must be nonzero");
  return ConvexSet(Kind::Hyperplane, std::move(u), Vector(), rho);
}

ConvexSet ConvexSet::point(Vector c) {
  if (c.size() == 0) throw ParameterError("point must be nonempty");
  return ConvexSet(Kind::Point, std::move(c), Vector(), 0.0);
}

std::string ConvexSet::name() const {
  switch (kind_) {
    case Kind::Box: return "box";
    case Kind::Ball: return "ball";
    case Kind::Halfspace: return "halfspace";
    case Kind::Hyperplane: return "hyperplane";
    case Kind::Point: return "point";
  }
  return "set";
}

Vector ConvexSet::project(const Vector& x) const {
  if (x.size() != a_.size())
    throw SignatureError(name() + " projection: expected length " + std::to_string(a_.size()) +
                         ", got " + std::to_string(x.size()));
  switch (kind_) {
    case Kind::Box: return x.cwiseMax(a_).cwiseMin(b_);
    case Kind::Ball: {
      const Vector d = x - a_;
      const double n = d.norm();
      if (n <= s_) return x;
      return a_ + (s_ / n) * d;
    }
    case Kind::Halfspace: {
      const double excess = a_.dot(x) - s_;
      if (excess <= 0.0) return x;
      return x - (excess / a_.squaredNorm()) * a_;
    }
    case Kind::Hyperplane: return x - ((a_.dot(x) - s_) / a_.squaredNorm()) * a_;
    case Kind::Point: return a_;
  }
  return x;
}

bool ConvexSet::contains(const Vector& x, double tol) const {
  if (x.size() != a_.size()) return false;
  const double t = tol * (1.0 + x.norm());
  switch (kind_) {
    case Kind::Box:
      return ((x - a_).array() >= -t).all() && ((b_ - x).array() >= -t).all();
    case Kind::Ball: return (x - a_).norm() <= s_ + t;
    case Kind::Halfspace: return a_.dot(x) - s_ <= t * a_.norm();
    case Kind::Hyperplane: return std::abs(a_.dot(x) - s_) <= t * a_.norm();
    case Kind::Point: return (x - a_).norm() <= t;
  }
  return false;
}

double ConvexSet::support(const Vector& u) const {
  if (u.size() != a_.size()) throw SignatureError(name() + " support: dimension mismatch");
  switch (kind_) {
    case Kind::Box: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u(i) > 0.0) s += u(i) * b_(i);
        else if (u(i) < 0.0) s += u(i) * a_(i);
      }
      return s;
    }
    case Kind::Ball: return a_.dot(u) + s_ * u.norm();
    case Kind::Halfspace: {
      const double t = parallel_coefficient(u, a_);
      if (std::isnan(t) || t < -1e-9 * (1.0 + u.norm())) return kInf;
      return std::max(t, 0.0) * s_;
    }
    case Kind::Hyperplane: {
      const double t = parallel_coefficient(u, a_);
      if (std::isnan(t)) return kInf;
      return t * s_;
    }
    case Kind::Point: return a_.dot(u);
  }
  return kInf;
}

}  // namespace monosplit
