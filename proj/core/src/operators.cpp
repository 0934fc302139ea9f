#include "monosplit/operators.hpp"

#include "monosplit/errors.hpp"

#include <cmath>
#include <string>

namespace monosplit {

namespace {

void require_dim(const Vector& x, int dim, const std::string& label) {
  if (x.size() != dim)
    throw SignatureError(label + ": expected vector of length " + std::to_string(dim) + ", got " +
                         std::to_string(x.size()));
}

}  // namespace

void require_positive_step(double gamma, const char* where) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ParameterError(std::string(where) + ": step gamma must be positive, got " +
                         std::to_string(gamma));
}

MaximalMonotoneOp::MaximalMonotoneOp(std::string label, int dim, Resolvent resolvent,
                                     bool uniformly_monotone)
    : label_(std::move(label)),
      dim_(dim),
      resolvent_(std::move(resolvent)),
      uniformly_monotone_(uniformly_monotone) {
  if (dim_ < 1) throw SignatureError(label_ + ": dimension must be positive");
}

Vector MaximalMonotoneOp::resolvent(double gamma, const Vector& x) const {
  require_positive_step(gamma, "resolvent");
  require_dim(x, dim_, label_);
  return resolvent_(gamma, x);
}

LipschitzOp::LipschitzOp(std::string label, int dim, Map map, double lipschitz)
    : label_(std::move(label)), dim_(dim), map_(std::move(map)), lipschitz_(lipschitz) {
  if (dim_ < 1) throw SignatureError(label_ + ": dimension must be positive");
  if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_))
    throw ParameterError(label_ + ": Lipschitz constant must be finite and nonnegative");
}

Vector LipschitzOp::operator()(const Vector& x) const {
  require_dim(x, dim_, label_);
  if (zero_tag_) return Vector::Zero(dim_);
  return map_(x);
}

LipschitzOp LipschitzOp::zero(int dim) {
  LipschitzOp op("zero", dim, [dim](const Vector&) -> Vector { return Vector::Zero(dim); }, 0.0);
  op.zero_tag_ = true;
  return op;
}

Vector resolvent(const MaximalMonotoneOp& A, double gamma, const Vector& x) {
  return A.resolvent(gamma, x);
}

Vector prox(const ConvexFn& f, double gamma, const Vector& x) {
  require_positive_step(gamma, "prox");
  require_dim(x, f.dim, f.label);
  return f.prox_map(gamma, x);
}

Vector conjugate_prox(const ConvexFn& f, double gamma, const Vector& x) {
  require_positive_step(gamma, "conjugate_prox");
  return x - gamma * prox(f, 1.0 / gamma, x / gamma);
}

Vector shifted_inverse_resolvent(const MaximalMonotoneOp& A, const Vector& r, double gamma,
                                 const Vector& x) {
  require_positive_step(gamma, "shifted_inverse_resolvent");
  require_dim(r, A.dim(), A.label() + " shift");
  return x - gamma * (r + A.resolvent(1.0 / gamma, x / gamma - r));
}

Vector yosida(const MaximalMonotoneOp& B, double gamma, const Vector& x) {
  require_positive_step(gamma, "yosida");
  return (x - B.resolvent(gamma, x)) / gamma;
}

MaximalMonotoneOp subdifferential(const ConvexFn& f) {
  auto prox_map = f.prox_map;
  return MaximalMonotoneOp("subdiff(" + f.label + ")", f.dim, std::move(prox_map),
                           f.uniformly_convex);
}

LipschitzOp yosida_op(const MaximalMonotoneOp& B, double gamma) {
  require_positive_step(gamma, "yosida_op");
  return LipschitzOp("yosida(" + B.label() + ")", B.dim(),
                     [B, gamma](const Vector& x) -> Vector { return yosida(B, gamma, x); },
                     1.0 / gamma);
}

ConvexFn conjugate(const ConvexFn& f) {
  ConvexFn g;
  g.label = "conj(" + f.label + ")";
  g.dim = f.dim;
  g.prox_map = [pf = f.prox_map](double gamma, const Vector& x) -> Vector {
    return x - gamma * pf(1.0 / gamma, x / gamma);
  };
  g.eval = f.conj_eval;
  g.conj_eval = f.eval;
  g.grad = f.conj_grad;
  g.conj_grad = f.grad;
  g.real_valued = false;
  g.uniformly_convex = false;
  switch (f.shape) {
    case ConvexFn::Shape::Zero:
      g.shape = ConvexFn::Shape::ZeroIndicator;
      break;
    case ConvexFn::Shape::ZeroIndicator:
      g.shape = ConvexFn::Shape::Zero;
      g.real_valued = true;
      break;
    case ConvexFn::Shape::SquaredNorm:
      g.shape = ConvexFn::Shape::SquaredNorm;
      g.weight = 1.0 / (4.0 * f.weight);
      g.real_valued = true;
      g.uniformly_convex = true;
      break;
    case ConvexFn::Shape::General: break;
  }
  return g;
}

}  // namespace monosplit
