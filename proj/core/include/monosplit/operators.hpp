#pragma once

// Operators exposed through resolvents, single-valued Lipschitz operators and
// convex functions exposed through proximity operators, together with the
// resolvent identities the splitting algorithms are built from.

#include "monosplit/block.hpp"

#include <functional>
#include <optional>
#include <string>

namespace monosplit {

/// Set-valued maximally monotone operator on R^dim, known only through
/// gamma -> J_{gamma A} = (Id + gamma A)^{-1}.
class MaximalMonotoneOp {
 public:
  using Resolvent = std::function<Vector(double gamma, const Vector& x)>;

  MaximalMonotoneOp(std::string label, int dim, Resolvent resolvent,
                    bool uniformly_monotone = false);

  const std::string& label() const noexcept { return label_; }
  int dim() const noexcept { return dim_; }
  bool uniformly_monotone() const noexcept { return uniformly_monotone_; }

  /// J_{gamma A} x. Throws ParameterError for gamma <= 0.
  Vector resolvent(double gamma, const Vector& x) const;

 private:
  std::string label_;
  int dim_;
  Resolvent resolvent_;
  bool uniformly_monotone_;
};

/// Single-valued monotone operator with a declared Lipschitz constant.
class LipschitzOp {
 public:
  using Map = std::function<Vector(const Vector& x)>;

  LipschitzOp(std::string label, int dim, Map map, double lipschitz);

  const std::string& label() const noexcept { return label_; }
  int dim() const noexcept { return dim_; }
  double lipschitz() const noexcept { return lipschitz_; }
  /// True for the identically-zero map (lets solvers skip evaluations).
  bool is_zero() const noexcept { return zero_tag_; }

  Vector operator()(const Vector& x) const;

  static LipschitzOp zero(int dim);

 private:
  std::string label_;
  int dim_;
  Map map_;
  double lipschitz_;
  bool zero_tag_ = false;
};

/// Proper lower semicontinuous convex function on R^dim.
struct ConvexFn {
  using Prox = std::function<Vector(double gamma, const Vector& x)>;
  using Eval = std::function<double(const Vector& x)>;

  std::string label;
  int dim = 0;
  /// prox_{gamma f}
  Prox prox_map;
  /// f itself; may return +infinity.
  std::optional<Eval> eval;
  /// f^*; may return +infinity.
  std::optional<Eval> conj_eval;
  /// grad f, when f is differentiable with a Lipschitz gradient.
  std::optional<LipschitzOp> grad;
  /// grad f^*, when f is strongly convex.
  std::optional<LipschitzOp> conj_grad;
  /// dom f is the whole space.
  bool real_valued = false;
  bool uniformly_convex = false;

  /// Structure that objective evaluators exploit for closed-form infimal convolutions.
  enum class Shape { General, Zero, ZeroIndicator, SquaredNorm };
  Shape shape = Shape::General;
  /// omega of omega ||.||^2 when shape == SquaredNorm.
  double weight = 0.0;
};

Vector resolvent(const MaximalMonotoneOp& A, double gamma, const Vector& x);

/// argmin_y f(y) + ||x - y||^2 / (2 gamma)
Vector prox(const ConvexFn& f, double gamma, const Vector& x);

/// prox_{gamma f^*} x = x - gamma prox_{f / gamma}(x / gamma)  (Moreau decomposition)
Vector conjugate_prox(const ConvexFn& f, double gamma, const Vector& x);

/// J_{gamma (r + A^{-1})} x = x - gamma (r + J_{A / gamma}(x / gamma - r))
Vector shifted_inverse_resolvent(const MaximalMonotoneOp& A, const Vector& r, double gamma,
                                 const Vector& x);

/// Yosida approximation (x - J_{gamma B} x) / gamma.
Vector yosida(const MaximalMonotoneOp& B, double gamma, const Vector& x);

/// Subdifferential of f as a maximally monotone operator (J_{gamma df} = prox_{gamma f}).
MaximalMonotoneOp subdifferential(const ConvexFn& f);

/// Yosida approximation of B as a (1/gamma)-Lipschitz operator.
LipschitzOp yosida_op(const MaximalMonotoneOp& B, double gamma);

/// f^*, with prox obtained from the Moreau decomposition.
ConvexFn conjugate(const ConvexFn& f);

/// Throws ParameterError unless gamma is finite and positive.
void require_positive_step(double gamma, const char* where);

}  // namespace monosplit
