#include "monosplit/catalog.hpp"

#include "monosplit/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace monosplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_symmetric_eigenvalue(const Matrix& M) {
  const Matrix sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

void require_monotone_matrix(const Matrix& M, const Vector& b, const char* what) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw ParameterError(std::string(what) + ": M must be square and nonempty");
  if (b.size() != M.rows()) throw ParameterError(std::string(what) + ": b must match M");
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  if (min_symmetric_eigenvalue(M) < -1e-10 * scale)
    throw ParameterError(std::string(what) + ": M + M^T must be positive semidefinite");
}

}  // namespace

namespace catalog {

MaximalMonotoneOp zero_op(int dim) {
  return MaximalMonotoneOp("zero", dim, [](double, const Vector& x) -> Vector { return x; });
}

MaximalMonotoneOp scaled_identity(int dim, double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw ParameterError("scaled_identity: c must be finite and nonnegative");
  return MaximalMonotoneOp(
      "scaled_identity", dim,
      [c](double gamma, const Vector& x) -> Vector { return x / (1.0 + gamma * c); }, c > 0.0);
}

MaximalMonotoneOp affine(Matrix M, Vector b) {
  require_monotone_matrix(M, b, "affine");
  const int dim = static_cast<int>(M.rows());
  const bool strong = min_symmetric_eigenvalue(M) > 0.0;
  return MaximalMonotoneOp(
      "affine", dim,
      [M = std::move(M), b = std::move(b)](double gamma, const Vector& x) -> Vector {
        const Matrix system = Matrix::Identity(M.rows(), M.cols()) + gamma * M;
        return system.partialPivLu().solve(x - gamma * b);
      },
      strong);
}

MaximalMonotoneOp normal_cone(ConvexSet C) {
  const int dim = C.dim();
  std::string label = "normal_" + C.name();
  return MaximalMonotoneOp(std::move(label), dim,
                           [C = std::move(C)](double, const Vector& x) -> Vector {
                             return C.project(x);
                           });
}

LipschitzOp scaled_identity_map(int dim, double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw ParameterError("scaled_identity: c must be finite and nonnegative");
  if (c == 0.0) return LipschitzOp::zero(dim);
  return LipschitzOp("scaled_identity", dim, [c](const Vector& x) -> Vector { return c * x; }, c);
}

LipschitzOp affine_map(Matrix M, Vector b) {
  require_monotone_matrix(M, b, "affine");
  const int dim = static_cast<int>(M.rows());
  const double lip = LinearEntry::dense(M).spectral_norm();
  return LipschitzOp("affine", dim,
                     [M = std::move(M), b = std::move(b)](const Vector& x) -> Vector {
                       return M * x + b;
                     },
                     lip);
}

ConvexFn zero_fn(int dim) {
  ConvexFn f;
  f.label = "zero";
  f.dim = dim;
  f.prox_map = [](double, const Vector& x) -> Vector { return x; };
  f.eval = [](const Vector&) { return 0.0; };
  f.conj_eval = [](const Vector& u) { return u.norm() <= 1e-9 ? 0.0 : kInf; };
  f.grad = LipschitzOp::zero(dim);
  f.real_valued = true;
  f.shape = ConvexFn::Shape::Zero;
  return f;
}

ConvexFn indicator(ConvexSet C) {
  ConvexFn f;
  f.label = "indicator_" + C.name();
  f.dim = C.dim();
  f.prox_map = [C](double, const Vector& x) -> Vector { return C.project(x); };
  f.eval = [C](const Vector& x) { return C.contains(x) ? 0.0 : kInf; };
  f.conj_eval = [C](const Vector& u) { return C.support(u); };
  if (C.kind() == ConvexSet::Kind::Point) {
    const Vector c = C.first();
    f.conj_grad = c.isZero() ? LipschitzOp::zero(C.dim())
                             : LipschitzOp("const", C.dim(), [c](const Vector&) -> Vector { return c; }, 0.0);
    if (c.isZero()) f.shape = ConvexFn::Shape::ZeroIndicator;
  }
  f.real_valued = false;
  return f;
}

ConvexFn l1(int dim, double w) {
  if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("l1: weight must be nonnegative");
  ConvexFn f;
  f.label = "l1";
  f.dim = dim;
  f.prox_map = [w](double gamma, const Vector& x) -> Vector {
    const double t = gamma * w;
    return x.unaryExpr([t](double v) { return std::copysign(std::max(std::abs(v) - t, 0.0), v); });
  };
  f.eval = [w](const Vector& x) { return w * x.lpNorm<1>(); };
  f.conj_eval = [w](const Vector& u) {
    return u.lpNorm<Eigen::Infinity>() <= w + 1e-9 * (1.0 + w) ? 0.0 : kInf;
  };
  f.real_valued = true;
  return f;
}

ConvexFn sq_dist(Vector a) {
  ConvexFn f;
  f.label = "sq_dist";
  f.dim = static_cast<int>(a.size());
  f.prox_map = [a](double gamma, const Vector& x) -> Vector { return (x + gamma * a) / (1.0 + gamma); };
  f.eval = [a](const Vector& x) { return 0.5 * (x - a).squaredNorm(); };
  f.conj_eval = [a](const Vector& u) { return 0.5 * u.squaredNorm() + a.dot(u); };
  f.grad = LipschitzOp("grad_sq_dist", f.dim, [a](const Vector& x) -> Vector { return x - a; }, 1.0);
  f.conj_grad =
      LipschitzOp("grad_conj_sq_dist", f.dim, [a](const Vector& u) -> Vector { return u + a; }, 1.0);
  f.real_valued = true;
  f.uniformly_convex = true;
  return f;
}

ConvexFn sq_norm(int dim, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ParameterError("sq_norm: omega must be positive");
  ConvexFn f;
  f.label = "sq_norm";
  f.dim = dim;
  f.prox_map = [omega](double gamma, const Vector& x) -> Vector { return x / (1.0 + 2.0 * gamma * omega); };
  f.eval = [omega](const Vector& x) { return omega * x.squaredNorm(); };
  f.conj_eval = [omega](const Vector& u) { return u.squaredNorm() / (4.0 * omega); };
  f.grad = LipschitzOp("grad_sq_norm", dim,
                       [omega](const Vector& x) -> Vector { return 2.0 * omega * x; }, 2.0 * omega);
  f.conj_grad = LipschitzOp("grad_conj_sq_norm", dim,
                            [omega](const Vector& u) -> Vector { return u / (2.0 * omega); },
                            1.0 / (2.0 * omega));
  f.real_valued = true;
  f.uniformly_convex = true;
  f.shape = ConvexFn::Shape::SquaredNorm;
  f.weight = omega;
  return f;
}

ConvexFn norm2(int dim, double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw ParameterError("norm2: omega must be nonnegative");
  ConvexFn f;
  f.label = "norm2";
  f.dim = dim;
  f.prox_map = [omega](double gamma, const Vector& x) -> Vector {
    const double n = x.norm();
    const double t = gamma * omega;
    if (n <= t) return Vector::Zero(x.size());
    return (1.0 - t / n) * x;
  };
  f.eval = [omega](const Vector& x) { return omega * x.norm(); };
  f.conj_eval = [omega](const Vector& u) { return u.norm() <= omega + 1e-9 * (1.0 + omega) ? 0.0 : kInf; };
  f.real_valued = true;
  return f;
}

ConvexFn support(ConvexSet C) {
  ConvexFn f = conjugate(indicator(C));
  f.label = "support_" + C.name();
  switch (C.kind()) {
    case ConvexSet::Kind::Ball:
    case ConvexSet::Kind::Point: f.real_valued = true; break;
    case ConvexSet::Kind::Box: f.real_valued = C.first().allFinite() && C.second().allFinite(); break;
    default: f.real_valued = false;
  }
  return f;
}

}  // namespace catalog

namespace {

struct ParamReader {
  const CatalogSpec& spec;
  int dim;
  std::set<std::string> allowed;

  void check_keys() const {
    for (const auto& [key, _] : spec.params)
      if (!allowed.count(key))
        throw ParameterError("catalog id '" + spec.id + "' has no parameter '" + key + "'");
  }

  bool has(const std::string& key) const { return spec.params.count(key) > 0; }

  Vector vec(const std::string& key, std::optional<double> fill = std::nullopt) const {
    auto it = spec.params.find(key);
    if (it == spec.params.end()) {
      if (fill) return Vector::Constant(dim, *fill);
      throw ParameterError("catalog id '" + spec.id + "' requires parameter '" + key + "'");
    }
    const auto& v = it->second;
    if (v.size() == 1) return Vector::Constant(dim, v[0]);
    if (static_cast<int>(v.size()) != dim)
      throw ParameterError("parameter '" + key + "' of '" + spec.id + "' has " +
                           std::to_string(v.size()) + " values, expected 1 or " + std::to_string(dim));
    return Eigen::Map<const Vector>(v.data(), dim);
  }

  double scalar(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    auto it = spec.params.find(key);
    if (it == spec.params.end()) {
      if (fallback) return *fallback;
      throw ParameterError("catalog id '" + spec.id + "' requires parameter '" + key + "'");
    }
    if (it->second.size() != 1)
      throw ParameterError("parameter '" + key + "' of '" + spec.id + "' must be a scalar");
    return it->second[0];
  }

  Matrix matrix(const std::string& key) const {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
      throw ParameterError("catalog id '" + spec.id + "' requires parameter '" + key + "'");
    const auto& v = it->second;
    if (static_cast<int>(v.size()) != dim * dim)
      throw ParameterError("matrix parameter '" + key + "' of '" + spec.id + "' needs " +
                           std::to_string(dim * dim) + " values");
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        v.data(), dim, dim);
  }
};

ParamReader reader(const CatalogSpec& spec, int dim, std::set<std::string> allowed) {
  if (dim < 1) throw SignatureError("catalog entry '" + spec.id + "' needs a positive dimension");
  ParamReader r{spec, dim, std::move(allowed)};
  r.check_keys();
  return r;
}

[[noreturn]] void unknown_id(const std::string& id, const char* slot) {
  throw ParameterError("unknown catalog id '" + id + "' for " + slot + " slot");
}

}  // namespace

ConvexSet make_set(const CatalogSpec& spec, int dim) {
  const auto& id = spec.id;
  if (id == "indicator_box" || id == "normal_box" || id == "support_box") {
    auto r = reader(spec, dim, {"lo", "hi"});
    return ConvexSet::box(r.vec("lo"), r.vec("hi"));
  }
  if (id == "indicator_ball" || id == "normal_ball" || id == "support_ball") {
    auto r = reader(spec, dim, {"center", "radius"});
    return ConvexSet::ball(r.vec("center", 0.0), r.scalar("radius"));
  }
  if (id == "indicator_halfspace" || id == "normal_halfspace") {
    auto r = reader(spec, dim, {"a", "beta"});
    return ConvexSet::halfspace(r.vec("a"), r.scalar("beta"));
  }
  if (id == "indicator_hyperplane" || id == "normal_hyperplane") {
    auto r = reader(spec, dim, {"u", "rho"});
    return ConvexSet::hyperplane(r.vec("u"), r.scalar("rho"));
  }
  if (id == "indicator_point" || id == "normal_point") {
    auto r = reader(spec, dim, {"c"});
    return ConvexSet::point(r.vec("c", 0.0));
  }
  unknown_id(id, "set");
}

MaximalMonotoneOp make_operator(const CatalogSpec& spec, int dim) {
  const auto& id = spec.id;
  if (id == "zero") {
    reader(spec, dim, {});
    return catalog::zero_op(dim);
  }
  if (id == "scaled_identity") {
    auto r = reader(spec, dim, {"c"});
    return catalog::scaled_identity(dim, r.scalar("c", 1.0));
  }
  if (id == "affine") {
    auto r = reader(spec, dim, {"M", "b"});
    return catalog::affine(r.matrix("M"), r.vec("b", 0.0));
  }
  if (id.rfind("normal_", 0) == 0) return catalog::normal_cone(make_set(spec, dim));
  if (catalog_has(id, SlotKind::Function)) return subdifferential(make_function(spec, dim));
  unknown_id(id, "operator");
}

LipschitzOp make_lipschitz(const CatalogSpec& spec, int dim) {
  const auto& id = spec.id;
  if (id == "zero") {
    reader(spec, dim, {});
    return LipschitzOp::zero(dim);
  }
  if (id == "scaled_identity") {
    auto r = reader(spec, dim, {"c"});
    return catalog::scaled_identity_map(dim, r.scalar("c", 1.0));
  }
  if (id == "affine") {
    auto r = reader(spec, dim, {"M", "b"});
    return catalog::affine_map(r.matrix("M"), r.vec("b", 0.0));
  }
  unknown_id(id, "Lipschitz operator");
}

ConvexFn make_function(const CatalogSpec& spec, int dim) {
  const auto& id = spec.id;
  if (id == "zero") {
    reader(spec, dim, {});
    return catalog::zero_fn(dim);
  }
  if (id.rfind("indicator_", 0) == 0) return catalog::indicator(make_set(spec, dim));
  if (id.rfind("support_", 0) == 0) return catalog::support(make_set(spec, dim));
  if (id == "l1") {
    auto r = reader(spec, dim, {"w"});
    return catalog::l1(dim, r.scalar("w", 1.0));
  }
  if (id == "sq_dist") {
    auto r = reader(spec, dim, {"a"});
    return catalog::sq_dist(r.vec("a", 0.0));
  }
  if (id == "sq_norm") {
    auto r = reader(spec, dim, {"omega"});
    return catalog::sq_norm(dim, r.scalar("omega", 1.0));
  }
  if (id == "norm2") {
    auto r = reader(spec, dim, {"omega"});
    return catalog::norm2(dim, r.scalar("omega", 1.0));
  }
  unknown_id(id, "function");
}

const std::vector<CatalogEntryInfo>& catalog_entries() {
  static const std::vector<CatalogEntryInfo> entries = {
      {"zero", SlotKind::Monotone, "", "zero operator (resolvent = identity)"},
      {"scaled_identity", SlotKind::Monotone, "c=1", "x -> c x, c >= 0"},
      {"affine", SlotKind::Monotone, "M=<row-major> b=0", "x -> M x + b, M + M^T psd"},
      {"normal_box", SlotKind::Monotone, "lo= hi=", "normal cone of a box"},
      {"normal_ball", SlotKind::Monotone, "center=0 radius=", "normal cone of a Euclidean ball"},
      {"normal_halfspace", SlotKind::Monotone, "a= beta=", "normal cone of {<a,x> <= beta}"},
      {"normal_hyperplane", SlotKind::Monotone, "u= rho=", "normal cone of {<u,x> = rho}"},
      {"normal_point", SlotKind::Monotone, "c=0", "normal cone of {c}"},
      {"zero", SlotKind::Lipschitz, "", "zero map"},
      {"scaled_identity", SlotKind::Lipschitz, "c=1", "x -> c x, Lipschitz constant c"},
      {"affine", SlotKind::Lipschitz, "M=<row-major> b=0", "x -> M x + b, constant ||M||"},
      {"zero", SlotKind::Function, "", "f = 0"},
      {"indicator_box", SlotKind::Function, "lo= hi=", "indicator of a box"},
      {"indicator_ball", SlotKind::Function, "center=0 radius=", "indicator of a ball"},
      {"indicator_halfspace", SlotKind::Function, "a= beta=", "indicator of {<a,x> <= beta}"},
      {"indicator_hyperplane", SlotKind::Function, "u= rho=", "indicator of {<u,x> = rho}"},
      {"indicator_point", SlotKind::Function, "c=0", "indicator of {c}"},
      {"l1", SlotKind::Function, "w=1", "w ||x||_1"},
      {"sq_dist", SlotKind::Function, "a=0", "(1/2) ||x - a||^2"},
      {"sq_norm", SlotKind::Function, "omega=1", "omega ||x||^2"},
      {"norm2", SlotKind::Function, "omega=1", "omega ||x||"},
      {"support_box", SlotKind::Function, "lo= hi=", "support function of a box"},
      {"support_ball", SlotKind::Function, "center=0 radius=", "support function of a ball"},
  };
  return entries;
}

bool catalog_has(const std::string& id, SlotKind kind) {
  const auto& e = catalog_entries();
  return std::any_of(e.begin(), e.end(),
                     [&](const CatalogEntryInfo& info) { return info.id == id && info.kind == kind; });
}

}  // namespace monosplit
