#include "monosplit/tools/properties.hpp"

#include "monosplit/catalog.hpp"
#include "monosplit/tools/demos.hpp"
#include "monosplit/tools/generators.hpp"
#include "monosplit/tools/run.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace monosplit::tools {

namespace {

using Check = std::function<std::string(const SuiteOptions&)>;

std::string describe(const std::string& what, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(6);
  os << what << ": " << lhs << " > " << rhs;
  return os.str();
}

// Catalog fixtures ---------------------------------------------------------

struct NamedOp {
  std::string id;
  MaximalMonotoneOp op;
};

std::vector<NamedOp> all_monotone(Rng& rng, int dim) {
  std::vector<NamedOp> out;
  for (const auto& e : catalog_entries())
    if (e.kind != SlotKind::Lipschitz)
      out.push_back({e.id, make_operator(random_catalog_spec(rng, e.id, dim), dim)});
  return out;
}

std::vector<ConvexFn> all_functions(Rng& rng, int dim) {
  std::vector<ConvexFn> out;
  for (const auto& e : catalog_entries())
    if (e.kind == SlotKind::Function) out.push_back(make_function(random_catalog_spec(rng, e.id, dim), dim));
  return out;
}

std::vector<LipschitzOp> all_lipschitz(Rng& rng, int dim) {
  std::vector<LipschitzOp> out;
  for (const auto& e : catalog_entries())
    if (e.kind == SlotKind::Lipschitz) out.push_back(make_lipschitz(random_catalog_spec(rng, e.id, dim), dim));
  for (const auto& f : all_functions(rng, dim)) {
    if (f.grad) out.push_back(*f.grad);
    if (f.conj_grad) out.push_back(*f.conj_grad);
  }
  return out;
}

double step(Rng& rng) { return rng.uniform(0.1, 3.0); }

// Operator calculus ---------------------------------------------------------

std::string firm_nonexpansiveness(const SuiteOptions& o) {
  Rng rng(o.seed);
  for (int dim = 1; dim <= 3; ++dim)
    for (const auto& [id, A] : all_monotone(rng, dim))
      for (int s = 0; s < o.samples; ++s) {
        const double g = step(rng);
        const Vector x = rng.vector(dim, 2.0), y = rng.vector(dim, 2.0);
        const Vector d = A.resolvent(g, x) - A.resolvent(g, y);
        const double lhs = d.squaredNorm(), rhs = (x - y).dot(d) + 1e-10;
        if (lhs > rhs) return describe(id + " on R^" + std::to_string(dim), lhs, rhs);
      }
  return {};
}

std::string moreau_identity(const SuiteOptions& o) {
  Rng rng(o.seed + 1);
  for (int dim = 1; dim <= 3; ++dim)
    for (const auto& f : all_functions(rng, dim))
      for (int s = 0; s < o.samples; ++s) {
        const double g = step(rng);
        const Vector x = rng.vector(dim, 2.0);
        const double tol = 1e-12 * (1.0 + x.norm());
        // x = prox_{g f} x + g prox_{f^*/g}(x/g); with g = 1 both terms share the step.
        const double err = (x - prox(f, g, x) - g * conjugate_prox(f, 1.0 / g, x / g)).norm();
        const double err1 = (x - prox(f, 1.0, x) - conjugate_prox(f, 1.0, x)).norm();
        if (err > tol) return describe(f.label, err, tol);
        if (err1 > tol) return describe(f.label + " (unit step)", err1, tol);
      }
  return {};
}

/// J_{g(r + A^{-1})} x computed without the inverse-resolvent formula.
struct InverseCase {
  std::string name;
  MaximalMonotoneOp A;
  std::function<Vector(const Vector& r, double g, const Vector& x)> direct;
};

std::vector<InverseCase> inverse_cases(Rng& rng, int dim) {
  std::vector<InverseCase> out;
  const double c = rng.uniform(0.2, 2.0);
  out.push_back({"scaled_identity", catalog::scaled_identity(dim, c),
                 [c](const Vector& r, double g, const Vector& x) -> Vector {
                   return c * (x - g * r) / (c + g);
                 }});
  const Matrix P = rng.matrix(dim, dim, 0.7), W = rng.matrix(dim, dim, 0.5);
  const Matrix M = P * P.transpose() + (W - W.transpose()) + 0.5 * Matrix::Identity(dim, dim);
  const Vector b = rng.vector(dim);
  out.push_back({"affine", catalog::affine(M, b), [M, b](const Vector& r, double g, const Vector& x) -> Vector {
                   const Matrix lhs = M + g * Matrix::Identity(M.rows(), M.cols());
                   return lhs.partialPivLu().solve(M * x - g * (M * r) + g * b);
                 }});
  // Normal cones: A^{-1} is the subdifferential of the support function, so
  // the left side is the prox of g sigma_C at x - g r.
  Vector lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) {
    lo(i) = rng.uniform(-2.0, 0.5);
    hi(i) = lo(i) + rng.uniform(0.2, 2.0);
  }
  out.push_back({"normal_box", catalog::normal_cone(ConvexSet::box(lo, hi)),
                 [lo, hi](const Vector& r, double g, const Vector& x) -> Vector {
                   const Vector t = x - g * r;
                   Vector p(t.size());
                   for (Eigen::Index i = 0; i < t.size(); ++i)
                     p(i) = t(i) > g * hi(i) ? t(i) - g * hi(i) : t(i) < g * lo(i) ? t(i) - g * lo(i) : 0.0;
                   return p;
                 }});
  const Vector ctr = rng.vector(dim);
  const double R = rng.uniform(0.3, 2.0);
  out.push_back({"normal_ball", catalog::normal_cone(ConvexSet::ball(ctr, R)),
                 [ctr, R](const Vector& r, double g, const Vector& x) -> Vector {
                   const Vector s = x - g * r - g * ctr;
                   const double n = s.norm();
                   return n <= g * R ? Vector(Vector::Zero(s.size())) : Vector((1.0 - g * R / n) * s);
                 }});
  const Vector pt = rng.vector(dim);
  out.push_back({"normal_point", catalog::normal_cone(ConvexSet::point(pt)),
                 [pt](const Vector& r, double g, const Vector& x) -> Vector { return x - g * r - g * pt; }});
  const Vector a = rng.unit(dim);
  const double beta = rng.normal();
  out.push_back({"normal_halfspace", catalog::normal_cone(ConvexSet::halfspace(a, beta)),
                 [a, beta](const Vector& r, double g, const Vector& x) -> Vector {
                   const double s = std::max(0.0, ((x - g * r).dot(a) - g * beta) / a.squaredNorm());
                   return s * a;
                 }});
  const Vector u = rng.unit(dim);
  const double rho = rng.normal();
  out.push_back({"normal_hyperplane", catalog::normal_cone(ConvexSet::hyperplane(u, rho)),
                 [u, rho](const Vector& r, double g, const Vector& x) -> Vector {
                   return (((x - g * r).dot(u) - g * rho) / u.squaredNorm()) * u;
                 }});
  return out;
}

std::string inverse_resolvent_identity(const SuiteOptions& o) {
  Rng rng(o.seed + 2);
  for (int dim = 1; dim <= 3; ++dim)
    for (const auto& c : inverse_cases(rng, dim))
      for (int s = 0; s < o.samples; ++s) {
        const double g = step(rng);
        const Vector x = rng.vector(dim, 2.0), r = rng.vector(dim);
        const double err = (shifted_inverse_resolvent(c.A, r, g, x) - c.direct(r, g, x)).norm();
        const double tol = 1e-10 * (1.0 + x.norm());
        if (err > tol) return describe(c.name, err, tol);
      }
  return {};
}

/// Distance-like violation of u in N_C(p) with p in C.
double normal_cone_violation(const ConvexSet& C, const Vector& p, const Vector& u) {
  switch (C.kind()) {
    case ConvexSet::Kind::Box:
    case ConvexSet::Kind::Ball: return std::max(0.0, C.support(u) - u.dot(p));
    case ConvexSet::Kind::Halfspace: {
      const Vector& a = C.first();
      const double s = std::max(0.0, u.dot(a) / a.squaredNorm());
      return (u - s * a).norm() + s * std::abs(a.dot(p) - C.scalar());
    }
    case ConvexSet::Kind::Hyperplane: {
      const Vector n = C.first().normalized();
      return (u - u.dot(n) * n).norm();
    }
    case ConvexSet::Kind::Point: return 0.0;
  }
  return 0.0;
}

std::string resolvent_inclusion(const SuiteOptions& o) {
  Rng rng(o.seed + 3);
  for (int dim = 1; dim <= 3; ++dim) {
    std::vector<ConvexSet> sets;
    for (const char* id : {"indicator_box", "indicator_ball", "indicator_halfspace", "indicator_hyperplane",
                           "indicator_point"})
      sets.push_back(make_set(random_catalog_spec(rng, id, dim), dim));
    for (const auto& C : sets) {
      const MaximalMonotoneOp A = catalog::normal_cone(C);
      for (int s = 0; s < o.samples; ++s) {
        const double g = step(rng);
        const Vector x = rng.vector(dim, 3.0);
        const Vector p = A.resolvent(g, x), u = (x - p) / g;
        const double tol = 1e-8 * (1.0 + u.norm());
        if (C.distance(p) > 1e-8) return describe(C.name() + " membership", C.distance(p), 1e-8);
        const double v = normal_cone_violation(C, p, u);
        if (v > tol) return describe(C.name() + " normal cone", v, tol);
      }
    }
    const Matrix P = rng.matrix(dim, dim, 0.7), W = rng.matrix(dim, dim, 0.5);
    const Matrix M = P * P.transpose() + (W - W.transpose());
    const Vector b = rng.vector(dim);
    const MaximalMonotoneOp A = catalog::affine(M, b);
    for (int s = 0; s < o.samples; ++s) {
      const double g = step(rng);
      const Vector x = rng.vector(dim, 3.0);
      const Vector p = A.resolvent(g, x), u = (x - p) / g;
      const double err = (u - (M * p + b)).norm(), tol = 1e-8 * (1.0 + u.norm());
      if (err > tol) return describe("affine", err, tol);
    }
  }
  return {};
}

std::string yosida_lipschitz(const SuiteOptions& o) {
  Rng rng(o.seed + 4);
  for (int dim = 1; dim <= 3; ++dim)
    for (const auto& [id, B] : all_monotone(rng, dim))
      for (int s = 0; s < o.samples; ++s) {
        const double g = step(rng);
        const Vector x = rng.vector(dim, 2.0), y = rng.vector(dim, 2.0);
        const double lhs = (yosida(B, g, x) - yosida(B, g, y)).norm();
        const double rhs = (x - y).norm() / g * (1.0 + 1e-10) + 1e-14;
        if (lhs > rhs) return describe(id, lhs, rhs);
      }
  return {};
}

std::string lipschitz_maps(const SuiteOptions& o) {
  Rng rng(o.seed + 5);
  for (int dim = 1; dim <= 3; ++dim)
    for (const auto& T : all_lipschitz(rng, dim))
      for (int s = 0; s < o.samples; ++s) {
        const Vector x = rng.vector(dim, 2.0), y = rng.vector(dim, 2.0);
        const Vector d = T(x) - T(y);
        if ((x - y).dot(d) < -1e-10) return describe(T.label() + " monotonicity", -(x - y).dot(d), 1e-10);
        const double rhs = T.lipschitz() * (x - y).norm() * (1.0 + 1e-10) + 1e-14;
        if (d.norm() > rhs) return describe(T.label() + " Lipschitz bound", d.norm(), rhs);
      }
  return {};
}

std::string prox_optimality(const SuiteOptions& o) {
  Rng rng(o.seed + 6);
  for (int dim = 1; dim <= 3; ++dim)
    for (const auto& f : all_functions(rng, dim)) {
      if (!f.eval) continue;
      for (int s = 0; s < o.samples; ++s) {
        const double g = step(rng);
        const Vector x = rng.vector(dim, 2.0);
        const Vector p = prox(f, g, x);
        auto obj = [&](const Vector& y) { return (*f.eval)(y) + (x - y).squaredNorm() / (2.0 * g); };
        const double best = obj(p);
        if (!std::isfinite(best)) return f.label + ": prox output outside the domain";
        for (int t = 0; t < 5; ++t) {
          const Vector y = p + rng.vector(dim, 0.1);
          const double rhs = obj(y) + 1e-10 * (1.0 + std::abs(best));
          if (best > rhs) return describe(f.label, best, rhs);
        }
      }
    }
  return {};
}

// Linear algebra ------------------------------------------------------------

BlockLinearOp random_grid(Rng& rng) {
  SpaceSig sig;
  const int m = rng.integer(1, 3), K = rng.integer(1, 3);
  for (int i = 0; i < m; ++i) sig.primal.push_back(rng.integer(1, 4));
  for (int k = 0; k < K; ++k) sig.dual.push_back(rng.integer(1, 4));
  std::vector<LinearEntry> e;
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < m; ++i) e.push_back(random_entry(rng, sig.dual[k], sig.primal[i]));
  return BlockLinearOp(sig, std::move(e));
}

BlockVector random_block(Rng& rng, const std::vector<int>& dims) {
  std::vector<Vector> b;
  for (int d : dims) b.push_back(rng.vector(d));
  return BlockVector(std::move(b));
}

std::string adjoint_identity(const SuiteOptions& o) {
  Rng rng(o.seed + 7);
  for (int s = 0; s < o.samples; ++s) {
    const BlockLinearOp L = random_grid(rng);
    const BlockVector x = random_block(rng, L.sig().primal), v = random_block(rng, L.sig().dual);
    const double err = std::abs(L.apply(x).dot(v) - x.dot(L.apply_adjoint(v)));
    const double tol = 1e-10 * (1.0 + x.norm() * v.norm());
    if (err > tol) return describe("<Lx,v> - <x,L*v>", err, tol);
  }
  return {};
}

std::vector<BlockLinearOp> norm_fixtures(Rng& rng) {
  std::vector<BlockLinearOp> out;
  out.emplace_back(SpaceSig{{1}, {1}}, std::vector<LinearEntry>{LinearEntry::scalar(1, 3.0)});
  out.emplace_back(SpaceSig{{1, 1}, {1}},
                   std::vector<LinearEntry>{LinearEntry::identity(1), LinearEntry::scalar(1, -1.0)});
  for (int j = 0; j < 20; ++j) out.push_back(random_grid(rng));
  return out;
}

std::string norm_bound(const SuiteOptions& o) {
  Rng rng(o.seed + 8);
  const double factor = o.corrupt_lambda ? 0.5 : 1.0;
  for (const auto& L : norm_fixtures(rng)) {
    const std::pair<const char*, double> producers[] = {
        {"conservative", factor * lambda_conservative(L)},
        {"power iteration", factor * lambda_power_iteration(L).value},
        {"default", factor * L.lambda_bound()}};
    for (const auto& [name, lambda] : producers)
      for (int s = 0; s < o.samples; ++s) {
        const BlockVector x = random_block(rng, L.sig().primal);
        const double lhs = L.apply(x).squared_norm(), rhs = lambda * x.squared_norm() * (1.0 + 1e-10);
        if (lhs > rhs) return describe(std::string(name) + " lambda", lhs, rhs);
      }
  }
  return {};
}

std::string power_iteration_bounds(const SuiteOptions& o) {
  Rng rng(o.seed + 9);
  for (const auto& L : norm_fixtures(rng)) {
    const Matrix D = L.to_dense();
    const double exact =
        Eigen::SelfAdjointEigenSolver<Matrix>(D.transpose() * D, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    const auto est = lambda_power_iteration(L);
    const double cons = lambda_conservative(L);
    if (est.value < exact * (1.0 - 1e-9)) return describe("exact ||L||^2 vs power estimate", exact, est.value);
    if (est.value > kPowerSafetyFactor * exact * (1.0 + 1e-6) + 1e-12 && est.converged)
      return describe("power estimate vs 1.01 ||L||^2", est.value, kPowerSafetyFactor * exact);
    if (est.value > kPowerSafetyFactor * cons * (1.0 + 1e-12))
      return describe("power estimate vs 1.01 conservative", est.value, kPowerSafetyFactor * cons);
  }
  return {};
}

// Engine --------------------------------------------------------------------

struct ScalarPair {
  ProductMonotone P{{1}, [](double, const BlockVector& w) {
                      return BlockVector({w[0].cwiseMax(-1.0).cwiseMin(1.0)});
                    }};
  ProductLipschitz Q{{1}, [](const BlockVector& w) { return BlockVector({(w[0].array() - 2.0).matrix()}); }, 1.0};
  BlockVector w0 = BlockVector({Vector::Zero(1)});
};

FbfConfig clean_config(double gamma) {
  FbfConfig cfg;
  cfg.gamma = gamma;
  return cfg;
}

std::string decile_check(const std::vector<double>& inc, const std::string& what) {
  if (inc.size() < 10) return what + ": fewer than 10 iterations";
  const std::size_t d = inc.size() / 10;
  double first = 0.0, last = 0.0, total = 0.0;
  for (std::size_t j = 0; j < inc.size(); ++j) {
    total += inc[j];
    if (j < d) first += inc[j];
    if (j >= inc.size() - d) last += inc[j];
  }
  if (!std::isfinite(total)) return what + ": partial sums diverge";
  if (!(last < first)) return describe(what + " last-decile vs first-decile increments", last, first);
  return {};
}

const MultivariateMinProblem& coupled_boxes() {
  static const MultivariateMinProblem p =
      std::get<MultivariateMinProblem>(build_instance(parse_problem_string(find_demo("prob62")->text)));
  return p;
}

std::string square_summable(const SuiteOptions&) {
  ScalarPair s;
  const auto tr = fbf_solve(s.P, s.Q, 1.0, s.w0, clean_config(0.45));
  if (!tr.converged) return "scalar instance did not converge";
  std::vector<double> inc;
  for (const auto& r : tr.records) inc.push_back(r.residual * r.residual);
  if (auto e = decile_check(inc, "scalar instance"); !e.empty()) return e;
  const auto rep = solve_system(coupled_boxes().as_system(), FbfConfig{});
  if (!rep.converged()) return "coupled boxes did not converge";
  inc.clear();
  for (const auto& r : rep.trace.records) inc.push_back(r.residual * r.residual);
  return decile_check(inc, "coupled boxes");
}

std::string fejer(const SuiteOptions&) {
  auto check = [](const std::vector<BlockVector>& ws, const BlockVector& sol, const std::string& what) {
    for (std::size_t n = 0; n + 1 < ws.size(); ++n) {
      const double a = (ws[n + 1] - sol).norm(), b = (ws[n] - sol).norm() + 1e-9;
      if (a > b) return describe(what + " at n=" + std::to_string(n), a, b);
    }
    return std::string();
  };
  std::vector<BlockVector> ws;
  const Observer grab = [&](const IterationView& v, IterationRecord&) { ws.push_back(v.w); };
  ScalarPair s;
  fbf_solve(s.P, s.Q, 1.0, s.w0, clean_config(0.45), grab);
  if (auto e = check(ws, BlockVector({Vector::Ones(1)}), "scalar instance"); !e.empty()) return e;
  ws.clear();
  solve_system(coupled_boxes().as_system(), FbfConfig{}, grab);
  return check(ws, BlockVector({Vector::Constant(1, 2.0), Vector::Ones(1), Vector::Ones(1)}), "coupled boxes");
}

std::string gamma_range(const SuiteOptions&) {
  const double eps = FbfConfig{}.epsilon;
  std::vector<double> limits;
  ScalarPair s;
  for (double g : {eps, 0.5 * (1 - eps), 1 - eps}) {
    const auto tr = fbf_solve(s.P, s.Q, 1.0, s.w0, clean_config(g));
    if (!tr.converged) return "scalar instance did not converge for gamma=" + format_number(g);
    limits.push_back(tr.w[0](0));
  }
  for (double l : limits)
    if (std::abs(l - limits.front()) > 1e-6) return describe("scalar limit spread", std::abs(l - limits.front()), 1e-6);
  const auto sys = coupled_boxes().as_system();
  const double chi = compute_beta(sys);
  std::vector<Vector> xs;
  for (double g : {eps, 0.5 * (1 - eps) / chi, (1 - eps) / chi}) {
    FbfConfig cfg = clean_config(g);
    cfg.keep_history = false;
    const auto rep = solve_system(sys, cfg);
    if (!rep.converged()) return "coupled boxes did not converge for gamma=" + format_number(g);
    if (rep.kkt.primal > 1e-7 || rep.kkt.dual > 1e-7)
      return describe("coupled boxes KKT for gamma=" + format_number(g), std::max(rep.kkt.primal, rep.kkt.dual), 1e-7);
    xs.push_back(rep.primal.flatten());
  }
  for (const auto& x : xs)
    if ((x - xs.front()).norm() > 1e-6) return describe("coupled boxes limit spread", (x - xs.front()).norm(), 1e-6);
  return {};
}

std::string error_robustness(const SuiteOptions& o) {
  ScalarPair s;
  const auto clean = fbf_solve(s.P, s.Q, 1.0, s.w0, clean_config(0.45));
  FbfConfig cfg = clean_config(0.45);
  cfg.errors = summable_error_schedule(0.1, 2.0, o.seed);
  cfg.max_iters = 10 * (clean.iterations + 1);
  const auto noisy = fbf_solve(s.P, s.Q, 1.0, s.w0, cfg);
  const double d = (noisy.p - clean.p).norm();
  if (d > 1e-5) return describe("scalar instance deviation", d, 1e-5);
  for (const auto& demo : demos()) {
    const Instance inst = build_instance(parse_problem_string(demo.text));
    FbfConfig base;
    base.keep_history = false;
    const auto ref = run_instance(inst, base);
    FbfConfig err = base;
    err.errors = summable_error_schedule(0.1, 2.0, o.seed);
    err.max_iters = 10 * (ref.report.trace.iterations + 1);
    const auto run = run_instance(inst, err);
    const double dev = (run.report.primal.flatten() - ref.report.primal.flatten()).norm();
    if (dev > 1e-5) return describe(demo.name + " deviation", dev, 1e-5);
  }
  return {};
}

std::string error_schedule(const SuiteOptions& o) {
  const std::vector<int> dims = {2, 3};
  const auto sched = summable_error_schedule(1.0, 2.0, o.seed);
  const auto again = summable_error_schedule(1.0, 2.0, o.seed);
  const auto zero = summable_error_schedule(0.0, 2.0, o.seed);
  double total = 0.0;
  for (std::size_t n = 0; n < 20000; ++n) {
    const auto e = sched(n, dims);
    total += e.a.norm();
    if (n < 100) {
      const auto f = again(n, dims);
      if (!(e.a == f.a && e.b == f.b && e.c == f.c)) return "schedules differ for equal seeds at n=" + std::to_string(n);
      const auto z = zero(n, dims);
      if (z.a.norm() + z.b.norm() + z.c.norm() != 0.0) return "eta = 0 produced a nonzero error";
    }
  }
  const double bound = std::numbers::pi * std::numbers::pi / 6.0;
  if (total > bound) return describe("sum ||a_n||", total, bound);
  return {};
}

// System solver ---------------------------------------------------------------

std::string compare_runs(const std::vector<BlockVector>& a, const std::vector<BlockVector>& b,
                         const std::string& what) {
  if (a.size() != b.size())
    return what + ": iteration counts differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")";
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double d = (a[n] - b[n]).flatten().lpNorm<Eigen::Infinity>();
    if (!(d <= 1e-12)) return describe(what + " at n=" + std::to_string(n), d, 1e-12);
  }
  return {};
}

struct Capture {
  std::vector<BlockVector> w, p;
  Observer observer() {
    return [this](const IterationView& v, IterationRecord&) {
      w.push_back(v.w);
      p.push_back(v.p);
    };
  }
};

FbfConfig fixed_iterations(std::size_t n) {
  FbfConfig cfg;
  cfg.max_iters = n;
  cfg.residual_tol = 0.0;
  cfg.keep_history = false;
  return cfg;
}

std::string engine_equivalence(const SuiteOptions& o) {
  Rng rng(o.seed + 10);
  for (int t = 0; t < 20; ++t) {
    const auto prob = random_system(rng, 3, 4);
    const auto cfg = fixed_iterations(50);
    Capture lit, eng;
    solve_system(prob, cfg, lit.observer());
    const auto [P, Q] = product_space_pair(prob);
    fbf_solve(P, Q, compute_beta(prob), BlockVector::zeros(prob.stacked_dims()), cfg, eng.observer());
    const std::string what = "instance " + std::to_string(t);
    if (auto e = compare_runs(lit.w, eng.w, what + " w"); !e.empty()) return e;
    if (auto e = compare_runs(lit.p, eng.p, what + " p"); !e.empty()) return e;
  }
  return {};
}

std::string primal_dual_linkage(const SuiteOptions&) {
  for (const char* name : {"prob62", "lasso1d"}) {
    const auto p = std::get<MultivariateMinProblem>(build_instance(parse_problem_string(find_demo(name)->text)));
    const auto rep = solve_multivariate_min(p, FbfConfig{});
    if (!rep.converged()) return std::string(name) + " did not converge";
    const auto kkt = kkt_residual(p.as_system(), rep.primal, rep.dual);
    if (kkt.primal > 1e-7 || kkt.dual > 1e-7)
      return describe(std::string(name) + " KKT", std::max(kkt.primal, kkt.dual), 1e-7);
  }
  return {};
}

// Reductions ----------------------------------------------------------------

std::string lifting_soundness(const SuiteOptions& o) {
  Rng rng(o.seed + 11);
  for (int t = 0; t < 10; ++t) {
    const auto ps = random_parallel_sum(rng);
    const auto cfg = fixed_iterations(50);
    Capture lit, lifted;
    solve_parallel_sum(ps, cfg, lit.observer());
    solve_system(lift_parallel_sum(ps), cfg, lifted.observer());
    const std::string what = "instance " + std::to_string(t);
    if (auto e = compare_runs(lit.w, lifted.w, what + " w"); !e.empty()) return e;
    if (auto e = compare_runs(lit.p, lifted.p, what + " p"); !e.empty()) return e;
  }
  return {};
}

std::string consistency(const SuiteOptions& o) {
  Rng rng(o.seed + 12);
  for (int t = 0; t < 10; ++t) {
    const auto inst = random_consistent_common_zero(rng);
    const auto rep = solve_common_zero(inst.problem, FbfConfig{});
    if (!check_consistency_theorem(inst.problem, rep.primal[0], 1e-6))
      return "instance " + std::to_string(t) + ": returned point is not a common zero";
  }
  return {};
}

std::string weak_duality(const SuiteOptions& o) {
  Rng rng(o.seed + 13);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_duality_instance(rng);
    const auto rep = solve_multivariate_min(p, FbfConfig{});
    const std::string what = "instance " + std::to_string(t);
    for (const auto& r : rep.trace.records)
      if (r.gap && std::isfinite(*r.gap) && *r.gap < -1e-9)
        return describe(what + " negative gap at n=" + std::to_string(r.iter), -*r.gap, 1e-9);
    const auto v = evaluate_objectives(p, rep.primal, rep.dual);
    if (!(std::abs(v.gap()) <= 1e-6)) return describe(what + " final gap", std::abs(v.gap()), 1e-6);
  }
  return {};
}

std::string kkt_transfer(const SuiteOptions& o) {
  Rng rng(o.seed + 13);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_duality_instance(rng);
    FbfConfig cfg;
    cfg.keep_history = false;
    const auto rep = solve_multivariate_min(p, cfg);
    if (rep.kkt.primal > 1e-7 || rep.kkt.dual > 1e-7)
      return describe("instance " + std::to_string(t) + " KKT", std::max(rep.kkt.primal, rep.kkt.dual), 1e-7);
  }
  return {};
}

std::string feasibility_dominance(const SuiteOptions& o) {
  Rng rng(o.seed + 14);
  for (int N : {2, 3}) {
    const auto p = random_box_feasibility(rng, N);
    FbfConfig cfg;
    cfg.keep_history = false;
    const auto rep = solve_feasibility_relaxation(p, cfg);
    const double best = feasibility_objective(p, rep.primal[0]);
    const Vector &lo = p.sets[0].first(), &hi = p.sets[0].second();
    for (int s = 0; s < o.samples; ++s) {
      Vector y(N);
      for (int i = 0; i < N; ++i) y(i) = rng.uniform(lo(i), hi(i));
      const double v = feasibility_objective(p, y);
      if (best > v + 1e-9) return describe("objective at solution vs probe", best, v);
    }
  }
  return {};
}

// Command-line surface --------------------------------------------------------

std::string round_trip(const SuiteOptions& o) {
  std::vector<std::string> texts;
  for (const auto& d : demos()) texts.push_back(d.text);
  Rng rng(o.seed + 15);
  std::ostringstream sys;
  sys.precision(17);
  sys << "kind system\nprimal 2 1\ndual 2\nop A 0 affine M=2,1;-1,2 b=0.5,-0.25\nop C 1 scaled_identity c=0.3\n"
      << "op B 0 normal_ball center=0.1,0.2 radius=1.5\nlinop 0 0 dense\n";
  const Matrix M = rng.matrix(2, 2);
  sys << M(0, 0) << ' ' << M(0, 1) << '\n' << M(1, 0) << ' ' << M(1, 1) << "\nend\n";
  sys << "linop 0 1 zero\nvec z 0 1e-3 -2.5\nvec r 0 0.125 7\nconfig max_iters 500\nconfig tol 1e-8\n";
  texts.push_back(sys.str());
  for (const auto& t : texts) {
    const ProblemFile a = parse_problem_string(t);
    const ProblemFile b = parse_problem_string(serialize_problem(a));
    if (!(a == b)) return "round trip changed a '" + a.kind + "' problem";
  }
  return {};
}

std::string csv_schema(const SuiteOptions&) {
  const auto run = run_instance(build_instance(parse_problem_string(find_demo("prob62")->text)), FbfConfig{});
  std::ostringstream os;
  write_trace_csv(os, run.report.trace);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  if (line != kTraceHeader) return "header mismatch: " + line;
  long prev = -1;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.empty()) return "empty row";
    const long it = std::stol(cells[0]);
    if (it <= prev) return "iter column not strictly increasing";
    prev = it;
    for (std::size_t j = 2; j < std::min<std::size_t>(cells.size(), 5); ++j)
      if (!cells[j].empty() && std::stod(cells[j]) < 0.0) return "negative residual cell";
  }
  return prev < 0 ? "no rows" : "";
}

}  // namespace

std::vector<Property> operator_calculus_properties() {
  return {
      {"operator-calculus", "firm nonexpansiveness", firm_nonexpansiveness},
      {"operator-calculus", "Moreau identity", moreau_identity},
      {"operator-calculus", "inverse-resolvent identity", inverse_resolvent_identity},
      {"operator-calculus", "resolvent inclusion", resolvent_inclusion},
      {"operator-calculus", "Yosida Lipschitz bound", yosida_lipschitz},
      {"operator-calculus", "Lipschitz maps monotone and bounded", lipschitz_maps},
      {"operator-calculus", "prox minimizes its objective", prox_optimality},
  };
}

const std::vector<Property>& property_catalog() {
  static const std::vector<Property> all = [] {
    std::vector<Property> v = {
        {"linalg-core", "adjoint identity", adjoint_identity},
        {"linalg-core", "norm-bound validity", norm_bound},
        {"linalg-core", "power-iteration bounds", power_iteration_bounds},
    };
    for (auto& p : operator_calculus_properties()) v.push_back(std::move(p));
    const std::vector<Property> rest = {
        {"fbf-engine", "square-summable residuals", square_summable},
        {"fbf-engine", "Fejer monotonicity", fejer},
        {"fbf-engine", "step-size robustness", gamma_range},
        {"fbf-engine", "error robustness", error_robustness},
        {"fbf-engine", "summable error schedule", error_schedule},
        {"system-solver", "engine equivalence", engine_equivalence},
        {"system-solver", "primal-dual linkage", primal_dual_linkage},
        {"reductions", "lifting soundness", lifting_soundness},
        {"reductions", "common-zero consistency", consistency},
        {"reductions", "weak duality and zero gap", weak_duality},
        {"reductions", "KKT transfer", kkt_transfer},
        {"reductions", "feasibility dominance", feasibility_dominance},
        {"cli-harness", "problem-file round trip", round_trip},
        {"cli-harness", "trace CSV schema", csv_schema},
    };
    v.insert(v.end(), rest.begin(), rest.end());
    return v;
  }();
  return all;
}

PropertyResult run_property(const Property& p, const SuiteOptions& opts) {
  PropertyResult r{p.module, p.name, false, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.detail = p.check(opts);
    r.passed = r.detail.empty();
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<PropertyResult> run_suite(const std::vector<Property>& props, const SuiteOptions& opts) {
  std::vector<PropertyResult> out;
  for (const auto& p : props) out.push_back(run_property(p, opts));
  return out;
}

}  // namespace monosplit::tools
