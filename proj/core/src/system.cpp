#include "monosplit/system.hpp"

#include "monosplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace monosplit {

namespace {

double certified_membership(const MaximalMonotoneOp& T, const Vector& p, const Vector& u) {
  const Vector img = T.resolvent(1.0, p + u);
  return (p - img).norm() / (1.0 + p.norm() + u.norm());
}

void require_finite(const BlockVector& v, std::size_t n, const char* name) {
  if (!v.all_finite()) throw DivergenceError(n, std::string("non-finite ") + name);
}

}  // namespace

void CoupledInclusionProblem::validate() const {
  sig.validate();
  const std::size_t m = sig.m(), K = sig.K();
  if (A.size() != m || C.size() != m) throw SignatureError("need one A_i and one C_i per primal block");
  if (B.size() != K || Dinv.size() != K)
    throw SignatureError("need one B_k and one D_k^{-1} per dual block");
  for (std::size_t i = 0; i < m; ++i)
    if (A[i].dim() != sig.primal[i] || C[i].dim() != sig.primal[i])
      throw SignatureError("operator dimension mismatch on primal block " + std::to_string(i));
  for (std::size_t k = 0; k < K; ++k)
    if (B[k].dim() != sig.dual[k] || Dinv[k].dim() != sig.dual[k])
      throw SignatureError("operator dimension mismatch on dual block " + std::to_string(k));
  if (!(L.sig() == sig)) throw SignatureError("coupling grid signature differs from the problem's");
  z.require(sig.primal, "z");
  r.require(sig.dual, "r");
}

std::vector<int> CoupledInclusionProblem::stacked_dims() const {
  std::vector<int> d = sig.primal;
  d.insert(d.end(), sig.dual.begin(), sig.dual.end());
  return d;
}

double compute_beta(const CoupledInclusionProblem& prob) {
  const double lambda = prob.L.lambda_bound();
  if (!std::isfinite(lambda) || lambda < 0.0) throw ParameterError("lambda must be finite and >= 0");
  double mx = 0.0;
  for (const auto& c : prob.C) mx = std::max(mx, c.lipschitz());
  for (const auto& d : prob.Dinv) mx = std::max(mx, d.lipschitz());
  const double beta = mx + std::sqrt(lambda);
  if (!(beta > 0.0))
    throw ParameterError("beta = 0: the system is decoupled and has no Lipschitz part");
  return beta;
}

KktResidual kkt_residual(const CoupledInclusionProblem& prob, const BlockVector& x,
                         const BlockVector& v) {
  x.require(prob.sig.primal, "x");
  v.require(prob.sig.dual, "v");
  KktResidual res;
  const BlockVector Ltv = prob.L.apply_adjoint(v);
  for (std::size_t i = 0; i < prob.sig.m(); ++i) {
    const Vector u = prob.z[i] - Ltv[i] - prob.C[i](x[i]);
    res.primal = std::max(res.primal, certified_membership(prob.A[i], x[i], u));
  }
  const BlockVector Lx = prob.L.apply(x);
  for (std::size_t k = 0; k < prob.sig.K(); ++k) {
    // u in B^{-1} v  <=>  v in B u
    const Vector u = Lx[k] - prob.r[k] - prob.Dinv[k](v[k]);
    res.dual = std::max(res.dual, certified_membership(prob.B[k], u, v[k]));
  }
  return res;
}

Observer kkt_observer(const CoupledInclusionProblem& prob, Observer next) {
  const std::size_t m = prob.sig.m();
  return [&prob, m, next = std::move(next)](const IterationView& view, IterationRecord& rec) {
    const auto k = kkt_residual(prob, view.p.slice(0, m), view.p.slice(m, prob.sig.K()));
    rec.primal_kkt = k.primal;
    rec.dual_kkt = k.dual;
    if (next) next(view, rec);
  };
}

std::pair<ProductMonotone, ProductLipschitz> product_space_pair(const CoupledInclusionProblem& prob) {
  prob.validate();
  const std::size_t m = prob.sig.m(), K = prob.sig.K();
  ProductMonotone P;
  P.dims = prob.stacked_dims();
  P.resolvent = [&prob, m, K](double gamma, const BlockVector& w) {
    std::vector<Vector> out(m + K);
    for (std::size_t i = 0; i < m; ++i) out[i] = prob.A[i].resolvent(gamma, w[i] + gamma * prob.z[i]);
    for (std::size_t k = 0; k < K; ++k)
      out[m + k] = shifted_inverse_resolvent(prob.B[k], prob.r[k], gamma, w[m + k]);
    return BlockVector(std::move(out));
  };
  ProductLipschitz Q;
  Q.dims = P.dims;
  Q.lipschitz = compute_beta(prob);
  Q.map = [&prob, m, K](const BlockVector& w) {
    const BlockVector x = w.slice(0, m), v = w.slice(m, K);
    const BlockVector Ltv = prob.L.apply_adjoint(v);
    const BlockVector Lx = prob.L.apply(x);
    std::vector<Vector> out(m + K);
    for (std::size_t i = 0; i < m; ++i) out[i] = prob.C[i](x[i]) + Ltv[i];
    for (std::size_t k = 0; k < K; ++k) out[m + k] = prob.Dinv[k](v[k]) - Lx[k];
    return BlockVector(std::move(out));
  };
  return {std::move(P), std::move(Q)};
}

SolveReport solve_system(const CoupledInclusionProblem& prob, const FbfConfig& cfg,
                         const Observer& observer, const std::optional<BlockVector>& start) {
  prob.validate();
  const double beta = compute_beta(prob);
  validate_config(cfg, beta);
  const std::size_t m = prob.sig.m(), K = prob.sig.K();
  const std::vector<int> dims = prob.stacked_dims();

  BlockVector x = BlockVector::zeros(prob.sig.primal);
  BlockVector v = BlockVector::zeros(prob.sig.dual);
  if (start) {
    start->require(dims, "initial point");
    x = start->slice(0, m);
    v = start->slice(m, K);
  }
  const Observer obs = cfg.keep_history ? kkt_observer(prob, observer) : observer;

  SolveReport report;
  FbfTrace& trace = report.trace;
  std::vector<Vector> s1(m), p1(m), s2(K), p2(K);
  for (std::size_t n = 0;; ++n) {
    const double gamma = step_size(cfg, beta, n);
    ErrorTriple e;
    const bool perturbed = static_cast<bool>(cfg.errors);
    if (perturbed) e = cfg.errors(n, dims);

    const BlockVector Ltv = prob.L.apply_adjoint(v);
    for (std::size_t i = 0; i < m; ++i) {
      Vector fwd = prob.C[i](x[i]) + Ltv[i];
      if (perturbed) fwd += e.a[i];
      s1[i] = x[i] - gamma * fwd;
      p1[i] = prob.A[i].resolvent(gamma, s1[i] + gamma * prob.z[i]);
      if (perturbed) p1[i] += e.b[i];
    }
    const BlockVector Lx = prob.L.apply(x);
    for (std::size_t k = 0; k < K; ++k) {
      Vector fwd = prob.Dinv[k](v[k]) - Lx[k];
      if (perturbed) fwd += e.a[m + k];
      s2[k] = v[k] - gamma * fwd;
      p2[k] = shifted_inverse_resolvent(prob.B[k], prob.r[k], gamma, s2[k]);
      if (perturbed) p2[k] += e.b[m + k];
    }
    BlockVector w = BlockVector::concat(x, v);
    BlockVector p = BlockVector::concat(BlockVector(p1), BlockVector(p2));
    require_finite(p, n, "p");

    IterationRecord rec;
    rec.iter = n;
    rec.gamma = gamma;
    rec.block_sq_residuals.resize(m + K);
    double sq = 0.0;
    for (std::size_t j = 0; j < m + K; ++j) {
      rec.block_sq_residuals[j] = (w[j] - p[j]).squaredNorm();
      sq += rec.block_sq_residuals[j];
    }
    rec.residual = std::sqrt(sq);
    if (obs) obs(IterationView{n, gamma, w, p}, rec);
    const bool done = fixed_point_reached(rec.residual, w.norm(), cfg.residual_tol);
    if (cfg.keep_history) trace.records.push_back(std::move(rec));
    if (done || n + 1 >= cfg.max_iters) {
      trace.converged = done;
      trace.iterations = n;
      trace.w = std::move(w);
      trace.p = std::move(p);
      break;
    }

    const BlockVector Lp1 = prob.L.apply(BlockVector(p1));
    for (std::size_t k = 0; k < K; ++k) {
      Vector fwd = prob.Dinv[k](p2[k]) - Lp1[k];
      if (perturbed) fwd += e.c[m + k];
      const Vector q2 = p2[k] - gamma * fwd;
      v[k] = v[k] - s2[k] + q2;
    }
    const BlockVector Ltp2 = prob.L.apply_adjoint(BlockVector(p2));
    for (std::size_t i = 0; i < m; ++i) {
      Vector fwd = prob.C[i](p1[i]) + Ltp2[i];
      if (perturbed) fwd += e.c[i];
      const Vector q1 = p1[i] - gamma * fwd;
      x[i] = x[i] - s1[i] + q1;
    }
    require_finite(x, n + 1, "x");
    require_finite(v, n + 1, "v");
  }

  report.primal = trace.p.slice(0, m);
  report.dual = trace.p.slice(m, K);
  report.kkt = kkt_residual(prob, report.primal, report.dual);
  return report;
}

}  // namespace monosplit
