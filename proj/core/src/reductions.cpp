#include "monosplit/reductions.hpp"

#include "monosplit/catalog.hpp"
#include "monosplit/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace monosplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(const BlockVector& v, std::size_t n, const char* name) {
  if (!v.all_finite()) throw DivergenceError(n, std::string("non-finite ") + name);
}

void require_entry(const LinearEntry& L, int rows, int cols, std::size_t k) {
  if (L.rows() != rows || L.cols() != cols)
    throw SignatureError("L_" + std::to_string(k) + " has shape " + std::to_string(L.rows()) + "x" +
                         std::to_string(L.cols()) + ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
}

// Fills residual columns and returns the stopping decision.
bool record_iteration(FbfTrace& trace, const FbfConfig& cfg, const Observer& obs, std::size_t n,
                      double gamma, const BlockVector& w, const BlockVector& p) {
  IterationRecord rec;
  rec.iter = n;
  rec.gamma = gamma;
  rec.block_sq_residuals.resize(w.size());
  double sq = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    rec.block_sq_residuals[j] = (w[j] - p[j]).squaredNorm();
    sq += rec.block_sq_residuals[j];
  }
  rec.residual = std::sqrt(sq);
  if (obs) obs(IterationView{n, gamma, w, p}, rec);
  const bool done = fixed_point_reached(rec.residual, w.norm(), cfg.residual_tol);
  if (cfg.keep_history) trace.records.push_back(std::move(rec));
  return done;
}

SolveReport finish_single_primal(FbfTrace trace, const CoupledInclusionProblem& lifted,
                                 std::size_t K) {
  SolveReport report;
  const std::size_t mp = lifted.sig.m();
  report.primal = trace.p.slice(0, 1);
  report.dual = trace.p.slice(mp, K);
  report.kkt = kkt_residual(lifted, trace.p.slice(0, mp), report.dual);
  report.trace = std::move(trace);
  return report;
}

// ---- infimal convolution evaluation -----------------------------------------

double eval_or_throw(const ConvexFn& f, const Vector& x) {
  if (!f.eval) throw UnsupportedEvaluation("no evaluator for " + f.label);
  return (*f.eval)(x);
}

// inf_t a(t) + b(y - t) by grid search and coordinate polishing; oracle grade.
double numeric_infimal_convolution(const ConvexFn& a, const ConvexFn& b, const Vector& y) {
  const int d = static_cast<int>(y.size());
  if (d > 2) throw UnsupportedEvaluation("numeric infimal convolution limited to dimension <= 2");
  auto value = [&](const Vector& t) {
    const double va = eval_or_throw(a, t);
    if (!std::isfinite(va)) return kInf;
    return va + eval_or_throw(b, y - t);
  };
  const double radius = 4.0 * (1.0 + y.norm());
  const int steps = d == 1 ? 4001 : 401;
  Vector best_t = Vector::Zero(d);
  double best = kInf;
  Vector t(d);
  const long total = d == 1 ? steps : static_cast<long>(steps) * steps;
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int j = 0; j < d; ++j) {
      t(j) = y(j) * 0.5 - radius + 2.0 * radius * static_cast<double>(rem % steps) / (steps - 1);
      rem /= steps;
    }
    const double v = value(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  // Also try the endpoints a = 0 and b = 0 of the decomposition.
  for (const Vector& cand : {Vector(Vector::Zero(d)), Vector(y)}) {
    const double v = value(cand);
    if (v < best) {
      best = v;
      best_t = cand;
    }
  }
  if (!std::isfinite(best)) return kInf;
  double h = 2.0 * radius / (steps - 1);
  while (h > 1e-13 * (1.0 + radius)) {
    bool improved = false;
    for (int j = 0; j < d; ++j)
      for (double sgn : {-1.0, 1.0}) {
        Vector c = best_t;
        c(j) += sgn * h;
        const double v = value(c);
        if (v < best) {
          best = v;
          best_t = c;
          improved = true;
        }
      }
    if (!improved) h *= 0.5;
  }
  return best;
}

double infimal_convolution(const ConvexFn& a, const ConvexFn& b, const Vector& y, bool numeric) {
  using S = ConvexFn::Shape;
  if (b.shape == S::ZeroIndicator) return eval_or_throw(a, y);
  if (a.shape == S::ZeroIndicator) return eval_or_throw(b, y);
  auto moreau = [&](const ConvexFn& f, double omega) {
    const Vector u = prox(f, 1.0 / (2.0 * omega), y);
    return eval_or_throw(f, u) + omega * (y - u).squaredNorm();
  };
  if (b.shape == S::SquaredNorm && a.eval) return moreau(a, b.weight);
  if (a.shape == S::SquaredNorm && b.eval) return moreau(b, a.weight);
  if (!numeric) throw UnsupportedEvaluation("no closed form for " + a.label + " [] " + b.label);
  return numeric_infimal_convolution(a, b, y);
}

}  // namespace

// ---- parallel sums -----------------------------------------------------------

std::vector<int> ParallelSumProblem::dual_dims() const {
  std::vector<int> d;
  for (const auto& b : B) d.push_back(b.dim());
  return d;
}

void ParallelSumProblem::validate() const {
  const std::size_t K = B.size();
  if (K < 1) throw SignatureError("parallel-sum problem needs K >= 1");
  if (!(K1 <= K2 && K2 <= K)) throw ParameterError("partition needs 0 <= K1 <= K2 <= K");
  if (S.size() != K || L.size() != K || r.size() != K)
    throw SignatureError("need one S_k, L_k and r_k per term");
  if (A.dim() != dim || C.dim() != dim || z.size() != dim)
    throw SignatureError("A, C and z must live on the base space");
  for (std::size_t k = 0; k < K; ++k) {
    const int gk = B[k].dim();
    require_entry(L[k], gk, dim, k);
    if (r[k].size() != gk) throw SignatureError("r_" + std::to_string(k) + " has the wrong length");
    if (k < K1) {
      const auto* s = std::get_if<MaximalMonotoneOp>(&S[k]);
      if (!s) throw ParameterError("S_" + std::to_string(k) + " must be given through its resolvent");
      if (s->dim() != gk) throw SignatureError("S_" + std::to_string(k) + " dimension mismatch");
    } else {
      const auto* s = std::get_if<LipschitzOp>(&S[k]);
      if (!s)
        throw ParameterError("S_" + std::to_string(k) +
                             (k < K2 ? " must be a Lipschitz map" : " must give S^{-1} as a Lipschitz map"));
      if (s->dim() != gk) throw SignatureError("S_" + std::to_string(k) + " dimension mismatch");
    }
  }
}

double ParallelSumProblem::beta() const {
  double mx = C.lipschitz();
  double sum = 1.0;
  for (std::size_t k = 0; k < K(); ++k) {
    if (k >= K1) mx = std::max(mx, std::get<LipschitzOp>(S[k]).lipschitz());
    const double n = L[k].spectral_norm();
    sum += n * n;
  }
  return mx + std::sqrt(sum);
}

CoupledInclusionProblem lift_parallel_sum(const ParallelSumProblem& p) {
  p.validate();
  const std::size_t K = p.K(), m = p.K2 + 1;
  SpaceSig sig;
  sig.primal.push_back(p.dim);
  for (std::size_t k = 0; k < p.K2; ++k) sig.primal.push_back(p.B[k].dim());
  sig.dual = p.dual_dims();

  std::vector<MaximalMonotoneOp> A{p.A};
  std::vector<LipschitzOp> C{p.C};
  for (std::size_t k = 0; k < p.K2; ++k) {
    const int gk = p.B[k].dim();
    if (k < p.K1) {
      A.push_back(std::get<MaximalMonotoneOp>(p.S[k]));
      C.push_back(LipschitzOp::zero(gk));
    } else {
      A.push_back(catalog::zero_op(gk));
      C.push_back(std::get<LipschitzOp>(p.S[k]));
    }
  }
  std::vector<LipschitzOp> Dinv;
  for (std::size_t k = 0; k < K; ++k)
    Dinv.push_back(k < p.K2 ? LipschitzOp::zero(p.B[k].dim()) : std::get<LipschitzOp>(p.S[k]));

  std::vector<LinearEntry> entries;
  double lambda = 1.0;
  for (std::size_t k = 0; k < K; ++k) {
    const int gk = p.B[k].dim();
    for (std::size_t i = 0; i < m; ++i) {
      if (i == 0) entries.push_back(p.L[k]);
      else if (i == k + 1) entries.push_back(LinearEntry::scalar(gk, -1.0));
      else entries.push_back(LinearEntry::zero(gk, sig.primal[i]));
    }
    const double n = p.L[k].spectral_norm();
    lambda += n * n;
  }

  std::vector<Vector> z{p.z};
  for (std::size_t k = 0; k < p.K2; ++k) z.push_back(Vector::Zero(p.B[k].dim()));

  CoupledInclusionProblem out{sig,
                              std::move(A),
                              std::move(C),
                              p.B,
                              std::move(Dinv),
                              BlockLinearOp(sig, std::move(entries), lambda),
                              BlockVector(std::move(z)),
                              BlockVector(p.r)};
  return out;
}

SolveReport solve_parallel_sum(const ParallelSumProblem& p, const FbfConfig& cfg,
                               const Observer& observer) {
  const CoupledInclusionProblem lifted = lift_parallel_sum(p);
  const double beta = p.beta();
  validate_config(cfg, beta);
  const std::size_t K = p.K(), K1 = p.K1, K2 = p.K2, vo = 1 + K2;
  const std::vector<int> dims = lifted.stacked_dims();

  Vector x = Vector::Zero(p.dim);
  std::vector<Vector> y(K2), v(K), s1(K2), p1(K2), s2(K), p2(K), Lp(K);
  for (std::size_t k = 0; k < K; ++k) {
    v[k] = Vector::Zero(p.B[k].dim());
    if (k < K2) y[k] = v[k];
  }
  const Observer obs = cfg.keep_history ? kkt_observer(lifted, observer) : observer;

  FbfTrace trace;
  for (std::size_t n = 0;; ++n) {
    const double gamma = step_size(cfg, beta, n);
    const bool perturbed = static_cast<bool>(cfg.errors);
    ErrorTriple e;
    if (perturbed) e = cfg.errors(n, dims);

    Vector fwd = p.C(x);
    for (std::size_t k = 0; k < K; ++k) fwd += p.L[k].apply_transpose(v[k]);
    if (perturbed) fwd += e.a[0];
    const Vector s11 = x - gamma * fwd;
    Vector p11 = p.A.resolvent(gamma, s11 + gamma * p.z);
    if (perturbed) p11 += e.b[0];

    for (std::size_t k = 0; k < K; ++k) {
      const Vector Lx = p.L[k].apply(x);
      if (k < K1) {
        s1[k] = y[k] + gamma * v[k];
        if (perturbed) s1[k] -= gamma * e.a[1 + k];
        p1[k] = std::get<MaximalMonotoneOp>(p.S[k]).resolvent(gamma, s1[k]);
      } else if (k < K2) {
        Vector f1 = std::get<LipschitzOp>(p.S[k])(y[k]) - v[k];
        if (perturbed) f1 += e.a[1 + k];
        s1[k] = y[k] - gamma * f1;
        p1[k] = s1[k];
      }
      if (k < K2 && perturbed) p1[k] += e.b[1 + k];

      Vector f2 = (k < K2 ? y[k] : std::get<LipschitzOp>(p.S[k])(v[k])) - Lx;
      if (perturbed) f2 += e.a[vo + k];
      s2[k] = v[k] - gamma * f2;
      p2[k] = shifted_inverse_resolvent(p.B[k], p.r[k], gamma, s2[k]);
      if (perturbed) p2[k] += e.b[vo + k];
    }

    std::vector<Vector> wb{x}, pb{p11};
    for (std::size_t k = 0; k < K2; ++k) {
      wb.push_back(y[k]);
      pb.push_back(p1[k]);
    }
    for (std::size_t k = 0; k < K; ++k) {
      wb.push_back(v[k]);
      pb.push_back(p2[k]);
    }
    BlockVector w(std::move(wb)), pv(std::move(pb));
    require_finite(pv, n, "p");
    const bool done = record_iteration(trace, cfg, obs, n, gamma, w, pv);
    if (done || n + 1 >= cfg.max_iters) {
      trace.converged = done;
      trace.iterations = n;
      trace.w = std::move(w);
      trace.p = std::move(pv);
      break;
    }

    for (std::size_t k = 0; k < K; ++k) {
      Vector f2 = (k < K2 ? p1[k] : std::get<LipschitzOp>(p.S[k])(p2[k])) - p.L[k].apply(p11);
      if (perturbed) f2 += e.c[vo + k];
      const Vector q2 = p2[k] - gamma * f2;
      v[k] = v[k] - s2[k] + q2;
    }
    Vector g1 = p.C(p11);
    for (std::size_t k = 0; k < K; ++k) g1 += p.L[k].apply_transpose(p2[k]);
    if (perturbed) g1 += e.c[0];
    x = x - s11 + (p11 - gamma * g1);
    for (std::size_t k = 0; k < K2; ++k) {
      Vector g = (k < K1 ? Vector(-p2[k]) : Vector(std::get<LipschitzOp>(p.S[k])(p1[k]) - p2[k]));
      if (perturbed) g += e.c[1 + k];
      y[k] = y[k] - s1[k] + (p1[k] - gamma * g);
    }
    if (!x.allFinite()) throw DivergenceError(n + 1, "non-finite x");
  }
  return finish_single_primal(std::move(trace), lifted, K);
}

// ---- common zeros ------------------------------------------------------------

void CommonZeroProblem::validate() const {
  if (B.empty()) throw SignatureError("common-zero problem needs K >= 1");
  if (S.size() != B.size()) throw SignatureError("need one S_k per B_k");
  if (A.dim() != dim) throw SignatureError("A dimension mismatch");
  for (std::size_t k = 0; k < B.size(); ++k)
    if (B[k].dim() != dim || S[k].dim() != dim)
      throw SignatureError("B_" + std::to_string(k) + " or S_" + std::to_string(k) +
                           " has the wrong dimension");
}

ParallelSumProblem CommonZeroProblem::as_parallel_sum() const {
  validate();
  const std::size_t K = B.size();
  std::vector<ParallelSumS> s(S.begin(), S.end());
  return ParallelSumProblem{dim,
                            K,
                            K,
                            Vector::Zero(dim),
                            A,
                            LipschitzOp::zero(dim),
                            B,
                            std::move(s),
                            std::vector<LinearEntry>(K, LinearEntry::identity(dim)),
                            std::vector<Vector>(K, Vector::Zero(dim))};
}

SolveReport solve_common_zero(const CommonZeroProblem& p, const FbfConfig& cfg,
                              const Observer& observer) {
  const ParallelSumProblem ps = p.as_parallel_sum();
  const CoupledInclusionProblem lifted = lift_parallel_sum(ps);
  const std::size_t K = p.K(), vo = 1 + K;
  const double chi = std::sqrt(static_cast<double>(K + 1));
  validate_config(cfg, chi);
  const std::vector<int> dims = lifted.stacked_dims();
  const Vector zero = Vector::Zero(p.dim);

  Vector x = zero;
  std::vector<Vector> y(K, zero), v(K, zero), p1(K), s2(K), p2(K);
  const Observer obs = cfg.keep_history ? kkt_observer(lifted, observer) : observer;

  FbfTrace trace;
  for (std::size_t n = 0;; ++n) {
    const double gamma = step_size(cfg, chi, n);
    const bool perturbed = static_cast<bool>(cfg.errors);
    ErrorTriple e;
    if (perturbed) e = cfg.errors(n, dims);

    Vector vsum = zero;
    for (const auto& vk : v) vsum += vk;
    Vector p11 = p.A.resolvent(gamma, x - gamma * vsum);
    if (perturbed) p11 += e.b[0];
    for (std::size_t k = 0; k < K; ++k) {
      p1[k] = p.S[k].resolvent(gamma, y[k] + gamma * v[k]);
      if (perturbed) p1[k] += e.b[1 + k];
      s2[k] = v[k] - gamma * (y[k] - x);
      p2[k] = shifted_inverse_resolvent(p.B[k], zero, gamma, s2[k]);
      if (perturbed) p2[k] += e.b[vo + k];
    }

    std::vector<Vector> wb{x}, pb{p11};
    wb.insert(wb.end(), y.begin(), y.end());
    pb.insert(pb.end(), p1.begin(), p1.end());
    wb.insert(wb.end(), v.begin(), v.end());
    pb.insert(pb.end(), p2.begin(), p2.end());
    BlockVector w(std::move(wb)), pv(std::move(pb));
    require_finite(pv, n, "p");
    const bool done = record_iteration(trace, cfg, obs, n, gamma, w, pv);
    if (done || n + 1 >= cfg.max_iters) {
      trace.converged = done;
      trace.iterations = n;
      trace.w = std::move(w);
      trace.p = std::move(pv);
      break;
    }

    Vector xs = p11;
    for (std::size_t k = 0; k < K; ++k) {
      xs += gamma * (v[k] - p2[k]);
      y[k] = p1[k] + gamma * (p2[k] - v[k]);
      v[k] = v[k] - s2[k] + p2[k] - gamma * (p1[k] - p11);
    }
    x = std::move(xs);
    if (!x.allFinite()) throw DivergenceError(n + 1, "non-finite x");
  }
  return finish_single_primal(std::move(trace), lifted, K);
}

bool check_consistency_theorem(const CommonZeroProblem& p, const Vector& x, double tol) {
  if (x.size() != p.dim) return false;
  if ((x - p.A.resolvent(1.0, x)).norm() > tol) return false;
  for (const auto& b : p.B)
    if ((x - b.resolvent(1.0, x)).norm() > tol) return false;
  return true;
}

// ---- multivariate minimization ---------------------------------------------

void MultivariateMinProblem::validate() const {
  sig.validate();
  const std::size_t m = sig.m(), K = sig.K();
  if (f.size() != m || h.size() != m) throw SignatureError("need one f_i and h_i per primal block");
  if (g.size() != K || ell.size() != K) throw SignatureError("need one g_k and l_k per dual block");
  for (std::size_t i = 0; i < m; ++i) {
    if (f[i].dim != sig.primal[i] || h[i].dim != sig.primal[i])
      throw SignatureError("function dimension mismatch on primal block " + std::to_string(i));
    if (!h[i].grad) throw ParameterError("h_" + std::to_string(i) + " needs a Lipschitz gradient");
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (g[k].dim != sig.dual[k] || ell[k].dim != sig.dual[k])
      throw SignatureError("function dimension mismatch on dual block " + std::to_string(k));
    if (!ell[k].conj_grad)
      throw ParameterError("l_" + std::to_string(k) + " must be strongly convex (conjugate gradient)");
  }
  if (!(L.sig() == sig)) throw SignatureError("coupling grid signature differs");
  z.require(sig.primal, "z");
  r.require(sig.dual, "r");
}

CoupledInclusionProblem MultivariateMinProblem::as_system() const {
  validate();
  std::vector<MaximalMonotoneOp> A, B;
  std::vector<LipschitzOp> C, D;
  for (std::size_t i = 0; i < sig.m(); ++i) {
    A.push_back(subdifferential(f[i]));
    C.push_back(*h[i].grad);
  }
  for (std::size_t k = 0; k < sig.K(); ++k) {
    B.push_back(subdifferential(g[k]));
    D.push_back(*ell[k].conj_grad);
  }
  return CoupledInclusionProblem{sig, std::move(A), std::move(C), std::move(B), std::move(D), L, z, r};
}

const char* to_string(Qualification q) {
  switch (q) {
    case Qualification::HoldsByRealValuedF: return "holds: real-valued f with surjective row maps";
    case Qualification::HoldsByRealValuedCoupling: return "holds: real-valued g_k or l_k";
    case Qualification::Unknown: return "unknown";
  }
  return "unknown";
}

Qualification check_qualification(const MultivariateMinProblem& p) {
  const std::size_t m = p.sig.m(), K = p.sig.K();
  if (std::all_of(p.f.begin(), p.f.end(), [](const ConvexFn& f) { return f.real_valued; })) {
    bool surjective = true;
    for (std::size_t k = 0; k < K && surjective; ++k) {
      Matrix row(p.sig.dual[k], 0);
      for (std::size_t i = 0; i < m; ++i) {
        const Matrix blk = p.L.entry(k, i).to_dense();
        Matrix grown(row.rows(), row.cols() + blk.cols());
        grown << row, blk;
        row = std::move(grown);
      }
      Eigen::JacobiSVD<Matrix> svd(row);
      const auto& sv = svd.singularValues();
      const long rank = (sv.array() > 1e-10).count();
      surjective = rank >= row.rows();
    }
    if (surjective) return Qualification::HoldsByRealValuedF;
  }
  bool coupling = true;
  for (std::size_t k = 0; k < K; ++k) coupling = coupling && (p.g[k].real_valued || p.ell[k].real_valued);
  return coupling ? Qualification::HoldsByRealValuedCoupling : Qualification::Unknown;
}

ObjectiveValues evaluate_objectives(const MultivariateMinProblem& p, const BlockVector& x,
                                    const BlockVector& v, bool allow_numeric) {
  x.require(p.sig.primal, "x");
  v.require(p.sig.dual, "v");
  ObjectiveValues out;
  const BlockVector Lx = p.L.apply(x);
  for (std::size_t i = 0; i < p.sig.m(); ++i)
    out.primal += eval_or_throw(p.f[i], x[i]) + eval_or_throw(p.h[i], x[i]) - x[i].dot(p.z[i]);
  for (std::size_t k = 0; k < p.sig.K(); ++k)
    out.primal += infimal_convolution(p.g[k], p.ell[k], Lx[k] - p.r[k], allow_numeric);

  const BlockVector Ltv = p.L.apply_adjoint(v);
  for (std::size_t i = 0; i < p.sig.m(); ++i)
    out.dual += infimal_convolution(conjugate(p.f[i]), conjugate(p.h[i]), p.z[i] - Ltv[i], allow_numeric);
  for (std::size_t k = 0; k < p.sig.K(); ++k) {
    const ConvexFn gs = conjugate(p.g[k]), ls = conjugate(p.ell[k]);
    out.dual += eval_or_throw(gs, v[k]) + eval_or_throw(ls, v[k]) + v[k].dot(p.r[k]);
  }
  return out;
}

SolveReport solve_multivariate_min(const MultivariateMinProblem& p, const FbfConfig& cfg,
                                   const Observer& observer) {
  const CoupledInclusionProblem sys = p.as_system();
  const std::size_t m = p.sig.m(), K = p.sig.K();
  bool evaluable = true;
  Observer objectives = [&](const IterationView& view, IterationRecord& rec) {
    if (evaluable) {
      try {
        const auto o = evaluate_objectives(p, view.p.slice(0, m), view.p.slice(m, K), false);
        rec.primal_obj = o.primal;
        rec.dual_obj = o.dual;
        if (std::isfinite(o.primal) && std::isfinite(o.dual)) rec.gap = o.gap();
      } catch (const UnsupportedEvaluation&) {
        evaluable = false;
      }
    }
    if (observer) observer(view, rec);
  };
  return solve_system(sys, cfg, cfg.keep_history ? objectives : observer);
}

// ---- univariate minimization -------------------------------------------------

void UnivariateMinProblem::validate() const {
  const std::size_t K = g.size();
  if (K < 1) throw SignatureError("univariate problem needs K >= 1");
  if (!(K1 <= K2 && K2 <= K)) throw ParameterError("partition needs 0 <= K1 <= K2 <= K");
  if (phi.size() != K || L.size() != K || r.size() != K)
    throw SignatureError("need one phi_k, L_k and r_k per term");
  if (f.dim != dim || h.dim != dim || z.size() != dim)
    throw SignatureError("f, h and z must live on the base space");
  if (!h.grad) throw ParameterError("h needs a Lipschitz gradient");
  for (std::size_t k = 0; k < K; ++k) {
    if (phi[k].dim != g[k].dim) throw SignatureError("phi_k and g_k dimension mismatch");
    require_entry(L[k], g[k].dim, dim, k);
    if (k >= K1 && k < K2 && !phi[k].grad)
      throw ParameterError("phi_" + std::to_string(k) + " needs a Lipschitz gradient");
    if (k >= K2 && !phi[k].conj_grad)
      throw ParameterError("phi_" + std::to_string(k) + " must be strongly convex");
  }
}

ParallelSumProblem UnivariateMinProblem::as_parallel_sum() const {
  validate();
  std::vector<MaximalMonotoneOp> B;
  std::vector<ParallelSumS> S;
  for (std::size_t k = 0; k < g.size(); ++k) {
    B.push_back(subdifferential(g[k]));
    if (k < K1) S.emplace_back(subdifferential(phi[k]));
    else if (k < K2) S.emplace_back(*phi[k].grad);
    else S.emplace_back(*phi[k].conj_grad);
  }
  return ParallelSumProblem{dim, K1, K2, z, subdifferential(f), *h.grad, std::move(B), std::move(S), L, r};
}

SolveReport solve_univariate_min(const UnivariateMinProblem& p, const FbfConfig& cfg,
                                 const Observer& observer) {
  return solve_parallel_sum(p.as_parallel_sum(), cfg, observer);
}

// ---- feasibility ---------------------------------------------------------------

ConvexFn Penalty::function(int dim) const {
  switch (kind) {
    case Kind::Hard: return catalog::indicator(ConvexSet::point(Vector::Zero(dim)));
    case Kind::SquaredNorm: return catalog::sq_norm(dim, omega);
    case Kind::Norm: return catalog::norm2(dim, omega);
  }
  throw ParameterError("unknown penalty");
}

void FeasibilityRelaxation::validate() const {
  if (sets.empty()) throw SignatureError("feasibility problem needs at least one set");
  if (penalties.size() != sets.size() || L.size() != sets.size())
    throw SignatureError("need one penalty and one L_k per set");
  for (std::size_t k = 0; k < sets.size(); ++k) {
    require_entry(L[k], sets[k].dim(), dim, k);
    if (penalties[k].kind != Penalty::Kind::Hard && !(penalties[k].omega > 0.0))
      throw ParameterError("penalty weight omega must be positive");
  }
}

UnivariateMinProblem FeasibilityRelaxation::as_univariate() const {
  validate();
  UnivariateMinProblem u;
  u.dim = dim;
  u.K1 = u.K2 = sets.size();
  u.z = Vector::Zero(dim);
  u.f = catalog::zero_fn(dim);
  u.h = catalog::zero_fn(dim);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    u.g.push_back(catalog::indicator(sets[k]));
    u.phi.push_back(penalties[k].function(sets[k].dim()));
    u.r.push_back(Vector::Zero(sets[k].dim()));
  }
  u.L = L;
  return u;
}

double feasibility_objective(const FeasibilityRelaxation& p, const Vector& x, double hard_tol) {
  double total = 0.0;
  for (std::size_t k = 0; k < p.K(); ++k) {
    const Vector y = p.L[k].apply(x);
    const double d = p.sets[k].distance(y);
    switch (p.penalties[k].kind) {
      case Penalty::Kind::Hard:
        if (d > hard_tol * (1.0 + y.norm())) return kInf;
        break;
      case Penalty::Kind::SquaredNorm: total += p.penalties[k].omega * d * d; break;
      case Penalty::Kind::Norm: total += p.penalties[k].omega * d; break;
    }
  }
  return total;
}

SolveReport solve_feasibility_relaxation(const FeasibilityRelaxation& p, const FbfConfig& cfg,
                                         const Observer& observer) {
  return solve_univariate_min(p.as_univariate(), cfg, observer);
}

}  // namespace monosplit
