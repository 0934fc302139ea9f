#include "monosplit/tools/generators.hpp"

#include "monosplit/catalog.hpp"

#include <cmath>

namespace monosplit::tools {

Vector Rng::vector(int n, double scale) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * normal();
  return v;
}

Matrix Rng::matrix(int rows, int cols, double scale) {
  Matrix M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) M(r, c) = scale * normal();
  return M;
}

Vector Rng::unit(int n) {
  Vector v;
  do {
    v = vector(n);
  } while (v.norm() < 1e-3);
  return v.normalized();
}

namespace {

Matrix monotone_matrix(Rng& rng, int n) {
  const Matrix P = rng.matrix(n, n, 0.7);
  const Matrix W = rng.matrix(n, n, 0.5);
  return P * P.transpose() + (W - W.transpose());
}

ConvexSet random_box(Rng& rng, int n) {
  Vector lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo(i) = rng.uniform(-2.0, 1.0);
    hi(i) = lo(i) + rng.uniform(0.2, 2.0);
  }
  return ConvexSet::box(lo, hi);
}

std::vector<double> as_list(const Vector& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> as_list(const Matrix& M) {
  std::vector<double> out;
  for (Eigen::Index r = 0; r < M.rows(); ++r)
    for (Eigen::Index c = 0; c < M.cols(); ++c) out.push_back(M(r, c));
  return out;
}

}  // namespace

CatalogSpec random_catalog_spec(Rng& rng, const std::string& id, int dim) {
  CatalogSpec s{id, {}};
  auto& P = s.params;
  auto tail = [&](const std::string& prefix) {
    return id.rfind(prefix, 0) == 0 ? id.substr(prefix.size()) : std::string();
  };
  std::string set = tail("normal_");
  if (set.empty()) set = tail("indicator_");
  if (set.empty()) set = tail("support_");
  if (set == "box") {
    const ConvexSet b = random_box(rng, dim);
    P["lo"] = as_list(b.first());
    P["hi"] = as_list(b.second());
  } else if (set == "ball") {
    P["center"] = as_list(rng.vector(dim));
    P["radius"] = {rng.uniform(0.3, 2.0)};
  } else if (set == "halfspace") {
    P["a"] = as_list(rng.unit(dim));
    P["beta"] = {rng.normal()};
  } else if (set == "hyperplane") {
    P["u"] = as_list(rng.unit(dim));
    P["rho"] = {rng.normal()};
  } else if (set == "point") {
    P["c"] = as_list(rng.vector(dim));
  } else if (id == "scaled_identity") {
    P["c"] = {rng.uniform(0.0, 2.0)};
  } else if (id == "affine") {
    P["M"] = as_list(monotone_matrix(rng, dim));
    P["b"] = as_list(rng.vector(dim));
  } else if (id == "l1") {
    P["w"] = {rng.uniform(0.1, 2.0)};
  } else if (id == "sq_dist") {
    P["a"] = as_list(rng.vector(dim));
  } else if (id == "sq_norm" || id == "norm2") {
    P["omega"] = {rng.uniform(0.1, 2.0)};
  }
  return s;
}

MaximalMonotoneOp random_monotone(Rng& rng, int dim) {
  switch (rng.integer(0, 8)) {
    case 0: return catalog::zero_op(dim);
    case 1: return catalog::scaled_identity(dim, rng.uniform(0.0, 2.0));
    case 2: return catalog::affine(monotone_matrix(rng, dim), rng.vector(dim));
    case 3: return catalog::normal_cone(random_box(rng, dim));
    case 4: return catalog::normal_cone(ConvexSet::ball(rng.vector(dim), rng.uniform(0.3, 2.0)));
    case 5: return catalog::normal_cone(ConvexSet::halfspace(rng.unit(dim), rng.normal()));
    case 6: return subdifferential(catalog::l1(dim, rng.uniform(0.1, 2.0)));
    case 7: return subdifferential(catalog::sq_dist(rng.vector(dim)));
    default: return catalog::normal_cone(ConvexSet::hyperplane(rng.unit(dim), rng.normal()));
  }
}

LipschitzOp random_lipschitz(Rng& rng, int dim) {
  switch (rng.integer(0, 2)) {
    case 0: return LipschitzOp::zero(dim);
    case 1: return catalog::scaled_identity_map(dim, rng.uniform(0.1, 2.0));
    default: return catalog::affine_map(monotone_matrix(rng, dim), rng.vector(dim));
  }
}

LinearEntry random_entry(Rng& rng, int rows, int cols) {
  const int pick = rng.integer(0, 9);
  if (rows == cols && pick == 0) return LinearEntry::identity(rows);
  if (rows == cols && pick == 1) return LinearEntry::scalar(rows, rng.uniform(-2.0, 2.0));
  if (pick == 2) return LinearEntry::zero(rows, cols);
  return LinearEntry::dense(rng.matrix(rows, cols));
}

CoupledInclusionProblem random_system(Rng& rng, int max_blocks, int max_dim) {
  SpaceSig sig;
  const int m = rng.integer(1, max_blocks), K = rng.integer(1, max_blocks);
  for (int i = 0; i < m; ++i) sig.primal.push_back(rng.integer(1, max_dim));
  for (int k = 0; k < K; ++k) sig.dual.push_back(rng.integer(1, max_dim));
  std::vector<MaximalMonotoneOp> A, B;
  std::vector<LipschitzOp> C, D;
  std::vector<Vector> z, r;
  for (int d : sig.primal) {
    A.push_back(random_monotone(rng, d));
    C.push_back(random_lipschitz(rng, d));
    z.push_back(rng.vector(d));
  }
  for (int d : sig.dual) {
    B.push_back(random_monotone(rng, d));
    D.push_back(random_lipschitz(rng, d));
    r.push_back(rng.vector(d));
  }
  std::vector<LinearEntry> entries;
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < m; ++i) entries.push_back(random_entry(rng, sig.dual[k], sig.primal[i]));
  // Keep beta > 0 by coupling the first blocks.
  entries[0] = LinearEntry::dense(rng.matrix(sig.dual[0], sig.primal[0]));
  return CoupledInclusionProblem{sig,
                                 std::move(A),
                                 std::move(C),
                                 std::move(B),
                                 std::move(D),
                                 BlockLinearOp(sig, std::move(entries)),
                                 BlockVector(std::move(z)),
                                 BlockVector(std::move(r))};
}

ParallelSumProblem random_parallel_sum(Rng& rng, int max_terms, int max_dim) {
  const int n = rng.integer(1, max_dim);
  const std::size_t K = static_cast<std::size_t>(rng.integer(1, max_terms));
  const std::size_t K2 = static_cast<std::size_t>(rng.integer(0, static_cast<int>(K)));
  const std::size_t K1 = static_cast<std::size_t>(rng.integer(0, static_cast<int>(K2)));
  std::vector<MaximalMonotoneOp> B;
  std::vector<ParallelSumS> S;
  std::vector<LinearEntry> L;
  std::vector<Vector> r;
  for (std::size_t k = 0; k < K; ++k) {
    const int g = rng.integer(1, max_dim);
    B.push_back(random_monotone(rng, g));
    if (k < K1) S.emplace_back(random_monotone(rng, g));
    else S.emplace_back(random_lipschitz(rng, g));
    L.push_back(LinearEntry::dense(rng.matrix(g, n)));
    r.push_back(rng.vector(g));
  }
  return ParallelSumProblem{n,
                            K1,
                            K2,
                            rng.vector(n),
                            random_monotone(rng, n),
                            random_lipschitz(rng, n),
                            std::move(B),
                            std::move(S),
                            std::move(L),
                            std::move(r)};
}

LegendreInstance legendre_instance(const std::vector<Vector>& u, const std::vector<double>& rho) {
  const int N = static_cast<int>(u.front().size());
  std::vector<MaximalMonotoneOp> B, S;
  for (std::size_t k = 0; k < u.size(); ++k) {
    B.push_back(catalog::normal_cone(ConvexSet::hyperplane(u[k], rho[k])));
    S.push_back(catalog::scaled_identity(N, 1.0));
  }
  return LegendreInstance{u, rho, CommonZeroProblem{N, catalog::zero_op(N), std::move(B), std::move(S)}};
}

LegendreInstance random_legendre(Rng& rng, int N, int K) {
  std::vector<Vector> u;
  std::vector<double> rho;
  for (int k = 0; k < K; ++k) {
    u.push_back(rng.unit(N));
    rho.push_back(rng.uniform(-3.0, 3.0));
  }
  return legendre_instance(u, rho);
}

ConsistentCommonZero random_consistent_common_zero(Rng& rng, int max_dim, int max_terms) {
  const int n = rng.integer(1, max_dim);
  const int K = rng.integer(1, max_terms);
  const Vector c = rng.vector(n);
  auto box_around = [&] {
    Vector lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo(i) = c(i) - rng.uniform(0.0, 1.5);
      hi(i) = c(i) + rng.uniform(0.0, 1.5);
    }
    return ConvexSet::box(lo, hi);
  };
  std::vector<MaximalMonotoneOp> B, S;
  for (int k = 0; k < K; ++k) {
    if (rng.integer(0, 1) == 0) {
      B.push_back(catalog::normal_cone(box_around()));
    } else {
      const Vector offset = rng.vector(n, 0.7);
      B.push_back(catalog::normal_cone(ConvexSet::ball(c + offset, offset.norm() + rng.uniform(0.05, 1.0))));
    }
    S.push_back(catalog::scaled_identity(n, rng.uniform(0.5, 2.0)));
  }
  return ConsistentCommonZero{
      c, CommonZeroProblem{n, catalog::normal_cone(box_around()), std::move(B), std::move(S)}};
}

FeasibilityRelaxation random_box_feasibility(Rng& rng, int N) {
  FeasibilityRelaxation p;
  p.dim = N;
  p.sets.push_back(random_box(rng, N));
  p.penalties.push_back(Penalty::hard());
  p.L.push_back(LinearEntry::identity(N));
  const Eigen::HouseholderQR<Matrix> qr(rng.matrix(N, N));
  const Matrix Q = qr.householderQ();
  for (int k = 0; k < N; ++k) {
    p.sets.push_back(ConvexSet::hyperplane(Q.col(k), rng.uniform(-3.0, 3.0)));
    p.penalties.push_back(Penalty::squared_norm(rng.uniform(0.5, 2.0)));
    p.L.push_back(LinearEntry::identity(N));
  }
  return p;
}

MultivariateMinProblem random_duality_instance(Rng& rng, int max_blocks, int max_dim) {
  MultivariateMinProblem p;
  const int m = rng.integer(1, max_blocks), K = rng.integer(1, max_blocks);
  for (int i = 0; i < m; ++i) p.sig.primal.push_back(rng.integer(1, max_dim));
  for (int k = 0; k < K; ++k) p.sig.dual.push_back(rng.integer(1, max_dim));
  std::vector<Vector> z, r;
  for (int d : p.sig.primal) {
    switch (rng.integer(0, 2)) {
      case 0: p.f.push_back(catalog::indicator(random_box(rng, d))); break;
      case 1: p.f.push_back(catalog::sq_dist(rng.vector(d))); break;
      default: p.f.push_back(catalog::l1(d, rng.uniform(1.0, 2.0))); break;
    }
    p.h.push_back(rng.integer(0, 1) ? catalog::zero_fn(d) : catalog::sq_norm(d, rng.uniform(0.2, 1.0)));
    Vector zi(d);
    for (int j = 0; j < d; ++j) zi(j) = rng.uniform(-0.5, 0.5);
    z.push_back(zi);
  }
  for (int d : p.sig.dual) {
    switch (rng.integer(0, 3)) {
      case 0: p.g.push_back(catalog::sq_dist(rng.vector(d))); break;
      case 1: p.g.push_back(catalog::l1(d, rng.uniform(0.2, 1.5))); break;
      case 2: p.g.push_back(catalog::norm2(d, rng.uniform(0.2, 1.5))); break;
      default: p.g.push_back(catalog::sq_norm(d, rng.uniform(0.2, 1.0))); break;
    }
    p.ell.push_back(rng.integer(0, 1) ? catalog::indicator(ConvexSet::point(Vector::Zero(d)))
                                      : catalog::sq_norm(d, rng.uniform(0.5, 2.0)));
    r.push_back(rng.vector(d, 0.5));
  }
  std::vector<LinearEntry> entries;
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < m; ++i)
      entries.push_back(LinearEntry::dense(rng.matrix(p.sig.dual[k], p.sig.primal[i], 0.8)));
  p.L = BlockLinearOp(p.sig, std::move(entries));
  p.z = BlockVector(std::move(z));
  p.r = BlockVector(std::move(r));
  return p;
}

}  // namespace monosplit::tools
