#pragma once

// Structured special cases of the coupled system: a single primal inclusion
// with parallel-sum couplings, common zeros of relaxed operators, multivariate
// and univariate composite minimization, and relaxed convex feasibility.

#include "monosplit/sets.hpp"
#include "monosplit/system.hpp"

#include <variant>
#include <vector>

namespace monosplit {

// ---------------------------------------------------------------------------
// z in A x + sum_k L_k^* ((B_k [] S_k)(L_k x - r_k)) + C x

/// Terms k < K1 use S_k through its resolvent; K1 <= k < K2 hold S_k as a
/// Lipschitz map; k >= K2 hold S_k^{-1} as a Lipschitz map (0-based k).
using ParallelSumS = std::variant<MaximalMonotoneOp, LipschitzOp>;

struct ParallelSumProblem {
  int dim = 0;
  std::size_t K1 = 0;
  std::size_t K2 = 0;
  Vector z;
  MaximalMonotoneOp A;
  LipschitzOp C;
  std::vector<MaximalMonotoneOp> B;
  std::vector<ParallelSumS> S;
  std::vector<LinearEntry> L;  // G_k x dim
  std::vector<Vector> r;

  std::size_t K() const noexcept { return B.size(); }
  std::vector<int> dual_dims() const;
  void validate() const;
  /// max{mu, beta_{K1+1..K}} + sqrt(1 + sum_k ||L_k||^2)
  double beta() const;
};

/// Equivalent coupled system on H x G_1 x ... x G_{K2} with auxiliary blocks
/// y_k: A_{k+1} = S_k or 0, C_{k+1} = 0 or S_k, D_k^{-1} = 0 or S_k^{-1},
/// L_{k,k+1} = -Id, and lambda = 1 + sum_k ||L_k||^2.
CoupledInclusionProblem lift_parallel_sum(const ParallelSumProblem& p);

/// Direct iteration on (x, y_1..y_{K2}, v_1..v_K), using each Lipschitz S_k or
/// S_k^{-1} through explicit steps. Error slots follow the lifted layout.
/// The report's primal part is the single block x; trace.w / trace.p hold
/// the full lifted state.
SolveReport solve_parallel_sum(const ParallelSumProblem& p, const FbfConfig& cfg,
                               const Observer& observer = {});

// ---------------------------------------------------------------------------
// 0 in A x + sum_k (B_k [] S_k) x

struct CommonZeroProblem {
  int dim = 0;
  MaximalMonotoneOp A;
  std::vector<MaximalMonotoneOp> B;
  std::vector<MaximalMonotoneOp> S;

  std::size_t K() const noexcept { return B.size(); }
  void validate() const;
  /// Same problem as a parallel sum with K1 = K2 = K, L_k = Id, z = r = 0, C = 0.
  ParallelSumProblem as_parallel_sum() const;
};

/// Runs with chi = sqrt(K + 1). Only the b slots of cfg.errors are used.
SolveReport solve_common_zero(const CommonZeroProblem& p, const FbfConfig& cfg,
                              const Observer& observer = {});

/// True iff x is within tol of a common zero of A and every B_k, measured as
/// ||x - J_T x||.
bool check_consistency_theorem(const CommonZeroProblem& p, const Vector& x, double tol);

// ---------------------------------------------------------------------------
// minimize sum_i f_i(x_i) + sum_k (g_k [] l_k)(sum_i L_ki x_i - r_k)
//          + sum_i (h_i(x_i) - <x_i, z_i>)

struct MultivariateMinProblem {
  SpaceSig sig;
  std::vector<ConvexFn> f;    // prox
  std::vector<ConvexFn> h;    // gradient
  std::vector<ConvexFn> g;    // prox
  std::vector<ConvexFn> ell;  // gradient of the conjugate
  BlockLinearOp L;
  BlockVector z;
  BlockVector r;

  void validate() const;
  /// A_i = df_i, C_i = grad h_i, B_k = dg_k, D_k^{-1} = grad l_k^*.
  CoupledInclusionProblem as_system() const;
};

enum class Qualification { HoldsByRealValuedF, HoldsByRealValuedCoupling, Unknown };

const char* to_string(Qualification q);

/// Checks only the two mechanically decidable sufficient conditions: every f_i
/// real-valued with each row map x -> sum_i L_ki x_i surjective (tested first),
/// or every g_k or l_k real-valued.
Qualification check_qualification(const MultivariateMinProblem& p);

struct ObjectiveValues {
  double primal = 0.0;
  double dual = 0.0;
  double gap() const noexcept { return primal + dual; }
};

/// Primal and dual objective values, +infinity outside the domain. Infimal
/// convolutions have closed forms when one side is zero, the indicator of
/// {0} or omega ||.||^2; otherwise `allow_numeric` permits a grid search with
/// local polishing in dimension <= 2. Throws UnsupportedEvaluation when no
/// evaluator applies.
ObjectiveValues evaluate_objectives(const MultivariateMinProblem& p, const BlockVector& x,
                                    const BlockVector& v, bool allow_numeric = true);

/// Runs solve_system on as_system(); records carry objective values whenever
/// they are available in closed form.
SolveReport solve_multivariate_min(const MultivariateMinProblem& p, const FbfConfig& cfg,
                                   const Observer& observer = {});

// ---------------------------------------------------------------------------
// minimize f(x) + sum_k (g_k [] phi_k)(L_k x - r_k) + h(x) - <x, z>

struct UnivariateMinProblem {
  int dim = 0;
  std::size_t K1 = 0;
  std::size_t K2 = 0;
  Vector z;
  ConvexFn f;
  ConvexFn h;
  std::vector<ConvexFn> g;
  /// k < K1: prox; K1 <= k < K2: gradient; k >= K2: gradient of the conjugate.
  std::vector<ConvexFn> phi;
  std::vector<LinearEntry> L;
  std::vector<Vector> r;

  std::size_t K() const noexcept { return g.size(); }
  void validate() const;
  /// A = df, C = grad h, B_k = dg_k, S_k = dphi_k.
  ParallelSumProblem as_parallel_sum() const;
};

SolveReport solve_univariate_min(const UnivariateMinProblem& p, const FbfConfig& cfg,
                                 const Observer& observer = {});

// ---------------------------------------------------------------------------
// minimize sum_k min_{y in C_k} phi_k(L_k x - y)

/// Penalties with Argmin = {0} and value 0 at 0.
struct Penalty {
  enum class Kind { Hard, SquaredNorm, Norm };
  Kind kind = Kind::Hard;
  double omega = 1.0;

  static Penalty hard() { return {Kind::Hard, 1.0}; }
  static Penalty squared_norm(double omega) { return {Kind::SquaredNorm, omega}; }
  static Penalty norm(double omega) { return {Kind::Norm, omega}; }
  ConvexFn function(int dim) const;
};

struct FeasibilityRelaxation {
  int dim = 0;
  std::vector<ConvexSet> sets;
  std::vector<Penalty> penalties;
  std::vector<LinearEntry> L;

  std::size_t K() const noexcept { return sets.size(); }
  void validate() const;
  /// K1 = K2 = K, f = h = 0, z = r = 0, g_k = indicator of C_k.
  UnivariateMinProblem as_univariate() const;
};

/// Relaxed objective. Hard penalties count as satisfied when
/// d_{C_k}(L_k x) <= hard_tol (1 + ||L_k x||) and +infinity otherwise.
double feasibility_objective(const FeasibilityRelaxation& p, const Vector& x,
                             double hard_tol = 1e-6);

SolveReport solve_feasibility_relaxation(const FeasibilityRelaxation& p, const FbfConfig& cfg,
                                         const Observer& observer = {});

}  // namespace monosplit
