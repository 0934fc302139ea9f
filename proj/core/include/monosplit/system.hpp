#pragma once

// Coupled system of m primal inclusions
//   z_i in A_i x_i + sum_k L_ki^* ((B_k [] D_k)(sum_j L_kj x_j - r_k)) + C_i x_i
// solved jointly with its dual, by a forward-backward-forward primal-dual
// iteration whose per-block steps run independently.

#include "monosplit/block.hpp"
#include "monosplit/fbf.hpp"
#include "monosplit/operators.hpp"

#include <optional>
#include <vector>

namespace monosplit {

struct CoupledInclusionProblem {
  SpaceSig sig;
  std::vector<MaximalMonotoneOp> A;  // on H_i
  std::vector<LipschitzOp> C;        // on H_i, constants mu_i
  std::vector<MaximalMonotoneOp> B;  // on G_k
  std::vector<LipschitzOp> Dinv;     // D_k^{-1} on G_k, constants nu_k
  BlockLinearOp L;
  BlockVector z;  // primal shifts
  BlockVector r;  // dual shifts

  /// Throws SignatureError on any count or dimension mismatch.
  void validate() const;
  std::vector<int> stacked_dims() const;
};

struct KktResidual {
  double primal = 0.0;
  double dual = 0.0;
};

struct SolveReport {
  BlockVector primal;
  BlockVector dual;
  FbfTrace trace;
  KktResidual kkt;

  bool converged() const noexcept { return trace.converged; }
};

/// max(mu_i, nu_k) + sqrt(lambda). Throws ParameterError when it is zero.
double compute_beta(const CoupledInclusionProblem& prob);

/// Runs the primal-dual iteration with chi = compute_beta(prob). `start` is the
/// stacked (x, v); zero by default. The reported pair is the last resolvent
/// output (p_1, p_2). Error slots of cfg.errors are laid out over the stacked
/// space: primal blocks first, then dual blocks.
SolveReport solve_system(const CoupledInclusionProblem& prob, const FbfConfig& cfg,
                         const Observer& observer = {},
                         const std::optional<BlockVector>& start = std::nullopt);

/// Certified residuals of
///   z_i - sum_k L_ki^* v_k - C_i x_i in A_i x_i,
///   sum_i L_ki x_i - r_k - D_k^{-1} v_k in B_k^{-1} v_k.
/// u in T(p) is measured as ||p - J_T(p + u)|| / (1 + ||p|| + ||u||); each
/// component is the max over blocks.
KktResidual kkt_residual(const CoupledInclusionProblem& prob, const BlockVector& x,
                         const BlockVector& v);

/// The operator pair (P, Q) on H x G whose zeros are the primal-dual solutions:
///   P(x, v) = (-z + A x) x (r + B^{-1} v),  Q(x, v) = (C x + L^* v, D^{-1} v - L x).
std::pair<ProductMonotone, ProductLipschitz> product_space_pair(const CoupledInclusionProblem& prob);

/// Fills primal_kkt / dual_kkt of each record from the current p.
Observer kkt_observer(const CoupledInclusionProblem& prob, Observer next = {});

}  // namespace monosplit
