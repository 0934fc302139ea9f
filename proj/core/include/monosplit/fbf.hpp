#pragma once

// Error-tolerant forward-backward-forward iteration for 0 in P w + Q w, with P
// maximally monotone (resolvent access) and Q monotone and Lipschitz:
//   s_n = w_n - gamma_n (Q w_n + a_n)
//   p_n = J_{gamma_n P} s_n + b_n
//   q_n = p_n - gamma_n (Q p_n + c_n)
//   w_{n+1} = w_n - s_n + q_n

#include "monosplit/block.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace monosplit {

/// Perturbations (a_n, b_n, c_n) injected at one iteration.
struct ErrorTriple {
  BlockVector a;
  BlockVector b;
  BlockVector c;
};

/// n, block dimensions of the iterate -> perturbations at iteration n.
using ErrorSchedule = std::function<ErrorTriple(std::size_t n, std::span<const int> dims)>;

/// Pseudo-random unit directions scaled by eta / (n+1)^p, one independent
/// direction per slot. Deterministic in (seed, n, slot). Throws for p <= 1 or eta < 0.
ErrorSchedule summable_error_schedule(double eta, double p, std::uint64_t seed);

struct FbfConfig {
  double epsilon = 1e-2;
  /// Constant step; defaults to (1 - epsilon) / chi.
  std::optional<double> gamma;
  /// Iteration-dependent step, takes precedence over `gamma`.
  std::function<double(std::size_t)> gamma_schedule;
  std::size_t max_iters = 200000;
  /// Stop when ||w_n - p_n|| / max(1, ||w_n||) <= residual_tol.
  double residual_tol = 1e-9;
  /// Empty means exact evaluations.
  ErrorSchedule errors;
  bool keep_history = true;
};

/// Throws ParameterError unless chi > 0, 0 < epsilon < 1/(chi+1), max_iters >= 1,
/// residual_tol >= 0 and a constant gamma (if any) lies in [epsilon, (1-epsilon)/chi].
void validate_config(const FbfConfig& cfg, double chi);

/// gamma_n, checked against [epsilon, (1-epsilon)/chi].
double step_size(const FbfConfig& cfg, double chi, std::size_t n);

struct IterationRecord {
  std::size_t iter = 0;
  double gamma = 0.0;
  /// ||w_n - p_n||
  double residual = 0.0;
  /// ||w_{n,j} - p_{n,j}||^2 for every block j.
  std::vector<double> block_sq_residuals;
  std::optional<double> primal_kkt;
  std::optional<double> dual_kkt;
  std::optional<double> primal_obj;
  std::optional<double> dual_obj;
  std::optional<double> gap;
};

struct FbfTrace {
  std::vector<IterationRecord> records;
  /// Last w_n and p_n computed (at the stopping iteration, p_n is the resolvent output).
  BlockVector w;
  BlockVector p;
  bool converged = false;
  std::size_t iterations = 0;
};

/// State passed to observers once per iteration, after p_n is formed.
struct IterationView {
  std::size_t n;
  double gamma;
  const BlockVector& w;
  const BlockVector& p;
};

/// May fill the optional columns of the record.
using Observer = std::function<void(const IterationView&, IterationRecord&)>;

/// Set-valued operator on a product space, through its resolvent.
struct ProductMonotone {
  std::vector<int> dims;
  std::function<BlockVector(double gamma, const BlockVector& w)> resolvent;
};

/// Single-valued Lipschitz operator on a product space.
struct ProductLipschitz {
  std::vector<int> dims;
  std::function<BlockVector(const BlockVector& w)> map;
  double lipschitz = 0.0;
};

/// Runs the iteration from w0. Requires chi >= Q.lipschitz.
/// Throws DivergenceError on a non-finite iterate.
FbfTrace fbf_solve(const ProductMonotone& P, const ProductLipschitz& Q, double chi,
                   const BlockVector& w0, const FbfConfig& cfg, const Observer& observer = {});

/// Shared stopping rule.
inline bool fixed_point_reached(double residual, double w_norm, double tol) {
  return residual / (w_norm > 1.0 ? w_norm : 1.0) <= tol;
}

}  // namespace monosplit
