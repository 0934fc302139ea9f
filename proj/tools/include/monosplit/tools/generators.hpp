#pragma once

// Seeded random instances for property checks, acceptance runs and benchmarks.

#include "monosplit/catalog.hpp"
#include "monosplit/reductions.hpp"

#include <cstdint>
#include <random>

namespace monosplit::tools {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>()(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  Vector vector(int n, double scale = 1.0);
  Matrix matrix(int rows, int cols, double scale = 1.0);
  Vector unit(int n);
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Random catalog operator on R^dim (linear, normal cones, subdifferentials).
MaximalMonotoneOp random_monotone(Rng& rng, int dim);
/// Random monotone Lipschitz map (zero, scaled identity or monotone affine).
LipschitzOp random_lipschitz(Rng& rng, int dim);
/// Random admissible parameters for a catalog id on R^dim.
CatalogSpec random_catalog_spec(Rng& rng, const std::string& id, int dim);

/// Zero, identity, scalar or dense, chosen at random.
LinearEntry random_entry(Rng& rng, int rows, int cols);

/// m, K <= max_blocks; dimensions <= max_dim.
CoupledInclusionProblem random_system(Rng& rng, int max_blocks = 3, int max_dim = 4);

/// Random partition and roles; K <= max_terms.
ParallelSumProblem random_parallel_sum(Rng& rng, int max_terms = 3, int max_dim = 3);

struct LegendreInstance {
  std::vector<Vector> u;  // unit normals
  std::vector<double> rho;
  CommonZeroProblem problem;
};

/// Relaxed hyperplane system in R^N with K unit normals (K >= N keeps the
/// least-squares solution unique with probability one).
LegendreInstance legendre_instance(const std::vector<Vector>& u, const std::vector<double>& rho);
LegendreInstance random_legendre(Rng& rng, int N, int K);

struct ConsistentCommonZero {
  Vector common_point;
  CommonZeroProblem problem;
};

/// Normal cones of boxes and balls sharing a known point, S_k = c_k Id.
ConsistentCommonZero random_consistent_common_zero(Rng& rng, int max_dim = 3, int max_terms = 4);

/// Box C_1 as a hard constraint plus N hyperplanes with squared-distance
/// penalties, L_k = Id; the relaxed objective is strictly convex.
FeasibilityRelaxation random_box_feasibility(Rng& rng, int N);

/// Instances whose objectives have closed forms and whose g_k are real-valued.
MultivariateMinProblem random_duality_instance(Rng& rng, int max_blocks = 2, int max_dim = 2);

}  // namespace monosplit::tools
