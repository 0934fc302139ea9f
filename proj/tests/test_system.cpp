#include "monosplit/catalog.hpp"
#include "monosplit/errors.hpp"
#include "monosplit/system.hpp"
#include "monosplit/tools/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace monosplit;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

ConvexSet interval(double lo, double hi) { return ConvexSet::box(v1(lo), v1(hi)); }

// Two scalar blocks with L = [Id, -Id] on a single dual block.
CoupledInclusionProblem two_blocks(MaximalMonotoneOp A1, MaximalMonotoneOp A2, MaximalMonotoneOp B,
                                   LipschitzOp Dinv) {
  return CoupledInclusionProblem{
      SpaceSig{{1, 1}, {1}},
      {std::move(A1), std::move(A2)},
      {LipschitzOp::zero(1), LipschitzOp::zero(1)},
      {std::move(B)},
      {std::move(Dinv)},
      BlockLinearOp(SpaceSig{{1, 1}, {1}}, {LinearEntry::identity(1), LinearEntry::scalar(1, -1.0)}),
      BlockVector::zeros(std::vector<int>{1, 1}),
      BlockVector::zeros(std::vector<int>{1})};
}

// min over [2,3] x [0,1] of (1/2)(x1 - x2)^2.
CoupledInclusionProblem closest_points() {
  return two_blocks(catalog::normal_cone(interval(2, 3)), catalog::normal_cone(interval(0, 1)),
                    catalog::scaled_identity(1, 1.0), LipschitzOp::zero(1));
}

// 2 = x + x after eliminating v = x.
CoupledInclusionProblem scalar_system() {
  return CoupledInclusionProblem{SpaceSig{{1}, {1}},
                                 {catalog::zero_op(1)},
                                 {catalog::scaled_identity_map(1, 1.0)},
                                 {catalog::scaled_identity(1, 1.0)},
                                 {LipschitzOp::zero(1)},
                                 BlockLinearOp(SpaceSig{{1}, {1}}, {LinearEntry::identity(1)}),
                                 BlockVector({v1(2.0)}),
                                 BlockVector({v1(0.0)})};
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
  return cfg;
}

double max_gap(const std::vector<BlockVector>& a, const std::vector<BlockVector>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n)
    worst = std::max(worst, (a[n].flatten() - b[n].flatten()).lpNorm<Eigen::Infinity>());
  return worst;
}

}  // namespace

TEST_SUITE("system-solver") {
  TEST_CASE("beta from the coupling norm and the Lipschitz constants") {
    const auto p = closest_points();
    CHECK(compute_beta(p) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    CoupledInclusionProblem q{SpaceSig{{1}, {1}},
                              {catalog::zero_op(1)},
                              {catalog::scaled_identity_map(1, 3.0)},
                              {catalog::zero_op(1)},
                              {catalog::scaled_identity_map(1, 1.0)},
                              BlockLinearOp(SpaceSig{{1}, {1}}, {LinearEntry::scalar(1, 2.0)}),
                              BlockVector({v1(0)}),
                              BlockVector({v1(0)})};
    CHECK(compute_beta(q) == doctest::Approx(5.0).epsilon(1e-9));

    q.C = {LipschitzOp::zero(1)};
    q.Dinv = {LipschitzOp::zero(1)};
    q.L = BlockLinearOp(SpaceSig{{1}, {1}}, {LinearEntry::zero(1, 1)});
    CHECK_THROWS_AS(compute_beta(q), ParameterError);
  }

  TEST_CASE("closest points of two intervals") {
    FbfConfig cfg;
    cfg.residual_tol = 1e-12;
    const auto rep = solve_system(closest_points(), cfg);
    REQUIRE(rep.converged());
    CHECK(rep.trace.iterations < 50000);
    CHECK(std::abs(rep.primal[0](0) - 2.0) <= 1e-6);
    CHECK(std::abs(rep.primal[1](0) - 1.0) <= 1e-6);
    // v = x1 - x2 at the solution.
    CHECK(std::abs(rep.dual[0](0) - 1.0) <= 1e-6);
    const auto kkt = kkt_residual(closest_points(), rep.primal, rep.dual);
    CHECK(kkt.primal <= 1e-8);
    CHECK(kkt.dual <= 1e-8);
    CHECK(rep.kkt.primal == doctest::Approx(kkt.primal));
  }

  TEST_CASE("singleton constraints pin the primal blocks") {
    const auto p = two_blocks(catalog::normal_cone(ConvexSet::point(v1(0.7))),
                              catalog::normal_cone(ConvexSet::point(v1(-1.2))), catalog::scaled_identity(1, 1.0),
                              LipschitzOp::zero(1));
    const auto rep = solve_system(p, FbfConfig{});
    REQUIRE(rep.converged());
    CHECK(std::abs(rep.primal[0](0) - 0.7) <= 1e-8);
    CHECK(std::abs(rep.primal[1](0) + 1.2) <= 1e-8);
  }

  TEST_CASE("scalar system") {
    const auto rep = solve_system(scalar_system(), FbfConfig{});
    REQUIRE(rep.converged());
    CHECK(std::abs(rep.primal[0](0) - 1.0) <= 1e-7);
    CHECK(std::abs(rep.dual[0](0) - 1.0) <= 1e-7);
  }

  TEST_CASE("KKT residual is positive away from the solution") {
    const auto p = closest_points();
    const auto kkt = kkt_residual(p, BlockVector({v1(0.0), v1(0.5)}), BlockVector({v1(0.0)}));
    CHECK(kkt.primal + kkt.dual > 1e-3);
    const auto at = kkt_residual(p, BlockVector({v1(2.0), v1(1.0)}), BlockVector({v1(1.0)}));
    CHECK(at.primal <= 1e-12);
    CHECK(at.dual <= 1e-12);
  }

  TEST_CASE("block loops match the product-space engine") {
    tools::Rng rng(77);
    for (int t = 0; t < 20; ++t) {
      const auto prob = tools::random_system(rng, 3, 4);
      const auto cfg = fixed_iterations(50);
      Capture lit, eng;
      solve_system(prob, cfg, lit.observer());
      const auto [P, Q] = product_space_pair(prob);
      fbf_solve(P, Q, compute_beta(prob), BlockVector::zeros(prob.stacked_dims()), cfg, eng.observer());
      CHECK(max_gap(lit.w, eng.w) <= 1e-12);
      CHECK(max_gap(lit.p, eng.p) <= 1e-12);
    }
  }

  TEST_CASE("block loops match the engine under injected errors") {
    tools::Rng rng(78);
    for (int t = 0; t < 5; ++t) {
      const auto prob = tools::random_system(rng, 2, 3);
      auto cfg = fixed_iterations(30);
      cfg.errors = summable_error_schedule(0.5, 1.5, 3 + t);
      Capture lit, eng;
      solve_system(prob, cfg, lit.observer());
      const auto [P, Q] = product_space_pair(prob);
      fbf_solve(P, Q, compute_beta(prob), BlockVector::zeros(prob.stacked_dims()), cfg, eng.observer());
      CHECK(max_gap(lit.p, eng.p) <= 1e-12);
    }
  }

  TEST_CASE("limit does not depend on the step") {
    const double beta = compute_beta(closest_points());
    const double eps = 1e-2;
    for (double g : {eps, 0.5 * (1 - eps) / beta, (1 - eps) / beta}) {
      FbfConfig cfg;
      cfg.gamma = g;
      cfg.residual_tol = 1e-12;
      const auto rep = solve_system(closest_points(), cfg);
      REQUIRE(rep.converged());
      CHECK(std::abs(rep.primal[0](0) - 2.0) <= 1e-6);
      CHECK(std::abs(rep.primal[1](0) - 1.0) <= 1e-6);
    }
  }

  TEST_CASE("per-block squared residuals add up to the residual") {
    const auto rep = solve_system(closest_points(), FbfConfig{});
    REQUIRE(!rep.trace.records.empty());
    double total = 0.0;
    for (const auto& r : rep.trace.records) {
      REQUIRE(r.block_sq_residuals.size() == 3);
      double s = 0.0;
      for (double b : r.block_sq_residuals) s += b;
      CHECK(s == doctest::Approx(r.residual * r.residual).epsilon(1e-9));
      total += s;
    }
    CHECK(std::isfinite(total));
  }

  TEST_CASE("KKT observer fills the record columns") {
    const auto p = closest_points();
    const auto rep = solve_system(p, fixed_iterations(5), kkt_observer(p));
    REQUIRE(rep.trace.records.size() == 5);
    for (const auto& r : rep.trace.records) {
      CHECK(r.primal_kkt.has_value());
      CHECK(r.dual_kkt.has_value());
    }
  }

  TEST_CASE("warm start at the solution stops immediately") {
    const auto rep = solve_system(closest_points(), FbfConfig{}, {}, BlockVector({v1(2.0), v1(1.0), v1(1.0)}));
    CHECK(rep.converged());
    CHECK(rep.trace.iterations == 0);
  }

  TEST_CASE("shape errors") {
    auto p = closest_points();
    p.A.pop_back();
    CHECK_THROWS_AS(p.validate(), SignatureError);
    CHECK_THROWS_AS(solve_system(p, FbfConfig{}), SignatureError);
    auto q = closest_points();
    q.z = BlockVector::zeros(std::vector<int>{1});
    CHECK_THROWS_AS(q.validate(), SignatureError);
    auto r = closest_points();
    r.B = {catalog::zero_op(2)};
    CHECK_THROWS_AS(r.validate(), SignatureError);
    CHECK_THROWS_AS(solve_system(closest_points(), FbfConfig{}, {}, BlockVector::zeros(std::vector<int>{1, 1})), SignatureError);
  }
}
