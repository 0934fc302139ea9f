#include "monosplit/catalog.hpp"
#include "monosplit/errors.hpp"
#include "monosplit/reductions.hpp"
#include "monosplit/tools/generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace monosplit;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }
ConvexSet interval(double lo, double hi) { return ConvexSet::box(v1(lo), v1(hi)); }
ConvexSet square(double lo, double hi) { return ConvexSet::box(Vector::Constant(2, lo), Vector::Constant(2, hi)); }

FbfConfig tight() {
  FbfConfig cfg;
  cfg.residual_tol = 1e-12;
  return cfg;
}

FbfConfig fixed_iterations(std::size_t n) {
  FbfConfig cfg;
  cfg.max_iters = n;
  cfg.residual_tol = 0.0;
  return cfg;
}

// z in A x + (B [] S) x on R with a single identity coupling.
ParallelSumProblem scalar_parallel_sum(std::size_t K1, std::size_t K2, MaximalMonotoneOp A, MaximalMonotoneOp B,
                                       ParallelSumS S, double z) {
  return ParallelSumProblem{1, K1, K2, v1(z), std::move(A), LipschitzOp::zero(1),
                            {std::move(B)}, {std::move(S)}, {LinearEntry::identity(1)}, {v1(0.0)}};
}

MaximalMonotoneOp half_line() {
  return catalog::normal_cone(ConvexSet::box(v1(0.0), v1(std::numeric_limits<double>::infinity())));
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

double max_gap(const std::vector<BlockVector>& a, const std::vector<BlockVector>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n)
    worst = std::max(worst, (a[n].flatten() - b[n].flatten()).lpNorm<Eigen::Infinity>());
  return worst;
}

MultivariateMinProblem closest_points() {
  return MultivariateMinProblem{
      SpaceSig{{1, 1}, {1}},
      {catalog::indicator(interval(2, 3)), catalog::indicator(interval(0, 1))},
      {catalog::zero_fn(1), catalog::zero_fn(1)},
      {catalog::sq_dist(v1(0.0))},
      {catalog::indicator(ConvexSet::point(v1(0.0)))},
      BlockLinearOp(SpaceSig{{1, 1}, {1}}, {LinearEntry::identity(1), LinearEntry::scalar(1, -1.0)}),
      BlockVector::zeros(std::vector<int>{1, 1}),
      BlockVector::zeros(std::vector<int>{1})};
}

MultivariateMinProblem single_block(ConvexFn f, ConvexFn g, ConvexFn ell, LinearEntry L) {
  const int n = f.dim, k = g.dim;
  return MultivariateMinProblem{SpaceSig{{n}, {k}},     {std::move(f)},       {catalog::zero_fn(n)},
                                {std::move(g)},         {std::move(ell)},     BlockLinearOp(SpaceSig{{n}, {k}}, {std::move(L)}),
                                BlockVector::zeros(std::vector<int>{n}), BlockVector::zeros(std::vector<int>{k})};
}

CommonZeroProblem intervals() {
  return CommonZeroProblem{1,
                           catalog::normal_cone(interval(0, 4)),
                           {catalog::normal_cone(interval(1, 2)), catalog::normal_cone(interval(1.5, 3))},
                           {catalog::scaled_identity(1, 1.0), catalog::scaled_identity(1, 1.0)}};
}

FeasibilityRelaxation box_and_line() {
  return FeasibilityRelaxation{2,
                               {square(0, 1), ConvexSet::hyperplane(Vector{{1.0, 1.0}}, 3.0)},
                               {Penalty::hard(), Penalty::squared_norm(1.0)},
                               {LinearEntry::identity(2), LinearEntry::identity(2)}};
}

}  // namespace

TEST_SUITE("reductions") {
  TEST_CASE("lifting without auxiliary blocks") {
    const auto p = scalar_parallel_sum(0, 0, half_line(), catalog::scaled_identity(1, 1.0), LipschitzOp::zero(1), 3.0);
    const auto lifted = lift_parallel_sum(p);
    CHECK(lifted.sig.primal == std::vector<int>{1});
    CHECK(lifted.sig.dual == std::vector<int>{1});
  }

  TEST_CASE("lifting with one auxiliary block") {
    const auto p = scalar_parallel_sum(1, 1, half_line(), catalog::scaled_identity(1, 2.0),
                                       catalog::scaled_identity(1, 1.0), 3.0);
    const auto lifted = lift_parallel_sum(p);
    CHECK(lifted.sig.primal == std::vector<int>{1, 1});
    CHECK(lifted.sig.dual == std::vector<int>{1});
    CHECK(lifted.L.to_dense().isApprox(Matrix{{1.0, -1.0}}));
    CHECK(lifted.L.lambda_bound() == doctest::Approx(2.0));
  }

  TEST_CASE("lifted block shapes on random instances") {
    tools::Rng rng(91);
    for (int t = 0; t < 20; ++t) {
      const auto p = tools::random_parallel_sum(rng);
      const auto lifted = lift_parallel_sum(p);
      std::vector<int> primal = {p.dim};
      for (std::size_t k = 0; k < p.K2; ++k) primal.push_back(static_cast<int>(p.L[k].rows()));
      CHECK(lifted.sig.primal == primal);
      CHECK(lifted.sig.dual == p.dual_dims());
      double lambda = 1.0;
      for (const auto& L : p.L) lambda += L.spectral_norm() * L.spectral_norm();
      CHECK(lifted.L.lambda_bound() == doctest::Approx(lambda).epsilon(1e-9));
    }
  }

  TEST_CASE("parallel sum against scalar bisection") {
    const auto sel = oracle::interval_normal_cone(0.0, std::numeric_limits<double>::infinity());
    for (double z : {3.0, -2.0}) {
      // B = Id and S^{-1} = 0 make the parallel sum equal to B.
      const auto p = scalar_parallel_sum(0, 0, half_line(), catalog::scaled_identity(1, 1.0), LipschitzOp::zero(1), z);
      const auto rep = solve_parallel_sum(p, tight());
      REQUIRE(rep.converged());
      const double expect = oracle::bisect_root([&](double x) { return sel(x) + x - z; });
      CHECK(std::abs(rep.primal[0](0) - expect) <= 1e-6);
    }
    CHECK(std::abs(oracle::bisect_root([&](double x) { return sel(x) + x - 3.0; }) - 3.0) <= 1e-9);
  }

  TEST_CASE("the three encodings of S agree") {
    // B = 2 Id, S = Id: B [] S = (2/3) Id.
    const auto sel = oracle::interval_normal_cone(0.0, std::numeric_limits<double>::infinity());
    const double expect = oracle::bisect_root([&](double x) { return sel(x) + 2.0 / 3.0 * x - 3.0; });
    const std::vector<ParallelSumProblem> encodings = {
        scalar_parallel_sum(1, 1, half_line(), catalog::scaled_identity(1, 2.0), catalog::scaled_identity(1, 1.0), 3.0),
        scalar_parallel_sum(0, 1, half_line(), catalog::scaled_identity(1, 2.0), catalog::scaled_identity_map(1, 1.0), 3.0),
        scalar_parallel_sum(0, 0, half_line(), catalog::scaled_identity(1, 2.0), catalog::scaled_identity_map(1, 1.0), 3.0)};
    std::vector<double> got;
    for (const auto& p : encodings) {
      const auto rep = solve_parallel_sum(p, tight());
      REQUIRE(rep.converged());
      got.push_back(rep.primal[0](0));
      CHECK(std::abs(got.back() - expect) <= 1e-6);
    }
    CHECK(std::abs(got[0] - got[2]) <= 1e-6);
    CHECK(std::abs(expect - 4.5) <= 1e-9);
  }

  TEST_CASE("singleton A fixes the parallel-sum solution") {
    const auto p = scalar_parallel_sum(0, 0, catalog::normal_cone(ConvexSet::point(v1(-0.4))), catalog::zero_op(1),
                                       LipschitzOp::zero(1), 0.0);
    const auto rep = solve_parallel_sum(p, FbfConfig{});
    REQUIRE(rep.converged());
    CHECK(std::abs(rep.primal[0](0) + 0.4) <= 1e-8);
  }

  TEST_CASE("literal parallel-sum iteration matches the lifted system") {
    tools::Rng rng(92);
    for (int t = 0; t < 10; ++t) {
      const auto ps = tools::random_parallel_sum(rng);
      Capture lit, lifted;
      solve_parallel_sum(ps, fixed_iterations(50), lit.observer());
      solve_system(lift_parallel_sum(ps), fixed_iterations(50), lifted.observer());
      CHECK(max_gap(lit.w, lifted.w) <= 1e-12);
      CHECK(max_gap(lit.p, lifted.p) <= 1e-12);
    }
  }

  TEST_CASE("parallel-sum beta") {
    const auto p = scalar_parallel_sum(0, 0, half_line(), catalog::scaled_identity(1, 1.0),
                                       catalog::scaled_identity_map(1, 3.0), 3.0);
    CHECK(p.beta() == doctest::Approx(3.0 + std::sqrt(2.0)));
  }

  TEST_CASE("common zero of consistent intervals") {
    const auto p = intervals();
    const auto rep = solve_common_zero(p, FbfConfig{});
    REQUIRE(rep.converged());
    const double x = rep.primal[0](0);
    CHECK(x >= 1.5 - 1e-6);
    CHECK(x <= 2.0 + 1e-6);
    CHECK(check_consistency_theorem(p, rep.primal[0], 1e-6));
    CHECK_FALSE(check_consistency_theorem(p, v1(1.0), 1e-6));
    CHECK_FALSE(check_consistency_theorem(p, v1(2.5), 1e-6));
  }

  TEST_CASE("common zero of zero operators stops at once") {
    const CommonZeroProblem p{2, catalog::zero_op(2), {catalog::zero_op(2)}, {catalog::scaled_identity(2, 1.0)}};
    const auto rep = solve_common_zero(p, FbfConfig{});
    CHECK(rep.converged());
    CHECK(rep.trace.iterations == 0);
    CHECK(rep.trace.records.at(0).residual == 0.0);
  }

  TEST_CASE("operator without zeros fails the consistency check") {
    const CommonZeroProblem p{1, catalog::affine(Matrix::Zero(1, 1), v1(1.0)), {catalog::zero_op(1)},
                              {catalog::scaled_identity(1, 1.0)}};
    for (double x : {-3.0, 0.0, 5.0}) CHECK_FALSE(check_consistency_theorem(p, v1(x), 1e-6));
  }

  TEST_CASE("least-squares point of three lines") {
    const double s = 1.0 / std::sqrt(2.0);
    const auto inst = tools::legendre_instance({Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}, Vector{{s, s}}}, {1.0, 2.0, 0.0});
    const auto rep = solve_common_zero(inst.problem, tight());
    REQUIRE(rep.converged());
    const Vector expect = oracle::normal_equations(Matrix{{1.0, 0.0}, {0.0, 1.0}, {s, s}}, Vector{{1.0, 2.0, 0.0}});
    CHECK((rep.primal[0] - expect).lpNorm<Eigen::Infinity>() <= 1e-6);
  }

  TEST_CASE("common zero uses chi = sqrt(K + 1)") {
    const auto p = intervals();
    const auto rep = solve_common_zero(p, FbfConfig{});
    REQUIRE(!rep.trace.records.empty());
    CHECK(rep.trace.records[0].gamma == doctest::Approx((1 - 1e-2) / std::sqrt(3.0)));
  }

  TEST_CASE("closest points of two intervals as a minimization") {
    const auto p = closest_points();
    const auto rep = solve_multivariate_min(p, tight());
    REQUIRE(rep.converged());
    CHECK(std::abs(rep.primal[0](0) - 2.0) <= 1e-6);
    CHECK(std::abs(rep.primal[1](0) - 1.0) <= 1e-6);

    const auto at = evaluate_objectives(p, BlockVector({v1(2.0), v1(1.0)}), BlockVector({v1(1.0)}));
    CHECK(at.primal == doctest::Approx(0.5));
    CHECK(at.dual == doctest::Approx(-0.5));
    CHECK(std::abs(at.gap()) <= 1e-12);

    const auto off = evaluate_objectives(p, BlockVector({v1(2.5), v1(0.5)}), BlockVector({v1(1.0)}));
    CHECK(off.primal == doctest::Approx(2.0));
    CHECK(off.gap() > 0.0);

    const auto out = evaluate_objectives(p, BlockVector({v1(0.0), v1(0.0)}), BlockVector({v1(1.0)}));
    CHECK(std::isinf(out.primal));
    CHECK(out.primal > 0.0);
  }

  TEST_CASE("duality gap stays nonnegative along the iterates") {
    const auto rep = solve_multivariate_min(closest_points(), FbfConfig{});
    std::size_t checked = 0;
    for (const auto& r : rep.trace.records)
      if (r.gap && std::isfinite(*r.gap)) {
        CHECK(*r.gap >= -1e-9);
        ++checked;
      }
    CHECK(checked > 0);
  }

  TEST_CASE("singleton f fixes the minimizer") {
    auto p = closest_points();
    p.f = {catalog::indicator(ConvexSet::point(v1(0.3))), catalog::indicator(ConvexSet::point(v1(7.0)))};
    const auto rep = solve_multivariate_min(p, FbfConfig{});
    REQUIRE(rep.converged());
    CHECK(std::abs(rep.primal[0](0) - 0.3) <= 1e-8);
    CHECK(std::abs(rep.primal[1](0) - 7.0) <= 1e-8);
  }

  TEST_CASE("l1 shrinkage") {
    const Vector b{{3.0, 0.2}};
    const auto p = single_block(catalog::l1(2, 1.0), catalog::sq_dist(b), catalog::indicator(ConvexSet::point(Vector::Zero(2))),
                                LinearEntry::identity(2));
    const auto rep = solve_multivariate_min(p, tight());
    REQUIRE(rep.converged());
    CHECK((rep.primal[0] - oracle::soft_threshold(b, 1.0)).lpNorm<Eigen::Infinity>() <= 1e-6);
    const auto kkt = kkt_residual(p.as_system(), rep.primal, rep.dual);
    CHECK(kkt.primal <= 1e-7);
    CHECK(kkt.dual <= 1e-7);
  }

  TEST_CASE("qualification cases") {
    CHECK(check_qualification(closest_points()) == Qualification::HoldsByRealValuedCoupling);
    const auto iii = single_block(catalog::l1(2, 1.0), catalog::indicator(square(0, 1)),
                                  catalog::indicator(ConvexSet::point(Vector::Zero(2))), LinearEntry::identity(2));
    CHECK(check_qualification(iii) == Qualification::HoldsByRealValuedF);
    const auto singular = single_block(catalog::l1(2, 1.0), catalog::indicator(square(0, 1)),
                                       catalog::indicator(ConvexSet::point(Vector::Zero(2))),
                                       LinearEntry::dense(Matrix{{1.0, 1.0}, {1.0, 1.0}}));
    CHECK(check_qualification(singular) == Qualification::Unknown);
    const auto unknown = single_block(catalog::indicator(square(0, 1)), catalog::indicator(square(0, 1)),
                                      catalog::indicator(ConvexSet::point(Vector::Zero(2))), LinearEntry::zero(2, 2));
    CHECK(check_qualification(unknown) == Qualification::Unknown);
    CHECK(std::string(to_string(Qualification::Unknown)).size() > 0);
  }

  TEST_CASE("univariate and multivariate solvers agree") {
    // (1/2)|. - b|^2 [] |.|^2 = (1/3)|. - b|^2, so the minimizer is a soft threshold at 3/2.
    const Vector b{{3.0, 0.2}};
    const auto multi = single_block(catalog::l1(2, 1.0), catalog::sq_dist(b), catalog::sq_norm(2, 1.0),
                                    LinearEntry::identity(2));
    const UnivariateMinProblem uni{2, 0, 0, Vector::Zero(2), catalog::l1(2, 1.0), catalog::zero_fn(2),
                                   {catalog::sq_dist(b)}, {catalog::sq_norm(2, 1.0)}, {LinearEntry::identity(2)},
                                   {Vector::Zero(2)}};
    const auto rm = solve_multivariate_min(multi, tight());
    const auto ru = solve_univariate_min(uni, tight());
    REQUIRE(rm.converged());
    REQUIRE(ru.converged());
    CHECK((rm.primal[0] - ru.primal[0]).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK((ru.primal[0] - oracle::soft_threshold(b, 1.5)).lpNorm<Eigen::Infinity>() <= 1e-6);
  }

  TEST_CASE("univariate singleton f") {
    const Vector c{{0.5, -2.0}};
    const UnivariateMinProblem p{2, 1, 1, Vector::Zero(2), catalog::indicator(ConvexSet::point(c)), catalog::zero_fn(2),
                                 {catalog::l1(2, 1.0)}, {catalog::sq_norm(2, 1.0)}, {LinearEntry::identity(2)},
                                 {Vector::Zero(2)}};
    const auto rep = solve_univariate_min(p, FbfConfig{});
    REQUIRE(rep.converged());
    CHECK((rep.primal[0] - c).lpNorm<Eigen::Infinity>() <= 1e-8);
  }

  TEST_CASE("box and line relaxation") {
    const auto p = box_and_line();
    const auto rep = solve_feasibility_relaxation(p, tight());
    REQUIRE(rep.converged());
    CHECK((rep.primal[0] - Vector{{1.0, 1.0}}).lpNorm<Eigen::Infinity>() <= 1e-5);
    const Vector ref = oracle::box_hyperplane_relaxation(Vector::Zero(2), Vector::Ones(2), Matrix{{1.0, 1.0}},
                                                         Vector{{3.0}}, Vector{{1.0}});
    CHECK((rep.primal[0] - ref).lpNorm<Eigen::Infinity>() <= 1e-5);
    // Distance from (1,1) to the line is 1/sqrt(2).
    CHECK(feasibility_objective(p, rep.primal[0]) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::isinf(feasibility_objective(p, Vector{{2.0, 2.0}})));
  }

  TEST_CASE("consistent sets give a feasible point") {
    const FeasibilityRelaxation p{2, {square(0, 1), square(0, 1)}, {Penalty::hard(), Penalty::squared_norm(1.0)},
                                  {LinearEntry::identity(2), LinearEntry::identity(2)}};
    const auto rep = solve_feasibility_relaxation(p, FbfConfig{});
    REQUIRE(rep.converged());
    CHECK(square(0, 1).contains(rep.primal[0], 1e-6));
    CHECK(feasibility_objective(p, rep.primal[0]) <= 1e-9);
  }

  TEST_CASE("relaxed feasibility equals the constrained least-squares common zero") {
    // omega d_H^2 has gradient 2 omega (x - P_H x), the parallel sum N_H [] (2 omega Id).
    tools::Rng rng(93);
    for (int t = 0; t < 5; ++t) {
      const auto f = tools::random_box_feasibility(rng, 1 + t % 3);
      std::vector<MaximalMonotoneOp> B, S;
      for (std::size_t k = 1; k < f.K(); ++k) {
        B.push_back(catalog::normal_cone(f.sets[k]));
        S.push_back(catalog::scaled_identity(f.dim, 2.0 * f.penalties[k].omega));
      }
      const CommonZeroProblem cz{f.dim, catalog::normal_cone(f.sets[0]), B, S};
      const auto a = solve_feasibility_relaxation(f, tight());
      const auto c = solve_common_zero(cz, tight());
      REQUIRE(a.converged());
      REQUIRE(c.converged());
      CHECK((a.primal[0] - c.primal[0]).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
  }

  TEST_CASE("relaxed solution dominates feasible probes") {
    tools::Rng rng(94);
    for (int t = 0; t < 3; ++t) {
      const auto f = tools::random_box_feasibility(rng, 2);
      const auto rep = solve_feasibility_relaxation(f, tight());
      REQUIRE(rep.converged());
      const double best = feasibility_objective(f, rep.primal[0]);
      const Vector lo = f.sets[0].first(), hi = f.sets[0].second();
      for (int s = 0; s < 100; ++s) {
        Vector x(f.dim);
        for (int j = 0; j < f.dim; ++j) x(j) = rng.uniform(lo(j), hi(j));
        CHECK(best <= feasibility_objective(f, x) + 1e-9);
      }
    }
  }

  TEST_CASE("minimization outputs satisfy the optimality conditions") {
    tools::Rng rng(95);
    for (int t = 0; t < 5; ++t) {
      const auto p = tools::random_duality_instance(rng);
      const auto rep = solve_multivariate_min(p, tight());
      REQUIRE(rep.converged());
      const auto kkt = kkt_residual(p.as_system(), rep.primal, rep.dual);
      CHECK(kkt.primal <= 1e-7);
      CHECK(kkt.dual <= 1e-7);
      CHECK(std::abs(evaluate_objectives(p, rep.primal, rep.dual).gap()) <= 1e-6);
    }
  }

  TEST_CASE("shape errors") {
    auto p = intervals();
    p.S.pop_back();
    CHECK_THROWS_AS(p.validate(), SignatureError);
    auto q = scalar_parallel_sum(0, 0, half_line(), catalog::zero_op(1), LipschitzOp::zero(1), 0.0);
    q.K1 = 1;
    CHECK_THROWS(q.validate());
    auto f = box_and_line();
    f.L.pop_back();
    CHECK_THROWS_AS(f.validate(), SignatureError);
  }
}
