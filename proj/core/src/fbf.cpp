#include "monosplit/fbf.hpp"

#include "monosplit/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace monosplit {

namespace {

BlockVector random_direction(std::uint64_t seed, std::size_t n, int slot, std::span<const int> dims,
                             double scale) {
  BlockVector out = BlockVector::zeros(dims);
  if (scale == 0.0) return out;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32),
                    static_cast<std::uint32_t>(slot)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  Vector flat(out.total_size());
  do {
    for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = normal(rng);
  } while (flat.norm() == 0.0);
  flat *= scale / flat.norm();
  return BlockVector::unflatten(flat, dims);
}

void require_finite(const BlockVector& v, std::size_t n, const char* name) {
  if (!v.all_finite()) throw DivergenceError(n, std::string("non-finite ") + name);
}

}  // namespace

ErrorSchedule summable_error_schedule(double eta, double p, std::uint64_t seed) {
  if (!(p > 1.0)) throw ParameterError("error schedule exponent p must exceed 1 for summability");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ParameterError("error schedule eta must be >= 0");
  return [eta, p, seed](std::size_t n, std::span<const int> dims) {
    const double scale = eta / std::pow(static_cast<double>(n + 1), p);
    return ErrorTriple{random_direction(seed, n, 0, dims, scale),
                       random_direction(seed, n, 1, dims, scale),
                       random_direction(seed, n, 2, dims, scale)};
  };
}

void validate_config(const FbfConfig& cfg, double chi) {
  if (!(chi > 0.0) || !std::isfinite(chi))
    throw ParameterError("Lipschitz constant chi must be positive, got " + std::to_string(chi));
  if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < 1.0 / (chi + 1.0)))
    throw ParameterError("epsilon must lie in (0, 1/(chi+1)) = (0, " +
                         std::to_string(1.0 / (chi + 1.0)) + "), got " + std::to_string(cfg.epsilon));
  if (cfg.max_iters < 1) throw ParameterError("max_iters must be at least 1");
  if (!(cfg.residual_tol >= 0.0)) throw ParameterError("residual_tol must be nonnegative");
  if (!cfg.gamma_schedule && cfg.gamma) step_size(cfg, chi, 0);
}

double step_size(const FbfConfig& cfg, double chi, std::size_t n) {
  const double hi = (1.0 - cfg.epsilon) / chi;
  double g = hi;
  if (cfg.gamma_schedule) g = cfg.gamma_schedule(n);
  else if (cfg.gamma) g = *cfg.gamma;
  // Relative slack so that the default (1 - eps)/chi round-trips through text.
  const double slack = 1e-12 * hi;
  if (!(g >= cfg.epsilon - slack) || !(g <= hi + slack))
    throw ParameterError("step gamma_" + std::to_string(n) + " = " + std::to_string(g) +
                         " outside [epsilon, (1-epsilon)/chi] = [" + std::to_string(cfg.epsilon) +
                         ", " + std::to_string(hi) + "]");
  return g;
}

FbfTrace fbf_solve(const ProductMonotone& P, const ProductLipschitz& Q, double chi,
                   const BlockVector& w0, const FbfConfig& cfg, const Observer& observer) {
  validate_config(cfg, chi);
  if (Q.lipschitz > chi * (1.0 + 1e-12))
    throw ParameterError("chi is smaller than the Lipschitz constant of Q");
  w0.require(P.dims, "initial point");

  FbfTrace trace;
  BlockVector w = w0;
  const std::size_t nb = w.size();
  for (std::size_t n = 0;; ++n) {
    const double gamma = step_size(cfg, chi, n);
    ErrorTriple e;
    if (cfg.errors) e = cfg.errors(n, P.dims);

    BlockVector s = w - gamma * Q.map(w);
    if (cfg.errors) s -= gamma * e.a;
    require_finite(s, n, "s");
    BlockVector p = P.resolvent(gamma, s);
    if (cfg.errors) p += e.b;
    require_finite(p, n, "p");

    IterationRecord rec;
    rec.iter = n;
    rec.gamma = gamma;
    rec.block_sq_residuals.resize(nb);
    double sq = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      rec.block_sq_residuals[j] = (w[j] - p[j]).squaredNorm();
      sq += rec.block_sq_residuals[j];
    }
    rec.residual = std::sqrt(sq);
    if (observer) observer(IterationView{n, gamma, w, p}, rec);
    const bool done = fixed_point_reached(rec.residual, w.norm(), cfg.residual_tol);
    if (cfg.keep_history) trace.records.push_back(std::move(rec));

    if (done || n + 1 >= cfg.max_iters) {
      trace.converged = done;
      trace.iterations = n;
      trace.w = std::move(w);
      trace.p = std::move(p);
      return trace;
    }

    BlockVector q = p - gamma * Q.map(p);
    if (cfg.errors) q -= gamma * e.c;
    w = w - s + q;
    require_finite(w, n + 1, "w");
  }
}

}  // namespace monosplit
