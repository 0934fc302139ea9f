#include "monosplit/block.hpp"

#include "monosplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace monosplit {

namespace {

std::string dims_to_string(std::span<const int> dims) {
  std::string out = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(dims[i]);
  }
  return out + ")";
}

// Largest eigenvalue of the PSD map x -> gram(x) by power iteration, seeded
// from a fixed pseudo-random start so that no structured direction is missed.
template <class GramApply>
std::pair<double, bool> power_top_eigenvalue(Eigen::Index n, GramApply gram, int iters,
                                             double tol) {
  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> normal;
  Vector x(n);
  for (Eigen::Index j = 0; j < n; ++j) x(j) = normal(rng);
  x.normalize();

  double mu = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector y = gram(x);
    const double next = x.dot(y);
    const double ny = y.norm();
    if (ny == 0.0) return {0.0, true};
    x = y / ny;
    if (it > 0 && std::abs(next - mu) <= tol * std::abs(next)) return {next, true};
    mu = next;
  }
  return {mu, false};
}

}  // namespace

void SpaceSig::validate() const {
  if (primal.empty()) throw SignatureError("space signature needs at least one primal space");
  if (dual.empty()) throw SignatureError("space signature needs at least one dual space");
  for (int d : primal)
    if (d < 1) throw SignatureError("primal dimension must be positive, got " + std::to_string(d));
  for (int d : dual)
    if (d < 1) throw SignatureError("dual dimension must be positive, got " + std::to_string(d));
}

BlockVector BlockVector::zeros(std::span<const int> dims) {
  std::vector<Vector> blocks;
  blocks.reserve(dims.size());
  for (int d : dims) blocks.push_back(Vector::Zero(d));
  return BlockVector(std::move(blocks));
}

BlockVector BlockVector::unflatten(const Vector& flat, std::span<const int> dims) {
  Eigen::Index total = 0;
  for (int d : dims) total += d;
  if (flat.size() != total)
    throw SignatureError("flat vector of length " + std::to_string(flat.size()) +
                         " does not match dims " + dims_to_string(dims));
  std::vector<Vector> blocks;
  Eigen::Index offset = 0;
  for (int d : dims) {
    blocks.push_back(flat.segment(offset, d));
    offset += d;
  }
  return BlockVector(std::move(blocks));
}

BlockVector BlockVector::concat(const BlockVector& head, const BlockVector& tail) {
  std::vector<Vector> blocks = head.blocks_;
  blocks.insert(blocks.end(), tail.blocks_.begin(), tail.blocks_.end());
  return BlockVector(std::move(blocks));
}

std::vector<int> BlockVector::dims() const {
  std::vector<int> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(static_cast<int>(b.size()));
  return out;
}

Eigen::Index BlockVector::total_size() const {
  Eigen::Index n = 0;
  for (const auto& b : blocks_) n += b.size();
  return n;
}

Vector BlockVector::flatten() const {
  Vector out(total_size());
  Eigen::Index offset = 0;
  for (const auto& b : blocks_) {
    out.segment(offset, b.size()) = b;
    offset += b.size();
  }
  return out;
}

BlockVector BlockVector::slice(std::size_t first, std::size_t count) const {
  if (first + count > blocks_.size()) throw SignatureError("block slice out of range");
  return BlockVector(std::vector<Vector>(blocks_.begin() + static_cast<std::ptrdiff_t>(first),
                                         blocks_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

bool BlockVector::matches(std::span<const int> dims) const {
  if (dims.size() != blocks_.size()) return false;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (blocks_[i].size() != dims[i]) return false;
  return true;
}

void BlockVector::require(std::span<const int> dims, const char* what) const {
  if (!matches(dims)) {
    const auto mine = this->dims();
    throw SignatureError(std::string(what) + ": block shape " + dims_to_string(mine) +
                         " does not match signature " + dims_to_string(dims));
  }
}

double BlockVector::dot(const BlockVector& other) const {
  if (other.size() != size()) throw SignatureError("dot: block count mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) s += blocks_[i].dot(other.blocks_[i]);
  return s;
}

double BlockVector::squared_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.squaredNorm();
  return s;
}

double BlockVector::norm() const { return std::sqrt(squared_norm()); }

bool BlockVector::all_finite() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Vector& b) { return b.allFinite(); });
}

BlockVector& BlockVector::operator+=(const BlockVector& other) {
  if (other.size() != size()) throw SignatureError("block count mismatch in +=");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

BlockVector& BlockVector::operator-=(const BlockVector& other) {
  if (other.size() != size()) throw SignatureError("block count mismatch in -=");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

BlockVector& BlockVector::operator*=(double s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

bool BlockVector::operator==(const BlockVector& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].size() != other.blocks_[i].size()) return false;
    if (blocks_[i] != other.blocks_[i]) return false;
  }
  return true;
}

LinearEntry LinearEntry::zero(int rows, int cols) {
  if (rows < 1 || cols < 1) throw SignatureError("zero entry needs positive shape");
  return LinearEntry(Kind::Zero, rows, cols, 0.0, Matrix());
}

LinearEntry LinearEntry::identity(int n) {
  if (n < 1) throw SignatureError("identity entry needs positive dimension");
  return LinearEntry(Kind::Identity, n, n, 1.0, Matrix());
}

LinearEntry LinearEntry::scalar(int n, double s) {
  if (n < 1) throw SignatureError("scalar entry needs positive dimension");
  return LinearEntry(Kind::Scalar, n, n, s, Matrix());
}

LinearEntry LinearEntry::dense(Matrix m) {
  if (m.rows() < 1 || m.cols() < 1) throw SignatureError("dense entry needs positive shape");
  const int r = static_cast<int>(m.rows());
  const int c = static_cast<int>(m.cols());
  return LinearEntry(Kind::Dense, r, c, 0.0, std::move(m));
}

Vector LinearEntry::apply(const Vector& x) const {
  if (x.size() != cols_)
    throw SignatureError("linear entry expects input of length " + std::to_string(cols_) +
                         ", got " + std::to_string(x.size()));
  switch (kind_) {
    case Kind::Zero: return Vector::Zero(rows_);
    case Kind::Identity: return x;
    case Kind::Scalar: return scalar_ * x;
    case Kind::Dense: return dense_ * x;
  }
  return {};
}

Vector LinearEntry::apply_transpose(const Vector& v) const {
  if (v.size() != rows_)
    throw SignatureError("linear entry adjoint expects input of length " + std::to_string(rows_) +
                         ", got " + std::to_string(v.size()));
  switch (kind_) {
    case Kind::Zero: return Vector::Zero(cols_);
    case Kind::Identity: return v;
    case Kind::Scalar: return scalar_ * v;
    case Kind::Dense: return dense_.transpose() * v;
  }
  return {};
}

Matrix LinearEntry::to_dense() const {
  switch (kind_) {
    case Kind::Zero: return Matrix::Zero(rows_, cols_);
    case Kind::Identity: return Matrix::Identity(rows_, cols_);
    case Kind::Scalar: return scalar_ * Matrix::Identity(rows_, cols_);
    case Kind::Dense: return dense_;
  }
  return {};
}

double LinearEntry::spectral_norm() const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Identity: return 1.0;
    case Kind::Scalar: return std::abs(scalar_);
    case Kind::Dense: {
      const Matrix gram = dense_.transpose() * dense_;
      auto [top, converged] =
          power_top_eigenvalue(gram.rows(), [&](const Vector& x) -> Vector { return gram * x; },
                               100000, 1e-12);
      (void)converged;
      return std::sqrt(std::max(top, 0.0));
    }
  }
  return 0.0;
}

bool LinearEntry::operator==(const LinearEntry& other) const {
  if (kind_ != other.kind_ || rows_ != other.rows_ || cols_ != other.cols_) return false;
  if (kind_ == Kind::Scalar) return scalar_ == other.scalar_;
  if (kind_ == Kind::Dense) return dense_ == other.dense_;
  return true;
}

BlockLinearOp::BlockLinearOp(SpaceSig sig, std::vector<LinearEntry> entries)
    : BlockLinearOp(std::move(sig), std::move(entries), -1.0) {}

BlockLinearOp::BlockLinearOp(SpaceSig sig, std::vector<LinearEntry> entries, double lambda_bound)
    : sig_(std::move(sig)), entries_(std::move(entries)) {
  sig_.validate();
  if (entries_.size() != sig_.m() * sig_.K())
    throw SignatureError("coupling grid needs " + std::to_string(sig_.m() * sig_.K()) +
                         " entries, got " + std::to_string(entries_.size()));
  for (std::size_t k = 0; k < sig_.K(); ++k) {
    for (std::size_t i = 0; i < sig_.m(); ++i) {
      const auto& e = entry(k, i);
      if (e.rows() != sig_.dual[k] || e.cols() != sig_.primal[i])
        throw SignatureError("entry (" + std::to_string(k + 1) + "," + std::to_string(i + 1) +
                             ") has shape " + std::to_string(e.rows()) + "x" +
                             std::to_string(e.cols()) + ", expected " +
                             std::to_string(sig_.dual[k]) + "x" + std::to_string(sig_.primal[i]));
    }
  }
  if (lambda_bound < 0.0) lambda_bound = default_lambda(*this);
  set_lambda_bound(lambda_bound);
}

void BlockLinearOp::set_lambda_bound(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ParameterError("lambda bound must be finite and nonnegative");
  lambda_bound_ = lambda;
}

BlockVector BlockLinearOp::apply(const BlockVector& x) const {
  x.require(sig_.primal, "L apply");
  std::vector<Vector> out;
  out.reserve(sig_.K());
  for (std::size_t k = 0; k < sig_.K(); ++k) {
    Vector acc = Vector::Zero(sig_.dual[k]);
    for (std::size_t i = 0; i < sig_.m(); ++i) {
      const auto& e = entry(k, i);
      if (e.kind() == LinearEntry::Kind::Zero) continue;
      acc += e.apply(x[i]);
    }
    out.push_back(std::move(acc));
  }
  return BlockVector(std::move(out));
}

BlockVector BlockLinearOp::apply_adjoint(const BlockVector& v) const {
  v.require(sig_.dual, "L adjoint");
  std::vector<Vector> out;
  out.reserve(sig_.m());
  for (std::size_t i = 0; i < sig_.m(); ++i) {
    Vector acc = Vector::Zero(sig_.primal[i]);
    for (std::size_t k = 0; k < sig_.K(); ++k) {
      const auto& e = entry(k, i);
      if (e.kind() == LinearEntry::Kind::Zero) continue;
      acc += e.apply_transpose(v[k]);
    }
    out.push_back(std::move(acc));
  }
  return BlockVector(std::move(out));
}

Matrix BlockLinearOp::to_dense() const {
  Eigen::Index rows = 0, cols = 0;
  for (int d : sig_.dual) rows += d;
  for (int d : sig_.primal) cols += d;
  Matrix out = Matrix::Zero(rows, cols);
  Eigen::Index r0 = 0;
  for (std::size_t k = 0; k < sig_.K(); ++k) {
    Eigen::Index c0 = 0;
    for (std::size_t i = 0; i < sig_.m(); ++i) {
      out.block(r0, c0, sig_.dual[k], sig_.primal[i]) = entry(k, i).to_dense();
      c0 += sig_.primal[i];
    }
    r0 += sig_.dual[k];
  }
  return out;
}

double lambda_conservative(const BlockLinearOp& L) {
  double sum = 0.0;
  for (const auto& e : L.entries()) {
    const double s = e.spectral_norm();
    sum += s * s;
  }
  return sum;
}

LambdaEstimate lambda_power_iteration(const BlockLinearOp& L, int iters, double tol) {
  if (iters < 1) throw ParameterError("power iteration needs iters >= 1");
  const auto& primal = L.sig().primal;
  Eigen::Index n = 0;
  for (int d : primal) n += d;
  auto gram = [&](const Vector& x) -> Vector {
    return L.apply_adjoint(L.apply(BlockVector::unflatten(x, primal))).flatten();
  };
  auto [top, converged] = power_top_eigenvalue(n, gram, iters, tol);
  if (!converged) return {lambda_conservative(L), false};
  return {kPowerSafetyFactor * top, true};
}

double default_lambda(const BlockLinearOp& L) {
  const double conservative = lambda_conservative(L);
  const auto power = lambda_power_iteration(L);
  return power.converged ? std::min(conservative, power.value) : conservative;
}

}  // namespace monosplit
