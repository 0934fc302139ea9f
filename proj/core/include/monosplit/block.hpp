#pragma once

// Block vectors over products of finite-dimensional spaces and the K x m grid
// of coupling operators acting between the primal and the dual product.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace monosplit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dimensions of the primal spaces H_1..H_m and dual spaces G_1..G_K.
struct SpaceSig {
  std::vector<int> primal;
  std::vector<int> dual;

  std::size_t m() const noexcept { return primal.size(); }
  std::size_t K() const noexcept { return dual.size(); }

  /// Throws SignatureError unless m >= 1, K >= 1 and every dimension is positive.
  void validate() const;

  bool operator==(const SpaceSig&) const = default;
};

/// Element of a product space: one dense vector per factor.
class BlockVector {
 public:
  BlockVector() = default;
  explicit BlockVector(std::vector<Vector> blocks) : blocks_(std::move(blocks)) {}

  static BlockVector zeros(std::span<const int> dims);
  /// Inverse of flatten().
  static BlockVector unflatten(const Vector& flat, std::span<const int> dims);
  /// Stacks primal and dual parts into one element of the primal-dual space.
  static BlockVector concat(const BlockVector& head, const BlockVector& tail);

  std::size_t size() const noexcept { return blocks_.size(); }
  Vector& operator[](std::size_t i) { return blocks_[i]; }
  const Vector& operator[](std::size_t i) const { return blocks_[i]; }
  const std::vector<Vector>& blocks() const noexcept { return blocks_; }

  std::vector<int> dims() const;
  Eigen::Index total_size() const;
  Vector flatten() const;
  /// Blocks [first, first + count) as a new block vector.
  BlockVector slice(std::size_t first, std::size_t count) const;

  bool matches(std::span<const int> dims) const;
  /// Throws SignatureError with `what` in the message on mismatch.
  void require(std::span<const int> dims, const char* what) const;

  double dot(const BlockVector& other) const;
  double squared_norm() const;
  double norm() const;
  bool all_finite() const;

  BlockVector& operator+=(const BlockVector& other);
  BlockVector& operator-=(const BlockVector& other);
  BlockVector& operator*=(double s);

  friend BlockVector operator+(BlockVector a, const BlockVector& b) { return a += b; }
  friend BlockVector operator-(BlockVector a, const BlockVector& b) { return a -= b; }
  friend BlockVector operator*(double s, BlockVector a) { return a *= s; }

  bool operator==(const BlockVector& other) const;

 private:
  std::vector<Vector> blocks_;
};

/// One entry L_ki of the coupling grid. Zero, identity and scalar multiples of
/// the identity are tagged so that they cost no matrix products.
class LinearEntry {
 public:
  enum class Kind { Zero, Identity, Scalar, Dense };

  static LinearEntry zero(int rows, int cols);
  static LinearEntry identity(int n);
  static LinearEntry scalar(int n, double s);
  static LinearEntry dense(Matrix m);

  Kind kind() const noexcept { return kind_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  double scale() const noexcept { return scalar_; }
  const Matrix& matrix() const noexcept { return dense_; }

  Vector apply(const Vector& x) const;
  Vector apply_transpose(const Vector& v) const;
  Matrix to_dense() const;
  /// Spectral norm; dense entries use power iteration on the Gram matrix.
  double spectral_norm() const;

  bool operator==(const LinearEntry& other) const;

 private:
  LinearEntry(Kind kind, int rows, int cols, double s, Matrix m)
      : kind_(kind), rows_(rows), cols_(cols), scalar_(s), dense_(std::move(m)) {}

  Kind kind_ = Kind::Zero;
  int rows_ = 0;
  int cols_ = 0;
  double scalar_ = 0.0;
  Matrix dense_;
};

/// The grid (L_ki), entry (k, i) mapping H_i to G_k, with a declared bound
/// lambda_bound >= sup_{||x|| <= 1} ||L x||^2.
class BlockLinearOp {
 public:
  BlockLinearOp() = default;
  /// `entries` is row-major: entries[k * m + i] = L_ki. The bound defaults to
  /// default_lambda() of the grid.
  BlockLinearOp(SpaceSig sig, std::vector<LinearEntry> entries);
  BlockLinearOp(SpaceSig sig, std::vector<LinearEntry> entries, double lambda_bound);

  const SpaceSig& sig() const noexcept { return sig_; }
  const LinearEntry& entry(std::size_t k, std::size_t i) const { return entries_[k * sig_.m() + i]; }
  const std::vector<LinearEntry>& entries() const noexcept { return entries_; }

  double lambda_bound() const noexcept { return lambda_bound_; }
  void set_lambda_bound(double lambda);

  /// (sum_i L_ki x_i)_k
  BlockVector apply(const BlockVector& x) const;
  /// (sum_k L_ki^T v_k)_i
  BlockVector apply_adjoint(const BlockVector& v) const;
  /// Flattened (sum dim G_k) x (sum dim H_i) matrix.
  Matrix to_dense() const;

 private:
  SpaceSig sig_;
  std::vector<LinearEntry> entries_;
  double lambda_bound_ = 0.0;
};

inline constexpr double kPowerSafetyFactor = 1.01;
inline constexpr int kPowerMaxIters = 1000;

/// sum_k sum_i ||L_ki||^2 (Cauchy-Schwarz bound).
double lambda_conservative(const BlockLinearOp& L);

struct LambdaEstimate {
  double value = 0.0;
  /// False when the iteration cap was reached; value is then the conservative bound.
  bool converged = true;
};

/// Power iteration on L^T L, estimate inflated by kPowerSafetyFactor.
LambdaEstimate lambda_power_iteration(const BlockLinearOp& L, int iters = kPowerMaxIters,
                                      double tol = 1e-10);

/// min(conservative, converged power estimate): both are valid bounds.
double default_lambda(const BlockLinearOp& L);

}  // namespace monosplit
