#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace alphaloss {

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kCholeskyResidualTolerance = 1e-10;
inline constexpr double kJacobiOffDiagonalTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

// ---------------------------------------------------------------------------
// Dense vectors and small square matrices
// ---------------------------------------------------------------------------

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<const double> values() const noexcept { return data_; }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

double dot(const Vector& a, const Vector& b);
double norm(const Vector& v);
bool all_finite(const Vector& v);

/// Throws DomainError naming `what` when any entry is NaN or infinite.
void require_finite(const Vector& v, const char* what);

/// Square d x d matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim, double fill = 0.0) : dim_(dim), data_(dim * dim, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  Matrix multiply_transpose() const;  // this * this^T
  double max_abs_diff(const Matrix& other) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Symmetric matrix. Construction rejects asymmetry beyond kSymmetryTolerance
/// and non-finite entries; accumulation keeps symmetry exact.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : m_(dim) {}
  explicit SymMatrix(Matrix m);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : SymMatrix(Matrix(rows)) {}

  /// scale * x x^T
  static SymMatrix outer(const Vector& x, double scale = 1.0);

  std::size_t dim() const noexcept { return m_.dim(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

  /// this += scale * x x^T
  void add_outer(const Vector& x, double scale);
  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator*=(double s);

  double quadratic_form(const Vector& v) const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  Matrix m_;
};

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
/// Throws NumericError with the residual off-diagonal norm when
/// kJacobiMaxSweeps sweeps do not suffice.
std::vector<double> symmetric_eigenvalues(const SymMatrix& a);

double min_eigen_sym(const SymMatrix& a);

/// Lower-triangular L with L L^T = A. Throws DomainError naming the first
/// leading minor that is not positive.
Matrix cholesky(const SymMatrix& a);

// ---------------------------------------------------------------------------
// Scalar functions
// ---------------------------------------------------------------------------

/// 1 / (1 + e^{-z}) evaluated branch-wise so that no finite z overflows.
double sigmoid(double z);

/// ln(1 + e^{t}) without overflow or premature underflow.
double softplus(double t);

/// ln sigmoid(z) = -softplus(-z).
double log_sigmoid(double z);

/// Returns v when ||v|| <= r, otherwise v scaled onto the sphere of radius r.
Vector project_ball(const Vector& v, double r);

/// Neumaier-compensated running sum; the result depends only on insertion order.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// ---------------------------------------------------------------------------
// Deterministic randomness
// ---------------------------------------------------------------------------

/// xoshiro256** seeded through splitmix64. Child streams are derived as
/// splitmix64(seed ^ splitmix64(stream + 1)), so a (seed, stream) pair names
/// the same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1].
  double uniform_open_left() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  Rng child(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Two independent N(0,1) deviates via Box-Muller.
std::pair<double, double> gaussian_pair(Rng& rng);

/// Standard-normal vector of length dim, consuming ceil(dim/2) Box-Muller pairs.
Vector gaussian_vector(Rng& rng, std::size_t dim);

/// Uniform point in the closed ball of radius r, by rejection from the cube [-r, r]^dim.
Vector uniform_in_ball(Rng& rng, std::size_t dim, double r);

}  // namespace alphaloss
