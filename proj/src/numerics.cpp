#include "alphaloss/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "alphaloss/errors.hpp"

namespace alphaloss {

namespace {

void require_same_dim(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw UsageError("vector dimension mismatch: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
}

void require_finite_scalar(double z, const char* fn) {
  if (!std::isfinite(z)) throw DomainError(std::string(fn) + ": non-finite argument");
}

}  // namespace

Vector& Vector::operator+=(const Vector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(const Vector& v) {
  // hypot-style scaling keeps huge or tiny entries from overflowing the square.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (double x : v) {
    const double t = x / scale;
    acc += t * t;
  }
  return scale * std::sqrt(acc);
}

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require_finite(const Vector& v, const char* what) {
  if (!all_finite(v)) throw DomainError(std::string(what) + ": non-finite entry");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw UsageError("matrix literal is not square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::multiply_transpose() const {
  Matrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) acc += (*this)(i, k) * (*this)(j, k);
      out(i, j) = acc;
    }
  }
  return out;
}

double Matrix::max_abs_diff(const Matrix& other) const {
  if (dim_ != other.dim_) throw UsageError("matrix dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  }
  return worst;
}

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  const std::size_t d = m_.dim();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(m_(i, j))) throw DomainError("symmetric matrix: non-finite entry");
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double gap = std::abs(m_(i, j) - m_(j, i));
      if (gap > kSymmetryTolerance) {
        throw DomainError("matrix is not symmetric: |A(" + std::to_string(i) + "," +
                          std::to_string(j) + ") - A(" + std::to_string(j) + "," +
                          std::to_string(i) + ")| = " + std::to_string(gap) +
                          " exceeds tolerance 1e-12");
      }
      const double avg = 0.5 * (m_(i, j) + m_(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
  }
}

SymMatrix SymMatrix::outer(const Vector& x, double scale) {
  SymMatrix out(x.size());
  out.add_outer(x, scale);
  return out;
}

void SymMatrix::add_outer(const Vector& x, double scale) {
  if (x.size() != dim()) throw UsageError("outer product dimension mismatch");
  const std::size_t d = dim();
  Matrix& m = m_;
  for (std::size_t i = 0; i < d; ++i) {
    const double si = scale * x[i];
    for (std::size_t j = i; j < d; ++j) {
      const double v = si * x[j];
      m(i, j) += v;
      if (j != i) m(j, i) += v;
    }
  }
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.dim() != dim()) throw UsageError("matrix dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) m_(i, j) += other(i, j);
  }
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) m_(i, j) *= s;
  }
  return *this;
}

double SymMatrix::quadratic_form(const Vector& v) const {
  if (v.size() != dim()) throw UsageError("quadratic form dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) acc += v[i] * m_(i, j) * v[j];
  }
  return acc;
}

std::vector<double> symmetric_eigenvalues(const SymMatrix& input) {
  Matrix a = input.matrix();
  const std::size_t d = a.dim();
  if (d == 0) throw UsageError("eigenvalues of an empty matrix");

  auto off_diagonal = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        if (i != j) acc += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(acc);
  };
  double frobenius = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) frobenius += a(i, j) * a(i, j);
  }
  const double tol = kJacobiOffDiagonalTolerance * std::max(1.0, std::sqrt(frobenius));

  double residual = off_diagonal();
  for (int sweep = 0; sweep < kJacobiMaxSweeps && residual >= tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = arp - s * (arq + tau * arp);
          a(r, q) = arq + s * (arp - tau * arq);
          a(p, r) = a(r, p);
          a(q, r) = a(r, q);
        }
      }
    }
    residual = off_diagonal();
  }
  if (residual >= tol) {
    throw NumericError("Jacobi eigensolver did not converge in " +
                       std::to_string(kJacobiMaxSweeps) +
                       " sweeps; off-diagonal residual " + std::to_string(residual));
  }
  std::vector<double> eig(d);
  for (std::size_t i = 0; i < d; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double min_eigen_sym(const SymMatrix& a) { return symmetric_eigenvalues(a).front(); }

Matrix cholesky(const SymMatrix& a) {
  const std::size_t d = a.dim();
  Matrix l(d);
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) {
      throw DomainError("cholesky: matrix is not positive definite (leading minor of order " +
                        std::to_string(j + 1) + " is not positive)");
    }
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < d; ++i) {
      double acc = a(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / l(j, j);
    }
  }
  return l;
}

double sigmoid(double z) {
  require_finite_scalar(z, "sigmoid");
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double log_sigmoid(double z) {
  require_finite_scalar(z, "log_sigmoid");
  return -softplus(-z);
}

Vector project_ball(const Vector& v, double r) {
  if (!(r > 0.0)) throw DomainError("project_ball: radius must be positive");
  require_finite(v, "project_ball");
  const double n = norm(v);
  if (n <= r) return v;
  Vector out = v;
  for (double& x : out) x = x * r / n;
  // Rounding can leave the scaled vector a hair outside; shrink by an ulp
  // until it is inside, which also makes the result a fixed point.
  while (norm(out) > r) out *= std::nextafter(r / norm(out), 0.0);
  return out;
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    word = z ^ (z >> 31);
  }
}

std::uint64_t Rng::next_u64() noexcept {
  auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open_left() noexcept {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

Rng Rng::child(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 1)));
}

std::pair<double, double> gaussian_pair(Rng& rng) {
  const double u1 = rng.uniform_open_left();
  const double u2 = rng.uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

Vector gaussian_vector(Rng& rng, std::size_t dim) {
  Vector z(dim);
  for (std::size_t i = 0; i < dim; i += 2) {
    const auto [a, b] = gaussian_pair(rng);
    z[i] = a;
    if (i + 1 < dim) z[i + 1] = b;
  }
  return z;
}

Vector uniform_in_ball(Rng& rng, std::size_t dim, double r) {
  if (!(r > 0.0)) throw DomainError("uniform_in_ball: radius must be positive");
  if (dim == 0) throw UsageError("uniform_in_ball: dimension must be positive");
  Vector v(dim);
  for (;;) {
    double sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      v[i] = rng.uniform(-r, r);
      sq += v[i] * v[i];
    }
    if (sq <= r * r) return v;
  }
}

}  // namespace alphaloss
