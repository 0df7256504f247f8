#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "alphaloss/data.hpp"
#include "alphaloss/loss.hpp"
#include "alphaloss/numerics.hpp"
#include "alphaloss/risk.hpp"

namespace test_support {

using namespace alphaloss;

inline double rel_err(double got, double want, double floor = 1e-8) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

inline Dataset single_sample(Vector x, int y) { return Dataset({Sample{std::move(x), y}}); }

/// Seeded preset dataset, normalized the same way the CLI does it.
inline Dataset preset_dataset(Preset p, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return normalize_features(sample_gmm(preset(p), n, rng)).first;
}

/// Small random dataset inside the unit ball.
inline Dataset random_dataset(Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < n; ++i) {
    samples.push_back({uniform_in_ball(rng, dim, 1.0), rng.uniform() < 0.5 ? -1 : 1});
  }
  return Dataset(std::move(samples));
}

}  // namespace test_support

namespace test_support {

/// Central-difference gradient of the per-sample loss, step h.
inline Vector fd_loss_grad(Alpha alpha, const Vector& theta, const Sample& s, double h = 1e-5) {
  Vector g(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    Vector up = theta, down = theta;
    up[k] += h;
    down[k] -= h;
    g[k] = (loss_margin(alpha, up, s) - loss_margin(alpha, down, s)) / (2 * h);
  }
  return g;
}

/// Central-difference Hessian from the analytic gradient, step h.
inline Matrix fd_loss_hess(Alpha alpha, const Vector& theta, const Sample& s, double h = 1e-5) {
  const std::size_t d = theta.size();
  Matrix m(d);
  for (std::size_t k = 0; k < d; ++k) {
    Vector up = theta, down = theta;
    up[k] += h;
    down[k] -= h;
    const Vector gu = loss_grad(alpha, up, s), gd = loss_grad(alpha, down, s);
    for (std::size_t i = 0; i < d; ++i) m(i, k) = (gu[i] - gd[i]) / (2 * h);
  }
  return m;
}

inline double frobenius(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * m(i, j);
  }
  return std::sqrt(s);
}

inline double matrix_rel_err(const Matrix& got, const Matrix& want) {
  Matrix diff(got.dim());
  for (std::size_t i = 0; i < got.dim(); ++i) {
    for (std::size_t j = 0; j < got.dim(); ++j) diff(i, j) = got(i, j) - want(i, j);
  }
  return frobenius(diff) / std::max(frobenius(want), 1e-300);
}

inline double vector_rel_err(const Vector& got, const Vector& want) {
  return norm(got - want) / std::max(norm(want), 1e-300);
}

}  // namespace test_support
