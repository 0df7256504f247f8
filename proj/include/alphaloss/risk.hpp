#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "alphaloss/loss.hpp"
#include "alphaloss/numerics.hpp"

namespace alphaloss {

/// Immutable, nonempty set of samples sharing one dimension, every feature in
/// the closed unit ball (1e-9 slack).
class Dataset {
 public:
  /// Throws ValidationError on an empty set, mixed dimensions, bad labels or
  /// features outside the unit ball.
  explicit Dataset(std::vector<Sample> samples);

  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  /// Sample second-moment matrix (1/n) sum x x^T.
  SymMatrix second_moment() const;

 private:
  std::vector<Sample> samples_;
  std::size_t dim_;
};

double empirical_risk(Alpha alpha, const Vector& theta, const Dataset& data);
Vector empirical_risk_grad(Alpha alpha, const Vector& theta, const Dataset& data);
SymMatrix empirical_risk_hess(Alpha alpha, const Vector& theta, const Dataset& data);

/// Risk and gradient from one pass over the data.
struct RiskEvaluation {
  double value;
  Vector gradient;
};
RiskEvaluation empirical_risk_value_grad(Alpha alpha, const Vector& theta, const Dataset& data);

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

struct GridAxis {
  double min;
  double max;
  std::size_t count;
};

/// Tensor-product grid. With `mask` set, nodes outside B_d(radius) are dropped
/// (inclusive, 1e-12 slack).
struct GridSpec {
  std::vector<GridAxis> axes;
  bool mask = false;
  double radius = 0.0;

  /// [-r, r]^dim with `count` nodes per axis, masked to B_d(r).
  static GridSpec ball(std::size_t dim, double r, std::size_t count);

  /// Throws UsageError on count < 2, min >= max, non-positive mask radius or
  /// more than kMaxGridNodes nodes.
  void validate() const;
  std::size_t total_nodes() const;

  /// Nodes in row-major order (last axis varies fastest), mask applied.
  std::vector<Vector> nodes() const;
};

inline constexpr std::size_t kMaxGridNodes = 10'000'000;

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Risk values over grid nodes plus everything needed to regenerate them.
struct LandscapeTable {
  Metadata metadata;
  std::vector<Vector> thetas;
  std::vector<double> risks;

  std::size_t dim() const { return thetas.empty() ? 0 : thetas.front().size(); }
};

LandscapeTable landscape_scan(Alpha alpha, const GridSpec& grid, const Dataset& data);

/// CSV: `#`-prefixed `key=value` metadata lines, header theta_1..theta_d,risk,
/// then one row per node at 17 significant digits.
std::string landscape_to_csv(const LandscapeTable& table);

/// Largest |R_alpha - R_alpha2| over the grid nodes. Both orders must lie in
/// [1, inf] and the grid must be masked to a ball.
double saturation_sup(Alpha alpha, Alpha alpha2, const GridSpec& grid, const Dataset& data);

}  // namespace alphaloss
