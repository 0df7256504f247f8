#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alphaloss/numerics.hpp"
#include "alphaloss/risk.hpp"

namespace alphaloss {

/// Value and gradient of an objective at a point.
using Objective = std::function<RiskEvaluation(const Vector&)>;

/// Objective backed by the empirical alpha-risk of `data`. The dataset must
/// outlive the returned function.
Objective risk_objective(Alpha alpha, const Dataset& data);

struct NgdConfig {
  double eta = 0.0;
  std::size_t iterations = 1;
  std::optional<double> radius;  // projection onto B_d(radius) after every step
  bool record_trace = false;

  /// Throws UsageError unless eta > 0, iterations >= 1 and any radius > 0.
  void validate() const;
};

struct NgdTraceEntry {
  std::size_t t;  // 1-based iterate index
  Vector theta;
  double value;
  double grad_norm;
};

enum class NgdStop { Completed, ZeroGradient };

struct NgdResult {
  Vector best_theta;      // first iterate attaining best_value
  double best_value;
  std::size_t best_index; // 1-based
  Vector last_theta;      // theta_{T+1}, or the stopping iterate
  std::size_t evaluations;
  NgdStop stop = NgdStop::Completed;
  std::vector<NgdTraceEntry> trace;
};

inline constexpr double kZeroGradientNorm = 1e-14;

/// Normalized gradient descent: theta <- theta - eta grad / ||grad||, projected
/// onto the ball when configured. Returns the best of theta_1..theta_T.
/// Throws NumericError on a non-finite objective value or gradient.
NgdResult ngd_run(const Objective& objective, const Vector& theta1, const NgdConfig& config);

/// Smallest T with T >= kappa^2 dist^2 / epsilon^2, at least 1.
std::size_t iteration_budget(double epsilon, double kappa, double dist);

/// Runs NGD stages with eta = epsilon_k / kappa and the matching iteration
/// budget for each epsilon_k in `schedule`, each stage restarting from the
/// previous best iterate. The first stage's distance bound is 2r.
NgdResult ngd_minimize(const Objective& objective, const Vector& theta1, double kappa, double r,
                       const std::vector<double>& schedule);

/// Reference projected gradient descent with a fixed step; stops early once
/// the projected step is shorter than `tolerance`.
struct ProjectedGdResult {
  Vector theta;
  double value;
  std::size_t iterations;
};
ProjectedGdResult projected_gd(const Objective& objective, const Vector& theta1, double r,
                               double step, std::size_t max_iterations, double tolerance = 0.0);

/// CSV with header t,theta_1..theta_d,value,grad_norm.
std::string ngd_trace_to_csv(const std::vector<NgdTraceEntry>& trace);

}  // namespace alphaloss
