#include "alphaloss/ngd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alphaloss/errors.hpp"
#include "alphaloss/io.hpp"

namespace alphaloss {

Objective risk_objective(Alpha alpha, const Dataset& data) {
  return [alpha, &data](const Vector& theta) { return empirical_risk_value_grad(alpha, theta, data); };
}

void NgdConfig::validate() const {
  if (!std::isfinite(eta) || !(eta > 0.0)) throw UsageError("NGD learning rate must be positive");
  if (iterations < 1) throw UsageError("NGD needs at least one iteration");
  if (radius && !(*radius > 0.0)) throw UsageError("NGD projection radius must be positive");
}

namespace {

RiskEvaluation evaluate_checked(const Objective& f, const Vector& theta, std::size_t t) {
  RiskEvaluation e = f(theta);
  if (!std::isfinite(e.value) || !all_finite(e.gradient)) {
    std::string where;
    for (double x : theta) where += (where.empty() ? "" : ", ") + format_double(x);
    throw NumericError("objective returned a non-finite value at iterate " + std::to_string(t) +
                       " (" + where + ")");
  }
  return e;
}

}  // namespace

NgdResult ngd_run(const Objective& objective, const Vector& theta1, const NgdConfig& config) {
  config.validate();
  require_finite(theta1, "theta1");
  if (config.radius && norm(theta1) > *config.radius + 1e-9) {
    throw UsageError("NGD starting point lies outside the projection ball");
  }
  NgdResult result;
  result.best_value = std::numeric_limits<double>::infinity();
  result.best_index = 0;
  result.evaluations = 0;

  Vector theta = theta1;
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    const RiskEvaluation e = evaluate_checked(objective, theta, t);
    ++result.evaluations;
    const double gnorm = norm(e.gradient);
    if (config.record_trace) result.trace.push_back({t, theta, e.value, gnorm});
    if (e.value < result.best_value) {
      result.best_value = e.value;
      result.best_theta = theta;
      result.best_index = t;
    }
    if (gnorm < kZeroGradientNorm) {
      result.stop = NgdStop::ZeroGradient;
      break;
    }
    theta -= e.gradient * (config.eta / gnorm);
    if (config.radius) theta = project_ball(theta, *config.radius);
  }
  result.last_theta = std::move(theta);
  return result;
}

std::size_t iteration_budget(double epsilon, double kappa, double dist) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("iteration_budget: epsilon must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("iteration_budget: kappa must be positive");
  if (!(dist >= 0.0) || !std::isfinite(dist)) throw DomainError("iteration_budget: distance must be nonnegative");
  const double ratio = kappa * dist / epsilon;
  const double t = std::ceil(ratio * ratio);
  if (t > 1e15) throw DomainError("iteration_budget: budget exceeds 10^15 iterations");
  return t < 1.0 ? 1 : static_cast<std::size_t>(t);
}

NgdResult ngd_minimize(const Objective& objective, const Vector& theta1, double kappa, double r,
                       const std::vector<double>& schedule) {
  if (schedule.empty()) throw UsageError("ngd_minimize: empty epsilon schedule");
  Vector start = theta1;
  double dist = 2.0 * r;
  NgdResult result;
  std::size_t evaluations = 0;
  for (double eps : schedule) {
    NgdConfig config;
    config.eta = eps / kappa;
    config.iterations = iteration_budget(eps, kappa, dist);
    config.radius = r;
    NgdResult stage = ngd_run(objective, start, config);
    evaluations += stage.evaluations;
    // The best iterate of a stage is within a few steps of the optimum, so the
    // next stage's distance bound is scaled from this stage's step length.
    dist = std::min(dist, 4.0 * config.eta);
    start = stage.best_theta;
    if (result.best_theta.empty() || stage.best_value <= result.best_value) {
      result = std::move(stage);
    }
  }
  result.evaluations = evaluations;
  return result;
}

ProjectedGdResult projected_gd(const Objective& objective, const Vector& theta1, double r,
                               double step, std::size_t max_iterations, double tolerance) {
  if (!(step > 0.0)) throw UsageError("projected_gd: step must be positive");
  Vector theta = project_ball(theta1, r);
  std::size_t it = 0;
  for (; it < max_iterations; ++it) {
    const RiskEvaluation e = evaluate_checked(objective, theta, it + 1);
    Vector next = project_ball(theta - e.gradient * step, r);
    const double moved = norm(next - theta);
    theta = std::move(next);
    if (moved <= tolerance) {
      ++it;
      break;
    }
  }
  const double value = evaluate_checked(objective, theta, it + 1).value;
  return {std::move(theta), value, it};
}

std::string ngd_trace_to_csv(const std::vector<NgdTraceEntry>& trace) {
  std::string out = "t,";
  const std::size_t d = trace.empty() ? 0 : trace.front().theta.size();
  for (std::size_t k = 0; k < d; ++k) out += "theta_" + std::to_string(k + 1) + ",";
  out += "value,grad_norm\n";
  for (const auto& e : trace) {
    out += std::to_string(e.t) + ",";
    for (double x : e.theta) out += format_double(x) + ",";
    out += format_double(e.value) + "," + format_double(e.grad_norm) + "\n";
  }
  return out;
}

}  // namespace alphaloss
