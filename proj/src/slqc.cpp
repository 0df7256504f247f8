#include "alphaloss/slqc.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "alphaloss/errors.hpp"
#include "alphaloss/io.hpp"

namespace alphaloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_in_ball(const Vector& v, double r, const char* what) {
  if (norm(v) > r + 1e-9) {
    throw UsageError(std::string(what) + " lies outside B_d(" + format_double(r) + ")");
  }
}

nlohmann::json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

nlohmann::json vector_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) out.push_back(number_or_string(x));
  return out;
}

nlohmann::json verdict_json(const SlqcVerdict& v) {
  nlohmann::json j{{"point", vector_json(v.point)},
                   {"satisfied_by", to_string(v.satisfied_by)},
                   {"value_gap", number_or_string(v.value_gap)},
                   {"inner", number_or_string(v.inner)},
                   {"rho_grad_norm", number_or_string(v.rho_grad_norm)},
                   {"distance", number_or_string(v.distance)}};
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

}  // namespace

void SlqcParams::validate() const {
  if (std::isnan(epsilon) || !(epsilon > 0.0)) throw DomainError("SLQC epsilon must be positive");
  if (!std::isfinite(kappa) || !(kappa > 0.0)) throw DomainError("SLQC kappa must be positive and finite");
  require_finite(theta0, "theta0");
}

const char* to_string(SlqcCondition c) {
  switch (c) {
    case SlqcCondition::ValueGap:
      return "ValueGap";
    case SlqcCondition::GradientCone:
      return "GradientCone";
    case SlqcCondition::Neither:
      return "Neither";
  }
  return "?";
}

double ball_min_inner(const Vector& g, const Vector& theta, const Vector& theta0, double rho) {
  if (!(rho > 0.0)) throw DomainError("ball_min_inner: rho must be positive");
  return -dot(g, theta0 - theta) - rho * norm(g);
}

namespace {

SlqcVerdict classify(const Vector& theta, const SlqcParams& params, double risk0,
                     const RiskEvaluation& eval) {
  SlqcVerdict v;
  v.point = theta;
  v.value_gap = eval.value - risk0;
  v.distance = norm(theta - params.theta0);
  const double rho = params.rho();
  const double gnorm = norm(eval.gradient);
  v.inner = -dot(eval.gradient, params.theta0 - theta);
  v.rho_grad_norm = rho * gnorm;

  if (v.value_gap <= params.epsilon + kSlqcTolerance) {
    v.satisfied_by = SlqcCondition::ValueGap;
    return v;
  }
  if (v.distance <= rho) {
    v.satisfied_by = SlqcCondition::Neither;
    v.note = "inside the rho-ball around theta0 with a value gap above epsilon";
    return v;
  }
  if (gnorm > 0.0 && v.inner - v.rho_grad_norm >= -kSlqcTolerance) {
    v.satisfied_by = SlqcCondition::GradientCone;
  } else {
    v.satisfied_by = SlqcCondition::Neither;
    if (gnorm == 0.0) v.note = "zero gradient";
  }
  return v;
}

}  // namespace

SlqcVerdict check_slqc_point(Alpha alpha, const Vector& theta, const SlqcParams& params,
                             const Dataset& data, double r) {
  params.validate();
  require_in_ball(theta, r, "theta");
  require_in_ball(params.theta0, r, "theta0");
  const double risk0 = empirical_risk(alpha, params.theta0, data);
  return classify(theta, params, risk0, empirical_risk_value_grad(alpha, theta, data));
}

SlqcReport slqc_sweep(Alpha alpha, const SlqcParams& params, const Dataset& data, double r,
                      std::size_t points, Rng& rng, bool keep_verdicts) {
  params.validate();
  require_in_ball(params.theta0, r, "theta0");
  SlqcReport report;
  report.alpha = alpha;
  report.params = params;
  report.r = r;
  report.points = points;
  report.max_value_gap = -kInf;
  report.min_cone_margin = kInf;
  const double risk0 = empirical_risk(alpha, params.theta0, data);
  for (std::size_t i = 0; i < points; ++i) {
    const Vector theta = uniform_in_ball(rng, data.dim(), r);
    SlqcVerdict v = classify(theta, params, risk0, empirical_risk_value_grad(alpha, theta, data));
    ++report.counts[static_cast<std::size_t>(v.satisfied_by)];
    report.max_value_gap = std::max(report.max_value_gap, v.value_gap);
    if (v.satisfied_by != SlqcCondition::ValueGap) {
      const double margin = v.inner - v.rho_grad_norm;
      const bool first_neither =
          v.satisfied_by == SlqcCondition::Neither &&
          (!report.worst || report.worst->satisfied_by != SlqcCondition::Neither);
      const bool tighter = margin < report.min_cone_margin &&
                           (!report.worst || report.worst->satisfied_by != SlqcCondition::Neither);
      if (first_neither || tighter) report.worst = v;
      report.min_cone_margin = std::min(report.min_cone_margin, margin);
    }
    if (keep_verdicts) report.verdicts.push_back(std::move(v));
  }
  return report;
}

std::string slqc_report_to_json(const SlqcReport& report) {
  nlohmann::json j;
  j["params"] = {{"alpha", report.alpha.to_string()},
                 {"epsilon", number_or_string(report.params.epsilon)},
                 {"kappa", number_or_string(report.params.kappa)},
                 {"rho", number_or_string(report.params.rho())},
                 {"theta0", vector_json(report.params.theta0)},
                 {"r", report.r}};
  j["points"] = report.points;
  j["counts"] = {{"ValueGap", report.count(SlqcCondition::ValueGap)},
                 {"GradientCone", report.count(SlqcCondition::GradientCone)},
                 {"Neither", report.count(SlqcCondition::Neither)}};
  j["worst_case"] = {{"max_value_gap", number_or_string(report.max_value_gap)},
                     {"min_cone_margin", number_or_string(report.min_cone_margin)}};
  if (report.worst) j["worst_case"]["point"] = verdict_json(*report.worst);
  if (!report.verdicts.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : report.verdicts) arr.push_back(verdict_json(v));
    j["verdicts"] = std::move(arr);
  }
  return j.dump(2) + "\n";
}

double strong_convexity_modulus(Alpha alpha, double r, const SymMatrix& sigma_hat) {
  const double lambda = lambda_strong(alpha, r);
  const double lmin = min_eigen_sym(sigma_hat);
  if (lmin < -1e-12) throw DomainError("second-moment matrix is not positive semi-definite");
  return lambda * std::max(lmin, 0.0);
}

double estimate_I(Alpha alpha0, double epsilon0, double r, const Vector& theta0,
                  const Dataset& data, std::size_t budget, Rng& rng) {
  if (budget == 0) throw UsageError("estimate_I: budget must be at least 1");
  if (!(epsilon0 > 0.0)) throw DomainError("estimate_I: epsilon0 must be positive");
  require_in_ball(theta0, r, "theta0");
  const double risk0 = empirical_risk(alpha0, theta0, data);
  double best = kInf;
  for (std::size_t i = 0; i < budget; ++i) {
    const Vector theta = uniform_in_ball(rng, data.dim(), r);
    const RiskEvaluation eval = empirical_risk_value_grad(alpha0, theta, data);
    if (eval.value - risk0 > epsilon0) best = std::min(best, norm(eval.gradient));
  }
  return best;
}

namespace {

void require_evolution_inputs(Alpha alpha0, double epsilon0, double kappa0, double r, double I,
                              bool accept_unbounded) {
  if (!alpha0.is_infinite() && alpha0.value() < 1.0) {
    throw DomainError("evolution requires alpha0 >= 1, got " + alpha0.to_string());
  }
  if (!(epsilon0 > 0.0) || !std::isfinite(epsilon0)) throw DomainError("epsilon0 must be positive");
  if (!(kappa0 > 0.0) || !std::isfinite(kappa0)) throw DomainError("kappa0 must be positive");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("radius must be positive");
  if (std::isnan(I) || !(I > 0.0)) {
    throw DomainError("gradient infimum I must be positive, got " + format_double(I));
  }
  if (std::isinf(I) && !accept_unbounded) {
    throw DomainError(
        "gradient infimum I is +inf (empty qualifying set); pass accept_unbounded to treat the "
        "window as unbounded");
  }
}

}  // namespace

double evolution_window(Alpha alpha0, double epsilon0, double kappa0, double r, double I) {
  require_evolution_inputs(alpha0, epsilon0, kappa0, r, I, true);
  const double a0 = alpha0.value();
  return a0 * a0 * I / (2.0 * lipschitz_J(r) * (1.0 + r * kappa0 / epsilon0));
}

std::vector<EvolutionRow> evolve_bounds(Alpha alpha0, double epsilon0, double kappa0, double r,
                                        double I, const std::vector<Alpha>& alphas,
                                        bool accept_unbounded) {
  require_evolution_inputs(alpha0, epsilon0, kappa0, r, I, accept_unbounded);
  const double rho0 = epsilon0 / kappa0;
  const double L = lipschitz_L(r);
  const double J = lipschitz_J(r);
  const double window = evolution_window(alpha0, epsilon0, kappa0, r, I);

  std::vector<EvolutionRow> rows;
  rows.reserve(alphas.size());
  for (Alpha alpha : alphas) {
    if (alpha0.is_infinite()) {
      if (!alpha.is_infinite()) {
        throw DomainError("every alpha must be >= alpha0 = inf, got " + alpha.to_string());
      }
      rows.push_back({alpha, epsilon0, rho0, true});
      continue;
    }
    if (!alpha.is_infinite() && alpha.value() < alpha0.value()) {
      throw DomainError("every alpha must be >= alpha0 = " + alpha0.to_string() + ", got " +
                        alpha.to_string());
    }
    if (alpha.is_infinite()) {
      rows.push_back({alpha, std::nullopt, std::nullopt, false});
      continue;
    }
    const double step = alpha.value() - alpha0.value();
    if (step == 0.0) {
      rows.push_back({alpha, epsilon0, rho0, true});
      continue;
    }
    if (!(step < window)) {
      rows.push_back({alpha, std::nullopt, std::nullopt, false});
      continue;
    }
    const double epsilon = epsilon0 + 2.0 * L * step;
    double rho = rho0;
    if (std::isfinite(I)) {
      const double shrink = (1.0 + 2.0 * r / rho0) * J * step /
                            (alpha.value() * alpha0.value() * I - J * step);
      rho = rho0 * (1.0 - shrink);
    }
    rows.push_back({alpha, epsilon, rho, true});
  }
  return rows;
}

std::vector<EvolutionRow> evolve_from_log_loss(double epsilon0, double r, double I,
                                               const std::vector<Alpha>& alphas,
                                               bool accept_unbounded) {
  const Alpha one(1.0);
  return evolve_bounds(one, epsilon0, lipschitz_C(one, r), r, I, alphas, accept_unbounded);
}

std::string evolution_to_csv(const std::vector<EvolutionRow>& rows) {
  std::string out = "alpha,epsilon,rho,in_window\n";
  for (const auto& row : rows) {
    out += row.alpha.to_string() + ",";
    out += (row.epsilon ? format_double(*row.epsilon) : std::string()) + ",";
    out += (row.rho ? format_double(*row.rho) : std::string()) + ",";
    out += row.in_window ? "true\n" : "false\n";
  }
  return out;
}

}  // namespace alphaloss
