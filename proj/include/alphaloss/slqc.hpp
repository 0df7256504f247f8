#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "alphaloss/loss.hpp"
#include "alphaloss/numerics.hpp"
#include "alphaloss/risk.hpp"

namespace alphaloss {

/// Absolute slack on both SLQC inequalities.
inline constexpr double kSlqcTolerance = 1e-9;

/// (epsilon, kappa, theta0) of a strictly-locally-quasi-convex certificate.
/// epsilon may be +inf, which makes the value-gap condition vacuous.
struct SlqcParams {
  double epsilon;
  double kappa;
  Vector theta0;

  double rho() const { return epsilon / kappa; }
  /// Throws DomainError unless epsilon > 0 and kappa > 0 with theta0 finite.
  void validate() const;
};

enum class SlqcCondition { ValueGap, GradientCone, Neither };

const char* to_string(SlqcCondition c);

struct SlqcVerdict {
  Vector point;
  SlqcCondition satisfied_by;
  double value_gap;       // R(theta) - R(theta0)
  double inner;           // <-grad R(theta), theta0 - theta>
  double rho_grad_norm;   // rho * ||grad R(theta)||
  double distance;        // ||theta - theta0||
  std::string note;
};

/// Minimum of <-g, theta' - theta> over theta' in the closed ball B(theta0, rho),
/// which is <-g, theta0 - theta> - rho ||g||.
double ball_min_inner(const Vector& g, const Vector& theta, const Vector& theta0, double rho);

/// Tests the two SLQC conditions of the empirical alpha-risk at theta.
/// The gradient-cone condition is checked in its closed form and only applies
/// when ||theta - theta0|| > rho; closer points that fail the value gap are
/// reported as Neither. Throws UsageError when theta or theta0 leave B_d(r).
SlqcVerdict check_slqc_point(Alpha alpha, const Vector& theta, const SlqcParams& params,
                             const Dataset& data, double r);

/// Aggregate of a sampled certificate sweep.
struct SlqcReport {
  Alpha alpha{1.0};
  SlqcParams params;
  double r = 0.0;
  std::size_t points = 0;
  std::array<std::size_t, 3> counts{};  // indexed by SlqcCondition
  double max_value_gap = 0.0;
  /// Smallest inner - rho ||g|| over points that failed the value gap (+inf if none).
  double min_cone_margin = 0.0;
  std::optional<SlqcVerdict> worst;  // first Neither, else the tightest cone point
  std::vector<SlqcVerdict> verdicts;  // filled only when requested

  std::size_t count(SlqcCondition c) const { return counts[static_cast<std::size_t>(c)]; }
};

/// Checks `points` parameters drawn uniformly from B_d(r).
SlqcReport slqc_sweep(Alpha alpha, const SlqcParams& params, const Dataset& data, double r,
                      std::size_t points, Rng& rng, bool keep_verdicts = false);

std::string slqc_report_to_json(const SlqcReport& report);

/// Lambda(alpha, r) * lambda_min(sigma_hat); alpha must be in (0, 1].
double strong_convexity_modulus(Alpha alpha, double r, const SymMatrix& sigma_hat);

/// Smallest gradient norm of R_alpha0 among `budget` points drawn uniformly from
/// B_d(r) whose risk exceeds R_alpha0(theta0) by more than epsilon0. This is an
/// upper estimate of the infimum I. Returns +inf when no drawn point qualifies.
double estimate_I(Alpha alpha0, double epsilon0, double r, const Vector& theta0,
                  const Dataset& data, std::size_t budget, Rng& rng);

struct EvolutionRow {
  Alpha alpha;
  std::optional<double> epsilon;  // empty outside the window
  std::optional<double> rho;      // epsilon / kappa, empty outside the window
  bool in_window;
};

/// Right end of the admissible increment alpha - alpha0:
/// alpha0^2 I / (2 J_r (1 + r kappa0 / epsilon0)).
double evolution_window(Alpha alpha0, double epsilon0, double kappa0, double r, double I);

/// SLQC parameters of R_alpha implied by an (epsilon0, kappa0, theta0)
/// certificate of R_alpha0. `I` must be positive and finite unless
/// `accept_unbounded` is set, in which case I = +inf means an unbounded window.
std::vector<EvolutionRow> evolve_bounds(Alpha alpha0, double epsilon0, double kappa0, double r,
                                        double I, const std::vector<Alpha>& alphas,
                                        bool accept_unbounded = false);

/// evolve_bounds from log-loss, alpha0 = 1 with kappa0 = C_{r,1} = sigma(r).
std::vector<EvolutionRow> evolve_from_log_loss(double epsilon0, double r, double I,
                                               const std::vector<Alpha>& alphas,
                                               bool accept_unbounded = false);

/// CSV with header alpha,epsilon,rho,in_window; out-of-window rows leave
/// epsilon and rho empty.
std::string evolution_to_csv(const std::vector<EvolutionRow>& rows);

}  // namespace alphaloss
