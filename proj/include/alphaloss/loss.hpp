#pragma once

#include <string>

#include "alphaloss/numerics.hpp"

namespace alphaloss {

/// Order parameter of the alpha-loss family, alpha in (0, inf]. Infinity is a
/// distinct state rather than a large float so the alpha = inf branches use the
/// exponent 1 exactly.
class Alpha {
 public:
  /// Rejects zero, negatives and NaN. +inf maps to the infinity state.
  explicit Alpha(double value);
  static Alpha infinity() noexcept { return Alpha(); }

  /// Accepts decimal literals and "inf" / "infinity" (case-insensitive).
  static Alpha parse(const std::string& text);

  bool is_infinite() const noexcept { return infinite_; }
  /// The numeric value; +inf for the infinity state.
  double value() const noexcept;
  /// 1/alpha, exactly 0 at infinity.
  double inverse() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }
  /// 1 - 1/alpha, exactly 1 at infinity.
  double exponent() const noexcept { return infinite_ ? 1.0 : 1.0 - 1.0 / value_; }
  /// True when |1 - 1/alpha| is below the log-loss switch threshold.
  bool is_log_loss() const noexcept;

  /// Shortest decimal text that parses back to the same alpha ("inf" at infinity).
  std::string to_string() const;

  friend bool operator==(const Alpha& a, const Alpha& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Alpha() noexcept : value_(0.0), infinite_(true) {}
  double value_;
  bool infinite_;
};

/// |1 - 1/alpha| below this switches to the log-loss limit.
inline constexpr double kLogLossThreshold = 1e-6;

/// Labeled feature vector; y in {-1, +1}.
struct Sample {
  Vector x;
  int y = 1;
};

/// Throws ValidationError unless y is +-1 and ||x|| <= 1 + 1e-9.
void validate_sample(const Sample& s);

/// alpha/(alpha-1) * (1 - p^{1-1/alpha}) with the continuous extensions
/// -ln p at alpha = 1 and 1 - p at alpha = inf. Requires p in (0, 1].
double alpha_loss(Alpha alpha, double p);

/// Same loss given ln p directly, for probabilities too small to represent.
double alpha_loss_from_log(Alpha alpha, double log_p);

/// Signed margin y <theta, x>.
double margin(const Vector& theta, const Sample& s);

/// alpha-loss of the logistic soft classifier sigma(<theta, x>) on sample s.
double loss_margin(Alpha alpha, const Vector& theta, const Sample& s);

/// Scalar factor F1 with grad = F1 * x: -y g^{1-1/alpha} (1 - g), g = sigma(margin).
double grad_factor(Alpha alpha, const Vector& theta, const Sample& s);
Vector loss_grad(Alpha alpha, const Vector& theta, const Sample& s);

/// Scalar factor F2 with Hessian = F2 * x x^T:
/// g^{1-1/alpha} (g (1 - g) - (1 - 1/alpha) (1 - g)^2).
double hess_factor(Alpha alpha, const Vector& theta, const Sample& s);
SymMatrix loss_hess(Alpha alpha, const Vector& theta, const Sample& s);

/// Gradient and Hessian factors as functions of the margin alone.
double grad_factor_at_margin(Alpha alpha, double m);
double hess_factor_at_margin(Alpha alpha, double m);

// Landscape constants.

/// Lower bound of F2 over margins in [-r, r], for alpha in (0, 1]:
/// sigma(r)^{1-1/alpha} (sigma'(r) - (1 - 1/alpha) sigma(-r)^2).
double lambda_strong(Alpha alpha, double r);

/// Lipschitz constant of the alpha-risk in theta over B_d(r), alpha in (0, 1]:
/// sigma(r) (1 - sigma(r))^{1-1/alpha}.
double lipschitz_C(Alpha alpha, double r);

/// Lipschitz constant of the alpha-risk in alpha on [1, inf]: (r + ln 2)^2 / 2.
double lipschitz_L(double r);

/// Lipschitz constant of the risk gradient in 1/alpha: (r + ln 2) sigma(r).
double lipschitz_J(double r);

}  // namespace alphaloss
