#include "alphaloss/loss.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "alphaloss/errors.hpp"

namespace alphaloss {

Alpha::Alpha(double value) : value_(value), infinite_(false) {
  if (std::isnan(value) || !(value > 0.0)) {
    throw DomainError("alpha must be in (0, inf], got " + std::to_string(value));
  }
  if (std::isinf(value)) {
    value_ = 0.0;
    infinite_ = true;
  }
}

Alpha Alpha::parse(const std::string& text) {
  std::string lowered;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (lowered == "inf" || lowered == "+inf" || lowered == "infinity") return infinity();
  if (lowered.empty()) throw UsageError("empty alpha value");
  char* end = nullptr;
  const double v = std::strtod(lowered.c_str(), &end);
  if (end != lowered.c_str() + lowered.size()) {
    throw UsageError("cannot parse alpha value '" + text + "'");
  }
  return Alpha(v);
}

double Alpha::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

bool Alpha::is_log_loss() const noexcept {
  return !infinite_ && std::abs(1.0 - 1.0 / value_) < kLogLossThreshold;
}

std::string Alpha::to_string() const {
  if (infinite_) return "inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value_);
  return std::string(buf.data(), ptr);
}

void validate_sample(const Sample& s) {
  if (s.y != 1 && s.y != -1) {
    throw ValidationError("label must be -1 or +1, got " + std::to_string(s.y));
  }
  if (s.x.empty()) throw ValidationError("sample has no features");
  if (!all_finite(s.x)) throw ValidationError("sample has a non-finite feature");
  const double n = norm(s.x);
  if (n > 1.0 + 1e-9) {
    throw ValidationError("feature norm " + std::to_string(n) + " exceeds the unit ball");
  }
}

double alpha_loss_from_log(Alpha alpha, double log_p) {
  if (alpha.is_infinite()) return -std::expm1(log_p);
  const double e = alpha.exponent();
  if (alpha.is_log_loss()) {
    // Second-order expansion of -expm1(e ln p)/e around e = 0; exactly -ln p at
    // alpha = 1 and continuous with the generic branch at the switch.
    const double t = e * log_p;
    return -log_p * (1.0 + t / 2.0 + t * t / 6.0);
  }
  return -std::expm1(e * log_p) / e;
}

double alpha_loss(Alpha alpha, double p) {
  if (std::isnan(p) || !(p > 0.0) || p > 1.0) {
    throw DomainError("alpha_loss: probability must be in (0, 1], got " + std::to_string(p));
  }
  if (alpha.is_infinite()) return 1.0 - p;
  return alpha_loss_from_log(alpha, std::log(p));
}

double margin(const Vector& theta, const Sample& s) {
  return static_cast<double>(s.y) * dot(theta, s.x);
}

double loss_margin(Alpha alpha, const Vector& theta, const Sample& s) {
  const double m = margin(theta, s);
  if (alpha.is_infinite()) return sigmoid(-m);
  return alpha_loss_from_log(alpha, log_sigmoid(m));
}

double grad_factor_at_margin(Alpha alpha, double m) {
  // d/dm of the loss; the chain rule through m = y<theta,x> contributes y x.
  const double powered = std::exp(alpha.exponent() * log_sigmoid(m));
  return -powered * sigmoid(-m);
}

double hess_factor_at_margin(Alpha alpha, double m) {
  const double e = alpha.exponent();
  const double powered = std::exp(e * log_sigmoid(m));
  const double g = sigmoid(m);
  const double g_neg = sigmoid(-m);
  return powered * (g * g_neg - e * g_neg * g_neg);
}

double grad_factor(Alpha alpha, const Vector& theta, const Sample& s) {
  return static_cast<double>(s.y) * grad_factor_at_margin(alpha, margin(theta, s));
}

Vector loss_grad(Alpha alpha, const Vector& theta, const Sample& s) {
  return s.x * grad_factor(alpha, theta, s);
}

double hess_factor(Alpha alpha, const Vector& theta, const Sample& s) {
  return hess_factor_at_margin(alpha, margin(theta, s));
}

SymMatrix loss_hess(Alpha alpha, const Vector& theta, const Sample& s) {
  return SymMatrix::outer(s.x, hess_factor(alpha, theta, s));
}

namespace {

void require_radius(double r, const char* fn) {
  if (!std::isfinite(r) || !(r > 0.0)) {
    throw DomainError(std::string(fn) + ": radius must be positive and finite");
  }
}

void require_alpha_at_most_one(Alpha alpha, const char* fn) {
  if (alpha.is_infinite() || alpha.value() > 1.0) {
    throw DomainError(std::string(fn) + ": requires alpha in (0, 1], got " + alpha.to_string());
  }
}

}  // namespace

double lambda_strong(Alpha alpha, double r) {
  require_alpha_at_most_one(alpha, "lambda_strong");
  require_radius(r, "lambda_strong");
  return hess_factor_at_margin(alpha, r);
}

double lipschitz_C(Alpha alpha, double r) {
  require_alpha_at_most_one(alpha, "lipschitz_C");
  require_radius(r, "lipschitz_C");
  return sigmoid(r) * std::exp(alpha.exponent() * log_sigmoid(-r));
}

double lipschitz_L(double r) {
  require_radius(r, "lipschitz_L");
  const double t = r + std::numbers::ln2;
  return t * t / 2.0;
}

double lipschitz_J(double r) {
  require_radius(r, "lipschitz_J");
  return (r + std::numbers::ln2) * sigmoid(r);
}

}  // namespace alphaloss
