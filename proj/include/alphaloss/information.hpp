#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "alphaloss/loss.hpp"

namespace alphaloss {

/// Dense |X| x |Y| table of nonnegative reals, row = x, column = y.
class ProbabilityTable {
 public:
  ProbabilityTable() = default;
  ProbabilityTable(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  explicit ProbabilityTable(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t x, std::size_t y) { return data_[x * cols_ + y]; }
  double operator()(std::size_t x, std::size_t y) const { return data_[x * cols_ + y]; }
  double row_sum(std::size_t x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Joint distribution P_{X,Y}: entries >= 0, total mass 1 within 1e-12.
class DiscreteJoint {
 public:
  /// Throws ValidationError naming the offending row/column.
  explicit DiscreteJoint(ProbabilityTable p);
  DiscreteJoint(const std::vector<std::vector<double>>& rows)
      : DiscreteJoint(ProbabilityTable(rows)) {}

  const ProbabilityTable& table() const noexcept { return p_; }
  std::size_t x_size() const noexcept { return p_.rows(); }
  std::size_t y_size() const noexcept { return p_.cols(); }
  double operator()(std::size_t x, std::size_t y) const { return p_(x, y); }
  double marginal_x(std::size_t x) const { return p_.row_sum(x); }

 private:
  ProbabilityTable p_;
};

/// Conditional distribution Q(y|x): entries >= 0, every row sums to 1 within
/// 1e-12. Rows flagged as excluded correspond to P(x) = 0 and carry no mass in
/// any risk.
class Posterior {
 public:
  explicit Posterior(ProbabilityTable q, std::vector<bool> excluded = {});
  Posterior(const std::vector<std::vector<double>>& rows) : Posterior(ProbabilityTable(rows)) {}

  const ProbabilityTable& table() const noexcept { return q_; }
  std::size_t x_size() const noexcept { return q_.rows(); }
  std::size_t y_size() const noexcept { return q_.cols(); }
  double operator()(std::size_t x, std::size_t y) const { return q_(x, y); }
  bool excluded(std::size_t x) const { return excluded_[x]; }

 private:
  ProbabilityTable q_;
  std::vector<bool> excluded_;
};

/// Sum_{x,y} P(x,y) l^alpha(Q(y|x)). A zero Q(y|x) with P(x,y) > 0 contributes
/// +inf for alpha <= 1, alpha/(alpha-1) for alpha in (1, inf) and 1 at infinity.
double discrete_alpha_risk(const DiscreteJoint& joint, const Posterior& posterior, Alpha alpha);

/// Row x is P(.|x)^alpha / sum_y P(y|x)^alpha; at infinity, uniform over the
/// argmax labels. Rows with P(x) = 0 are flagged excluded and filled uniformly.
Posterior tilted_posterior(const DiscreteJoint& joint, Alpha alpha);

/// Conditional Shannon entropy H(Y|X) in nats.
double shannon_cond_entropy(const DiscreteJoint& joint);

/// Arimoto conditional entropy of order alpha in nats:
/// alpha/(1-alpha) ln sum_x (sum_y P(x,y)^alpha)^{1/alpha}, with the Shannon
/// limit at alpha = 1 and -ln sum_x max_y P(x,y) at infinity.
double arimoto_cond_entropy(const DiscreteJoint& joint, Alpha alpha);

/// Minimal alpha-risk over all posteriors:
/// alpha/(alpha-1) (1 - exp((1-alpha)/alpha H_alpha^A(Y|X))).
double min_alpha_risk(const DiscreteJoint& joint, Alpha alpha);

/// Reads a comma-separated matrix (row = x, column = y). Blank lines and lines
/// starting with '#' are skipped.
ProbabilityTable parse_probability_csv(const std::string& text);
DiscreteJoint load_joint_csv(const std::filesystem::path& path);
Posterior load_posterior_csv(const std::filesystem::path& path);

std::string probability_table_to_csv(const ProbabilityTable& table);

}  // namespace alphaloss
