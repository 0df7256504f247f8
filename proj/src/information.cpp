#include "alphaloss/information.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "alphaloss/errors.hpp"
#include "alphaloss/io.hpp"
#include "alphaloss/numerics.hpp"

namespace alphaloss {

namespace {

constexpr double kMassTolerance = 1e-12;

std::string cell(std::size_t x, std::size_t y) {
  return "row " + std::to_string(x + 1) + ", column " + std::to_string(y + 1);
}

void require_entries(const ProbabilityTable& t, const char* what) {
  if (t.rows() == 0 || t.cols() == 0) throw ValidationError(std::string(what) + " is empty");
  for (std::size_t x = 0; x < t.rows(); ++x) {
    for (std::size_t y = 0; y < t.cols(); ++y) {
      const double v = t(x, y);
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError(std::string(what) + ": invalid probability " + format_double(v) +
                              " at " + cell(x, y));
      }
    }
  }
}

}  // namespace

ProbabilityTable::ProbabilityTable(const std::vector<std::vector<double>>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
  data_.reserve(rows_ * cols_);
  for (std::size_t x = 0; x < rows_; ++x) {
    if (rows[x].size() != cols_) {
      throw ValidationError("row " + std::to_string(x + 1) + " has " +
                            std::to_string(rows[x].size()) + " columns, expected " +
                            std::to_string(cols_));
    }
    data_.insert(data_.end(), rows[x].begin(), rows[x].end());
  }
}

double ProbabilityTable::row_sum(std::size_t x) const {
  CompensatedSum s;
  for (std::size_t y = 0; y < cols_; ++y) s.add((*this)(x, y));
  return s.value();
}

DiscreteJoint::DiscreteJoint(ProbabilityTable p) : p_(std::move(p)) {
  require_entries(p_, "joint distribution");
  CompensatedSum total;
  for (std::size_t x = 0; x < p_.rows(); ++x) {
    for (std::size_t y = 0; y < p_.cols(); ++y) total.add(p_(x, y));
  }
  if (std::abs(total.value() - 1.0) > kMassTolerance) {
    throw ValidationError("joint distribution sums to " + format_double(total.value()) +
                          ", expected 1");
  }
}

Posterior::Posterior(ProbabilityTable q, std::vector<bool> excluded)
    : q_(std::move(q)), excluded_(std::move(excluded)) {
  require_entries(q_, "posterior");
  if (excluded_.empty()) excluded_.assign(q_.rows(), false);
  if (excluded_.size() != q_.rows()) throw UsageError("posterior exclusion flags do not match rows");
  for (std::size_t x = 0; x < q_.rows(); ++x) {
    const double s = q_.row_sum(x);
    if (std::abs(s - 1.0) > kMassTolerance) {
      throw ValidationError("posterior row " + std::to_string(x + 1) + " sums to " +
                            format_double(s) + ", expected 1");
    }
  }
}

double discrete_alpha_risk(const DiscreteJoint& joint, const Posterior& posterior, Alpha alpha) {
  if (joint.x_size() != posterior.x_size() || joint.y_size() != posterior.y_size()) {
    throw UsageError("joint and posterior shapes differ");
  }
  CompensatedSum risk;
  for (std::size_t x = 0; x < joint.x_size(); ++x) {
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
      const double p = joint(x, y);
      if (p == 0.0) continue;
      const double q = posterior(x, y);
      if (q == 0.0) {
        if (alpha.is_infinite()) {
          risk.add(p);
        } else if (alpha.value() <= 1.0 || alpha.is_log_loss()) {
          return std::numeric_limits<double>::infinity();
        } else {
          risk.add(p / alpha.exponent());
        }
        continue;
      }
      risk.add(p * alpha_loss(alpha, std::min(q, 1.0)));
    }
  }
  return risk.value();
}

Posterior tilted_posterior(const DiscreteJoint& joint, Alpha alpha) {
  const std::size_t nx = joint.x_size();
  const std::size_t ny = joint.y_size();
  ProbabilityTable q(nx, ny);
  std::vector<bool> excluded(nx, false);
  for (std::size_t x = 0; x < nx; ++x) {
    const double px = joint.marginal_x(x);
    if (px <= 0.0) {
      excluded[x] = true;
      for (std::size_t y = 0; y < ny; ++y) q(x, y) = 1.0 / static_cast<double>(ny);
      continue;
    }
    double top = 0.0;
    for (std::size_t y = 0; y < ny; ++y) top = std::max(top, joint(x, y));
    if (alpha.is_infinite()) {
      std::size_t ties = 0;
      for (std::size_t y = 0; y < ny; ++y) ties += joint(x, y) == top ? 1 : 0;
      for (std::size_t y = 0; y < ny; ++y) {
        q(x, y) = joint(x, y) == top ? 1.0 / static_cast<double>(ties) : 0.0;
      }
      continue;
    }
    // Scaling by the row maximum cancels P(x) and keeps the powers in range.
    CompensatedSum total;
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = joint(x, y);
      q(x, y) = p == 0.0 ? 0.0 : std::exp(alpha.value() * (std::log(p) - std::log(top)));
      total.add(q(x, y));
    }
    for (std::size_t y = 0; y < ny; ++y) q(x, y) /= total.value();
  }
  return Posterior(std::move(q), std::move(excluded));
}

double shannon_cond_entropy(const DiscreteJoint& joint) {
  CompensatedSum h;
  for (std::size_t x = 0; x < joint.x_size(); ++x) {
    const double px = joint.marginal_x(x);
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
      const double p = joint(x, y);
      if (p > 0.0) h.add(-p * std::log(p / px));
    }
  }
  return std::max(h.value(), 0.0);
}

double arimoto_cond_entropy(const DiscreteJoint& joint, Alpha alpha) {
  if (alpha.is_log_loss()) return shannon_cond_entropy(joint);
  CompensatedSum outer;
  if (alpha.is_infinite()) {
    for (std::size_t x = 0; x < joint.x_size(); ++x) {
      double top = 0.0;
      for (std::size_t y = 0; y < joint.y_size(); ++y) top = std::max(top, joint(x, y));
      outer.add(top);
    }
    return std::max(-std::log(outer.value()), 0.0);
  }
  const double a = alpha.value();
  for (std::size_t x = 0; x < joint.x_size(); ++x) {
    double top = 0.0;
    for (std::size_t y = 0; y < joint.y_size(); ++y) top = std::max(top, joint(x, y));
    if (top == 0.0) continue;
    // (sum_y p^a)^{1/a} = top * (sum_y (p/top)^a)^{1/a}
    CompensatedSum inner;
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
      const double p = joint(x, y);
      if (p > 0.0) inner.add(std::pow(p / top, a));
    }
    outer.add(top * std::pow(inner.value(), 1.0 / a));
  }
  return std::max(a / (1.0 - a) * std::log(outer.value()), 0.0);
}

double min_alpha_risk(const DiscreteJoint& joint, Alpha alpha) {
  // alpha/(alpha-1) (1 - e^{(1-alpha)/alpha H}) is the alpha-loss of a
  // probability whose log is -H.
  return alpha_loss_from_log(alpha, -arimoto_cond_entropy(joint, alpha));
}

ProbabilityTable parse_probability_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    for (const std::string& field : split_csv_line(line)) row.push_back(parse_double(field, lineno));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("expected " + std::to_string(rows.front().size()) + " columns, found " +
                           std::to_string(row.size()),
                       lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix file has no rows");
  return ProbabilityTable(rows);
}

DiscreteJoint load_joint_csv(const std::filesystem::path& path) {
  return DiscreteJoint(parse_probability_csv(read_text_file(path)));
}

Posterior load_posterior_csv(const std::filesystem::path& path) {
  return Posterior(parse_probability_csv(read_text_file(path)));
}

std::string probability_table_to_csv(const ProbabilityTable& table) {
  std::string out;
  for (std::size_t x = 0; x < table.rows(); ++x) {
    for (std::size_t y = 0; y < table.cols(); ++y) {
      if (y) out += ",";
      out += format_double(table(x, y));
    }
    out += "\n";
  }
  return out;
}

}  // namespace alphaloss
