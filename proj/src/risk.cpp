#include "alphaloss/risk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alphaloss/errors.hpp"
#include "alphaloss/io.hpp"

namespace alphaloss {

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)), dim_(0) {
  if (samples_.empty()) throw ValidationError("dataset is empty");
  dim_ = samples_.front().x.size();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].x.size() != dim_) {
      throw ValidationError("sample " + std::to_string(i) + " has dimension " +
                            std::to_string(samples_[i].x.size()) + ", expected " +
                            std::to_string(dim_));
    }
    try {
      validate_sample(samples_[i]);
    } catch (const ValidationError& e) {
      throw ValidationError("sample " + std::to_string(i) + ": " + e.what());
    }
  }
}

SymMatrix Dataset::second_moment() const {
  SymMatrix acc(dim_);
  const double w = 1.0 / static_cast<double>(samples_.size());
  for (const Sample& s : samples_) acc.add_outer(s.x, w);
  return acc;
}

namespace {

void require_dim(const Vector& theta, const Dataset& data) {
  if (theta.size() != data.dim()) {
    throw UsageError("theta has dimension " + std::to_string(theta.size()) +
                     " but the dataset has dimension " + std::to_string(data.dim()));
  }
  require_finite(theta, "theta");
}

}  // namespace

double empirical_risk(Alpha alpha, const Vector& theta, const Dataset& data) {
  require_dim(theta, data);
  CompensatedSum sum;
  for (const Sample& s : data.samples()) sum.add(loss_margin(alpha, theta, s));
  return sum.value() / static_cast<double>(data.size());
}

Vector empirical_risk_grad(Alpha alpha, const Vector& theta, const Dataset& data) {
  return empirical_risk_value_grad(alpha, theta, data).gradient;
}

RiskEvaluation empirical_risk_value_grad(Alpha alpha, const Vector& theta, const Dataset& data) {
  require_dim(theta, data);
  const std::size_t d = data.dim();
  CompensatedSum value;
  std::vector<CompensatedSum> grad(d);
  const double e = alpha.exponent();
  for (const Sample& s : data.samples()) {
    const double m = margin(theta, s);
    const double ls = log_sigmoid(m);
    const double tail = sigmoid(-m);
    value.add(alpha.is_infinite() ? tail : alpha_loss_from_log(alpha, ls));
    const double f1 = -static_cast<double>(s.y) * std::exp(e * ls) * tail;
    for (std::size_t j = 0; j < d; ++j) grad[j].add(f1 * s.x[j]);
  }
  const double inv_n = 1.0 / static_cast<double>(data.size());
  Vector g(d);
  for (std::size_t j = 0; j < d; ++j) g[j] = grad[j].value() * inv_n;
  return {value.value() * inv_n, std::move(g)};
}

SymMatrix empirical_risk_hess(Alpha alpha, const Vector& theta, const Dataset& data) {
  require_dim(theta, data);
  const std::size_t d = data.dim();
  std::vector<CompensatedSum> upper(d * d);
  for (const Sample& s : data.samples()) {
    const double f2 = hess_factor(alpha, theta, s);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) upper[i * d + j].add(f2 * s.x[i] * s.x[j]);
    }
  }
  const double inv_n = 1.0 / static_cast<double>(data.size());
  Matrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      m(i, j) = upper[i * d + j].value() * inv_n;
      m(j, i) = m(i, j);
    }
  }
  return SymMatrix(std::move(m));
}

GridSpec GridSpec::ball(std::size_t dim, double r, std::size_t count) {
  GridSpec g;
  g.axes.assign(dim, GridAxis{-r, r, count});
  g.mask = true;
  g.radius = r;
  return g;
}

void GridSpec::validate() const {
  if (axes.empty()) throw UsageError("grid has no axes");
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const GridAxis& a = axes[k];
    if (a.count < 2) throw UsageError("grid axis " + std::to_string(k + 1) + " needs count >= 2");
    if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max)) {
      throw UsageError("grid axis " + std::to_string(k + 1) + " needs finite min < max");
    }
  }
  if (mask && !(radius > 0.0 && std::isfinite(radius))) {
    throw UsageError("masked grid needs a positive radius");
  }
  // Overflow-safe size check.
  double nodes = 1.0;
  for (const GridAxis& a : axes) nodes *= static_cast<double>(a.count);
  if (nodes > static_cast<double>(kMaxGridNodes)) {
    throw UsageError("grid has " + std::to_string(static_cast<long double>(nodes)) +
                     " nodes, limit is 10^7");
  }
}

std::size_t GridSpec::total_nodes() const {
  std::size_t n = 1;
  for (const GridAxis& a : axes) n *= a.count;
  return n;
}

std::vector<Vector> GridSpec::nodes() const {
  validate();
  const std::size_t d = axes.size();
  const std::size_t total = total_nodes();
  std::vector<Vector> out;
  out.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  const double limit = radius + 1e-12;
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vector theta(d);
    for (std::size_t k = 0; k < d; ++k) {
      const GridAxis& a = axes[k];
      // The last node lands exactly on max.
      theta[k] = idx[k] + 1 == a.count
                     ? a.max
                     : a.min + (a.max - a.min) * static_cast<double>(idx[k]) /
                                   static_cast<double>(a.count - 1);
    }
    if (!mask || norm(theta) <= limit) out.push_back(std::move(theta));
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < axes[k].count) break;
      idx[k] = 0;
    }
  }
  return out;
}

LandscapeTable landscape_scan(Alpha alpha, const GridSpec& grid, const Dataset& data) {
  if (grid.axes.size() != data.dim()) {
    throw UsageError("grid dimension " + std::to_string(grid.axes.size()) +
                     " does not match dataset dimension " + std::to_string(data.dim()));
  }
  LandscapeTable table;
  table.thetas = grid.nodes();
  table.risks.reserve(table.thetas.size());
  for (const Vector& theta : table.thetas) table.risks.push_back(empirical_risk(alpha, theta, data));
  table.metadata.emplace_back("alpha", alpha.to_string());
  if (grid.mask) table.metadata.emplace_back("r", format_double(grid.radius));
  table.metadata.emplace_back("n", std::to_string(data.size()));
  return table;
}

std::string landscape_to_csv(const LandscapeTable& table) {
  std::string out;
  for (const auto& [key, value] : table.metadata) out += "# " + key + "=" + value + "\n";
  const std::size_t d = table.dim();
  for (std::size_t k = 0; k < d; ++k) out += "theta_" + std::to_string(k + 1) + ",";
  out += "risk\n";
  for (std::size_t i = 0; i < table.thetas.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) out += format_double(table.thetas[i][k]) + ",";
    out += format_double(table.risks[i]) + "\n";
  }
  return out;
}

double saturation_sup(Alpha alpha, Alpha alpha2, const GridSpec& grid, const Dataset& data) {
  for (Alpha a : {alpha, alpha2}) {
    if (!a.is_infinite() && a.value() < 1.0) {
      throw DomainError("saturation_sup: alpha must lie in [1, inf], got " + a.to_string());
    }
  }
  if (!grid.mask) throw UsageError("saturation_sup: grid must be masked to B_d(r)");
  if (grid.axes.size() != data.dim()) throw UsageError("saturation_sup: grid/dataset dimension mismatch");
  if (alpha == alpha2) {
    grid.validate();
    return 0.0;
  }
  double worst = 0.0;
  for (const Vector& theta : grid.nodes()) {
    worst = std::max(worst, std::abs(empirical_risk(alpha, theta, data) -
                                     empirical_risk(alpha2, theta, data)));
  }
  return worst;
}

}  // namespace alphaloss
