#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "alphaloss/numerics.hpp"
#include "alphaloss/risk.hpp"

namespace alphaloss {

/// Two-component Gaussian mixture over labels {-1, +1}.
struct GmmSpec {
  double prior_neg = 0.5;  // P[Y = -1]
  Vector mean_neg;
  Vector mean_pos;
  SymMatrix cov_neg;
  SymMatrix cov_pos;

  std::size_t dim() const noexcept { return mean_neg.size(); }
  /// Throws DomainError on a prior outside (0, 1), mismatched dimensions or a
  /// covariance that is not positive definite.
  void validate() const;
};

nlohmann::json gmm_to_json(const GmmSpec& spec);
GmmSpec gmm_from_json(const nlohmann::json& j);

enum class Preset { Fig1, Fig2, Fig3 };

/// "fig1" | "fig2" | "fig3"; throws UsageError otherwise.
Preset parse_preset(const std::string& name);
std::string preset_name(Preset p);

/// Mixture parameters of the three reference landscapes. Fig1's printed
/// Sigma_{-1} has off-diagonals -2.02 / -2.01 and is symmetrized to -2.015.
GmmSpec preset(Preset p);
/// Hypothesis-ball radius used with each preset in its reference figure.
double preset_radius(Preset p);
/// Free-text caveat about a preset's parameters (empty when none).
std::string preset_note(Preset p);

/// Samples before feature normalization; features are unconstrained.
struct RawDataset {
  std::vector<Sample> samples;
  std::size_t dim = 0;
};

/// Draws y = -1 with probability prior_neg, then x = mu_y + L_y z with
/// L_y L_y^T = Sigma_y and z standard normal. One uniform draw and ceil(d/2)
/// Box-Muller pairs per sample.
RawDataset sample_gmm(const GmmSpec& spec, std::size_t n, Rng& rng);

struct NormalizationRecord {
  double scale = 1.0;  // every feature vector was divided by this
};

/// Divides every feature by the largest raw norm s (no-op when s <= 1 + 1e-12).
std::pair<Dataset, NormalizationRecord> normalize_features(const RawDataset& raw);

RawDataset to_raw(const Dataset& data);

/// CSV with header y,x_1,...,x_d; labels as -1/1, features at 17 significant digits.
std::string dataset_to_csv(const Dataset& data);
/// ParseError (with line number) on malformed rows; ValidationError when a
/// feature leaves the unit ball.
Dataset dataset_from_csv(const std::string& text);
void write_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_csv(const std::filesystem::path& path);

}  // namespace alphaloss
