#include "alphaloss/data.hpp"

#include <cmath>
#include <sstream>

#include "alphaloss/errors.hpp"
#include "alphaloss/io.hpp"

namespace alphaloss {

void GmmSpec::validate() const {
  if (!(prior_neg > 0.0 && prior_neg < 1.0)) {
    throw DomainError("prior_neg must lie in (0, 1), got " + format_double(prior_neg));
  }
  const std::size_t d = mean_neg.size();
  if (d == 0) throw DomainError("mixture means are empty");
  if (mean_pos.size() != d || cov_neg.dim() != d || cov_pos.dim() != d) {
    throw DomainError("mixture means and covariances must share one dimension");
  }
  require_finite(mean_neg, "mean_neg");
  require_finite(mean_pos, "mean_pos");
  try {
    (void)cholesky(cov_neg);
  } catch (const DomainError& e) {
    throw DomainError(std::string("cov_neg: ") + e.what());
  }
  try {
    (void)cholesky(cov_pos);
  } catch (const DomainError& e) {
    throw DomainError(std::string("cov_pos: ") + e.what());
  }
}

namespace {

nlohmann::json matrix_json(const SymMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

SymMatrix matrix_from_json(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw UsageError(std::string(key) + " must be an array of rows");
  Matrix m(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != j.size()) {
      throw UsageError(std::string(key) + " must be a square matrix");
    }
    for (std::size_t k = 0; k < j.size(); ++k) m(i, k) = j[i][k].get<double>();
  }
  return SymMatrix(std::move(m));
}

Vector vector_from_json(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw UsageError(std::string(key) + " must be an array");
  return Vector(j.get<std::vector<double>>());
}

}  // namespace

nlohmann::json gmm_to_json(const GmmSpec& spec) {
  return {{"prior_neg", spec.prior_neg},
          {"mean_neg", std::vector<double>(spec.mean_neg.begin(), spec.mean_neg.end())},
          {"mean_pos", std::vector<double>(spec.mean_pos.begin(), spec.mean_pos.end())},
          {"cov_neg", matrix_json(spec.cov_neg)},
          {"cov_pos", matrix_json(spec.cov_pos)}};
}

GmmSpec gmm_from_json(const nlohmann::json& j) {
  for (const char* key : {"prior_neg", "mean_neg", "mean_pos", "cov_neg", "cov_pos"}) {
    if (!j.contains(key)) throw UsageError(std::string("GMM spec is missing '") + key + "'");
  }
  GmmSpec spec;
  try {
    spec.prior_neg = j.at("prior_neg").get<double>();
    spec.mean_neg = vector_from_json(j.at("mean_neg"), "mean_neg");
    spec.mean_pos = vector_from_json(j.at("mean_pos"), "mean_pos");
    spec.cov_neg = matrix_from_json(j.at("cov_neg"), "cov_neg");
    spec.cov_pos = matrix_from_json(j.at("cov_pos"), "cov_pos");
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("invalid GMM spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

Preset parse_preset(const std::string& name) {
  if (name == "fig1") return Preset::Fig1;
  if (name == "fig2") return Preset::Fig2;
  if (name == "fig3") return Preset::Fig3;
  throw UsageError("unknown preset '" + name + "' (expected fig1, fig2 or fig3)");
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::Fig1:
      return "fig1";
    case Preset::Fig2:
      return "fig2";
    case Preset::Fig3:
      return "fig3";
  }
  return "?";
}

GmmSpec preset(Preset p) {
  GmmSpec s;
  switch (p) {
    case Preset::Fig1:
      s.prior_neg = 0.12;
      s.mean_neg = {-0.18, 1.49};
      s.mean_pos = {-0.01, 0.16};
      s.cov_neg = SymMatrix{{3.20, -2.015}, {-2.015, 2.71}};
      s.cov_pos = SymMatrix{{4.19, 1.27}, {1.27, 0.90}};
      break;
    case Preset::Fig2:
      s.prior_neg = 0.5;
      s.mean_neg = {0.4, 0.4};
      s.mean_pos = {1.0, 1.0};
      s.cov_neg = SymMatrix{{3.0, 0.2}, {0.2, 1.5}};
      s.cov_pos = s.cov_neg;
      break;
    case Preset::Fig3:
      s.prior_neg = 0.61;
      s.mean_neg = {-0.14, 0.21};
      s.mean_pos = {0.06, 0.43};
      s.cov_neg = SymMatrix{{0.38, 0.25}, {0.25, 3.17}};
      s.cov_pos = SymMatrix{{2.07, -1.62}, {-1.62, 1.97}};
      break;
  }
  s.validate();
  return s;
}

double preset_radius(Preset p) { return p == Preset::Fig2 ? 5.0 : 100.0; }

std::string preset_note(Preset p) {
  if (p == Preset::Fig1) {
    return "cov_neg printed as [3.20, -2.02; -2.01, 2.71]; symmetrized to off-diagonal -2.015";
  }
  return {};
}

RawDataset sample_gmm(const GmmSpec& spec, std::size_t n, Rng& rng) {
  if (n == 0) throw UsageError("sample count must be at least 1");
  spec.validate();
  const Matrix l_neg = cholesky(spec.cov_neg);
  const Matrix l_pos = cholesky(spec.cov_pos);
  const std::size_t d = spec.dim();
  RawDataset raw;
  raw.dim = d;
  raw.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool negative = rng.uniform() < spec.prior_neg;
    const Vector z = gaussian_vector(rng, d);
    const Matrix& l = negative ? l_neg : l_pos;
    Vector x = negative ? spec.mean_neg : spec.mean_pos;
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c <= r; ++c) x[r] += l(r, c) * z[c];
    }
    raw.samples.push_back({std::move(x), negative ? -1 : 1});
  }
  return raw;
}

std::pair<Dataset, NormalizationRecord> normalize_features(const RawDataset& raw) {
  if (raw.samples.empty()) throw UsageError("cannot normalize an empty dataset");
  double largest = 0.0;
  for (const Sample& s : raw.samples) largest = std::max(largest, norm(s.x));
  NormalizationRecord record;
  // Slack so that already-normalized data (max norm 1 up to rounding) is a fixed point.
  record.scale = largest <= 1.0 + 1e-12 ? 1.0 : largest;
  std::vector<Sample> samples = raw.samples;
  if (record.scale != 1.0) {
    for (Sample& s : samples) s.x *= 1.0 / record.scale;
  }
  return {Dataset(std::move(samples)), record};
}

RawDataset to_raw(const Dataset& data) { return {data.samples(), data.dim()}; }

std::string dataset_to_csv(const Dataset& data) {
  std::string out = "y";
  for (std::size_t k = 0; k < data.dim(); ++k) out += ",x_" + std::to_string(k + 1);
  out += "\n";
  for (const Sample& s : data.samples()) {
    out += s.y < 0 ? "-1" : "1";
    for (double v : s.x) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

Dataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  bool header_seen = false;
  std::vector<Sample> samples;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() < 2 || fields[0] != "y") throw ParseError("expected header y,x_1,...,x_d", lineno);
      for (std::size_t k = 1; k < fields.size(); ++k) {
        if (fields[k] != "x_" + std::to_string(k)) {
          throw ParseError("unexpected header column '" + fields[k] + "'", lineno);
        }
      }
      dim = fields.size() - 1;
      header_seen = true;
      continue;
    }
    if (fields.size() != dim + 1) {
      throw ParseError("expected " + std::to_string(dim + 1) + " fields, found " +
                           std::to_string(fields.size()),
                       lineno);
    }
    Sample s;
    if (fields[0] == "1" || fields[0] == "+1") {
      s.y = 1;
    } else if (fields[0] == "-1") {
      s.y = -1;
    } else {
      throw ParseError("label must be -1 or 1, found '" + fields[0] + "'", lineno);
    }
    s.x = Vector(dim);
    for (std::size_t k = 0; k < dim; ++k) s.x[k] = parse_double(fields[k + 1], lineno);
    if (!all_finite(s.x)) throw ParseError("non-finite feature", lineno);
    const double n = norm(s.x);
    if (n > 1.0 + 1e-9) {
      throw ValidationError("line " + std::to_string(lineno) + ": feature norm " +
                            format_double(n) + " exceeds the unit ball");
    }
    samples.push_back(std::move(s));
  }
  if (!header_seen) throw ParseError("dataset file is empty");
  if (samples.empty()) throw ValidationError("dataset file has no samples");
  return Dataset(std::move(samples));
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  write_files_atomically({{path, dataset_to_csv(data)}});
}

Dataset read_csv(const std::filesystem::path& path) { return dataset_from_csv(read_text_file(path)); }

}  // namespace alphaloss
