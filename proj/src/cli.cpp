#include "alphaloss/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "alphaloss/data.hpp"
#include "alphaloss/errors.hpp"
#include "alphaloss/information.hpp"
#include "alphaloss/io.hpp"
#include "alphaloss/loss.hpp"
#include "alphaloss/ngd.hpp"
#include "alphaloss/risk.hpp"
#include "alphaloss/slqc.hpp"

namespace alphaloss::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// RNG stream indices under the root seed. Stream 0 is the root generator itself.
constexpr std::uint64_t kSweepStream = 1;
constexpr std::uint64_t kInfimumStream = 2;
constexpr std::uint64_t kStartStream = 3;

// ---------------------------------------------------------------------------
// Flag / config-file binding. Config keys are flag names ('_' and '-' are
// interchangeable); a flag given on the command line wins over the file.
// ---------------------------------------------------------------------------

void assign(double& v, const json& j) {
  v = j.is_string() ? parse_double(j.get<std::string>()) : j.get<double>();
}
void assign(std::size_t& v, const json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw UsageError("expected a nonnegative integer, got " + j.dump());
  }
  v = j.get<std::size_t>();
}
void assign(std::string& v, const json& j) { v = j.get<std::string>(); }
void assign(bool& v, const json& j) { v = j.get<bool>(); }
void assign(std::vector<std::string>& v, const json& j) {
  v.clear();
  auto one = [&](const json& e) {
    if (e.is_string()) {
      v.push_back(e.get<std::string>());
    } else {
      v.push_back(Alpha(e.get<double>()).to_string());
    }
  };
  if (j.is_array()) {
    for (const auto& e : j) one(e);
  } else {
    one(j);
  }
}
void assign(std::vector<double>& v, const json& j) {
  v = j.is_array() ? j.get<std::vector<double>>() : std::vector<double>{j.get<double>()};
}

class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* option(const std::string& name, T& var, const std::string& desc) {
    CLI::Option* opt = app_->add_option("--" + name, var, desc)->capture_default_str();
    bindings_[name] = {opt, [&var](const json& j) { assign(var, j); }};
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& desc) {
    CLI::Option* opt = app_->add_flag("--" + name, var, desc)->capture_default_str();
    bindings_[name] = {opt, [&var](const json& j) { assign(var, j); }};
    return opt;
  }

  /// Applies every config key whose flag was not given explicitly.
  void apply(const json& config, const std::set<std::string>& ignored = {}) {
    if (!config.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [raw_key, value] : config.items()) {
      std::string key = raw_key;
      for (char& c : key) c = c == '_' ? '-' : c;
      if (ignored.count(key)) continue;
      auto it = bindings_.find(key);
      if (it == bindings_.end()) throw UsageError("unknown config key '" + raw_key + "'");
      if (it->second.option->count() > 0) continue;
      try {
        it->second.set(value);
      } catch (const json::exception& e) {
        throw UsageError("config key '" + raw_key + "': " + e.what());
      }
      from_config_.insert(key);
    }
  }

  bool is_set(const std::string& name) const {
    auto it = bindings_.find(name);
    return from_config_.count(name) || (it != bindings_.end() && it->second.option->count() > 0);
  }

 private:
  struct Binding {
    CLI::Option* option;
    std::function<void(const json&)> set;
  };
  CLI::App* app_;
  std::map<std::string, Binding> bindings_;
  std::set<std::string> from_config_;
};

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : ".";
}

// ---------------------------------------------------------------------------
// Options shared by every data-driven command
// ---------------------------------------------------------------------------

struct DataOptions {
  std::string config;
  std::string out = default_out_dir();
  std::string preset = "fig2";
  std::string gmm;
  std::string data;
  std::size_t n = 100000;
  std::size_t seed = 42;
  double r = 5.0;
  json inline_gmm;  // "gmm" given as an object in the config file
};

void add_data_options(Binder& b, DataOptions& o, bool with_radius = true) {
  b.option("out", o.out, "Output directory (default from $" + std::string(kOutDirEnv) + ")");
  b.option("preset", o.preset, "Mixture preset: fig1, fig2 or fig3");
  b.option("gmm", o.gmm, "JSON file with a two-component GMM spec (overrides --preset)");
  b.option("data", o.data, "Dataset CSV (y,x_1,...,x_d) used instead of sampling");
  b.option("n", o.n, "Number of samples drawn from the mixture");
  b.option("seed", o.seed, "Root RNG seed");
  if (with_radius) {
    b.option("r", o.r, "Hypothesis-ball radius (default: the preset's reference radius, else 5)");
  }
}

/// Loads the config file (if any) into the binder; an object-valued "gmm" key
/// is kept as an inline spec.
void apply_config(Binder& b, DataOptions* data, const std::string& path) {
  if (path.empty()) return;
  json cfg;
  try {
    cfg = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  std::set<std::string> ignored{"config"};
  if (data && cfg.is_object() && cfg.contains("gmm") && cfg["gmm"].is_object() && !b.is_set("gmm")) {
    data->inline_gmm = cfg["gmm"];
    ignored.insert("gmm");
  }
  b.apply(cfg, ignored);
}

struct LoadedData {
  std::optional<Dataset> data;
  std::string id;
  std::optional<Preset> preset;
  std::optional<GmmSpec> gmm;
  double scale = 1.0;
  std::string note;
};

/// Everything that can be checked without touching the data.
void validate_data_options(const Binder& b, DataOptions& o) {
  if (o.n == 0) throw UsageError("--n must be at least 1");
  if (o.data.empty() && o.gmm.empty() && o.inline_gmm.is_null()) (void)parse_preset(o.preset);
  if (!b.is_set("r")) {
    o.r = (o.data.empty() && o.gmm.empty() && o.inline_gmm.is_null())
              ? preset_radius(parse_preset(o.preset))
              : 5.0;
  }
  if (!std::isfinite(o.r) || !(o.r > 0.0)) throw UsageError("--r must be positive");
}

LoadedData load_data(const DataOptions& o) {
  LoadedData out;
  if (!o.data.empty()) {
    out.data = read_csv(o.data);
    out.id = "csv:" + fs::path(o.data).filename().string();
    return out;
  }
  if (!o.inline_gmm.is_null()) {
    out.gmm = gmm_from_json(o.inline_gmm);
    out.id = "gmm:inline";
  } else if (!o.gmm.empty()) {
    try {
      out.gmm = gmm_from_json(json::parse(read_text_file(o.gmm)));
    } catch (const json::parse_error& e) {
      throw UsageError("GMM file '" + o.gmm + "' is not valid JSON: " + e.what());
    }
    out.id = "gmm:" + fs::path(o.gmm).filename().string();
  } else {
    out.preset = parse_preset(o.preset);
    out.gmm = preset(*out.preset);
    out.id = preset_name(*out.preset);
    out.note = preset_note(*out.preset);
  }
  Rng rng(o.seed);
  auto [data, record] = normalize_features(sample_gmm(*out.gmm, o.n, rng));
  out.data = std::move(data);
  out.scale = record.scale;
  return out;
}

json data_json(const DataOptions& o, const LoadedData& d) {
  json j{{"dataset", d.id}, {"n", d.data->size()}, {"dim", d.data->dim()}};
  if (d.gmm) {
    j["seed"] = o.seed;
    j["gmm"] = gmm_to_json(*d.gmm);
    j["normalization"] = {{"method", "global max-norm rescale"}, {"scale", d.scale}};
  }
  if (!d.note.empty()) j["note"] = d.note;
  return j;
}

Metadata data_metadata(const DataOptions& o, const LoadedData& d) {
  Metadata m{{"dataset", d.id}};
  if (d.gmm) {
    m.emplace_back("seed", std::to_string(o.seed));
    m.emplace_back("gmm", gmm_to_json(*d.gmm).dump());
    m.emplace_back("normalization", "global max-norm rescale");
    m.emplace_back("normalization_scale", format_double(d.scale));
  }
  if (!d.note.empty()) m.emplace_back("note", d.note);
  m.emplace_back("risk", "empirical mean over the dataset");
  return m;
}

std::vector<Alpha> parse_alphas(const std::vector<std::string>& texts) {
  std::vector<Alpha> out;
  for (const auto& t : texts) out.push_back(Alpha::parse(t));
  if (out.empty()) throw UsageError("at least one alpha is required");
  return out;
}

std::string file_tag(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_');
  return out;
}

json vector_json(const Vector& v) { return std::vector<double>(v.begin(), v.end()); }

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Vector to_vector(const std::vector<double>& v) { return Vector(v); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// gen-data
// ---------------------------------------------------------------------------

struct GenDataOptions {
  DataOptions data;
  std::string name = "dataset";
};

int cmd_gen_data(Binder& b, GenDataOptions& o, std::ostream& out) {
  apply_config(b, &o.data, o.data.config);
  validate_data_options(b, o.data);
  if (!o.data.data.empty()) throw UsageError("gen-data samples a mixture; --data is not accepted");
  if (o.name.empty()) throw UsageError("--name must not be empty");
  const LoadedData d = load_data(o.data);
  const fs::path dir(o.data.out);
  const fs::path csv = dir / (o.name + ".csv");
  const fs::path sidecar = dir / (o.name + ".json");
  json meta = data_json(o.data, d);
  write_files_atomically({{csv, dataset_to_csv(*d.data)}, {sidecar, dump(meta)}});
  out << "wrote " << csv.string() << " and " << sidecar.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// landscape
// ---------------------------------------------------------------------------

struct GridOptions {
  std::size_t count = 101;
  double min = 0.0;
  double max = 0.0;
  bool no_mask = false;
};

void add_grid_options(Binder& b, GridOptions& g) {
  b.option("grid-count", g.count, "Grid nodes per axis");
  b.option("grid-min", g.min, "Lower grid bound on every axis (default -r)");
  b.option("grid-max", g.max, "Upper grid bound on every axis (default r)");
  b.flag("no-mask", g.no_mask, "Keep grid nodes outside B_d(r)");
}

GridSpec make_grid(const Binder& b, const GridOptions& g, std::size_t dim, double r) {
  GridSpec grid;
  const double lo = b.is_set("grid-min") ? g.min : -r;
  const double hi = b.is_set("grid-max") ? g.max : r;
  grid.axes.assign(dim, GridAxis{lo, hi, g.count});
  grid.mask = !g.no_mask;
  grid.radius = r;
  grid.validate();
  return grid;
}

struct LandscapeOptions {
  DataOptions data;
  GridOptions grid;
  std::vector<std::string> alphas{"1"};
};

int cmd_landscape(Binder& b, LandscapeOptions& o, std::ostream& out) {
  apply_config(b, &o.data, o.data.config);
  validate_data_options(b, o.data);
  const std::vector<Alpha> alphas = parse_alphas(o.alphas);
  {
    // Grid sanity before sampling.
    GridSpec probe = make_grid(b, o.grid, 2, o.data.r);
    (void)probe;
  }
  const LoadedData d = load_data(o.data);
  if (d.data->dim() != 2) {
    throw UsageError("landscape grids need two-dimensional features, got dimension " +
                     std::to_string(d.data->dim()));
  }
  const GridSpec grid = make_grid(b, o.grid, 2, o.data.r);
  std::vector<std::pair<fs::path, std::string>> files;
  for (Alpha alpha : alphas) {
    LandscapeTable table = landscape_scan(alpha, grid, *d.data);
    Metadata meta = data_metadata(o.data, d);
    meta.insert(meta.begin(), table.metadata.begin(), table.metadata.end());
    meta.emplace_back("grid", std::to_string(o.grid.count) + "x" + std::to_string(o.grid.count) +
                                  " over [" + format_double(grid.axes[0].min) + ", " +
                                  format_double(grid.axes[0].max) + "]^2" +
                                  (grid.mask ? ", masked to B_2(r)" : ""));
    table.metadata = std::move(meta);
    const fs::path path = fs::path(o.data.out) /
                          ("landscape_" + file_tag(d.id) + "_alpha_" + file_tag(alpha.to_string()) + ".csv");
    files.emplace_back(path, landscape_to_csv(table));
  }
  write_files_atomically(files);
  for (const auto& [path, _] : files) out << "wrote " << path.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

struct CertifyOptions {
  DataOptions data;
  std::string alpha = "1";
  double epsilon0 = 0.4;
  double kappa = 0.0;
  std::vector<double> theta0;
  std::size_t sweep = 1000;
  std::size_t i_budget = 10000;
  double i_safety = 1.0;
  bool accept_unbounded_i = false;
  std::vector<std::string> evolve_alphas;
  bool keep_verdicts = false;
};

int cmd_certify(Binder& b, CertifyOptions& o, std::ostream& out) {
  apply_config(b, &o.data, o.data.config);
  validate_data_options(b, o.data);
  const Alpha alpha = Alpha::parse(o.alpha);
  const double r = o.data.r;
  if (!(o.epsilon0 > 0.0)) throw UsageError("--epsilon0 must be positive");
  if (b.is_set("kappa") && !(o.kappa > 0.0 && std::isfinite(o.kappa))) {
    throw UsageError("--kappa must be positive");
  }
  if (!(o.i_safety > 0.0 && o.i_safety <= 1.0)) throw UsageError("--i-safety must lie in (0, 1]");
  if (o.i_budget == 0) throw UsageError("--i-budget must be at least 1");
  const std::vector<Alpha> evolve = o.evolve_alphas.empty() ? std::vector<Alpha>{}
                                                             : parse_alphas(o.evolve_alphas);
  const bool small_alpha = !alpha.is_infinite() && alpha.value() <= 1.0;

  const LoadedData d = load_data(o.data);
  const Dataset& data = *d.data;
  if (!o.theta0.empty() && o.theta0.size() != data.dim()) {
    throw UsageError("--theta0 has the wrong dimension");
  }

  json report;
  report["config"] = {{"alpha", alpha.to_string()}, {"r", r}, {"epsilon0", o.epsilon0}};
  report["data"] = data_json(o.data, d);
  json notes = json::array();

  const SymMatrix sigma_hat = data.second_moment();
  const double sigma_min = min_eigen_sym(sigma_hat);
  json sigma_rows = json::array();
  for (std::size_t i = 0; i < sigma_hat.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < sigma_hat.dim(); ++j) row.push_back(sigma_hat(i, j));
    sigma_rows.push_back(row);
  }
  report["sigma_hat"] = {{"matrix", sigma_rows}, {"min_eigenvalue", sigma_min}};

  std::optional<double> kappa;
  if (b.is_set("kappa")) kappa = o.kappa;
  if (small_alpha) {
    const double lambda = lambda_strong(alpha, r);
    const double c = lipschitz_C(alpha, r);
    report["strong_convexity"] = {{"lambda", lambda},
                                  {"modulus", strong_convexity_modulus(alpha, r, sigma_hat)},
                                  {"lipschitz_C", c}};
    if (!kappa) kappa = c;
  } else {
    report["strong_convexity"] = nullptr;
    notes.push_back("strong-convexity section skipped: alpha > 1");
  }
  report["lipschitz"] = {{"L_r", lipschitz_L(r)}, {"J_r", lipschitz_J(r)}};

  // theta0: given, or the NGD minimizer of R_alpha over B_d(r).
  Vector theta0;
  if (!o.theta0.empty()) {
    theta0 = to_vector(o.theta0);
    report["theta0"] = {{"value", vector_json(theta0)}, {"source", "given"}};
  } else {
    // Step scale sigma(r) keeps the search short; C_{r,alpha} explodes as alpha -> 0.
    const double step_kappa = lipschitz_C(Alpha(1.0), r);
    const std::vector<double> schedule{o.epsilon0, o.epsilon0 / 10.0, o.epsilon0 / 100.0};
    const NgdResult best = ngd_minimize(risk_objective(alpha, data), Vector(data.dim()), step_kappa, r, schedule);
    theta0 = best.best_theta;
    report["theta0"] = {{"value", vector_json(theta0)},
                        {"source", "NGD minimizer"},
                        {"risk", best.best_value},
                        {"evaluations", best.evaluations}};
  }
  if (norm(theta0) > r + 1e-9) throw UsageError("theta0 lies outside B_d(r)");

  if (kappa) {
    Rng sweep_rng = Rng(o.data.seed).child(kSweepStream);
    const SlqcParams params{o.epsilon0, *kappa, theta0};
    const SlqcReport sweep = slqc_sweep(alpha, params, data, r, o.sweep, sweep_rng, o.keep_verdicts);
    report["slqc_sweep"] = json::parse(slqc_report_to_json(sweep));
  } else {
    report["slqc_sweep"] = nullptr;
    notes.push_back("SLQC sweep skipped: no kappa for alpha > 1 (pass --kappa)");
  }

  std::string evolution_csv;
  const bool evolvable = alpha.is_infinite() || alpha.value() >= 1.0;
  if (evolvable) {
    Rng i_rng = Rng(o.data.seed).child(kInfimumStream);
    const double estimated = estimate_I(alpha, o.epsilon0, r, theta0, data, o.i_budget, i_rng);
    const double used = estimated * o.i_safety;
    report["gradient_infimum"] = {{"estimated I (upper)", finite_or_string(estimated)},
                                  {"budget", o.i_budget},
                                  {"safety_factor", o.i_safety},
                                  {"used", finite_or_string(used)},
                                  {"risk", "empirical"}};
    if (!kappa) {
      report["evolution"] = nullptr;
      notes.push_back("evolution skipped: no kappa0");
    } else if (std::isinf(used) && !o.accept_unbounded_i) {
      report["evolution"] = nullptr;
      notes.push_back(
          "evolution skipped: no sampled point exceeds the epsilon0 value gap, so the estimated "
          "infimum is +inf (pass --accept-unbounded-i to treat the window as unbounded)");
    } else {
      const double window = evolution_window(alpha, o.epsilon0, *kappa, r, used);
      std::vector<Alpha> grid = evolve;
      if (grid.empty() && !alpha.is_infinite()) {
        const double span = std::isfinite(window) ? window : 1.0;
        for (int k = 0; k <= 10; ++k) grid.emplace_back(alpha.value() + span * k / 10.0);
      } else if (grid.empty()) {
        grid.push_back(alpha);
      }
      const auto rows = alpha == Alpha(1.0)
                            ? evolve_from_log_loss(o.epsilon0, r, used, grid, o.accept_unbounded_i)
                            : evolve_bounds(alpha, o.epsilon0, *kappa, r, used, grid,
                                            o.accept_unbounded_i);
      json table = json::array();
      for (const auto& row : rows) {
        table.push_back({{"alpha", row.alpha.to_string()},
                         {"epsilon", row.epsilon ? json(*row.epsilon) : json(nullptr)},
                         {"rho", row.rho ? json(*row.rho) : json(nullptr)},
                         {"in_window", row.in_window}});
      }
      report["evolution"] = {{"alpha0", alpha.to_string()},
                             {"kappa0", *kappa},
                             {"window", finite_or_string(window)},
                             {"rows", table}};
      evolution_csv = evolution_to_csv(rows);
    }
  } else {
    report["gradient_infimum"] = nullptr;
    report["evolution"] = nullptr;
    notes.push_back("evolution skipped: requires alpha0 >= 1");
  }
  report["notes"] = notes;

  const fs::path dir(o.data.out);
  std::vector<std::pair<fs::path, std::string>> files{{dir / "certify.json", dump(report)}};
  if (!evolution_csv.empty()) files.emplace_back(dir / "evolution.csv", evolution_csv);
  write_files_atomically(files);
  for (const auto& [path, _] : files) out << "wrote " << path.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ngd
// ---------------------------------------------------------------------------

struct NgdOptions {
  DataOptions data;
  std::string alpha = "1";
  double epsilon = 0.05;
  double kappa = 0.0;
  double eta = 0.0;
  std::size_t iterations = 0;
  std::vector<double> theta1;
  double ref_step = 0.1;
  std::size_t ref_steps = 100000;
  double ref_tolerance = 1e-12;
  bool trace = false;
};

int cmd_ngd(Binder& b, NgdOptions& o, std::ostream& out) {
  apply_config(b, &o.data, o.data.config);
  validate_data_options(b, o.data);
  const Alpha alpha = Alpha::parse(o.alpha);
  const double r = o.data.r;
  if (!(o.epsilon > 0.0 && std::isfinite(o.epsilon))) throw UsageError("--epsilon must be positive");
  if (b.is_set("eta") && !(o.eta > 0.0 && std::isfinite(o.eta))) throw UsageError("--eta must be positive");
  if (b.is_set("kappa") && !(o.kappa > 0.0 && std::isfinite(o.kappa))) throw UsageError("--kappa must be positive");
  if (b.is_set("iterations") && o.iterations == 0) throw UsageError("--iterations must be at least 1");
  if (!(o.ref_step > 0.0)) throw UsageError("--ref-step must be positive");
  double kappa = o.kappa;
  if (!b.is_set("kappa")) {
    if (alpha.is_infinite() || alpha.value() > 1.0) {
      throw UsageError("--kappa is required for alpha > 1");
    }
    kappa = lipschitz_C(alpha, r);
  }

  const LoadedData d = load_data(o.data);
  const Dataset& data = *d.data;
  Vector theta1;
  if (!o.theta1.empty()) {
    if (o.theta1.size() != data.dim()) throw UsageError("--theta1 has the wrong dimension");
    theta1 = to_vector(o.theta1);
    if (norm(theta1) > r + 1e-9) throw UsageError("--theta1 lies outside B_d(r)");
  } else {
    Rng start = Rng(o.data.seed).child(kStartStream);
    theta1 = uniform_in_ball(start, data.dim(), r);
  }

  const Objective f = risk_objective(alpha, data);
  const ProjectedGdResult ref = projected_gd(f, Vector(data.dim()), r, o.ref_step, o.ref_steps, o.ref_tolerance);
  const double dist = norm(theta1 - ref.theta);

  NgdConfig config;
  config.eta = b.is_set("eta") ? o.eta : o.epsilon / kappa;
  config.iterations = b.is_set("iterations") ? o.iterations : iteration_budget(o.epsilon, kappa, dist);
  config.radius = r;
  config.record_trace = o.trace;
  const NgdResult result = ngd_run(f, theta1, config);
  const double gap = result.best_value - ref.value;

  json summary{{"alpha", alpha.to_string()},
               {"r", r},
               {"epsilon", o.epsilon},
               {"kappa", kappa},
               {"eta", config.eta},
               {"iterations", config.iterations},
               {"theta1", vector_json(theta1)},
               {"best_theta", vector_json(result.best_theta)},
               {"best_value", result.best_value},
               {"best_index", result.best_index},
               {"stop", result.stop == NgdStop::Completed ? "completed" : "zero gradient"},
               {"reference",
                {{"method", "projected gradient descent"},
                 {"step", o.ref_step},
                 {"iterations", ref.iterations},
                 {"theta", vector_json(ref.theta)},
                 {"value", ref.value},
                 {"note", "best point found in B_d(r), standing in for the unconstrained minimizer"}}},
               {"distance_to_reference", dist},
               {"gap", gap},
               {"gap_within_epsilon", gap <= o.epsilon},
               {"data", data_json(o.data, d)}};
  const fs::path dir(o.data.out);
  std::vector<std::pair<fs::path, std::string>> files{{dir / "ngd_summary.json", dump(summary)}};
  if (o.trace) files.emplace_back(dir / "ngd_trace.csv", ngd_trace_to_csv(result.trace));
  write_files_atomically(files);
  for (const auto& [path, _] : files) out << "wrote " << path.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// saturation
// ---------------------------------------------------------------------------

struct SaturationOptions {
  DataOptions data;
  GridOptions grid;
  std::vector<std::string> alphas{"1", "2", "4", "10", "inf"};
};

int cmd_saturation(Binder& b, SaturationOptions& o, std::ostream& out) {
  apply_config(b, &o.data, o.data.config);
  validate_data_options(b, o.data);
  const std::vector<Alpha> alphas = parse_alphas(o.alphas);
  for (Alpha a : alphas) {
    if (!a.is_infinite() && a.value() < 1.0) {
      throw UsageError("saturation alphas must lie in [1, inf], got " + a.to_string());
    }
  }
  if (o.grid.no_mask) throw UsageError("saturation requires a grid masked to B_d(r)");
  const double r = o.data.r;
  (void)make_grid(b, o.grid, 2, r);
  const LoadedData d = load_data(o.data);
  const GridSpec grid = make_grid(b, o.grid, d.data->dim(), r);
  const double L = lipschitz_L(r);

  std::string csv;
  for (const auto& [k, v] : data_metadata(o.data, d)) csv += "# " + k + "=" + v + "\n";
  csv += "# r=" + format_double(r) + "\n# reference_alpha=inf\n";
  csv += "alpha,sup_distance,bound,pass\n";
  bool all_pass = true;
  for (Alpha a : alphas) {
    const double sup = saturation_sup(a, Alpha::infinity(), grid, *d.data);
    const double bound = L * a.inverse();
    const bool pass = sup <= bound + 1e-9;
    all_pass = all_pass && pass;
    csv += a.to_string() + "," + format_double(sup) + "," + format_double(bound) + "," +
           (pass ? "true" : "false") + "\n";
  }
  const fs::path path = fs::path(o.data.out) / ("saturation_" + file_tag(d.id) + ".csv");
  write_files_atomically({{path, csv}});
  out << "wrote " << path.string() << (all_pass ? "" : " (bound violated)") << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// tilted
// ---------------------------------------------------------------------------

struct TiltedOptions {
  std::string config;
  std::string out = default_out_dir();
  std::string joint;
  std::string posterior;
  std::vector<std::string> alphas{"0.5", "1", "2", "inf"};
};

int cmd_tilted(Binder& b, TiltedOptions& o, std::ostream& out) {
  apply_config(b, nullptr, o.config);
  if (o.joint.empty()) throw UsageError("--joint is required");
  const std::vector<Alpha> alphas = parse_alphas(o.alphas);
  const DiscreteJoint joint = load_joint_csv(o.joint);
  std::optional<Posterior> given;
  if (!o.posterior.empty()) given = load_posterior_csv(o.posterior);

  json report{{"joint", fs::path(o.joint).filename().string()}, {"units", "nats"}};
  json per_alpha = json::array();
  std::vector<std::pair<fs::path, std::string>> files;
  for (Alpha a : alphas) {
    const Posterior tilted = tilted_posterior(joint, a);
    json rows = json::array();
    json excluded = json::array();
    for (std::size_t x = 0; x < tilted.x_size(); ++x) {
      json row = json::array();
      for (std::size_t y = 0; y < tilted.y_size(); ++y) row.push_back(tilted(x, y));
      rows.push_back(row);
      if (tilted.excluded(x)) excluded.push_back(x + 1);
    }
    json entry{{"alpha", a.to_string()},
               {"arimoto_cond_entropy", arimoto_cond_entropy(joint, a)},
               {"min_alpha_risk", min_alpha_risk(joint, a)},
               {"risk_at_tilted", finite_or_string(discrete_alpha_risk(joint, tilted, a))},
               {"tilted_posterior", rows}};
    if (!excluded.empty()) entry["excluded_rows"] = excluded;
    if (given) entry["risk_of_given_posterior"] = finite_or_string(discrete_alpha_risk(joint, *given, a));
    per_alpha.push_back(entry);
    files.emplace_back(fs::path(o.out) / ("tilted_alpha_" + file_tag(a.to_string()) + ".csv"),
                       probability_table_to_csv(tilted.table()));
  }
  report["results"] = per_alpha;
  files.emplace_back(fs::path(o.out) / "tilted.json", dump(report));
  write_files_atomically(files);
  for (const auto& [path, _] : files) out << "wrote " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"alpha-loss landscape toolkit for the logistic model"};
  app.name("alphaloss");
  app.require_subcommand(1);

  GenDataOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-data", "Sample a GMM dataset and write CSV + JSON sidecar");
  Binder gen_b(gen_cmd);
  gen_cmd->add_option("--config", gen.data.config, "JSON config file (flags override it)");
  add_data_options(gen_b, gen.data, false);
  gen_b.option("name", gen.name, "Output file stem");

  LandscapeOptions land;
  CLI::App* land_cmd = app.add_subcommand("landscape", "Empirical alpha-risk over a 2-D grid, one CSV per alpha");
  Binder land_b(land_cmd);
  land_cmd->add_option("--config", land.data.config, "JSON config file (flags override it)");
  add_data_options(land_b, land.data);
  add_grid_options(land_b, land.grid);
  land_b.option("alphas", land.alphas, "Comma-separated alphas ('inf' allowed)")->delimiter(',');

  CertifyOptions cert;
  CLI::App* cert_cmd = app.add_subcommand("certify", "Strong-convexity / SLQC certificate report");
  Binder cert_b(cert_cmd);
  cert_cmd->add_option("--config", cert.data.config, "JSON config file (flags override it)");
  add_data_options(cert_b, cert.data);
  cert_b.option("alpha", cert.alpha, "Order alpha (alpha0 of the evolution table)");
  cert_b.option("epsilon0", cert.epsilon0, "SLQC epsilon");
  cert_b.option("kappa", cert.kappa, "SLQC kappa (default C_{r,alpha} for alpha <= 1)");
  cert_b.option("theta0", cert.theta0, "Reference point (default: NGD minimizer)")->delimiter(',');
  cert_b.option("sweep", cert.sweep, "Sampled points in the SLQC sweep");
  cert_b.option("i-budget", cert.i_budget, "Sampled points for the gradient-infimum estimate");
  cert_b.option("i-safety", cert.i_safety, "Factor in (0, 1] applied to the estimated infimum");
  cert_b.flag("accept-unbounded-i", cert.accept_unbounded_i, "Treat an empty qualifying set as an unbounded window");
  cert_b.option("evolve-alphas", cert.evolve_alphas, "Alphas for the evolution table (default: 11 points across the window)")
      ->delimiter(',');
  cert_b.flag("keep-verdicts", cert.keep_verdicts, "Include every sweep verdict in the report");

  NgdOptions ngd;
  CLI::App* ngd_cmd = app.add_subcommand("ngd", "Normalized gradient descent with the iteration budget");
  Binder ngd_b(ngd_cmd);
  ngd_cmd->add_option("--config", ngd.data.config, "JSON config file (flags override it)");
  add_data_options(ngd_b, ngd.data);
  ngd_b.option("alpha", ngd.alpha, "Order alpha");
  ngd_b.option("epsilon", ngd.epsilon, "Target accuracy epsilon");
  ngd_b.option("kappa", ngd.kappa, "SLQC kappa (default C_{r,alpha}; required for alpha > 1)");
  ngd_b.option("eta", ngd.eta, "Learning rate (default epsilon / kappa)");
  ngd_b.option("iterations", ngd.iterations, "Iterations T (default: the budget ceil(kappa^2 d^2 / epsilon^2))");
  ngd_b.option("theta1", ngd.theta1, "Starting point (default: uniform in B_d(r))")->delimiter(',');
  ngd_b.option("ref-step", ngd.ref_step, "Step of the reference projected gradient descent");
  ngd_b.option("ref-steps", ngd.ref_steps, "Maximum reference iterations");
  ngd_b.option("ref-tolerance", ngd.ref_tolerance, "Reference stops once a step moves less than this");
  ngd_b.flag("trace", ngd.trace, "Write the per-iterate trace CSV");

  SaturationOptions sat;
  CLI::App* sat_cmd = app.add_subcommand("saturation", "Sup distance between R_alpha and R_inf over a grid");
  Binder sat_b(sat_cmd);
  sat_cmd->add_option("--config", sat.data.config, "JSON config file (flags override it)");
  add_data_options(sat_b, sat.data);
  add_grid_options(sat_b, sat.grid);
  sat_b.option("alphas", sat.alphas, "Comma-separated alphas in [1, inf]")->delimiter(',');

  TiltedOptions tilt;
  CLI::App* tilt_cmd = app.add_subcommand("tilted", "Tilted posteriors, Arimoto entropy and minimal alpha-risk of a CSV joint");
  Binder tilt_b(tilt_cmd);
  tilt_cmd->add_option("--config", tilt.config, "JSON config file (flags override it)");
  tilt_b.option("out", tilt.out, "Output directory");
  tilt_b.option("joint", tilt.joint, "CSV joint distribution (row = x, column = y)");
  tilt_b.option("posterior", tilt.posterior, "Optional CSV posterior Q(y|x) to score");
  tilt_b.option("alphas", tilt.alphas, "Comma-separated alphas ('inf' allowed)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen_data(gen_b, gen, out);
    if (*land_cmd) return cmd_landscape(land_b, land, out);
    if (*cert_cmd) return cmd_certify(cert_b, cert, out);
    if (*ngd_cmd) return cmd_ngd(ngd_b, ngd, out);
    if (*sat_cmd) return cmd_saturation(sat_b, sat, out);
    if (*tilt_cmd) return cmd_tilted(tilt_b, tilt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"alphaloss"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace alphaloss::cli
