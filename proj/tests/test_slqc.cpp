#include <doctest.h>

#include <cmath>
#include <limits>

#include <json.hpp>

#include "alphaloss/errors.hpp"
#include "alphaloss/ngd.hpp"
#include "alphaloss/slqc.hpp"
#include "support.hpp"

using namespace alphaloss;

namespace {

const Alpha kInf = Alpha::infinity();

/// Minimum of <-g, theta' - theta> over 1000 points on the sphere around theta0.
double sampled_min_inner(const Vector& g, const Vector& theta, const Vector& theta0, double rho, Rng& rng) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000; ++k) {
    Vector u = gaussian_vector(rng, g.size());
    u *= rho / norm(u);
    best = std::min(best, -dot(g, theta0 + u - theta));
  }
  return best;
}

const Dataset& fig2_small() {
  static const Dataset d = test_support::preset_dataset(Preset::Fig2, 1000, 42);
  return d;
}

}  // namespace

TEST_CASE("ball_min_inner closed form") {
  CHECK(ball_min_inner(Vector{1, 0}, Vector{1, 0}, Vector{0, 0}, 0.5) == doctest::Approx(0.5));
  CHECK(ball_min_inner(Vector{-1, 0}, Vector{1, 0}, Vector{0, 0}, 0.5) == doctest::Approx(-1.5));
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const Vector g = gaussian_vector(rng, 2), theta = gaussian_vector(rng, 2), theta0 = gaussian_vector(rng, 2);
    const double rho = rng.uniform(0.01, 2.0);
    const double exact = ball_min_inner(g, theta, theta0, rho);
    const double sampled = sampled_min_inner(g, theta, theta0, rho, rng);
    // The closed form is the true minimum; sampling can only sit above it.
    CHECK(exact <= sampled + 1e-9);
    CHECK(sampled - exact <= 1e-3 * (1.0 + rho * norm(g)));
  }
}

TEST_CASE("check_slqc_point basics") {
  const Dataset& d = fig2_small();
  const SlqcParams p{0.4, sigmoid(5.0), Vector{0.5, 0.5}};
  const SlqcVerdict at_center = check_slqc_point(Alpha(1.0), p.theta0, p, d, 5.0);
  CHECK(at_center.satisfied_by == SlqcCondition::ValueGap);
  CHECK(at_center.value_gap == 0.0);
  CHECK_THROWS_AS(check_slqc_point(Alpha(1.0), Vector{6, 0}, p, d, 5.0), UsageError);
  CHECK_THROWS_AS(check_slqc_point(Alpha(1.0), Vector{0, 0}, SlqcParams{0.4, 1.0, Vector{6, 0}}, d, 5.0),
                  UsageError);

  const SlqcParams unbounded{std::numeric_limits<double>::infinity(), 1.0, Vector{0, 0}};
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const SlqcVerdict v = check_slqc_point(Alpha(2.0), uniform_in_ball(rng, 2, 5.0), unbounded, d, 5.0);
    CHECK(v.satisfied_by == SlqcCondition::ValueGap);
  }
}

TEST_CASE("log-loss SLQC certificate and falsification control") {
  const Dataset& d = fig2_small();
  const Objective f = risk_objective(Alpha(1.0), d);
  const ProjectedGdResult best = projected_gd(f, Vector{0, 0}, 5.0, 0.5, 20000, 1e-13);
  const SlqcParams p{0.4, lipschitz_C(Alpha(1.0), 5.0), best.theta};
  Rng rng(42);
  const SlqcReport rep = slqc_sweep(Alpha(1.0), p, d, 5.0, 300, rng);
  CHECK(rep.count(SlqcCondition::Neither) == 0);
  CHECK(rep.points == 300);
  CHECK(rep.count(SlqcCondition::ValueGap) + rep.count(SlqcCondition::GradientCone) == 300);

  // R_10 varies by less than 0.4 over B(5) on normalized features, so the
  // control uses a gap small enough for interior points to fail it.
  const SlqcParams tiny{0.01, sigmoid(5.0) / 1000.0, best.theta};
  Rng rng2(42);
  const SlqcReport control = slqc_sweep(Alpha(10.0), tiny, d, 5.0, 300, rng2);
  CHECK(control.count(SlqcCondition::Neither) >= 1);
  CHECK(control.max_value_gap < 0.4);
}

TEST_CASE("sweep determinism and json") {
  const Dataset& d = fig2_small();
  const SlqcParams p{0.1, 1.0, Vector{0, 0}};
  Rng a(9), b(9);
  const std::string ja = slqc_report_to_json(slqc_sweep(Alpha(1.0), p, d, 5.0, 50, a, true));
  const std::string jb = slqc_report_to_json(slqc_sweep(Alpha(1.0), p, d, 5.0, 50, b, true));
  CHECK(ja == jb);
  const auto j = nlohmann::json::parse(ja);
  CHECK(j.contains("counts"));
  CHECK(j["verdicts"].size() == 50);
}

TEST_CASE("strong convexity modulus") {
  CHECK(strong_convexity_modulus(Alpha(1.0), 5.0, SymMatrix{{1, 0}, {0, 1}}) ==
        doctest::Approx(0.0066480566707901549).epsilon(1e-13));
  CHECK(strong_convexity_modulus(Alpha(1.0), 5.0, SymMatrix{{1, 0}, {0, 0}}) == 0.0);
  const SymMatrix s{{0.5, 0.1}, {0.1, 0.3}};
  CHECK(strong_convexity_modulus(Alpha(0.5), 5.0, s) > strong_convexity_modulus(Alpha(0.9), 5.0, s));
  CHECK_THROWS_AS(strong_convexity_modulus(Alpha(2.0), 5.0, s), DomainError);
}

TEST_CASE("Hessian certificate on the fig2 sample") {
  const Dataset& d = fig2_small();
  const double lmin = min_eigen_sym(d.second_moment());
  Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    const Vector theta = uniform_in_ball(rng, 2, 5.0);
    CHECK(min_eigen_sym(empirical_risk_hess(Alpha(1.0), theta, d)) >=
          lambda_strong(Alpha(1.0), 5.0) * lmin - 1e-8);
  }
}

TEST_CASE("estimate_I") {
  const Dataset one = test_support::single_sample(Vector{1.0}, 1);
  // Dense-grid oracle: R(theta) = softplus(-theta), |grad| = sigma(-theta).
  const double base = empirical_risk(Alpha(1.0), Vector{5.0}, one);
  double grid_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100000; ++k) {
    const double t = -5.0 + 10.0 * k / 99999.0;
    if (softplus(-t) - base > 1.0) grid_min = std::min(grid_min, sigmoid(-t));
  }
  Rng rng(4);
  const double est = estimate_I(Alpha(1.0), 1.0, 5.0, Vector{5.0}, one, 20000, rng);
  CHECK(std::abs(est - grid_min) <= 1e-3);
  CHECK(est >= grid_min - 1e-3);

  Rng r1(5), r2(5);
  const Dataset& d = fig2_small();
  CHECK(estimate_I(Alpha(1.0), 0.1, 5.0, Vector{0, 0}, d, 200, r1) ==
        estimate_I(Alpha(1.0), 0.1, 5.0, Vector{0, 0}, d, 200, r2));
  Rng r3(6);
  CHECK(std::isinf(estimate_I(Alpha(1.0), 100.0, 5.0, Vector{0, 0}, d, 100, r3)));
}

TEST_CASE("evolution window and bounds") {
  const double k0 = sigmoid(5.0);
  CHECK(evolution_window(Alpha(1.0), 0.4, k0, 5.0, 0.1) == doctest::Approx(6.5902212710985181e-4).epsilon(1e-12));
  const auto rows = evolve_bounds(Alpha(1.0), 0.4, k0, 5.0, 0.1, {Alpha(1.0), Alpha(1.0001), Alpha(1.001), kInf});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].in_window);
  CHECK(*rows[0].epsilon == 0.4);
  CHECK(*rows[0].rho == 0.4 / k0);
  CHECK(rows[1].in_window);
  CHECK(*rows[1].epsilon == doctest::Approx(0.40324119248195177).epsilon(1e-13));
  CHECK_FALSE(rows[2].in_window);
  CHECK_FALSE(rows[2].epsilon.has_value());
  CHECK_FALSE(rows[3].in_window);

  CHECK_THROWS_AS(evolve_bounds(Alpha(1.0), 0.4, k0, 5.0, 0.0, {Alpha(1.0)}), DomainError);
  CHECK_THROWS_AS(evolve_bounds(Alpha(1.0), 0.4, k0, 5.0, -1.0, {Alpha(1.0)}), DomainError);
  CHECK_THROWS_AS(evolve_bounds(Alpha(2.0), 0.4, k0, 5.0, 0.1, {Alpha(1.5)}), DomainError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(evolve_bounds(Alpha(1.0), 0.4, k0, 5.0, inf, {Alpha(1.0)}), DomainError);
  const auto open = evolve_bounds(Alpha(1.0), 0.4, k0, 5.0, inf, {Alpha(3.0)}, true);
  CHECK(open[0].in_window);
}

TEST_CASE("evolution slope, monotonicity and boundary") {
  const double k0 = sigmoid(5.0), I = 0.1;
  const double w = evolution_window(Alpha(1.0), 0.4, k0, 5.0, I);
  std::vector<Alpha> grid;
  for (int k = 0; k < 100; ++k) grid.emplace_back(1.0 + w * k / 100.0);
  grid.emplace_back(1.0 + w * (1 - 1e-9));
  const auto rows = evolve_from_log_loss(0.4, 5.0, I, grid);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].in_window);
    CHECK(*rows[i].epsilon > *rows[i - 1].epsilon);
    CHECK(*rows[i].rho < *rows[i - 1].rho);
    CHECK(*rows[i].rho > 0.0);
  }
  const double da = grid[60].value() - grid[10].value();
  const double slope = (*rows[60].epsilon - *rows[10].epsilon) / da;
  CHECK(std::abs(slope - 2 * lipschitz_L(5.0)) <= 1e-12 * 2 * lipschitz_L(5.0) + 1e-9);

  // Independent evaluation of the log-loss specialization.
  const double J = lipschitz_J(5.0);
  const auto direct = evolve_bounds(Alpha(1.0), 0.4, k0, 5.0, I, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = grid[i].value(), step = a - 1.0;
    const double eps = 0.4 + 2 * lipschitz_L(5.0) * step;
    const double rho = (0.4 / k0) * (1 - (1 + 2 * 5.0 * k0 / 0.4) * J * step / (a * I - J * step));
    CHECK(std::abs(*rows[i].epsilon - eps) <= 1e-12);
    CHECK(std::abs(*rows[i].rho - rho) <= 1e-12);
    CHECK(*rows[i].rho == *direct[i].rho);
  }
}

TEST_CASE("evolution csv") {
  const auto rows = evolve_from_log_loss(0.4, 5.0, 0.1, {Alpha(1.0), Alpha(2.0)});
  const std::string csv = evolution_to_csv(rows);
  CHECK(csv.rfind("alpha,epsilon,rho,in_window\n", 0) == 0);
  CHECK(csv.find("\n2,,,false\n") != std::string::npos);
}
