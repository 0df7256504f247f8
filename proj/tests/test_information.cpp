#include <doctest.h>

#include <cmath>
#include <limits>

#include "alphaloss/errors.hpp"
#include "alphaloss/information.hpp"
#include "support.hpp"

using namespace alphaloss;

namespace {

const Alpha kInf = Alpha::infinity();

DiscreteJoint random_joint(Rng& rng, std::size_t nx, std::size_t ny) {
  std::vector<std::vector<double>> rows(nx, std::vector<double>(ny));
  double total = 0.0;
  for (auto& row : rows) {
    for (double& v : row) total += v = rng.uniform_open_left();
  }
  for (auto& row : rows) {
    for (double& v : row) v /= total;
  }
  // Absorb rounding into the last cell so the mass is 1 to the last ulp.
  double s = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      if (x + 1 < nx || y + 1 < ny) s += rows[x][y];
    }
  }
  rows[nx - 1][ny - 1] = 1.0 - s;
  return DiscreteJoint(ProbabilityTable(rows));
}

Posterior random_posterior(Rng& rng, std::size_t nx, std::size_t ny) {
  std::vector<std::vector<double>> rows(nx, std::vector<double>(ny));
  for (auto& row : rows) {
    double total = 0.0;
    for (double& v : row) total += v = rng.uniform_open_left();
    for (double& v : row) v /= total;
  }
  return Posterior(ProbabilityTable(rows));
}

}  // namespace

TEST_CASE("joint and posterior validation") {
  CHECK_THROWS_AS(DiscreteJoint(ProbabilityTable({{0.5, 0.6}})), ValidationError);
  CHECK_THROWS_AS(DiscreteJoint(ProbabilityTable({{1.2, -0.2}})), ValidationError);
  try {
    DiscreteJoint(ProbabilityTable({{0.5, 0.5}, {-0.1, 0.1}}));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("row 2, column 1") != std::string::npos);
  }
  CHECK_THROWS_AS(Posterior(ProbabilityTable({{0.5, 0.4}})), ValidationError);
  CHECK_THROWS_AS(ProbabilityTable({{0.5, 0.5}, {1.0}}), ValidationError);
}

TEST_CASE("discrete alpha risk examples") {
  const DiscreteJoint j(ProbabilityTable({{0.5, 0.5}}));
  const Posterior q(ProbabilityTable({{0.8, 0.2}}));
  CHECK(discrete_alpha_risk(j, q, Alpha(1.0)) == doctest::Approx(0.91629073187415507).epsilon(1e-14));
  CHECK(discrete_alpha_risk(j, q, kInf) == doctest::Approx(0.5).epsilon(1e-15));

  const DiscreteJoint det(ProbabilityTable({{0.3, 0.0}, {0.0, 0.7}}));
  const Posterior onehot(ProbabilityTable({{1.0, 0.0}, {0.0, 1.0}}));
  for (Alpha a : {Alpha(0.5), Alpha(1.0), Alpha(2.0), kInf}) CHECK(discrete_alpha_risk(det, onehot, a) == 0.0);

  const Posterior wrong(ProbabilityTable({{0.0, 1.0}}));
  CHECK(std::isinf(discrete_alpha_risk(j, wrong, Alpha(1.0))));
  CHECK(std::isinf(discrete_alpha_risk(j, wrong, Alpha(0.5))));
  CHECK(discrete_alpha_risk(j, wrong, Alpha(2.0)) == doctest::Approx(0.5 * 2.0 + 0.0));
  CHECK(discrete_alpha_risk(j, wrong, kInf) == doctest::Approx(0.5));
  CHECK_THROWS_AS(discrete_alpha_risk(j, onehot, Alpha(1.0)), UsageError);
}

TEST_CASE("tilted posterior") {
  const DiscreteJoint j(ProbabilityTable({{0.4, 0.1}, {0.25, 0.25}}));
  const Posterior t2 = tilted_posterior(j, Alpha(2.0));
  CHECK(t2(0, 0) == doctest::Approx(16.0 / 17.0).epsilon(1e-15));
  CHECK(t2(0, 1) == doctest::Approx(1.0 / 17.0).epsilon(1e-15));
  const Posterior t1 = tilted_posterior(j, Alpha(1.0));
  CHECK(t1(0, 0) == doctest::Approx(0.8).epsilon(1e-15));
  const Posterior ti = tilted_posterior(j, kInf);
  CHECK(ti(0, 0) == 1.0);
  CHECK(ti(0, 1) == 0.0);
  CHECK(ti(1, 0) == 0.5);

  const DiscreteJoint gap(ProbabilityTable({{0.5, 0.5}, {0.0, 0.0}}));
  const Posterior tg = tilted_posterior(gap, Alpha(2.0));
  CHECK(tg.excluded(1));
  CHECK_FALSE(tg.excluded(0));
  CHECK(discrete_alpha_risk(gap, tg, Alpha(2.0)) == doctest::Approx(2.0 - std::sqrt(2.0)));
}

TEST_CASE("Arimoto entropy and minimal risk") {
  const DiscreteJoint uniform(ProbabilityTable({{0.25, 0.25}, {0.25, 0.25}}));
  const DiscreteJoint det(ProbabilityTable({{0.3, 0.0}, {0.0, 0.7}}));
  for (Alpha a : {Alpha(0.5), Alpha(1.0), Alpha(2.0), kInf}) {
    CHECK(arimoto_cond_entropy(uniform, a) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(arimoto_cond_entropy(det, a) == doctest::Approx(0.0));
  }
  CHECK(min_alpha_risk(uniform, Alpha(1.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(min_alpha_risk(uniform, kInf) == doctest::Approx(0.5).epsilon(1e-14));

  const DiscreteJoint j(ProbabilityTable({{0.4, 0.1}, {0.1, 0.4}}));
  // Both rows share the same 2-norm, so the outer sum is twice it.
  const double oracle = 2.0 / (1.0 - 2.0) * std::log(2.0 * std::sqrt(0.4 * 0.4 + 0.1 * 0.1));
  CHECK(arimoto_cond_entropy(j, Alpha(2.0)) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(arimoto_cond_entropy(j, Alpha(2.0)) == doctest::Approx(0.38566248081198467).epsilon(1e-14));
  CHECK(min_alpha_risk(j, Alpha(2.0)) == doctest::Approx(0.35075774975293578).epsilon(1e-14));

  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const DiscreteJoint r = random_joint(rng, 3, 3);
    const double h1 = arimoto_cond_entropy(r, Alpha(1.0));
    CHECK(std::abs(arimoto_cond_entropy(r, Alpha(1.0 + 1e-7)) - h1) < 1e-6);
    CHECK(std::abs(arimoto_cond_entropy(r, Alpha(1.0 - 1e-7)) - h1) < 1e-6);
    for (Alpha a : {Alpha(0.5), Alpha(1.0), Alpha(2.0), Alpha(7.0), kInf}) {
      const double h = arimoto_cond_entropy(r, a);
      CHECK(h >= 0.0);
      CHECK(h <= std::log(3.0) + 1e-12);
      CHECK(std::abs(min_alpha_risk(r, a) - discrete_alpha_risk(r, tilted_posterior(r, a), a)) <= 1e-9);
    }
  }
}

TEST_CASE("cross-entropy and error-probability identities") {
  Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    const DiscreteJoint j = random_joint(rng, 3, 4);
    const Posterior q = random_posterior(rng, 3, 4);
    double ce = 0.0, hit = 0.0;
    for (std::size_t x = 0; x < 3; ++x) {
      const double px = j.marginal_x(x);
      double row = 0.0;
      for (std::size_t y = 0; y < 4; ++y) {
        row += -(j(x, y) / px) * std::log(q(x, y));
        hit += j(x, y) * q(x, y);
      }
      ce += px * row;
    }
    CHECK(std::abs(discrete_alpha_risk(j, q, Alpha(1.0)) - ce) <= 1e-12);
    CHECK(std::abs(discrete_alpha_risk(j, q, kInf) - (1.0 - hit)) <= 1e-12);
  }
}

TEST_CASE("tilted posterior is optimal against random posteriors") {
  Rng rng(23);
  for (int i = 0; i < 5; ++i) {
    const DiscreteJoint j = random_joint(rng, 2, 3);
    for (Alpha a : {Alpha(0.5), Alpha(1.0), Alpha(2.0), kInf}) {
      const double best = discrete_alpha_risk(j, tilted_posterior(j, a), a);
      for (int k = 0; k < 1000; ++k) {
        CHECK(best <= discrete_alpha_risk(j, random_posterior(rng, 2, 3), a) + 1e-12);
      }
    }
  }
}

TEST_CASE("minimal risk matches a simplex-grid search") {
  // The risk separates over x, so each row's posterior is searched on its own
  // grid q in {0, 0.001, ..., 1} against the row's conditional distribution.
  Rng rng(29);
  for (int i = 0; i < 20; ++i) {
    const DiscreteJoint j = random_joint(rng, 2, 2);
    for (Alpha a : {Alpha(0.5), Alpha(1.0), Alpha(2.0), kInf}) {
      const Posterior t = tilted_posterior(j, a);
      double total = 0.0;
      for (std::size_t x = 0; x < 2; ++x) {
        const double px = j.marginal_x(x);
        const double c0 = j(x, 0) / px;
        const DiscreteJoint row(ProbabilityTable({{c0, 1.0 - c0}}));
        double best = std::numeric_limits<double>::infinity(), arg = 0.0;
        for (int u = 0; u <= 1000; ++u) {
          const double q = u / 1000.0;
          const double risk = discrete_alpha_risk(row, Posterior(ProbabilityTable({{q, 1.0 - q}})), a);
          if (risk < best) {
            best = risk;
            arg = q;
          }
        }
        total += px * best;
        CHECK(std::abs(t(x, 0) - arg) <= 1e-3 + 1e-12);
      }
      CHECK(std::abs(min_alpha_risk(j, a) - total) <= 5e-3);
      CHECK(min_alpha_risk(j, a) <= total + 1e-12);
    }
  }
}

TEST_CASE("probability csv") {
  const ProbabilityTable t = parse_probability_csv("# joint\n0.25, 0.25\n\n0.5,0\n");
  CHECK(t.rows() == 2);
  CHECK(t(1, 0) == 0.5);
  CHECK(probability_table_to_csv(t) == "0.25,0.25\n0.5,0\n");
  CHECK_THROWS_AS(parse_probability_csv("0.5,0.5\n0.5\n"), ParseError);
  CHECK_THROWS_AS(parse_probability_csv("0.5,abc\n"), ParseError);
  CHECK_THROWS_AS(parse_probability_csv(""), ParseError);
}
