#include <doctest.h>

#include <cmath>
#include <limits>

#include "alphaloss/errors.hpp"
#include "alphaloss/numerics.hpp"
#include "support.hpp"

using namespace alphaloss;

TEST_CASE("sigmoid values and symmetry") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(5.0) == doctest::Approx(0.9933071490757151).epsilon(1e-15));
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK_THROWS_AS(sigmoid(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(sigmoid(std::numeric_limits<double>::infinity()), DomainError);

  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double z = rng.uniform(-40.0, 40.0);
    CHECK(std::abs(sigmoid(z) + sigmoid(-z) - 1.0) <= 1e-15);
  }
}

TEST_CASE("sigmoid derivative matches central difference") {
  Rng rng(8);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const double z = rng.uniform(-10.0, 10.0);
    // Difference the smaller tail, sigma(-|z|), so rounding stays relative to the slope.
    const double fd = z <= 0 ? (sigmoid(z + h) - sigmoid(z - h)) / (2 * h)
                             : (sigmoid(-z + h) - sigmoid(-z - h)) / (2 * h);
    const double exact = sigmoid(z) * sigmoid(-z);
    CHECK(test_support::rel_err(fd, exact) <= 1e-8);
  }
}

TEST_CASE("log_sigmoid and softplus") {
  CHECK(log_sigmoid(0.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  CHECK(log_sigmoid(-5.0) == doctest::Approx(-5.006715348489118).epsilon(1e-15));
  const double tiny = log_sigmoid(50.0);
  CHECK(tiny < 0.0);
  CHECK(tiny == doctest::Approx(-1.9287498479639178e-22).epsilon(1e-12));
  CHECK(softplus(-5.0) == doctest::Approx(0.006715348489118068).epsilon(1e-14));
  CHECK(std::isfinite(softplus(1000.0)));
  CHECK(softplus(1000.0) == 1000.0);
  for (double z = -30.0; z <= 30.0; z += 0.37) {
    CHECK(test_support::rel_err(std::exp(log_sigmoid(z)), sigmoid(z), 0.0) <= 1e-12);
  }
}

TEST_CASE("project_ball") {
  CHECK(project_ball(Vector{3, 4}, 1.0) == Vector{0.6, 0.8});
  CHECK(project_ball(Vector{0.1, 0}, 1.0) == Vector{0.1, 0});
  CHECK(project_ball(Vector{0, 0}, 5.0) == Vector{0, 0});
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    Vector v{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const Vector once = project_ball(v, 2.5);
    CHECK(norm(once) <= 2.5);
    CHECK(project_ball(once, 2.5) == once);
  }
}

TEST_CASE("symmetric eigenvalues") {
  CHECK(min_eigen_sym(SymMatrix{{2, 0}, {0, 1}}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(min_eigen_sym(SymMatrix{{2, 1}, {1, 2}}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(min_eigen_sym(SymMatrix{{0.38, 0.25}, {0.25, 3.17}}) ==
        doctest::Approx(0.35777559998425091).epsilon(1e-13));
  const auto ev = symmetric_eigenvalues(SymMatrix{{2, 1}, {1, 2}});
  REQUIRE(ev.size() == 2);
  CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));

  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 4;
    Matrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.uniform(-3, 3);
    }
    const SymMatrix a(m);
    const double lmin = min_eigen_sym(a);
    for (int k = 0; k < 100; ++k) {
      Vector v = gaussian_vector(rng, d);
      v *= 1.0 / norm(v);
      CHECK(lmin <= a.quadratic_form(v) + 1e-12);
    }
    // Trace equals the eigenvalue sum.
    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += a(i, i);
    double sum = 0.0;
    for (double e : symmetric_eigenvalues(a)) sum += e;
    CHECK(sum == doctest::Approx(trace).epsilon(1e-12));
  }
}

TEST_CASE("SymMatrix rejects asymmetry") {
  CHECK_THROWS_AS(SymMatrix({{1, 2}, {3, 1}}), DomainError);
  CHECK_NOTHROW(SymMatrix({{1, 2}, {2 + 1e-13, 1}}));
}

TEST_CASE("cholesky") {
  CHECK(cholesky(SymMatrix{{1, 0}, {0, 1}}) == Matrix::identity(2));
  const Matrix l = cholesky(SymMatrix{{4, 2}, {2, 5}});
  CHECK(l == Matrix{{2, 0}, {1, 2}});
  const SymMatrix sigma{{3, 0.2}, {0.2, 1.5}};
  CHECK(cholesky(sigma).multiply_transpose().max_abs_diff(sigma.matrix()) < 1e-10);
  CHECK(cholesky(SymMatrix{{2.07, -1.62}, {-1.62, 1.97}})(1, 1) > 0.0);
  try {
    (void)cholesky(SymMatrix{{1, 2}, {2, 1}});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("compensated sum") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 10; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-15).epsilon(1e-12));
}

TEST_CASE("rng determinism and streams") {
  Rng a(42), b(42);
  CHECK(gaussian_pair(a) == gaussian_pair(b));
  CHECK(Rng(42).child(1).next_u64() == Rng(42).child(1).next_u64());
  CHECK(Rng(42).child(1).next_u64() != Rng(42).child(2).next_u64());
  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    const double y = u.uniform_open_left();
    CHECK(y > 0.0);
    CHECK(y <= 1.0);
  }
}

TEST_CASE("gaussian moments") {
  Rng rng(42);
  CompensatedSum s, s2;
  const int n = 100000;
  for (int i = 0; i < n / 2; ++i) {
    const auto [g1, g2] = gaussian_pair(rng);
    s.add(g1 + g2);
    s2.add(g1 * g1 + g2 * g2);
  }
  const double mean = s.value() / n;
  const double var = s2.value() / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("uniform_in_ball stays inside") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) CHECK(norm(uniform_in_ball(rng, 2, 5.0)) <= 5.0);
}
