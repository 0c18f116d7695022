#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "graphweave/error.hpp"
#include "graphweave/smoothed_operator.hpp"

using namespace graphweave;

TEST_CASE("operator entries on hand-computed graphs") {
  const Matrix L0 = SmoothedOperator::diagnostic(testing::path(3), 0.0).dense();
  CHECK(L0(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(L0(1, 2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(L0(0, 2) == 0.0);
  for (int i = 0; i < 3; ++i) CHECK(L0(i, i) == 0.0);

  const Matrix L = SmoothedOperator(testing::triangle(), 0.9).dense();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(L(i, j) == doctest::Approx(i == j ? 0.9 / 1.1 : 0.1 / 1.1).epsilon(1e-12));
}

TEST_CASE("operator preconditions") {
  const std::vector<Edge> e{{0, 1}};
  CHECK_THROWS_AS(SmoothedOperator(Graph(3, e), 0.5), PreconditionError);
  CHECK_THROWS_AS(SmoothedOperator(testing::triangle(), 0.0), PreconditionError);
  CHECK_THROWS_AS(SmoothedOperator(testing::triangle(), 1.0), PreconditionError);
}

TEST_CASE("regular graphs fix the all-ones vector") {
  for (double alpha : {0.1, 0.5, 0.9}) {
    const SmoothedOperator op(testing::cycle(7), alpha);
    const Vector y = op.apply(Vector::Ones(7));
    CHECK((y - Vector::Ones(7)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("sqrt of smoothed degrees is a fixed point") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = testing::random_connected(15 + static_cast<int>(seed), 0.2, seed);
    for (double alpha : {0.3, 0.9}) {
      const SmoothedOperator op(g, alpha);
      const Vector r = op.smoothed_degrees().array().sqrt();
      CHECK((op.apply(r) - r).norm() <= 1e-10 * r.norm());
    }
  }
}

TEST_CASE("operator symmetry and two-sided semidefiniteness") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  const Graph g = testing::random_connected(25, 0.15, 11);
  const SmoothedOperator op(g, 0.7);
  for (int t = 0; t < 100; ++t) {
    Vector x(25), y(25);
    for (int i = 0; i < 25; ++i) {
      x[i] = z(rng);
      y[i] = z(rng);
    }
    const Vector Lx = op.apply(x);
    CHECK(std::abs(Lx.dot(y) - x.dot(op.apply(y))) <= 1e-10 * (1.0 + x.norm() * y.norm()));
    CHECK(x.squaredNorm() - x.dot(Lx) >= -1e-10);
    CHECK(x.squaredNorm() + x.dot(Lx) >= -1e-10);
  }
  // Matrix-free and dense forms agree.
  Vector x = Vector::LinSpaced(25, -1.0, 2.0);
  CHECK((op.apply(x) - op.dense() * x).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("spectral check") {
  const auto tri = spectral_check(testing::triangle(), 0.9);
  CHECK(tri.lambda_max == doctest::Approx(1.0).epsilon(1e-12));
  const Vector ones = Vector::Ones(3).normalized();
  CHECK(std::abs(tri.top_eigenvector.dot(ones)) == doctest::Approx(1.0).epsilon(1e-12));

  const auto p3 = spectral_check(testing::path(3), 0.9);
  Vector expected(3);
  expected << 1.0, std::sqrt(1.1), 1.0;
  CHECK(p3.top_eigenvector.dot(expected.normalized()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p3.lambda_min > -1.0);

  const std::vector<Edge> e{{0, 1}, {2, 3}};
  CHECK_THROWS_AS(spectral_check(Graph(4, e), 0.9), PreconditionError);
}
