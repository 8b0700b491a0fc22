#include <doctest.h>

#include <cmath>
#include <limits>

#include "splitcert/errors.hpp"
#include "splitcert/numerics.hpp"

using namespace splitcert;

TEST_CASE("inner products") {
  CHECK(inner(Point{1, 2}, Point{3, 4}) == 11.0);
  CHECK(inner(Point{0, 0}, Point{5, 7}) == 0.0);
  CHECK(inner(Point{1, 1, 1}, Point{1, 1, 1}) == 3.0);
}

TEST_CASE("squared norms") {
  CHECK(norm_sq(Point{3, 4}) == 25.0);
  CHECK(norm_sq(Point{0}) == 0.0);
  CHECK(norm_sq(Point{1, 1, 1, 1}) == 4.0);
  CHECK(norm(Point{3, 4}) == 5.0);
  CHECK(dist_sq(Point{1, 1}, Point{4, 5}) == 25.0);
}

TEST_CASE("dimension mismatch is a contract error") {
  CHECK_THROWS_AS(inner(Point{1, 2}, Point{1}), ContractError);
  CHECK_THROWS_AS((Point{1} + Point{1, 2}), ContractError);
  CHECK_THROWS_AS(dist_sq(Point{1, 2, 3}, Point{1}), ContractError);
}

TEST_CASE("points reject empty or non-finite coordinates") {
  CHECK_THROWS_AS(Point(std::vector<double>{}), ContractError);
  CHECK_THROWS_AS(Point({1.0, std::numeric_limits<double>::quiet_NaN()}), ContractError);
  CHECK_THROWS_AS(Point({std::numeric_limits<double>::infinity()}), ContractError);
  CHECK_THROWS_AS(Point::zeros(0), ContractError);
}

TEST_CASE("arithmetic") {
  CHECK(Point{1, 2} + Point{3, 4} == Point{4, 6});
  CHECK(Point{1, 2} - Point{3, 4} == Point{-2, -2});
  CHECK(2.0 * Point{1, -2} == Point{2, -4});
  CHECK(axpy(Point{1, 1}, -0.5, Point{2, 4}) == Point{0, -1});
}

TEST_CASE("eigen round trip") {
  const Point p{1.5, -2.25, 3.0};
  CHECK(Point::from_eigen(p.as_eigen()) == p);
}

TEST_CASE("rng is deterministic per seed") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    if (x != c.uniform()) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("unit vectors have unit length") {
  Rng rng(3);
  for (std::size_t d : {1u, 2u, 7u, 30u}) {
    CHECK(norm(rng.unit_vector(d)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("normal draws have plausible moments") {
  Rng rng(11);
  double s = 0.0, s2 = 0.0;
  constexpr int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.05);
  CHECK(std::abs(s2 / n - 1.0) < 0.05);
}
