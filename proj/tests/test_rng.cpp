#include <doctest.h>

#include "tsrobust/rng.hpp"

using namespace tsr;

TEST_CASE("streams are reproducible and disjoint by index") {
  Rng a = Rng::stream(42, 3);
  Rng b = Rng::stream(42, 3);
  Rng c = Rng::stream(42, 4);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double va = a.uniform();
    all_equal = all_equal && va == b.uniform();
    any_diff = any_diff || va != c.uniform();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("normal moments") {
  Rng rng(7);
  const int n = 200000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("standardized t(5) has unit variance") {
  Rng rng(11);
  const InnovationDist t5 = InnovationDist::student_t(5.0);
  const int n = 1000000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = t5.draw(rng);
    s1 += z;
    s2 += z * z;
  }
  const double var = s2 / n - (s1 / n) * (s1 / n);
  CHECK(var >= 0.99);
  CHECK(var <= 1.01);
}

TEST_CASE("t distribution needs df > 2") {
  CHECK_THROWS_AS(InnovationDist::student_t(2.0), InvalidInput);
  CHECK_THROWS_AS(InnovationDist::student_t(1.5), InvalidInput);
}
