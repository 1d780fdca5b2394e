#include "doctest.h"
#include "moran/params.hpp"

using moran::derive_constants;

TEST_CASE("derived constants match their closed forms") {
  auto p = derive_constants(2, 2, 0.5, 1.0, 2.0);
  CHECK(p.s_n == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.r_n == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.kappa == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.nu == doctest::Approx(0.5).epsilon(1e-15));

  auto q = derive_constants(10, 1000, 0.5, 1.0, 2.0);
  CHECK(q.s_n == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(q.r_n == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(q.dx() == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("invalid inputs are rejected with a named bound") {
  CHECK_THROWS_AS(derive_constants(0, 100, 0.5, 1.0, 1.0), moran::domain_error);
  CHECK_THROWS_AS(derive_constants(4, 1, 0.5, 1.0, 1.0), moran::domain_error);
  CHECK_THROWS_AS(derive_constants(4, 100, 0.0, 1.0, 1.0), moran::domain_error);
  CHECK_THROWS_AS(derive_constants(4, 100, 1.0, 1.0, 1.0), moran::domain_error);
  CHECK_THROWS_AS(derive_constants(4, 100, 0.5, -1.0, 1.0), moran::domain_error);
  CHECK_THROWS_AS(derive_constants(4, 100, 0.5, 1.0, 0.0), moran::domain_error);
  // (alpha+1) s_n = 1.5 * 2 = 3 >= 1 at n=1, s0=1
  CHECK_THROWS_AS(derive_constants(1, 100, 0.5, 1.0, 1.0), moran::domain_error);
}
