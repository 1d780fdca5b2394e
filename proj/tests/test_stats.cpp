#include <cmath>

#include "doctest.h"
#include "moran/analytic.hpp"
#include "moran/reference.hpp"
#include "moran/rng.hpp"
#include "moran/stats.hpp"

using namespace moran;

TEST_CASE("ks_test against a brute-force enumeration oracle") {
  // fixed 10-point sample vs Exp(1)
  std::vector<double> s = {0.05, 0.1, 0.3, 0.45, 0.8, 1.1, 1.6, 2.2, 2.9, 4.0};
  auto cdf = [](double x) { return 1.0 - std::exp(-x); };
  // oracle: enumerate the sup over both sides of every jump
  double D_ref = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    double F = cdf(s[i]);
    D_ref = std::max(D_ref, std::abs(F - double(i) / s.size()));
    D_ref = std::max(D_ref, std::abs(double(i + 1) / s.size() - F));
  }
  auto res = ks_test(s, cdf);
  CHECK(res.D == doctest::Approx(D_ref).epsilon(1e-12));
  CHECK(res.n == 10);
  CHECK(res.p_value >= 0.0);
  CHECK(res.p_value <= 1.0);
  CHECK_THROWS_AS(ks_test({}, cdf), domain_error);
}

TEST_CASE("ks_test point mass and plug-in grid") {
  auto cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  auto res = ks_test({0.3}, cdf);
  CHECK(res.D == doctest::Approx(0.7).epsilon(1e-12));
  // sample at inverse-CDF grid points has D = O(1/size)
  std::vector<double> grid;
  const int n = 1000;
  for (int i = 0; i < n; ++i) grid.push_back((i + 0.5) / n);
  CHECK(ks_test(grid, cdf).D <= 1.0 / n + 1e-12);
}

TEST_CASE("ks p-values are approximately uniform under the null") {
  CounterRng rng(777);
  auto cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  std::vector<double> pvals;
  for (int r = 0; r < 1000; ++r) {
    std::vector<double> s(100);
    for (auto& v : s) v = rng.next_double();
    pvals.push_back(ks_test(s, cdf).p_value);
  }
  CHECK(ks_test(pvals, cdf).D < 0.05);
}

TEST_CASE("two-sample KS on identical and disjoint samples") {
  std::vector<double> a = {1, 2, 3, 4, 5};
  std::vector<double> b = {1, 2, 3, 4, 5};
  CHECK(ks_test_two_sample(a, b).D == doctest::Approx(0.0).epsilon(1e-12));
  std::vector<double> c = {10, 11, 12};
  CHECK(ks_test_two_sample(a, c).D == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gamma_q special values") {
  // Q(1,x) = e^{-x}
  CHECK(gamma_q(1.0, 0.7) == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));
  // Q(1/2,x) = erfc(sqrt(x))
  CHECK(gamma_q(0.5, 2.0) == doctest::Approx(std::erfc(std::sqrt(2.0))).epsilon(1e-12));
  // chi^2_5 upper tail at its 0.99 quantile
  CHECK(gamma_q(2.5, 15.086 / 2.0) == doctest::Approx(0.01).epsilon(1e-3));
}

TEST_CASE("front_speed_fit recovers exact and noisy lines") {
  std::vector<std::pair<double, double>> exact;
  for (int i = 0; i < 10; ++i) exact.push_back({i * 0.5, 1.5 + 0.4 * i * 0.5});
  auto fit = front_speed_fit(exact);
  CHECK(fit.speed == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.residual == doctest::Approx(0.0).epsilon(1e-10));

  auto two = front_speed_fit({{0.0, 1.0}, {2.0, 5.0}});
  CHECK(two.speed == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(two.residual == doctest::Approx(0.0).epsilon(1e-10));

  // seeded noise, checked against an independently coded LSQ oracle
  CounterRng rng(55);
  std::vector<std::pair<double, double>> noisy;
  for (int i = 0; i < 50; ++i)
    noisy.push_back({0.1 * i, 0.7 * 0.1 * i + 0.05 * rng.next_normal()});
  double st = 0, sm = 0, stt = 0, stm = 0;
  for (auto& [t, mu] : noisy) st += t, sm += mu, stt += t * t, stm += t * mu;
  double nn = 50.0;
  double b_ref = (nn * stm - st * sm) / (nn * stt - st * st);
  auto nf = front_speed_fit(noisy);
  CHECK(nf.speed == doctest::Approx(b_ref).epsilon(1e-12));

  CHECK_THROWS_AS(front_speed_fit({{1.0, 2.0}}), domain_error);
  CHECK_THROWS_AS(front_speed_fit({{1.0, 2.0}, {1.0, 3.0}}), domain_error);
}

TEST_CASE("profile_error trims, rounds, and shifts") {
  auto p = derive_constants(4, 200, 0.5, 1.0, 2.0);
  Snapshot snap;
  snap.time = 0.0;
  snap.lo = -40;
  snap.p.resize(81);
  for (size_t i = 0; i < snap.p.size(); ++i) {
    double x = double(snap.lo + int32_t(i)) / p.n;
    snap.p[i] = std::round(wave_profile(x, p.kappa) * p.N) / p.N;
  }
  CHECK(profile_error(snap, 0.0, p) <= 0.5 / p.N + 1e-12);

  Snapshot zero = snap;
  for (double& v : zero.p) v = 0.0;
  double expect = wave_profile(double(zero.lo + 5) / p.n, p.kappa);
  CHECK(profile_error(zero, 0.0, p) == doctest::Approx(expect).epsilon(1e-12));

  Snapshot shifted = snap;
  shifted.lo += 8;  // shift by 2 space units
  CHECK(profile_error(shifted, 2.0, p) == doctest::Approx(profile_error(snap, 0.0, p))
                                              .epsilon(1e-12));
}

TEST_CASE("coalescent_rescale equivariance and censoring") {
  CoalescenceMatrix tau(3);
  tau.at(0, 1) = tau.at(1, 0) = 2.0;
  tau.at(0, 2) = tau.at(2, 0) = 5.0;
  auto id = coalescent_rescale(tau, 1.0);
  CHECK(id.values.size() == 2);
  CHECK(id.censoring_fraction == doctest::Approx(1.0 / 3.0));
  auto dbl = coalescent_rescale(tau, 2.0);
  for (size_t i = 0; i < id.values.size(); ++i)
    CHECK(dbl.values[i] == doctest::Approx(2.0 * id.values[i]).epsilon(1e-15));

  CoalescenceMatrix empty(2);
  CHECK_THROWS_AS(coalescent_rescale(empty, 1.0), domain_error);

  // self-consistency: simulated k=2 Kingman times rescaled by 1 vs Exp(1)
  std::vector<double> taus;
  for (int r = 0; r < 10000; ++r)
    taus.push_back(kingman_sample(2, 900 + uint64_t(r)).tau_at(0, 1));
  auto ks = ks_test(taus, [](double x) { return 1.0 - std::exp(-x); });
  CHECK(ks.p_value > 0.01);
}
