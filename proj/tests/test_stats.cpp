#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chaoscope/atomic.hpp"
#include "chaoscope/kernels.hpp"
#include "chaoscope/stats.hpp"
#include "oracles.hpp"

using namespace chaoscope;
using namespace chaoscope::stats;

TEST_CASE("ensemble summaries") {
  SUBCASE("deterministic sampler has zero spread") {
    const auto s = mc_laplace(
        [](std::size_t, RngStream&) { return 2.0; }, 200, 1);
    CHECK(s.mean == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(s.se <= 1e-12);
  }
  SUBCASE("zero test functional gives exactly one") {
    const auto s = mc_laplace(
        [](std::size_t, RngStream&) { return 0.0; }, 150, 1);
    CHECK(s.mean == 1.0);
    CHECK(s.se <= 1e-12);
  }
  SUBCASE("too few replicas rejected") {
    CHECK_THROWS_AS(mc_laplace(
                        [](std::size_t, RngStream&) { return 0.0; }, 99, 1),
                    std::invalid_argument);
  }
  SUBCASE("reductions are replica-ordered and reproducible") {
    auto sampler = [](std::size_t, RngStream& rng) { return rng.normal(); };
    const auto a = mc_ensemble(sampler, 500, 42);
    const auto b = mc_ensemble(sampler, 500, 42);
    CHECK(a.values == b.values);
    CHECK(a.mean == b.mean);
  }
}

TEST_CASE("multifractal scaling") {
  SUBCASE("exponent arithmetic") {
    CHECK(multifractal_exponent(2, 3.0, 0.2) ==
          doctest::Approx(1.02).epsilon(1e-12));
    CHECK(multifractal_exponent(2, 3.0, 0.0) == 0.0);
  }
  SUBCASE("atomic sampler recovers the deterministic-intensity slope") {
    // P over Lebesgue(r A): E[mass^q] scales like r^{d q / alpha}
    const int d = 2;
    const double gamma = 3.0, alpha = 2.0 / 3.0, q = 0.25;
    const std::vector<double> scales = {1.0, 0.5, 0.25, 0.125, 0.0625};
    auto mass = [&](double r, std::size_t, RngStream& rng) {
      auto box = atomic::lebesgue_box(d, 0.0, r);
      auto atoms = atomic::sample_atomic(box, gamma, 1e-4 * std::pow(r, 3.0),
                                         true, rng);
      return atoms.total_mass();
    };
    const double target = std::sqrt(d / 2.0) * gamma * q;  // = d q / alpha
    auto fit = multifractal_fit(mass, q, scales, target, 1200, 77);
    CHECK(std::abs(fit.slope - target) <= 2.0 * fit.slope_se);
  }
  SUBCASE("insufficient scales rejected") {
    auto mass = [](double, std::size_t, RngStream&) { return 1.0; };
    CHECK_THROWS_AS(multifractal_fit(mass, 0.5, {1.0, 0.5}, 0.0, 100, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("hill estimator") {
  SUBCASE("exact heavy-tailed sample") {
    const auto data = oracles::pareto_sample(100000, 0.1, 2.0 / 3.0, 91);
    const auto est = hill_index(data, 0.01);
    CHECK(std::abs(est.tail_index - 2.0 / 3.0) < 0.02);
    CHECK_FALSE(est.unstable);
  }
  SUBCASE("light-tailed sample is flagged") {
    const auto data = oracles::exponential_sample(100000, 92);
    const auto est = hill_index(data, 0.01);
    CHECK(est.unstable);
  }
  SUBCASE("degenerate sample rejected") {
    std::vector<double> flat(5000, 1.0);
    CHECK_THROWS_AS(hill_index(flat, 0.01), std::invalid_argument);
    std::vector<double> tiny = {1.0, 2.0};
    CHECK_THROWS_AS(hill_index(tiny, 0.01), std::invalid_argument);
  }
}

TEST_CASE("convexity comparison for exponentiated Gaussians") {
  auto convex = [](double x) { return std::exp(-x); };
  SUBCASE("degenerate against unit variance, exact left side") {
    const std::vector<double> cov0 = {0.0}, cov1 = {1.0}, f = {1.0};
    const auto report = kahane_check(cov0, cov1, 1, f, convex, 100000, 5);
    CHECK(report.precondition_ok);
    CHECK(report.lhs_mean == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(report.lhs_se <= 1e-12);
    const double oracle = oracles::scalar_exp_convex_mean(1.0, convex);
    CHECK(std::abs(report.rhs_mean - oracle) <= 3.0 * report.rhs_se);
    CHECK(report.rhs_mean >= report.lhs_mean - 3.0 * report.rhs_se);
    CHECK_FALSE(report.violated);
  }
  SUBCASE("equal covariances agree within the band") {
    const std::vector<double> cov = {1.0, 0.3, 0.3, 0.5};
    const std::vector<double> f = {0.5, 0.5};
    const auto report = kahane_check(cov, cov, 2, f, convex, 20000, 6);
    CHECK(report.precondition_ok);
    CHECK_FALSE(report.violated);
  }
  SUBCASE("entrywise dominance failure is reported") {
    const std::vector<double> cov_hi = {1.0, 0.3, 0.3, 1.0};
    const std::vector<double> cov_lo = {1.0, 0.0, 0.0, 1.0};
    const auto report = kahane_check(cov_hi, cov_lo, 2, {0.5, 0.5}, convex,
                                     1000, 7);
    CHECK_FALSE(report.precondition_ok);
  }
  SUBCASE("small random battery never violates") {
    RngStream rng(33);
    for (int pair = 0; pair < 10; ++pair) {
      const std::size_t n = 2 + std::size_t(rng.uniform() * 6);
      std::vector<double> g(n * n);
      for (auto& v : g) v = rng.normal();
      std::vector<double> lower(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t l = 0; l < n; ++l)
            lower[i * n + j] += g[l * n + i] * g[l * n + j] / n;
      std::vector<double> v(n);
      for (auto& x : v) x = rng.uniform();
      std::vector<double> upper = lower;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          upper[i * n + j] += 0.7 * v[i] * v[j];
      std::vector<double> f(n, 1.0 / n);
      const auto report =
          kahane_check(lower, upper, n, f, convex, 5000, 100 + pair);
      CHECK(report.precondition_ok);
      CHECK_FALSE(report.violated);
    }
  }
}

TEST_CASE("truncated-kernel covariance comparison") {
  const auto k = kernels::ball_seed_kernel(1);
  const std::vector<double> deltas = {0.5, 0.2, 0.1, 0.05, 0.02};
  const std::vector<double> lags = {0.0, 1.0, 4.0};
  const std::vector<std::pair<double, double>> windows = {{0, 2}, {1, 4}};
  const auto report = covariance_comparison(k, deltas, 1e-2, lags, windows);

  SUBCASE("discrepancy decreases along the delta list") {
    for (std::size_t i = 1; i < report.entries.size(); ++i)
      CHECK(report.entries[i].sup_discrepancy <=
            report.entries[i - 1].sup_discrepancy + 1e-12);
  }
  SUBCASE("target attained at some delta") {
    CHECK(report.attained);
    CHECK(report.attained_delta > 0.0);
  }
  SUBCASE("zero lag contributes nothing") {
    const auto only_zero =
        covariance_comparison(k, {0.1}, 1e-2, {0.0}, windows);
    CHECK(only_zero.entries[0].sup_discrepancy == 0.0);
  }
  SUBCASE("empty scale window contributes nothing") {
    const auto degenerate = covariance_comparison(
        k, {0.1}, 1e-2, {1.0}, {{2.0, 2.0}});
    CHECK(degenerate.entries[0].sup_discrepancy == 0.0);
  }
  SUBCASE("increasing delta list rejected") {
    CHECK_THROWS_AS(
        covariance_comparison(k, {0.1, 0.5}, 1e-2, lags, windows),
        std::invalid_argument);
  }
}

TEST_CASE("tail study on the exact atomic sampler") {
  const double gamma = 3.0, alpha = 2.0 / 3.0;
  const auto nu = atomic::lebesgue_box(2);
  auto mass = [&](double, std::size_t, RngStream& rng) {
    return atomic::sample_atomic(nu, gamma, 0.05, true, rng).total_mass();
  };
  const auto report =
      supercritical_tail_study(mass, {1.0, 2.0}, alpha, 30000, 0.01, 55);
  REQUIRE(report.per_depth.size() == 2);
  for (const auto& entry : report.per_depth)
    CHECK(std::abs(entry.hill.tail_index - alpha) / alpha < 0.15);
}
