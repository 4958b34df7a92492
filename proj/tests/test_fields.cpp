#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "chaoscope/fields.hpp"
#include "chaoscope/math.hpp"
#include "oracles.hpp"

using namespace chaoscope;
using namespace chaoscope::fields;

namespace {

GridSpec spec_1d(int n = 1024, double length = 32.0) {
  GridSpec s;
  s.dimension = 1;
  s.points_per_side = n;
  s.side_length = length;
  return s;
}

struct LagSummary {
  double mean = 0.0, se = 0.0;
};

/// translation-averaged covariance per replica, then replica statistics
LagSummary ensemble_covariance(
    const std::function<GridField(RngStream)>& draw, std::size_t lag_cells,
    std::size_t replicas, uint64_t seed) {
  std::vector<double> values(replicas);
  RngStream root(seed);
  for (std::size_t r = 0; r < replicas; ++r)
    values[r] = lattice_covariance(draw(root.split(r)), lag_cells);
  const auto st = sample_stats(values);
  return {st.mean, st.stddev / std::sqrt(double(replicas))};
}

}  // namespace

TEST_CASE("zero density gives the zero field") {
  spectral::SpectralDensity zero;
  zero.dimension = 1;
  zero.label = "zero";
  zero.eval = [](double) { return 0.0; };
  const auto field = sample_stationary(spec_1d(), zero, RngStream(1));
  for (double v : field.values) CHECK(v == 0.0);
}

TEST_CASE("negative density aborts") {
  spectral::SpectralDensity bad;
  bad.dimension = 1;
  bad.label = "bad";
  bad.eval = [](double s) { return s > 1.0 ? -1.0 : 0.5; };
  CHECK_THROWS_AS(sample_stationary(spec_1d(), bad, RngStream(1)),
                  std::runtime_error);
}

TEST_CASE("stationary synthesis matches the depth-1 covariance") {
  const auto k = kernels::ball_seed_kernel(1);
  const auto density = spectral::spectrum_Kt(k, 1.0);
  const auto spec = spec_1d();
  auto draw = [&](RngStream rng) {
    return sample_stationary(spec, density, rng);
  };
  const std::size_t replicas = 600;

  SUBCASE("variance at the origin") {
    const auto v = ensemble_covariance(draw, 0, replicas, 101);
    CHECK(std::abs(v.mean - 1.0) <= 3.0 * v.se);
  }
  SUBCASE("covariance at lag 2 against quadrature") {
    const std::size_t lag_cells = 64;  // 2.0 in physical units
    const double target = oracles::martingale_covariance(
        1, 1.0, lag_cells * spec.spacing());
    const auto c = ensemble_covariance(draw, lag_cells, replicas, 102);
    CHECK(std::abs(c.mean - target) <= 3.0 * c.se);
  }
}

TEST_CASE("per-point normality at the ensemble level") {
  const auto k = kernels::ball_seed_kernel(1);
  const auto density = spectral::spectrum_Kt(k, 1.0);
  const auto spec = spec_1d(256, 16.0);
  const std::size_t replicas = 2000;
  std::vector<double> at_point(replicas);
  RngStream root(202);
  for (std::size_t r = 0; r < replicas; ++r)
    at_point[r] = sample_stationary(spec, density, root.split(r)).values[17];
  const auto st = sample_stats(at_point);
  CHECK(std::abs(st.skewness) <= 4.0 * std::sqrt(6.0 / replicas));
  CHECK(std::abs(st.excess_kurtosis) <= 4.0 * std::sqrt(24.0 / replicas));
}

TEST_CASE("martingale path") {
  const auto k = kernels::ball_seed_kernel(1);
  const auto spec = spec_1d();

  SUBCASE("repeated node gives an identical prefix") {
    const auto path =
        sample_martingale_path(k, spec, {1.0, 1.0}, RngStream(7));
    for (std::size_t i = 0; i < path[0].values.size(); ++i)
      CHECK(path[0].values[i] == path[1].values[i]);
  }
  SUBCASE("prefix reproducibility across path lengths") {
    const auto longer =
        sample_martingale_path(k, spec, {1.0, 2.0}, RngStream(7));
    const auto shorter = sample_martingale_path(k, spec, {1.0}, RngStream(7));
    for (std::size_t i = 0; i < shorter[0].values.size(); ++i)
      CHECK(longer[0].values[i] == shorter[0].values[i]);
  }
  SUBCASE("non-monotone depths rejected") {
    CHECK_THROWS_AS(sample_martingale_path(k, spec, {2.0, 1.0}, RngStream(7)),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_martingale_path(k, spec, {-1.0}, RngStream(7)),
                    std::invalid_argument);
  }
  SUBCASE("cross depth covariance is the earlier depth") {
    const std::size_t replicas = 600;
    std::vector<double> cross(replicas);
    RngStream root(303);
    for (std::size_t r = 0; r < replicas; ++r) {
      const auto path =
          sample_martingale_path(k, spec, {0.5, 2.0}, root.split(r));
      double dot = 0.0;
      for (std::size_t i = 0; i < path[0].values.size(); ++i)
        dot += path[0].values[i] * path[1].values[i];
      cross[r] = dot / path[0].values.size();
    }
    const auto st = sample_stats(cross);
    const double se = st.stddev / std::sqrt(double(replicas));
    CHECK(std::abs(st.mean - 0.5) <= 3.0 * se);
  }
  SUBCASE("increments are independent of the prefix") {
    const std::size_t replicas = 600;
    std::vector<double> cross(replicas);
    RngStream root(404);
    for (std::size_t r = 0; r < replicas; ++r) {
      const auto path =
          sample_martingale_path(k, spec, {1.0, 2.0}, root.split(r));
      double dot = 0.0;
      for (std::size_t i = 0; i < path[0].values.size(); ++i)
        dot += path[0].values[i] * (path[1].values[i] - path[0].values[i]);
      cross[r] = dot / path[0].values.size();
    }
    const auto st = sample_stats(cross);
    const double se = st.stddev / std::sqrt(double(replicas));
    CHECK(std::abs(st.mean) <= 3.0 * se);
  }
}

TEST_CASE("decomposed mollified field") {
  const auto k = kernels::ball_seed_kernel(1);
  const auto m = kernels::standard_mollifier(1, 1);
  const auto scan = spectral::ScanGrid::standard();
  const auto cert = spectral::find_admissible_a(k, m, scan);
  const auto spec = spec_1d();

  SUBCASE("depth from the smoothing scale") {
    const double eps = cert.a_const * std::exp(-1.0);
    const auto parts =
        sample_decomposed_conv(k, m, cert, eps, spec, RngStream(9));
    CHECK(parts.t_eps == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("eps at or above the admissible constant is rejected") {
    CHECK_THROWS_AS(
        sample_decomposed_conv(k, m, cert, cert.a_const, spec, RngStream(9)),
        std::invalid_argument);
  }
  SUBCASE("components are uncorrelated") {
    const double eps = cert.a_const * std::exp(-1.5);
    const std::size_t replicas = 400;
    std::vector<double> mw(replicas), mz(replicas), wz(replicas);
    RngStream root(505);
    for (std::size_t r = 0; r < replicas; ++r) {
      const auto parts =
          sample_decomposed_conv(k, m, cert, eps, spec, root.split(r));
      double s_mw = 0.0, s_mz = 0.0, s_wz = 0.0;
      const auto& a = parts.martingale.values;
      const auto& b = parts.remainder.values;
      const auto& c = parts.vanishing.values;
      for (std::size_t i = 0; i < a.size(); ++i) {
        s_mw += a[i] * b[i];
        s_mz += a[i] * c[i];
        s_wz += b[i] * c[i];
      }
      mw[r] = s_mw / a.size();
      mz[r] = s_mz / a.size();
      wz[r] = s_wz / a.size();
    }
    for (const auto& series : {mw, mz, wz}) {
      const auto st = sample_stats(series);
      const double se = st.stddev / std::sqrt(double(replicas));
      CHECK(std::abs(st.mean) <= 3.0 * se);
    }
  }
  SUBCASE("sum covariance against the direct mollified-kernel quadrature") {
    const double eps = cert.a_const * std::exp(-1.0);
    const std::size_t replicas = 500;
    auto draw = [&](RngStream rng) {
      return sample_decomposed_conv(k, m, cert, eps, spec, rng).sum;
    };
    for (std::size_t lag_cells : {0UL, 32UL}) {
      const double target = oracles::conv_covariance_1d(
          m.profile_eval, m.support_radius, eps, lag_cells * spec.spacing());
      const auto c = ensemble_covariance(draw, lag_cells, replicas, 606);
      CHECK(std::abs(c.mean - target) <= 3.0 * c.se + 0.01);
    }
  }
  SUBCASE("vanishing component shrinks with eps") {
    auto variance_at = [&](double eps, uint64_t seed) {
      const std::size_t replicas = 200;
      std::vector<double> v(replicas);
      RngStream root(seed);
      for (std::size_t r = 0; r < replicas; ++r) {
        const auto parts =
            sample_decomposed_conv(k, m, cert, eps, spec, root.split(r));
        double s = 0.0;
        for (double x : parts.vanishing.values) s += x * x;
        v[r] = s / parts.vanishing.values.size();
      }
      return sample_stats(v).mean;
    };
    CHECK(variance_at(cert.a_const * 1e-3, 707) <
          variance_at(cert.a_const * 1e-1, 708));
  }
}

TEST_CASE("periodization bias stays below the Monte Carlo error") {
  const auto k = kernels::ball_seed_kernel(1);
  const auto density = spectral::spectrum_Kt(k, 1.0);
  const std::size_t replicas = 400;
  auto discrepancy = [&](int n, double length, uint64_t seed, double& se_out) {
    GridSpec spec = spec_1d(n, length);
    auto draw = [&](RngStream rng) {
      return sample_stationary(spec, density, rng);
    };
    double worst = 0.0, worst_se = 0.0;
    for (std::size_t lag_cells : {0UL, 16UL, 32UL, 64UL}) {
      const double target = oracles::martingale_covariance(
          1, 1.0, lag_cells * spec.spacing());
      const auto c = ensemble_covariance(draw, lag_cells, replicas, seed);
      if (std::abs(c.mean - target) > worst) {
        worst = std::abs(c.mean - target);
        worst_se = c.se;
      }
    }
    se_out = worst_se;
    return worst;
  };
  double se_small = 0.0, se_big = 0.0;
  const double d_small = discrepancy(1024, 32.0, 809, se_small);
  const double d_big = discrepancy(2048, 64.0, 810, se_big);
  CHECK(std::abs(d_small - d_big) <=
        3.0 * std::sqrt(se_small * se_small + se_big * se_big));
}

TEST_CASE("identical seeds reproduce the field bit for bit") {
  const auto k = kernels::ball_seed_kernel(2);
  GridSpec spec;
  spec.dimension = 2;
  spec.points_per_side = 32;
  spec.side_length = 1.0;
  const auto a = sample_martingale_path(k, spec, {2.0}, RngStream(99))[0];
  const auto b = sample_martingale_path(k, spec, {2.0}, RngStream(99))[0];
  CHECK(a.values == b.values);
}
