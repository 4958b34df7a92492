#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "chaoscope/kernels.hpp"
#include "chaoscope/math.hpp"

using namespace chaoscope;
using namespace chaoscope::kernels;

namespace {
std::vector<double> default_radii() {
  std::vector<double> r;
  for (int i = 0; i <= 400; ++i) r.push_back(0.02 * i);
  return r;
}
}  // namespace

TEST_CASE("ball kernel closed forms") {
  const auto k1 = ball_seed_kernel(1);
  CHECK(k1.radial_eval(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(k1.radial_eval(std::numbers::pi) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(k1.radial_hat_eval(2.0) == 0.0);
  CHECK(k1.radial_hat_eval(0.5) == doctest::Approx(0.5));

  const auto k2 = ball_seed_kernel(2);
  CHECK(k2.radial_eval(0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(k2.radial_hat_eval(0.7) == doctest::Approx(1.0 / std::numbers::pi));

  const auto k3 = ball_seed_kernel(3);
  CHECK(k3.radial_eval(0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(k3.radial_eval(1e-4) == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(ball_seed_kernel(0), std::invalid_argument);
}

TEST_CASE("spectral mass reproduces the unit variance") {
  // quadrature of the spectral profile over R^d must give K(0) = 1
  for (int d : {1, 2, 3}) {
    const auto k = ball_seed_kernel(d);
    const double mass =
        sphere_area(d) * integrate_panels(
                             [&](double s) {
                               return k.radial_hat_eval(s) *
                                      std::pow(s, d - 1.0);
                             },
                             0.0, 1.0, 8, 32);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("validate_seed on the ball kernel") {
  const auto k = ball_seed_kernel(1);
  const auto radii = default_radii();
  const auto report = validate_seed(k, radii);
  CHECK(report.all_passed());
  for (const auto& c : report.checks)
    if (c.name == "cumulative-mass sandwich") CHECK(c.margin > 0.0);
}

TEST_CASE("validate_seed flags a broken normalization") {
  auto k = ball_seed_kernel(1);
  auto base = k.radial_eval;
  k.radial_eval = [base](double r) { return 0.9 * base(r); };
  const auto report = validate_seed(k, default_radii());
  CHECK_FALSE(report.all_passed());
  for (const auto& c : report.checks)
    if (c.name == "unit value at zero") {
      CHECK_FALSE(c.passed);
      CHECK(c.margin == doctest::Approx(-0.1).epsilon(1e-6));
    }
}

TEST_CASE("validate_seed with the degenerate single-node grid") {
  const auto k = ball_seed_kernel(1);
  const std::vector<double> radii = {0.0};
  const auto report = validate_seed(k, radii);
  CHECK(report.all_passed());  // everything but K(0)=1 is vacuous
}

TEST_CASE("standard mollifier satisfies the stated expansion") {
  const auto m = standard_mollifier(2, 1);
  CHECK(m.hat_eval(0.0) == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("gradient at zero vanishes") {
    const double h = 1e-5;
    auto hat2 = [&](double x, double y) {
      return m.hat_eval(std::hypot(x, y));
    };
    CHECK(std::abs(hat2(h, 0) - hat2(-h, 0)) / (2 * h) < 1e-9);
    CHECK(std::abs(hat2(0, h) - hat2(0, -h)) / (2 * h) < 1e-9);
  }
  SUBCASE("|hat|^2 dips quadratically below one") {
    // finite-difference trace of the Hessian of |hat|^2 at zero
    const double h = 1e-3;
    auto sq = [&](double s) {
      const double v = m.hat_eval(s);
      return v * v;
    };
    const double trace = 2.0 * (sq(h) - 2.0 * sq(0.0) + sq(-h)) / (h * h);
    CHECK(trace < -1.0);  // -4d + O(h) for the order-1 profile
  }
  SUBCASE("leading coefficient is pinned to one") {
    for (double s : {1e-4, 1e-3, 1e-2}) {
      CHECK(m.one_minus_hat(s) / (s * s) ==
            doctest::Approx(1.0).epsilon(2e-2));
    }
  }
  SUBCASE("branches of one_minus_hat agree") {
    for (double s : {0.4, 0.49, 0.51, 0.7}) {
      CHECK(m.one_minus_hat(s) ==
            doctest::Approx(1.0 - m.hat_eval(s)).epsilon(1e-8));
    }
  }
  SUBCASE("assumption checks pass") {
    const auto report = validate_mollifier(m);
    CHECK(report.all_passed());
  }
}

TEST_CASE("higher-order mollifier kills the low moments") {
  const auto m = standard_mollifier(2, 2);
  for (double s : {1e-3, 1e-2}) {
    const double u = m.one_minus_hat(s);
    CHECK(u / (s * s * s * s) == doctest::Approx(1.0).epsilon(5e-2));
  }
  const auto report = validate_mollifier(m);
  CHECK(report.all_passed());
}

TEST_CASE("three-dimensional mollifier passes validation") {
  const auto m = standard_mollifier(3, 2);
  const auto report = validate_mollifier(m);
  CHECK(report.all_passed());
}

TEST_CASE("mollifier order below the dimension bound is rejected") {
  CHECK_THROWS_AS(standard_mollifier(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(standard_mollifier(1, 0), std::invalid_argument);
}

TEST_CASE("defective mollifier fails the local-maximum check") {
  const auto bad = defective_mollifier(1);
  const auto report = validate_mollifier(bad);
  bool local_max_failed = false;
  for (const auto& c : report.checks)
    if (c.name == "local maximum of |hat| at zero" && !c.passed)
      local_max_failed = true;
  CHECK(local_max_failed);
}

TEST_CASE("truncated kernel") {
  const auto k = ball_seed_kernel(1);
  const auto kd = truncate_kernel(k, 0.1);
  CHECK(kd.radial_eval(0.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kd.radial_eval(10.5) == 0.0);
  CHECK_FALSE(kd.band_limited);
  CHECK_THROWS_AS(truncate_kernel(k, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(truncate_kernel(k, -1.0), std::invalid_argument);

  SUBCASE("pointwise product against an independent window quadrature") {
    // chi(1/2) computed directly as the bump self-convolution in d = 1
    auto bump = [](double r) {
      return std::abs(r) < 0.5
                 ? std::exp(-1.0 / (1.0 - 4.0 * r * r))
                 : 0.0;
    };
    const double norm_sq =
        integrate_panels([&](double u) { return bump(u) * bump(u); }, -0.5,
                         0.5, 8, 32);
    const double chi_half =
        integrate_panels([&](double u) { return bump(u) * bump(0.5 - u); },
                         -0.5, 0.5, 8, 32) /
        norm_sq;
    CHECK(kd.radial_eval(5.0) ==
          doctest::Approx(std::sin(5.0) / 5.0 * chi_half).epsilon(1e-6));
  }
  SUBCASE("numerically positive definite") {
    double min_hat = 0.0;
    for (int i = 1; i <= 2000; ++i)
      min_hat = std::min(min_hat, kd.radial_hat_eval(0.02 * i));
    CHECK(min_hat >= -1e-8);
  }
  SUBCASE("spectral mass still reproduces the unit variance") {
    const double mass =
        2.0 * integrate_panels([&](double s) { return kd.radial_hat_eval(s); },
                               0.0, kd.hat_support_radius, 32, 16);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("tabulated kernel round trip") {
  const auto k = ball_seed_kernel(1);
  const std::string path = "test_kernel_table.txt";
  {
    std::ofstream out(path);
    out << "radius value\n";
    for (int i = 0; i <= 4000; ++i) {
      const double r = 40.0 * i / 4000.0;
      out << r << " " << k.radial_eval(r) << "\n";
    }
  }
  const auto loaded = kernel_from_table(path, 1, false);
  for (double r : {0.0, 1.0, 5.0, 20.0})
    CHECK(loaded.radial_eval(r) ==
          doctest::Approx(k.radial_eval(r)).epsilon(1e-6));
  // spectral profile concentrates on the unit interval up to truncation
  CHECK(loaded.radial_hat_eval(0.5) == doctest::Approx(0.5).epsilon(0.05));
  std::remove(path.c_str());
}
