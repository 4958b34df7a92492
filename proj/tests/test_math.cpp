#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chaoscope/math.hpp"

using namespace chaoscope;

TEST_CASE("sphere area and ball volume") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("gauss rule integrates smooth functions") {
  CHECK(integrate([](double x) { return x * x * x - x; }, -1.0, 2.0, 8) ==
        doctest::Approx(2.25).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0,
                  std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_panels([](double x) { return std::exp(-x * x); }, -8.0, 8.0,
                         16) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("cubic spline interpolates") {
  std::vector<double> x, y;
  for (int i = 0; i <= 40; ++i) {
    x.push_back(i * 0.1);
    y.push_back(std::sin(x.back()));
  }
  CubicSpline s(x, y);
  for (double probe : {0.05, 1.234, 3.9}) {
    CHECK(s(probe) == doctest::Approx(std::sin(probe)).epsilon(1e-5));
  }
}

TEST_CASE("adaptive table hits the midpoint tolerance") {
  auto f = [](double r) { return std::exp(-r) * std::cos(3.0 * r); };
  auto table = adaptive_table(f, 0.0, 5.0, 1e-8);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double r = 5.0 * (i + 0.37) / 1000.0;
    worst = std::max(worst, std::abs(table(r) - f(r)));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("radial hat table against the 1-D cosine transform") {
  auto bump = [](double r) {
    return std::abs(r) < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
  };
  RadialHatTable table(bump, 1.0, 1, 1.0, 256.0);
  for (double s : {0.0, 0.5, 2.0, 7.0}) {
    const double direct =
        2.0 * integrate_panels(
                  [&](double r) { return bump(r) * std::cos(s * r); }, 0.0,
                  1.0, 8, 32);
    CHECK(table(s) == doctest::Approx(direct).epsilon(1e-8));
  }
  SUBCASE("drop_from_zero keeps relative accuracy at tiny arguments") {
    const double m2 =
        2.0 * integrate_panels([&](double r) { return r * r * bump(r); }, 0.0,
                               1.0, 8, 32);
    for (double s : {1e-8, 1e-5, 1e-3}) {
      const double drop = table.drop_from_zero(s);
      CHECK(drop == doctest::Approx(0.5 * m2 * s * s).epsilon(1e-4));
    }
  }
  SUBCASE("far tail is cut to zero") {
    CHECK(table(1e6) == 0.0);
  }
}

TEST_CASE("sample stats and quantiles") {
  std::vector<double> v = {4.0, 1.0, 3.0, 2.0, 5.0};
  const auto st = sample_stats(v);
  CHECK(st.mean == doctest::Approx(3.0));
  CHECK(st.stddev == doctest::Approx(std::sqrt(2.5)));
  CHECK(quantile(v, 0.5) == doctest::Approx(3.0));
  CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(v, 1.0) == doctest::Approx(5.0));
}

TEST_CASE("line fit recovers slope") {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i);
    y.push_back(2.5 * i - 1.0);
  }
  const auto fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(fit.slope_se == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("sinc near zero") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-6) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sinc(std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-12));
}
