#ifndef CHAOSCOPE_MATH_HPP
#define CHAOSCOPE_MATH_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace chaoscope {

/// (d-1)-dimensional surface measure of the unit sphere in R^d.
double sphere_area(int d);

/// Lebesgue volume of the unit ball in R^d.
double ball_volume(int d);

/// Gauss-Legendre nodes and weights on [-1,1], cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// integral of f over [a,b] with a fixed-order Gauss rule
double integrate(const std::function<double(double)>& f, double a, double b,
                 int order = 64);

/// integral of f over [a,b] split into n equal panels
double integrate_panels(const std::function<double(double)>& f, double a,
                        double b, int panels, int order = 16);

/// Natural cubic spline through strictly increasing nodes.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double front_x() const { return x_.front(); }
  double back_x() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives
};

/// Spline of f over [a,b] on a uniform grid, refined until the midpoint
/// interpolation error drops below tol (kernel evaluations sit in inner
/// loops, so everything radial gets tabulated once).
CubicSpline adaptive_table(const std::function<double(double)>& f, double a,
                           double b, double tol = 1e-8,
                           std::size_t max_nodes = (1u << 20));

/// Radial profile of a function on R^d integrated over (d-1)-dim slices:
/// P(u) = \int f(sqrt(u^2 + |v|^2)) dv over v in R^{d-1}. The 1-D cosine
/// transform of P gives the d-dimensional Fourier transform of f.
std::vector<double> slice_projection(const std::function<double(double)>& profile,
                                     double support_radius, int d,
                                     std::span<const double> u_nodes);

/// Tabulated radial Fourier transform of a compactly supported profile.
///
/// forward_scale fixes the convention: 1.0 gives hat(w) = \int f e^{-iwx} dx
/// (mollifier pairing, hat(0) = mass), (2pi)^-d gives the spectral-density
/// pairing where f(x) = \int hat e^{iwx} dw.
class RadialHatTable {
 public:
  RadialHatTable() = default;
  RadialHatTable(const std::function<double(double)>& profile,
                 double support_radius, int d, double forward_scale,
                 double s_max = 4096.0);

  /// hat value at radial frequency s; zero beyond the stored cutoff
  double operator()(double s) const;
  double value_at_zero() const { return at_zero_; }
  double cutoff() const { return cutoff_; }

  /// hat(0) - hat(s), evaluated without cancellation (uses 1-cos = 2 sin^2
  /// against the stored slice projection). Relative accuracy is preserved
  /// down to s -> 0 where the difference is O(s^2).
  double drop_from_zero(double s) const;

 private:
  CubicSpline spline_;
  std::vector<double> u_, proj_;  // slice projection, for drop_from_zero
  double du_ = 0.0;
  double at_zero_ = 0.0;
  double cutoff_ = 0.0;
  double scale_ = 1.0;
};

/// sin(x)/x with the removable singularity handled
double sinc(double x);

/// Mean, standard error, and type-7 quantiles of a sample.
struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};
SampleStats sample_stats(std::span<const double> values);
double quantile(std::vector<double> sorted_or_not, double p);

/// Ordinary least squares of y on x with slope standard error from the
/// residuals; optional per-point variances switch to weighted LS.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  std::vector<double> residuals;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> variance = {});

}  // namespace chaoscope

#endif
