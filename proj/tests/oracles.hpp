// Test-side reference implementations, kept independent of the library
// code paths they check: gamma functions come from GSL (the library uses
// std::tgamma), covariance targets from direct quadrature, and the
// mollified covariance from the cosine-integral closed form.

#ifndef CHAOSCOPE_TEST_ORACLES_HPP
#define CHAOSCOPE_TEST_ORACLES_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace oracles {

double gamma_fn(double x);  // gsl_sf_gamma

/// E[M^q] for total mass M with Laplace transform exp(-c z^alpha),
/// by quadrature of the fractional-moment representation
double fractional_moment(double c, double alpha, double q);

/// E[M^-q] by quadrature of the Gamma-representation integral
double negative_moment(double c, double alpha, double q);

/// covariance of the depth-t approximation at the given lag, by direct
/// quadrature of the scale integral over the d-dimensional ball profile
double martingale_covariance(int d, double t, double lag);

/// covariance K(y) of the full field for the d=1 ball profile, via the
/// cosine-integral closed form
double conv_base_covariance_1d(double y);

/// covariance of the mollified field at scale eps, lag x, for the d=1
/// ball profile: 2-D quadrature of rho_eps (x) rho_eps against K
double conv_covariance_1d(const std::function<double(double)>& mollifier,
                          double mollifier_support, double eps, double x);

/// E[phi(e^{N(0,v)} - v/2 exponent)] for the scalar comparison check
double scalar_exp_convex_mean(double variance,
                              const std::function<double(double)>& convex);

/// Pareto(alpha) synthetic sample with an independent generator
std::vector<double> pareto_sample(std::size_t n, double z_min, double alpha,
                                  unsigned seed);
std::vector<double> exponential_sample(std::size_t n, unsigned seed);

}  // namespace oracles

#endif
