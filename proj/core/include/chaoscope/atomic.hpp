#ifndef CHAOSCOPE_ATOMIC_HPP
#define CHAOSCOPE_ATOMIC_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "chaoscope/gmc.hpp"
#include "chaoscope/rng.hpp"

namespace chaoscope::atomic {

using Point = std::array<double, 3>;
using TestFunction = std::function<double(const Point&)>;

/// Finite spatial intensity: total mass, a location sampler proportional
/// to it, and quadrature of test functions against it.
struct SpatialIntensity {
  int dimension = 1;
  double total_mass = 0.0;
  std::string id;
  std::function<Point(RngStream&)> draw_location;
  std::function<double(const TestFunction&)> integrate;
};

/// Lebesgue measure on the box [lo, hi]^d.
SpatialIntensity lebesgue_box(int d, double lo = 0.0, double hi = 1.0);

/// density * Lebesgue on the box, sampled by rejection; density_bound must
/// dominate the density on the box.
SpatialIntensity weighted_box(int d, double lo, double hi,
                              const std::function<double(const Point&)>& density,
                              double density_bound, const std::string& id);

/// GridMeasure as an intensity: alias sampling over cells plus uniform
/// jitter within the cell.
SpatialIntensity from_grid_measure(const gmc::GridMeasure& mu);

struct AtomicMeta {
  double gamma = 0.0;
  int dimension = 1;
  double alpha = 0.0;  // sqrt(2d)/gamma, in (0,1)
  double z_min = 0.0;
  double compensator_mass = 0.0;  // mean sub-threshold mass when enabled
  std::string intensity_id;
  uint64_t rng_seed = 0;
  double intensity_resolution = 0.0;  // grid spacing when backed by a grid
  std::string config_hash;
};

/// Sample of the integrated atomic measure above the mass cutoff.
struct AtomicMeasure {
  std::vector<Point> locations;
  std::vector<double> masses;
  AtomicMeta meta;

  double total_mass() const;  // atom masses plus the compensator
  double integrate(const TestFunction& phi) const;  // sum z_i phi(x_i)
};

/// beta(d, gamma) = Gamma(1 - sqrt(2d)/gamma) / (sqrt(2d)/gamma);
/// requires gamma > sqrt(2d)
double beta_constant(int d, double gamma);

/// Poisson sample with intensity nu(dx) z^{-(1+sqrt(2d)/gamma)} dz above
/// z_min: atom count ~ Poisson(nu z_min^{-a}/a), locations iid from nu,
/// masses iid Pareto(a). With compensate, the discarded small-atom mean
/// mass nu z_min^{1-a}/(1-a) is recorded.
AtomicMeasure sample_atomic(const SpatialIntensity& nu, double gamma,
                            double z_min, bool compensate, RngStream rng);

/// E[exp(-P(phi))] = exp(-beta(d,gamma) \int phi^{sqrt(2d)/gamma} dnu)
double laplace_closed_form(const SpatialIntensity& nu, const TestFunction& phi,
                           double gamma);

/// E[M^q] for M the total mass over a deterministic intensity of the given
/// mass: (beta nu)^{q/a} Gamma(-q/a) / (a Gamma(-q)), for q in (0, a)
double fractional_moment_closed_form(double nu_mass, double q, double gamma,
                                     int d);

/// E[M^-q] = (beta nu)^{-q/a} Gamma(q/a) / (a Gamma(q)), for q > 0
double negative_moment_closed_form(double nu_mass, double q, double gamma,
                                   int d);

}  // namespace chaoscope::atomic

#endif
