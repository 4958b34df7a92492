#ifndef CHAOSCOPE_GMC_HPP
#define CHAOSCOPE_GMC_HPP

#include <functional>
#include <string>
#include <vector>

#include "chaoscope/grid.hpp"

namespace chaoscope::gmc {

enum class Regime { sub, critical_derivative, super_eps, super_t };

std::string regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct MeasureMeta {
  double gamma = 0.0;
  Regime regime = Regime::sub;
  double norm = 1.0;       // normalization prefactor applied to the weights
  double t = 0.0;          // depth (martingale regimes)
  double eps = 0.0;        // smoothing scale (mollified regime)
  uint64_t rng_seed = 0;
  std::size_t overflow_count = 0;     // weights capped in log space
  double truncated_fraction = 0.0;    // negative weights zeroed (critical)
  std::string config_hash;
};

/// Nonnegative density on a grid; weights already include the cell volume.
struct GridMeasure {
  GridSpec grid;
  std::vector<double> weights;
  MeasureMeta meta;

  double total_mass() const;
  /// mass carried by the heaviest k cells, as a fraction of the total
  double top_cell_fraction(std::size_t k) const;
  /// \int phi dmu with phi evaluated at cell centers
  double integrate(const std::function<double(const std::array<double, 3>&)>&
                       phi) const;
};

/// gamma_c = sqrt(2d), the critical inverse-temperature
double critical_gamma(int d);

/// Normalization prefactor for the supercritical regimes:
/// eps mode  |log eps|^{3g/(2 sqrt(2d))} eps^{-(g/sqrt2 - sqrt d)^2},
/// t mode    t^{3g/(2 sqrt(2d))} e^{t (g/sqrt2 - sqrt d)^2}.
/// Requires gamma > sqrt(2d).
enum class NormMode { eps, t };
double supercritical_norm(int d, double gamma, NormMode mode, double value);

/// Exponential of the field: weights = norm * exp(gamma X - gamma^2/2 var)
/// per cell, times the cell volume. Computed in log space; log-weights
/// above `log_cap` are capped and counted, never dropped.
GridMeasure chaos_measure(const GridField& field, double gamma,
                          const std::function<double(std::size_t)>& variance,
                          double norm, Regime regime = Regime::sub,
                          double log_cap = 700.0);

/// constant-variance convenience wrapper
GridMeasure chaos_measure(const GridField& field, double gamma,
                          double variance, double norm,
                          Regime regime = Regime::sub, double log_cap = 700.0);

/// Critical measure via the derivative normalization:
/// weights = (sqrt(2d) t - X) exp(sqrt(2d) X - d t) * cell volume, with
/// negative weights truncated to zero and the truncated fraction recorded.
GridMeasure derivative_measure(const GridField& field, double t);

/// Pointwise tilt e^{(d - sqrt(d/2) gamma) g(x)} applied to a critical
/// measure (constant for exactly scale-invariant covariances).
GridMeasure apply_diagonal_tilt(
    const GridMeasure& measure, double gamma,
    const std::function<double(const std::array<double, 3>&)>& g_diag);

}  // namespace chaoscope::gmc

#endif
