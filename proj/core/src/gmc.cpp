#include "chaoscope/gmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chaoscope::gmc {

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::sub: return "sub";
    case Regime::critical_derivative: return "critical_derivative";
    case Regime::super_eps: return "super_eps";
    case Regime::super_t: return "super_t";
  }
  return "unknown";
}

Regime regime_from_name(const std::string& name) {
  if (name == "sub") return Regime::sub;
  if (name == "critical_derivative") return Regime::critical_derivative;
  if (name == "super_eps") return Regime::super_eps;
  if (name == "super_t") return Regime::super_t;
  throw std::invalid_argument("unknown regime: " + name);
}

double GridMeasure::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double GridMeasure::top_cell_fraction(std::size_t k) const {
  const double total = total_mass();
  if (total <= 0.0 || weights.empty()) return 0.0;
  k = std::min(k, weights.size());
  std::vector<double> tmp = weights;
  std::nth_element(tmp.begin(), tmp.end() - k, tmp.end());
  const double top = std::accumulate(tmp.end() - k, tmp.end(), 0.0);
  return top / total;
}

double GridMeasure::integrate(
    const std::function<double(const std::array<double, 3>&)>& phi) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    sum += phi(grid.point(i)) * weights[i];
  return sum;
}

double critical_gamma(int d) { return std::sqrt(2.0 * d); }

double supercritical_norm(int d, double gamma, NormMode mode, double value) {
  const double gc = critical_gamma(d);
  if (!(gamma > gc))
    throw std::invalid_argument(
        "supercritical_norm: gamma must exceed sqrt(2d); the subcritical and "
        "critical regimes use other normalizations");
  const double excess = gamma / std::sqrt(2.0) - std::sqrt(double(d));
  const double power = 1.5 * gamma / gc;
  if (mode == NormMode::eps) {
    if (!(value > 0.0 && value < 1.0))
      throw std::invalid_argument("supercritical_norm: eps must be in (0,1)");
    return std::pow(std::abs(std::log(value)), power) *
           std::pow(value, -excess * excess);
  }
  if (!(value > 0.0))
    throw std::invalid_argument("supercritical_norm: t must be positive");
  return std::pow(value, power) * std::exp(value * excess * excess);
}

GridMeasure chaos_measure(const GridField& field, double gamma,
                          const std::function<double(std::size_t)>& variance,
                          double norm, Regime regime, double log_cap) {
  if (!(norm > 0.0))
    throw std::invalid_argument("chaos_measure: norm must be positive");
  GridMeasure mu;
  mu.grid = field.grid;
  mu.meta.gamma = gamma;
  mu.meta.regime = regime;
  mu.meta.norm = norm;
  mu.meta.t = field.meta.t;
  mu.meta.eps = field.meta.eps;
  mu.meta.rng_seed = field.meta.rng_seed;
  const double log_base = std::log(norm) + std::log(field.grid.cell_volume());
  mu.weights.resize(field.values.size());
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double lw = log_base + gamma * field.values[i] -
                      0.5 * gamma * gamma * variance(i);
    if (lw > log_cap) {
      ++mu.meta.overflow_count;
      mu.weights[i] = std::exp(log_cap);
    } else {
      mu.weights[i] = std::exp(lw);
    }
  }
  return mu;
}

GridMeasure chaos_measure(const GridField& field, double gamma,
                          double variance, double norm, Regime regime,
                          double log_cap) {
  return chaos_measure(
      field, gamma, [variance](std::size_t) { return variance; }, norm,
      regime, log_cap);
}

GridMeasure derivative_measure(const GridField& field, double t) {
  if (field.meta.kind != "martingale_t")
    throw std::invalid_argument(
        "derivative_measure: expects a scale-truncated (martingale) field");
  const int d = field.grid.dimension;
  const double gc = critical_gamma(d);
  GridMeasure mu;
  mu.grid = field.grid;
  mu.meta.gamma = gc;
  mu.meta.regime = Regime::critical_derivative;
  mu.meta.t = t;
  mu.meta.rng_seed = field.meta.rng_seed;
  const double cell = field.grid.cell_volume();
  mu.weights.resize(field.values.size());
  std::size_t truncated = 0;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double x = field.values[i];
    const double w = (gc * t - x) * std::exp(gc * x - d * t) * cell;
    if (w < 0.0) {
      ++truncated;
      mu.weights[i] = 0.0;
    } else {
      mu.weights[i] = w;
    }
  }
  mu.meta.truncated_fraction =
      field.values.empty() ? 0.0
                           : static_cast<double>(truncated) / field.values.size();
  return mu;
}

GridMeasure apply_diagonal_tilt(
    const GridMeasure& measure, double gamma,
    const std::function<double(const std::array<double, 3>&)>& g_diag) {
  if (measure.meta.regime != Regime::critical_derivative)
    throw std::invalid_argument(
        "apply_diagonal_tilt: expects a critical-regime measure");
  const int d = measure.grid.dimension;
  const double exponent_factor = d - std::sqrt(0.5 * d) * gamma;
  GridMeasure out = measure;
  for (std::size_t i = 0; i < out.weights.size(); ++i)
    out.weights[i] *= std::exp(exponent_factor * g_diag(measure.grid.point(i)));
  return out;
}

}  // namespace chaoscope::gmc
