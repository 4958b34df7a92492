#include "chaoscope/atomic.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "chaoscope/math.hpp"

namespace chaoscope::atomic {

namespace {

/// tensor Gauss-Legendre over the box, 32 nodes per axis
double box_quadrature(int d, double lo, double hi,
                      const std::function<double(const Point&)>& f) {
  const auto& rule = gauss_legendre(32);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double sum = 0.0;
  const int n = static_cast<int>(rule.nodes.size());
  Point p{0.0, 0.0, 0.0};
  if (d == 1) {
    for (int i = 0; i < n; ++i) {
      p[0] = mid + half * rule.nodes[i];
      sum += rule.weights[i] * f(p);
    }
    return sum * half;
  }
  if (d == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        p[0] = mid + half * rule.nodes[i];
        p[1] = mid + half * rule.nodes[j];
        sum += rule.weights[i] * rule.weights[j] * f(p);
      }
    return sum * half * half;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        p[0] = mid + half * rule.nodes[i];
        p[1] = mid + half * rule.nodes[j];
        p[2] = mid + half * rule.nodes[k];
        sum += rule.weights[i] * rule.weights[j] * rule.weights[k] * f(p);
      }
  return sum * half * half * half;
}

double alpha_of(int d, double gamma) {
  const double alpha = std::sqrt(2.0 * d) / gamma;
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument(
        "atomic: gamma must exceed sqrt(2d) so the tail exponent lies in "
        "(0,1)");
  return alpha;
}

}  // namespace

SpatialIntensity lebesgue_box(int d, double lo, double hi) {
  if (d < 1 || d > 3 || !(hi > lo))
    throw std::invalid_argument("lebesgue_box: bad arguments");
  SpatialIntensity nu;
  nu.dimension = d;
  nu.total_mass = std::pow(hi - lo, d);
  nu.id = "lebesgue_box";
  nu.draw_location = [d, lo, hi](RngStream& rng) {
    Point p{0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) p[i] = lo + (hi - lo) * rng.uniform();
    return p;
  };
  nu.integrate = [d, lo, hi](const TestFunction& f) {
    return box_quadrature(d, lo, hi, f);
  };
  return nu;
}

SpatialIntensity weighted_box(int d, double lo, double hi,
                              const std::function<double(const Point&)>& density,
                              double density_bound, const std::string& id) {
  if (d < 1 || d > 3 || !(hi > lo) || !(density_bound > 0.0))
    throw std::invalid_argument("weighted_box: bad arguments");
  SpatialIntensity nu;
  nu.dimension = d;
  nu.id = id;
  nu.total_mass = box_quadrature(d, lo, hi, density);
  nu.draw_location = [d, lo, hi, density, density_bound](RngStream& rng) {
    Point p{0.0, 0.0, 0.0};
    for (int attempt = 0; attempt < 100000; ++attempt) {
      for (int i = 0; i < d; ++i) p[i] = lo + (hi - lo) * rng.uniform();
      if (rng.uniform() * density_bound <= density(p)) return p;
    }
    throw std::runtime_error("weighted_box: rejection sampling stalled; "
                             "density_bound is likely wrong");
  };
  nu.integrate = [d, lo, hi, density](const TestFunction& f) {
    return box_quadrature(d, lo, hi, [&](const Point& p) {
      return density(p) * f(p);
    });
  };
  return nu;
}

SpatialIntensity from_grid_measure(const gmc::GridMeasure& mu) {
  SpatialIntensity nu;
  nu.dimension = mu.grid.dimension;
  nu.total_mass = mu.total_mass();
  nu.id = "grid_measure";
  auto grid = mu.grid;
  auto alias = std::make_shared<AliasTable>(mu.weights);
  const double h = grid.spacing();
  const int d = grid.dimension;
  nu.draw_location = [grid, alias, h, d](RngStream& rng) {
    const std::size_t cell = alias->sample(rng);
    Point p = grid.point(cell);
    for (int i = 0; i < d; ++i) p[i] += h * rng.uniform();
    return p;
  };
  auto weights = std::make_shared<std::vector<double>>(mu.weights);
  nu.integrate = [grid, weights](const TestFunction& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < weights->size(); ++i)
      sum += f(grid.point(i)) * (*weights)[i];
    return sum;
  };
  return nu;
}

double AtomicMeasure::total_mass() const {
  double sum = meta.compensator_mass;
  for (double z : masses) sum += z;
  return sum;
}

double AtomicMeasure::integrate(const TestFunction& phi) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i)
    sum += masses[i] * phi(locations[i]);
  return sum;
}

double beta_constant(int d, double gamma) {
  const double alpha = alpha_of(d, gamma);
  return std::tgamma(1.0 - alpha) / alpha;
}

AtomicMeasure sample_atomic(const SpatialIntensity& nu, double gamma,
                            double z_min, bool compensate, RngStream rng) {
  if (!(z_min > 0.0))
    throw std::invalid_argument("sample_atomic: z_min must be positive");
  const int d = nu.dimension;
  const double alpha = alpha_of(d, gamma);

  AtomicMeasure out;
  out.meta.gamma = gamma;
  out.meta.dimension = d;
  out.meta.alpha = alpha;
  out.meta.z_min = z_min;
  out.meta.intensity_id = nu.id;
  out.meta.rng_seed = rng.master_seed();
  if (compensate)
    out.meta.compensator_mass =
        nu.total_mass * std::pow(z_min, 1.0 - alpha) / (1.0 - alpha);

  if (nu.total_mass <= 0.0) return out;
  const double mean_count =
      nu.total_mass * std::pow(z_min, -alpha) / alpha;
  const uint64_t count = rng.poisson(mean_count);
  out.locations.reserve(count);
  out.masses.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    out.locations.push_back(nu.draw_location(rng));
    out.masses.push_back(rng.pareto(z_min, alpha));
  }
  return out;
}

double laplace_closed_form(const SpatialIntensity& nu, const TestFunction& phi,
                           double gamma) {
  const double alpha = alpha_of(nu.dimension, gamma);
  const double integral = nu.integrate([&](const Point& p) {
    const double v = phi(p);
    if (v < 0.0)
      throw std::invalid_argument("laplace_closed_form: phi must be >= 0");
    return std::pow(v, alpha);
  });
  return std::exp(-beta_constant(nu.dimension, gamma) * integral);
}

double fractional_moment_closed_form(double nu_mass, double q, double gamma,
                                     int d) {
  const double alpha = alpha_of(d, gamma);
  if (!(q > 0.0 && q < alpha))
    throw std::invalid_argument(
        "fractional_moment_closed_form: finite moments require q in (0, "
        "sqrt(2d)/gamma)");
  const double beta = beta_constant(d, gamma);
  return std::pow(beta * nu_mass, q / alpha) * std::tgamma(-q / alpha) /
         (alpha * std::tgamma(-q));
}

double negative_moment_closed_form(double nu_mass, double q, double gamma,
                                   int d) {
  const double alpha = alpha_of(d, gamma);
  if (!(q > 0.0))
    throw std::invalid_argument(
        "negative_moment_closed_form: q must be positive");
  const double beta = beta_constant(d, gamma);
  return std::pow(beta * nu_mass, -q / alpha) * std::tgamma(q / alpha) /
         (alpha * std::tgamma(q));
}

}  // namespace chaoscope::atomic
