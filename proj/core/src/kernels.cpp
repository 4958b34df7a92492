#include "chaoscope/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "chaoscope/math.hpp"

namespace chaoscope::kernels {

namespace {

/// classical C_c^inf bump on (-1,1)
double base_bump(double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r2));
}

double ball_profile(int d, double r) {
  const double ar = std::abs(r);
  switch (d) {
    case 1:
      return sinc(ar);
    case 2:
      if (ar < 1e-6) return 1.0 - ar * ar / 8.0;
      return 2.0 * std::cyl_bessel_j(1, ar) / ar;
    case 3:
      if (ar < 1e-3) {
        const double r2 = ar * ar;
        return 1.0 - r2 / 10.0 + r2 * r2 / 280.0;
      }
      return 3.0 * (std::sin(ar) - ar * std::cos(ar)) / (ar * ar * ar);
    default:
      throw std::invalid_argument("ball_seed_kernel: d must be 1, 2, or 3");
  }
}

struct MollifierParts {
  std::shared_ptr<RadialHatTable> base_hat;  // of the raw bump, mass pairing
  double base_mass = 0.0;                    // hat(0) of the raw bump
  std::vector<double> coeff;
  std::vector<double> dilation;  // per-component spatial dilation
  int order = 1;
  CubicSpline reduced;  // (1 - hat(s)) / s^(2*order) over log-spaced nodes
  double reduced_lo = 0.0, reduced_hi = 0.0, reduced_lo_val = 0.0;
};

double parts_hat(const MollifierParts& p, double s) {
  double h = 0.0;
  for (std::size_t j = 0; j < p.coeff.size(); ++j)
    h += p.coeff[j] * (*p.base_hat)(p.dilation[j] * s) / p.base_mass;
  return h;
}

double parts_one_minus_direct(const MollifierParts& p, double s) {
  double u = 0.0;
  for (std::size_t j = 0; j < p.coeff.size(); ++j)
    u += p.coeff[j] * p.base_hat->drop_from_zero(p.dilation[j] * s) /
         p.base_mass;
  return u;
}

/// Tabulate (1 - hat)/s^(2m) so that 1 - hat keeps relative accuracy down
/// to s -> 0. The dilated components cancel to O(s^(2m)) by construction,
/// which a direct sum cannot resolve below the roundoff floor.
void build_reduced_table(MollifierParts& p) {
  const double lo = (p.order >= 3) ? 1e-2 : 1e-3;
  const double hi = 0.5;
  const int n = 200;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    const double s =
        std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1.0));
    xs[i] = std::log(s);
    ys[i] = parts_one_minus_direct(p, s) / std::pow(s, 2.0 * p.order);
  }
  p.reduced_lo = lo;
  p.reduced_hi = hi;
  p.reduced_lo_val = ys.front();
  p.reduced = CubicSpline(std::move(xs), std::move(ys));
}

double parts_one_minus(const MollifierParts& p, double s) {
  s = std::abs(s);
  if (s == 0.0) return 0.0;
  if (s > p.reduced_hi) return 1.0 - parts_hat(p, s);
  const double s2m = std::pow(s, 2.0 * p.order);
  if (s < p.reduced_lo) {
    // quadratic-in-s approach to the pinned leading coefficient
    const double t = s / p.reduced_lo;
    return s2m * (1.0 + (p.reduced_lo_val - 1.0) * t * t);
  }
  return s2m * p.reduced(std::log(s));
}

Mollifier assemble_mollifier(int d, int order, std::vector<double> coeff,
                             std::vector<double> dilation, std::string id,
                             bool pin_leading_coefficient) {
  auto parts = std::make_shared<MollifierParts>();
  parts->base_hat = std::make_shared<RadialHatTable>(
      [](double r) { return base_bump(r); }, 1.0, d, 1.0, 2048.0);
  parts->base_mass = parts->base_hat->value_at_zero();
  parts->coeff = std::move(coeff);
  parts->dilation = std::move(dilation);
  parts->order = order;

  if (pin_leading_coefficient) {
    // leading hat coefficient from the radial 2m-moment and the spherical
    // average of cos^(2m); rescale space so hat = 1 - s^(2m) + h.o.t.
    const double mass_quad =
        sphere_area(d) * integrate_panels(
                             [&](double r) {
                               return base_bump(r) * std::pow(r, d - 1.0);
                             },
                             0.0, 1.0, 8, 32);
    const double mom =
        sphere_area(d) * integrate_panels(
                             [&](double r) {
                               return std::pow(r, 2.0 * order) * base_bump(r) *
                                      std::pow(r, d - 1.0);
                             },
                             0.0, 1.0, 8, 32) /
        mass_quad;
    double angular = 1.0;
    for (int i = 1; i <= order; ++i) angular *= (2.0 * i - 1.0) / (d + 2.0 * i - 2.0);
    double comb = 0.0;
    for (std::size_t j = 0; j < parts->coeff.size(); ++j)
      comb += parts->coeff[j] * std::pow(parts->dilation[j], 2.0 * order);
    double fact = 1.0;
    for (int i = 2; i <= 2 * order; ++i) fact *= i;
    const double leading = ((order % 2 == 0) ? 1.0 : -1.0) * angular * mom * comb / fact;
    if (!(leading < 0.0))
      throw std::logic_error("standard_mollifier: unexpected expansion sign");
    const double sigma = std::pow(-leading, -1.0 / (2.0 * order));
    for (auto& lam : parts->dilation) lam *= sigma;
  }
  build_reduced_table(*parts);

  Mollifier m;
  m.dimension = d;
  m.order = order;
  m.id = std::move(id);
  m.support_radius = *std::max_element(parts->dilation.begin(), parts->dilation.end());
  m.profile_eval = [parts, d](double r) {
    double v = 0.0;
    for (std::size_t j = 0; j < parts->coeff.size(); ++j) {
      const double lam = parts->dilation[j];
      v += parts->coeff[j] * std::pow(lam, -d) * base_bump(r / lam) /
           parts->base_mass;
    }
    return v;
  };
  m.one_minus_hat = [parts](double s) { return parts_one_minus(*parts, s); };
  m.hat_eval = [parts](double s) {
    s = std::abs(s);
    return s <= parts->reduced_hi ? 1.0 - parts_one_minus(*parts, s)
                                  : parts_hat(*parts, s);
  };
  return m;
}

}  // namespace

SeedKernel ball_seed_kernel(int d) {
  if (d < 1 || d > 3)
    throw std::invalid_argument("ball_seed_kernel: d must be 1, 2, or 3");
  SeedKernel k;
  k.dimension = d;
  k.id = "ball_d" + std::to_string(d);
  const double hat0 = 1.0 / ball_volume(d);
  k.hat_at_zero = hat0;
  k.radial_eval = [d](double r) { return ball_profile(d, r); };
  k.radial_hat_eval = [hat0](double s) {
    return std::abs(s) <= 1.0 ? hat0 : 0.0;
  };
  k.hat_mass_within = [d](double s) {
    return std::pow(std::min(std::abs(s), 1.0), d);
  };
  k.band_limited = true;
  k.hat_support_radius = 1.0;
  switch (d) {  // |K(r)| <= C (1+r)^{-(d+1)/2}
    case 1: k.decay_bound_c = 2.0; k.decay_exponent_a = 1.0; break;
    case 2: k.decay_bound_c = 3.0; k.decay_exponent_a = 1.5; break;
    case 3: k.decay_bound_c = 6.0; k.decay_exponent_a = 2.0; break;
  }
  k.trihat_lower = 1.0;
  k.trihat_upper = 1.0;
  return k;
}

Mollifier standard_mollifier(int d, int order) {
  if (d < 1 || d > 3)
    throw std::invalid_argument("standard_mollifier: d must be 1, 2, or 3");
  if (order < 1 || 2 * order < d)
    throw std::invalid_argument(
        "standard_mollifier: need 2*order >= d for the vanishing-moment "
        "condition");
  // dilations 1..order; coefficients kill radial moments 2..2(order-1)
  std::vector<double> lam(order), coeff(order);
  for (int j = 0; j < order; ++j) lam[j] = j + 1.0;
  Eigen::MatrixXd A(order, order);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(order);
  rhs(0) = 1.0;
  for (int row = 0; row < order; ++row)
    for (int col = 0; col < order; ++col)
      A(row, col) = std::pow(lam[col] * lam[col], row);
  Eigen::VectorXd c = A.fullPivLu().solve(rhs);
  for (int j = 0; j < order; ++j) coeff[j] = c(j);
  return assemble_mollifier(d, order, std::move(coeff), std::move(lam),
                            "standard_d" + std::to_string(d) + "_m" +
                                std::to_string(order),
                            true);
}

Mollifier defective_mollifier(int d) {
  // second moment deliberately negative, so hat = 1 + c s^2 + ... rises
  // above one near the origin and the local-maximum condition fails
  return assemble_mollifier(d, 1, {2.0, -1.0}, {1.0, 2.0},
                            "defective_d" + std::to_string(d), false);
}

const std::function<double(double)>& truncation_window(int d) {
  static std::mutex mtx;
  static std::map<int, std::function<double(double)>> cache;
  std::lock_guard lock(mtx);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;

  // bump supported in B(0,1/2), normalized so that \int bump^2 = 1
  const double sq = sphere_area(d) *
                    integrate_panels(
                        [d](double r) {
                          const double b = base_bump(2.0 * r);
                          return b * b * std::pow(r, d - 1.0);
                        },
                        0.0, 0.5, 8, 32);
  const double norm = 1.0 / std::sqrt(sq);
  auto bump = [norm](double r) { return norm * base_bump(2.0 * r); };

  auto conv = [bump, d](double r) -> double {
    switch (d) {
      case 1:
        return integrate_panels(
            [&](double u) { return bump(std::abs(u)) * bump(std::abs(r - u)); },
            -0.5, 0.5, 4, 32);
      case 2:
        return integrate_panels(
            [&](double rho) {
              if (bump(rho) == 0.0) return 0.0;
              const double inner = integrate_panels(
                  [&](double theta) {
                    const double dist = std::sqrt(
                        r * r + rho * rho - 2.0 * r * rho * std::cos(theta));
                    return bump(dist);
                  },
                  0.0, 2.0 * std::numbers::pi, 2, 48);
              return bump(rho) * rho * inner;
            },
            0.0, 0.5, 2, 48);
      case 3:
        return 2.0 * std::numbers::pi *
               integrate_panels(
                   [&](double rho) {
                     if (bump(rho) == 0.0) return 0.0;
                     const double inner = integrate(
                         [&](double mu) {
                           const double dist = std::sqrt(
                               r * r + rho * rho - 2.0 * r * rho * mu);
                           return bump(dist);
                         },
                         -1.0, 1.0, 48);
                     return bump(rho) * rho * rho * inner;
                   },
                   0.0, 0.5, 2, 48);
      default:
        throw std::invalid_argument("truncation_window: d must be 1, 2, or 3");
    }
  };

  auto table = std::make_shared<CubicSpline>(adaptive_table(conv, 0.0, 1.0, 1e-8, 1u << 14));
  const double at_zero = (*table)(0.0);
  auto window = [table, at_zero](double r) -> double {
    r = std::abs(r);
    if (r >= 1.0) return 0.0;
    return std::max(0.0, (*table)(r) / at_zero);
  };
  return cache.emplace(d, std::move(window)).first->second;
}

SeedKernel truncate_kernel(const SeedKernel& k, double delta,
                           double bump_support) {
  if (!(delta > 0.0))
    throw std::invalid_argument("truncate_kernel: delta must be positive");
  if (!(bump_support > 0.0) || bump_support > 0.5)
    throw std::invalid_argument(
        "truncate_kernel: bump support must lie in (0, 1/2]");
  const std::function<double(double)> window = truncation_window(k.dimension);
  const double window_support = 2.0 * bump_support;  // chi = bump * bump
  const double stretch = 0.5 / bump_support;         // window table spans [0,1]

  SeedKernel out;
  out.dimension = k.dimension;
  {
    std::ostringstream name;
    name << k.id << "_trunc" << delta;
    out.id = name.str();
  }
  auto base = k.radial_eval;
  out.radial_eval = [base, window, delta, stretch](double r) {
    return base(r) * window(std::abs(r) * delta * stretch);
  };

  const double support = window_support / delta;
  auto hat = std::make_shared<RadialHatTable>(
      out.radial_eval, support, k.dimension,
      std::pow(2.0 * std::numbers::pi, -k.dimension), 512.0);
  out.hat_at_zero = hat->value_at_zero();
  out.radial_hat_eval = [hat](double s) { return (*hat)(s); };

  const int d = k.dimension;
  const double area = sphere_area(d);
  auto cumulative = std::make_shared<CubicSpline>(adaptive_table(
      [hat, area, d](double s) {
        return area * integrate_panels(
                          [&](double v) {
                            return (*hat)(v) * std::pow(v, d - 1.0);
                          },
                          0.0, s, 8, 32);
      },
      0.0, hat->cutoff(), 1e-7, 1u << 12));
  out.hat_mass_within = [cumulative](double s) {
    return (*cumulative)(std::abs(s));
  };

  out.band_limited = false;  // truncation spreads the spectrum
  out.hat_support_radius = hat->cutoff();
  out.decay_bound_c = k.decay_bound_c;
  out.decay_exponent_a = k.decay_exponent_a;
  out.trihat_lower = 0.0;
  out.trihat_upper = 0.0;
  return out;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << (c.passed ? "pass" : "FAIL") << "  " << c.name << "  margin="
       << c.margin << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
  return os.str();
}

ValidationReport validate_seed(const SeedKernel& k,
                               std::span<const double> radii) {
  if (radii.empty() || !std::is_sorted(radii.begin(), radii.end()))
    throw std::invalid_argument("validate_seed: need increasing radii");
  ValidationReport report;
  report.scan_points = radii.size();

  {
    CheckResult c{"unit value at zero", false, 0.0, ""};
    const double err = std::abs(k.radial_eval(0.0) - 1.0);
    c.margin = 1e-9 - err;
    c.passed = c.margin >= 0.0;
    report.checks.push_back(c);
  }
  {
    CheckResult c{"spectral nonnegativity", true, 0.0, ""};
    double worst = std::numeric_limits<double>::infinity();
    for (double r : radii)
      if (r > 0.0) worst = std::min(worst, k.radial_hat_eval(r));
    if (!std::isfinite(worst)) {
      c.detail = "vacuous scan";
      c.margin = 0.0;
    } else {
      c.margin = worst + 1e-12;
      c.passed = c.margin >= 0.0;
    }
    report.checks.push_back(c);
  }
  {
    CheckResult c{"polynomial decay bound", true, 0.0, ""};
    double slack = std::numeric_limits<double>::infinity();
    for (double r : radii)
      slack = std::min(slack, k.decay_bound_c *
                                      std::pow(1.0 + r, -k.decay_exponent_a) -
                                  std::abs(k.radial_eval(r)));
    if (!std::isfinite(slack)) slack = 0.0;
    c.margin = slack;
    c.passed = slack >= -1e-12;
    report.checks.push_back(c);
  }
  if (k.band_limited) {
    {
      CheckResult c{"unit-ball spectral support", true, 0.0, ""};
      double worst = 0.0;
      bool scanned = false;
      for (double r : radii)
        if (r > k.hat_support_radius) {
          worst = std::max(worst, std::abs(k.radial_hat_eval(r)));
          scanned = true;
        }
      c.margin = 1e-12 - worst;
      c.passed = c.margin >= 0.0;
      if (!scanned) c.detail = "vacuous scan";
      report.checks.push_back(c);
    }
    {
      CheckResult c{"cumulative-mass sandwich", true, 0.0, ""};
      double slack = std::numeric_limits<double>::infinity();
      for (double r : radii) {
        if (r <= 0.0 || r >= 1.0) continue;
        const double mass = k.hat_mass_within(r);
        const double rd = std::pow(r, k.dimension);
        slack = std::min(slack, mass - k.trihat_lower * rd);
        slack = std::min(slack, k.trihat_upper * rd - mass);
      }
      if (!std::isfinite(slack)) {
        c.detail = "vacuous scan";
        c.margin = 1e-12;
      } else {
        c.margin = slack + 1e-12;
      }
      c.passed = c.margin >= 0.0;
      report.checks.push_back(c);
    }
  }
  return report;
}

ValidationReport validate_mollifier(const Mollifier& m) {
  ValidationReport report;
  const int d = m.dimension;
  {
    CheckResult c{"unit mass", false, 0.0, ""};
    const double mass =
        sphere_area(d) * integrate_panels(
                             [&](double r) {
                               return m.profile_eval(r) * std::pow(r, d - 1.0);
                             },
                             0.0, m.support_radius, 16, 32);
    c.margin = 1e-6 - std::abs(mass - 1.0);
    c.passed = c.margin >= 0.0;
    report.checks.push_back(c);
  }
  {
    CheckResult c{"hat normalization at zero", false, 0.0, ""};
    c.margin = 1e-9 - std::abs(m.hat_eval(0.0) - 1.0);
    c.passed = c.margin >= 0.0;
    report.checks.push_back(c);
  }
  {
    // |hat|^2 <= 1 on a small ball certifies the local maximum at 0
    CheckResult c{"local maximum of |hat| at zero", false, 0.0, ""};
    double worst = std::numeric_limits<double>::infinity();
    std::size_t probes = 64;
    for (std::size_t i = 1; i <= probes; ++i) {
      const double s = 0.25 * i / probes;
      const double u = m.one_minus_hat(s);
      worst = std::min(worst, u * (2.0 - u));  // = 1 - hat^2
    }
    c.margin = worst + 1e-12;
    c.passed = c.margin >= 0.0;
    report.checks.push_back(c);
  }
  {
    CheckResult c{"vanishing derivatives at zero", true, 0.0, ""};
    report.scan_points = 64;
    double worst = 0.0;
    const double h = 1e-4;
    auto hat_vec = [&](double x, double y, double z) {
      return m.hat_eval(std::sqrt(x * x + y * y + z * z));
    };
    if (d >= 2) {
      worst = std::max(worst,
                       std::abs(hat_vec(h, 0, 0) - hat_vec(-h, 0, 0)) / (2 * h));
      worst = std::max(worst,
                       std::abs(hat_vec(0, h, 0) - hat_vec(0, -h, 0)) / (2 * h));
    }
    if (d >= 3) {
      worst = std::max(
          worst, std::abs(hat_vec(h, 0, 0) - 2 * hat_vec(0, 0, 0) +
                          hat_vec(-h, 0, 0)) /
                     (h * h));
      worst = std::max(
          worst, std::abs(hat_vec(h, h, 0) - hat_vec(h, -h, 0) -
                          hat_vec(-h, h, 0) + hat_vec(-h, -h, 0)) /
                     (4 * h * h));
    }
    c.margin = 1e-6 - worst;
    c.passed = c.margin >= 0.0;
    if (d == 1) c.detail = "vacuous for d=1";
    report.checks.push_back(c);
  }
  return report;
}

namespace {

std::pair<std::vector<double>, std::vector<double>> read_table(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table: " + path);
  std::string header;
  std::getline(in, header);
  std::vector<double> r, v;
  double a, b;
  while (in >> a >> b) {
    r.push_back(a);
    v.push_back(b);
  }
  if (r.size() < 4)
    throw std::runtime_error("table too short: " + path);
  return {std::move(r), std::move(v)};
}

}  // namespace

SeedKernel kernel_from_table(const std::string& path, int d,
                             bool band_limited) {
  auto [r, v] = read_table(path);
  const double support = r.back();
  auto spline = std::make_shared<CubicSpline>(r, v);
  SeedKernel k;
  k.dimension = d;
  k.id = "table:" + path;
  k.radial_eval = [spline, support](double x) {
    x = std::abs(x);
    return x >= support ? 0.0 : (*spline)(x);
  };
  auto hat = std::make_shared<RadialHatTable>(
      k.radial_eval, support, d, std::pow(2.0 * std::numbers::pi, -d), 512.0);
  k.hat_at_zero = hat->value_at_zero();
  k.radial_hat_eval = [hat](double s) { return (*hat)(s); };
  const double area = sphere_area(d);
  auto cumulative = std::make_shared<CubicSpline>(adaptive_table(
      [hat, area, d](double s) {
        return area * integrate_panels(
                          [&](double u) {
                            return (*hat)(u) * std::pow(u, d - 1.0);
                          },
                          0.0, s, 8, 32);
      },
      0.0, std::max(1.0, hat->cutoff()), 1e-7, 1u << 12));
  k.hat_mass_within = [cumulative, band_limited](double s) {
    s = std::abs(s);
    if (band_limited && s >= 1.0) return 1.0;
    return (*cumulative)(s);
  };
  k.band_limited = band_limited;
  k.hat_support_radius = band_limited ? 1.0 : hat->cutoff();
  k.decay_bound_c = 2.0;
  k.decay_exponent_a = 0.0;  // compact support: any exponent works
  k.trihat_lower = 0.5;
  k.trihat_upper = 2.0;
  return k;
}

Mollifier mollifier_from_table(const std::string& path, int d) {
  auto [r, v] = read_table(path);
  const double support = r.back();
  auto spline = std::make_shared<CubicSpline>(r, v);
  auto profile = [spline, support](double x) {
    x = std::abs(x);
    return x >= support ? 0.0 : (*spline)(x);
  };
  // normalize to unit mass, then reuse the single-component assembly
  const double mass =
      sphere_area(d) * integrate_panels(
                           [&](double x) {
                             return profile(x) * std::pow(x, d - 1.0);
                           },
                           0.0, support, 16, 32);
  if (!(std::abs(mass) > 0.0))
    throw std::runtime_error("mollifier table has zero mass: " + path);

  auto parts = std::make_shared<MollifierParts>();
  parts->base_hat = std::make_shared<RadialHatTable>(profile, support, d,
                                                     1.0 / mass, 2048.0);
  parts->base_mass = 1.0;
  parts->coeff = {1.0};
  parts->dilation = {1.0};
  parts->order = 1;
  build_reduced_table(*parts);

  Mollifier m;
  m.dimension = d;
  m.order = 1;
  m.id = "table:" + path;
  m.support_radius = support;
  m.profile_eval = [profile, mass](double x) { return profile(x) / mass; };
  m.one_minus_hat = [parts](double s) { return parts_one_minus(*parts, s); };
  m.hat_eval = [parts](double s) {
    s = std::abs(s);
    return s <= parts->reduced_hi ? 1.0 - parts_one_minus(*parts, s)
                                  : parts_hat(*parts, s);
  };
  return m;
}

}  // namespace chaoscope::kernels
