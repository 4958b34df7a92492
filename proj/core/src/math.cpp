#include "chaoscope/math.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace chaoscope {

namespace {
std::mutex fftw_plan_mutex;
}

double sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere_area: d must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d) { return sphere_area(d) / d; }

const GaussRule& gauss_legendre(int order) {
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev-angle initial guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int order) {
  const auto& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

double integrate_panels(const std::function<double(double)>& f, double a,
                        double b, int panels, int order) {
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    sum += integrate(f, a + p * h, a + (p + 1) * h, order);
  return sum;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw std::invalid_argument("CubicSpline: need >= 2 matching nodes");
  m_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    a[i] = h0 / 6.0;
    b[i] = (h0 + h1) / 3.0;
    c[i] = h1 / 6.0;
    r[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  // Thomas solve with natural end conditions m_0 = m_{n-1} = 0
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (r[i] - c[i] * (i + 2 < n ? m_[i + 1] : 0.0)) / b[i];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double x) const {
  if (x_.empty()) throw std::logic_error("CubicSpline: empty");
  if (x <= x_.front()) x = x_.front();
  if (x >= x_.back()) x = x_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 0 : (it - x_.begin() - 1);
  if (i + 1 >= x_.size()) i = x_.size() - 2;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double u = 1.0 - t;
  return u * y_[i] + t * y_[i + 1] +
         (h * h / 6.0) * (u * (u * u - 1.0) * m_[i] + t * (t * t - 1.0) * m_[i + 1]);
}

CubicSpline adaptive_table(const std::function<double(double)>& f, double a,
                           double b, double tol, std::size_t max_nodes) {
  std::size_t n = 65;
  while (true) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
      y[i] = f(x[i]);
    }
    CubicSpline spline(x, y);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double mid = 0.5 * (x[i] + x[i + 1]);
      worst = std::max(worst, std::abs(spline(mid) - f(mid)));
    }
    if (worst < tol || n >= max_nodes) return spline;
    n = 2 * (n - 1) + 1;
  }
}

std::vector<double> slice_projection(const std::function<double(double)>& profile,
                                     double support_radius, int d,
                                     std::span<const double> u_nodes) {
  std::vector<double> out(u_nodes.size(), 0.0);
  const double R = support_radius;
  for (std::size_t i = 0; i < u_nodes.size(); ++i) {
    const double u = u_nodes[i];
    if (u >= R) continue;
    switch (d) {
      case 1:
        out[i] = profile(u);
        break;
      case 2: {
        const double h = std::sqrt(R * R - u * u);
        out[i] = 2.0 * integrate(
                           [&](double v) { return profile(std::hypot(u, v)); },
                           0.0, h, 64);
        break;
      }
      case 3:
        out[i] = 2.0 * std::numbers::pi *
                 integrate([&](double v) { return profile(v) * v; }, u, R, 64);
        break;
      default:
        throw std::invalid_argument("slice_projection: d must be 1, 2, or 3");
    }
  }
  return out;
}

RadialHatTable::RadialHatTable(const std::function<double(double)>& profile,
                               double support_radius, int d,
                               double forward_scale, double s_max)
    : scale_(forward_scale) {
  const std::size_t n_u = 8192;
  du_ = support_radius / n_u;
  u_.resize(n_u + 1);
  for (std::size_t j = 0; j <= n_u; ++j) u_[j] = j * du_;
  proj_ = slice_projection(profile, support_radius, d, u_);

  // Pad so the cosine-transform grid resolves structure on scale ~1/R and
  // stays below the spline tolerance. The projection is C_c^inf, so the
  // trapezoid rule converges super-algebraically.
  std::size_t m = 1;
  while (m < 8 * n_u) m <<= 1;
  double ds = 2.0 * std::numbers::pi / (m * du_);
  while (ds > 0.0125 && m < (1u << 24)) {
    m <<= 1;
    ds = 2.0 * std::numbers::pi / (m * du_);
  }

  std::vector<double> in(m, 0.0);
  for (std::size_t j = 0; j <= n_u && j < m; ++j) in[j] = proj_[j];
  in[0] *= 0.5;  // trapezoid endpoint (the far endpoint is zero)
  std::vector<std::complex<double>> out(m / 2 + 1);
  {
    std::lock_guard lock(fftw_plan_mutex);
    fftw_plan plan = fftw_plan_dft_r2c_1d(
        static_cast<int>(m), in.data(),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  std::vector<double> s_nodes, values;
  const std::size_t k_max =
      std::min(out.size() - 1, static_cast<std::size_t>(s_max / ds) + 2);
  s_nodes.reserve(k_max + 1);
  values.reserve(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    s_nodes.push_back(k * ds);
    values.push_back(scale_ * 2.0 * du_ * out[k].real());
  }
  at_zero_ = values[0];

  // Trim the far tail once it is numerically zero relative to hat(0).
  const double floor = 1e-15 * std::abs(at_zero_);
  std::size_t cut = values.size();
  while (cut > 16) {
    bool quiet = true;
    const std::size_t lo = cut > 64 ? cut - 64 : 0;
    for (std::size_t k = lo; k < cut; ++k)
      if (std::abs(values[k]) > floor) {
        quiet = false;
        break;
      }
    if (!quiet) break;
    cut = lo;
  }
  s_nodes.resize(cut);
  values.resize(cut);
  cutoff_ = s_nodes.back();
  spline_ = CubicSpline(std::move(s_nodes), std::move(values));
}

double RadialHatTable::operator()(double s) const {
  s = std::abs(s);
  if (s >= cutoff_) return 0.0;
  return spline_(s);
}

double RadialHatTable::drop_from_zero(double s) const {
  s = std::abs(s);
  if (s >= cutoff_) return at_zero_;
  // hat(0) - hat(s) = scale * 2 * int P(u) (1 - cos(su)) du
  double sum = 0.0;
  for (std::size_t j = 1; j < u_.size(); ++j) {
    const double sn = std::sin(0.5 * s * u_[j]);
    sum += proj_[j] * 2.0 * sn * sn;
  }
  return scale_ * 2.0 * du_ * sum;
}

double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

SampleStats sample_stats(std::span<const double> values) {
  SampleStats st;
  st.n = values.size();
  if (st.n == 0) return st;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= st.n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= st.n;
  m3 /= st.n;
  m4 /= st.n;
  st.mean = mean;
  st.stddev = st.n > 1 ? std::sqrt(m2 * st.n / (st.n - 1.0)) : 0.0;
  if (m2 > 0.0) {
    st.skewness = m3 / std::pow(m2, 1.5);
    st.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return st;
}

double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(v.begin(), v.end());
  if (p <= 0.0) return v.front();
  if (p >= 1.0) return v.back();
  const double h = p * (v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(h);
  const double frac = h - i;
  return v[i] + frac * (v[std::min(i + 1, v.size() - 1)] - v[i]);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> variance) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw std::invalid_argument("fit_line: need >= 2 matching points");
  std::vector<double> w(n, 1.0);
  if (!variance.empty()) {
    if (variance.size() != n)
      throw std::invalid_argument("fit_line: variance size mismatch");
    for (std::size_t i = 0; i < n; ++i)
      w[i] = variance[i] > 0.0 ? 1.0 / variance[i] : 1.0;
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.residuals.resize(n);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += w[i] * fit.residuals[i] * fit.residuals[i];
  }
  if (!variance.empty()) {
    // measurement variances supplied: standard WLS slope variance
    fit.slope_se = std::sqrt(1.0 / sxx);
  } else if (n > 2) {
    fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

}  // namespace chaoscope
