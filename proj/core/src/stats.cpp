#include "chaoscope/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "chaoscope/math.hpp"
#include "chaoscope/parallel.hpp"

namespace chaoscope::stats {

EnsembleSummary EnsembleSummary::from_values(std::vector<double> values,
                                             std::size_t overflow_count) {
  EnsembleSummary s;
  s.replicas = values.size();
  s.overflow_count = overflow_count;
  const auto st = sample_stats(values);
  s.mean = st.mean;
  s.se = s.replicas > 0 ? st.stddev / std::sqrt(double(s.replicas)) : 0.0;
  if (!values.empty())
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
      s.quantiles[p] = quantile(values, p);
  s.values = std::move(values);
  return s;
}

EnsembleSummary mc_ensemble(const ScalarSampler& sampler, std::size_t replicas,
                            uint64_t seed, unsigned threads) {
  std::vector<double> values(replicas);
  RngStream root(seed, {0x6d63656e73});  // ensemble root stream
  parallel_for(
      replicas,
      [&](std::size_t r) {
        RngStream stream = root.split(r);
        values[r] = sampler(r, stream);
      },
      threads);
  return EnsembleSummary::from_values(std::move(values));
}

EnsembleSummary mc_laplace(const ScalarSampler& measure_of_phi,
                           std::size_t replicas, uint64_t seed,
                           unsigned threads) {
  if (replicas < 100)
    throw std::invalid_argument("mc_laplace: need at least 100 replicas");
  return mc_ensemble(
      [&](std::size_t r, RngStream& rng) {
        return std::exp(-measure_of_phi(r, rng));
      },
      replicas, seed, threads);
}

double multifractal_exponent(int d, double gamma, double q) {
  return std::sqrt(2.0 * d) * gamma * q - 0.5 * gamma * gamma * q * q;
}

ScalingFit multifractal_fit(
    const std::function<double(double, std::size_t, RngStream&)>& mass_at_scale,
    double q, const std::vector<double>& scales, double target,
    std::size_t replicas, uint64_t seed, unsigned threads) {
  if (scales.size() < 4)
    throw std::invalid_argument("multifractal_fit: need >= 4 scales");
  const double span = *std::max_element(scales.begin(), scales.end()) /
                      *std::min_element(scales.begin(), scales.end());
  if (span < 4.0)
    throw std::invalid_argument(
        "multifractal_fit: scales must span at least two dyadic octaves");

  ScalingFit fit;
  fit.scales = scales;
  fit.target = target;
  std::vector<double> log_r, log_m, log_var;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const double r = scales[si];
    auto summary = mc_ensemble(
        [&](std::size_t rep, RngStream& rng) {
          return std::pow(mass_at_scale(r, rep, rng), q);
        },
        replicas, seed + si, threads);
    fit.moments.push_back(summary.mean);
    fit.moment_se.push_back(summary.se);
    log_r.push_back(std::log(r));
    log_m.push_back(std::log(summary.mean));
    // delta method: var(log m) ~ (se/m)^2
    const double rel = summary.se / summary.mean;
    log_var.push_back(rel * rel);
  }
  const auto line = fit_line(log_r, log_m, log_var);
  fit.slope = line.slope;
  fit.slope_se = line.slope_se;
  fit.residuals = line.residuals;
  return fit;
}

HillEstimate hill_index(std::vector<double> samples, double top_fraction) {
  if (samples.size() < 1000)
    throw std::invalid_argument("hill_index: need >= 1000 samples");
  if (!(top_fraction > 0.0 && top_fraction <= 0.05))
    throw std::invalid_argument("hill_index: top_fraction must be in (0, 0.05]");
  for (double v : samples)
    if (!(v > 0.0))
      throw std::invalid_argument("hill_index: samples must be positive");

  std::sort(samples.begin(), samples.end(), std::greater<double>());
  auto estimate = [&](double fraction) -> double {
    const std::size_t k = std::max<std::size_t>(
        1, static_cast<std::size_t>(fraction * samples.size()));
    if (k + 1 >= samples.size()) return 0.0;
    const double pivot = samples[k];
    if (!(pivot > 0.0) || samples.front() == pivot) return 0.0;
    double h = 0.0;
    for (std::size_t i = 0; i < k; ++i) h += std::log(samples[i] / pivot);
    h /= k;
    return h > 0.0 ? 1.0 / h : 0.0;
  };

  HillEstimate out;
  out.order_statistics = std::max<std::size_t>(
      1, static_cast<std::size_t>(top_fraction * samples.size()));
  out.tail_index = estimate(top_fraction);
  if (out.tail_index == 0.0)
    throw std::invalid_argument("hill_index: degenerate upper tail");
  // A genuine power tail gives fraction-stable estimates: the log-ratio of
  // nested Hill estimates has standard deviation sqrt(1/k' - 1/k), while a
  // light tail drifts systematically. Flag drift beyond that noise scale.
  if (out.order_statistics >= 200) {
    const double quarter = estimate(0.25 * top_fraction);
    out.unstable =
        quarter == 0.0 || std::abs(std::log(quarter / out.tail_index)) > 0.15;
  }
  return out;
}

KahaneReport kahane_check(const std::vector<double>& cov_x,
                          const std::vector<double>& cov_y, std::size_t n,
                          const std::vector<double>& f,
                          const std::function<double(double)>& convex_eval,
                          std::size_t replicas, uint64_t seed,
                          unsigned threads) {
  if (cov_x.size() != n * n || cov_y.size() != n * n || f.size() != n)
    throw std::invalid_argument("kahane_check: shape mismatch");

  Eigen::MatrixXd X(n, n), Y(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      X(i, j) = cov_x[i * n + j];
      Y(i, j) = cov_y[i * n + j];
    }

  KahaneReport report;
  report.precondition_ok = true;
  for (std::size_t i = 0; i < n * n; ++i)
    if (cov_x[i] > cov_y[i] + 1e-12) report.precondition_ok = false;

  auto factor = [&report](const Eigen::MatrixXd& c) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
      if (ev(i) < -1e-9) report.precondition_ok = false;
      ev(i) = std::max(ev(i), 0.0);
    }
    return Eigen::MatrixXd(es.eigenvectors() *
                           ev.cwiseSqrt().asDiagonal());
  };
  const Eigen::MatrixXd fx = factor(X), fy = factor(Y);

  auto side = [&](const Eigen::MatrixXd& fac, const Eigen::MatrixXd& cov,
                  uint64_t purpose) {
    return mc_ensemble(
        [&, purpose](std::size_t, RngStream& rng) {
          Eigen::VectorXd z(n);
          for (std::size_t i = 0; i < n; ++i) z(i) = rng.normal();
          const Eigen::VectorXd g = fac * z;
          double sum = 0.0;
          for (std::size_t i = 0; i < n; ++i)
            sum += f[i] * std::exp(g(i) - 0.5 * cov(i, i));
          return convex_eval(sum);
        },
        replicas, seed ^ purpose, threads);
  };
  const auto lhs = side(fx, X, 0x4b58);
  const auto rhs = side(fy, Y, 0x4b59);
  report.lhs_mean = lhs.mean;
  report.lhs_se = lhs.se;
  report.rhs_mean = rhs.mean;
  report.rhs_se = rhs.se;
  const double band = 3.0 * std::sqrt(lhs.se * lhs.se + rhs.se * rhs.se);
  report.violated = report.lhs_mean > report.rhs_mean + band;
  return report;
}

TruncationReport covariance_comparison(
    const kernels::SeedKernel& k, const std::vector<double>& deltas,
    double eps_target, const std::vector<double>& lags,
    const std::vector<std::pair<double, double>>& st_pairs) {
  if (deltas.empty() || !std::is_sorted(deltas.rbegin(), deltas.rend()))
    throw std::invalid_argument(
        "covariance_comparison: deltas must be decreasing");
  const auto& window = kernels::truncation_window(k.dimension);

  TruncationReport report;
  report.eps_target = eps_target;
  for (double delta : deltas) {
    TruncationEntry entry;
    entry.delta = delta;
    for (double x : lags) {
      if (x == 0.0) continue;  // K_delta(0) = K(0), zero discrepancy
      for (auto [s, t] : st_pairs) {
        if (!(t > s)) continue;
        // substituting v = e^r x turns the scale integral into
        // int K(v) (1 - chi(delta v)) dv / v over [x e^s, x e^t]
        const double lo = std::abs(x) * std::exp(s);
        const double hi = std::abs(x) * std::exp(t);
        const double cap = std::max(200.0, 4.0 / delta);
        const double b = std::min(hi, cap);
        double integral = 0.0;
        if (b > lo) {
          const int panels = std::max(64, static_cast<int>((b - lo) / 1.5));
          integral = integrate_panels(
              [&](double v) {
                return k.radial_eval(v) * (1.0 - window(delta * v)) / v;
              },
              lo, b, panels, 8);
        }
        double tail = 0.0;
        if (hi > b) tail = 2.0 / (b * b);  // oscillatory remainder bound
        entry.sup_discrepancy =
            std::max(entry.sup_discrepancy, std::abs(integral));
        entry.quadrature_tail_bound =
            std::max(entry.quadrature_tail_bound, tail);
      }
    }
    report.entries.push_back(entry);
    if (!report.attained &&
        entry.sup_discrepancy + entry.quadrature_tail_bound <= eps_target) {
      report.attained = true;
      report.attained_delta = delta;
    }
  }
  return report;
}

TailTrendReport supercritical_tail_study(
    const std::function<double(double, std::size_t, RngStream&)>& mass_at_depth,
    const std::vector<double>& t_grid, double alpha_target,
    std::size_t replicas, double top_fraction, uint64_t seed,
    unsigned threads) {
  TailTrendReport report;
  report.alpha_target = alpha_target;
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    const double t = t_grid[ti];
    auto summary = mc_ensemble(
        [&](std::size_t rep, RngStream& rng) {
          return mass_at_depth(t, rep, rng);
        },
        replicas, seed + ti, threads);
    TailTrendEntry entry;
    entry.t = t;
    entry.hill = hill_index(summary.values, top_fraction);
    report.per_depth.push_back(entry);
  }
  if (report.per_depth.size() >= 2) {
    const double first =
        std::abs(report.per_depth.front().hill.tail_index - alpha_target);
    const double last =
        std::abs(report.per_depth.back().hill.tail_index - alpha_target);
    report.trending = last <= first;
  }
  return report;
}

}  // namespace chaoscope::stats
