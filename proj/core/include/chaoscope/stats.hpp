#ifndef CHAOSCOPE_STATS_HPP
#define CHAOSCOPE_STATS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chaoscope/kernels.hpp"
#include "chaoscope/rng.hpp"

namespace chaoscope::stats {

/// Scalar Monte Carlo summary. Reductions run in replica order, so the
/// summary is bit-reproducible for a fixed seed and replica count.
struct EnsembleSummary {
  std::size_t replicas = 0;
  std::vector<double> values;  // per-replica scalars, in replica order
  double mean = 0.0;
  double se = 0.0;
  std::map<double, double> quantiles;  // p -> value (0, .25, .5, .75, 1)
  std::size_t overflow_count = 0;

  static EnsembleSummary from_values(std::vector<double> values,
                                     std::size_t overflow_count = 0);
};

/// per-replica scalar generator; streams are split per replica index
using ScalarSampler = std::function<double(std::size_t replica, RngStream&)>;

/// Replica-parallel map into an EnsembleSummary.
EnsembleSummary mc_ensemble(const ScalarSampler& sampler, std::size_t replicas,
                            uint64_t seed, unsigned threads = 0);

/// Summary of exp(-sample) where sample_i = mu_i(phi) from the caller's
/// measure sampler. Requires >= 100 replicas.
EnsembleSummary mc_laplace(const ScalarSampler& measure_of_phi,
                           std::size_t replicas, uint64_t seed,
                           unsigned threads = 0);

struct ScalingFit {
  std::vector<double> scales;
  std::vector<double> moments;     // empirical E[mass(r)^q]
  std::vector<double> moment_se;
  double slope = 0.0;
  double slope_se = 0.0;
  double target = 0.0;
  std::vector<double> residuals;
};

/// Multifractal scaling exponent xi_gamma(q) = sqrt(2d) gamma q - g^2 q^2/2.
double multifractal_exponent(int d, double gamma, double q);

/// Log-log fit of empirical E[mass(r)^q] against r over >= 4 scales
/// spanning >= 2 dyadic octaves.
ScalingFit multifractal_fit(
    const std::function<double(double scale, std::size_t replica, RngStream&)>&
        mass_at_scale,
    double q, const std::vector<double>& scales, double target,
    std::size_t replicas, uint64_t seed, unsigned threads = 0);

struct HillEstimate {
  double tail_index = 0.0;  // estimated alpha
  std::size_t order_statistics = 0;
  bool unstable = false;  // strong dependence on the top fraction
};

/// Hill tail-index estimate over the top order statistics.
/// Requires >= 1000 positive samples and top_fraction in (0, 0.05].
HillEstimate hill_index(std::vector<double> samples, double top_fraction);

struct KahaneReport {
  bool precondition_ok = false;  // entrywise dominance and PSD inputs
  double lhs_mean = 0.0, lhs_se = 0.0;
  double rhs_mean = 0.0, rhs_se = 0.0;
  bool violated = false;  // lhs > rhs + 3 * combined SE
};

/// Monte Carlo check of the convexity comparison for exponentiated
/// Gaussian vectors: with cov_X <= cov_Y entrywise,
/// E[phi(sum f_i e^{X_i - var_i/2})] <= E[phi(sum f_i e^{Y_i - var_i/2})].
/// Matrices are row-major n x n.
KahaneReport kahane_check(const std::vector<double>& cov_x,
                          const std::vector<double>& cov_y, std::size_t n,
                          const std::vector<double>& f,
                          const std::function<double(double)>& convex_eval,
                          std::size_t replicas, uint64_t seed,
                          unsigned threads = 0);

struct TruncationEntry {
  double delta = 0.0;
  double sup_discrepancy = 0.0;  // over lags and (s,t) windows
  double quadrature_tail_bound = 0.0;
};

struct TruncationReport {
  std::vector<TruncationEntry> entries;  // in the caller's delta order
  double eps_target = 0.0;
  double attained_delta = 0.0;  // largest delta meeting the target, 0 if none
  bool attained = false;
};

/// sup over lags and scale windows (s,t) of
/// |\int_s^t [K - K_delta](e^r x) dr|, per truncation radius delta.
TruncationReport covariance_comparison(
    const kernels::SeedKernel& k, const std::vector<double>& deltas,
    double eps_target, const std::vector<double>& lags,
    const std::vector<std::pair<double, double>>& st_pairs);

struct TailTrendEntry {
  double t = 0.0;
  HillEstimate hill;
};

struct TailTrendReport {
  std::vector<TailTrendEntry> per_depth;
  double alpha_target = 0.0;
  bool trending = false;  // |hill - alpha| shrinks from first to last depth
};

/// Hill index of supercritical total masses across depths, against the
/// tail exponent sqrt(2d)/gamma of the limit.
TailTrendReport supercritical_tail_study(
    const std::function<double(double t, std::size_t replica, RngStream&)>&
        mass_at_depth,
    const std::vector<double>& t_grid, double alpha_target,
    std::size_t replicas, double top_fraction, uint64_t seed,
    unsigned threads = 0);

}  // namespace chaoscope::stats

#endif
