#include "chaoscope/fields.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "chaoscope/math.hpp"

namespace chaoscope::fields {

namespace {

std::mutex fftw_plan_mutex;

/// FFT workspace per (dimension, N), reused across draws on this thread.
struct FftContext {
  std::size_t n_total = 0;
  fftw_complex* fwd_in = nullptr;
  fftw_complex* fwd_out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftContext(int d, int n) {
    n_total = 1;
    for (int i = 0; i < d; ++i) n_total *= n;
    fwd_in = fftw_alloc_complex(n_total);
    fwd_out = fftw_alloc_complex(n_total);
    std::lock_guard lock(fftw_plan_mutex);
    switch (d) {
      case 1:
        forward = fftw_plan_dft_1d(n, fwd_in, fwd_out, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(n, fwd_out, fwd_in, FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
        break;
      case 2:
        forward = fftw_plan_dft_2d(n, n, fwd_in, fwd_out, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
        backward = fftw_plan_dft_2d(n, n, fwd_out, fwd_in, FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
        break;
      case 3:
        forward = fftw_plan_dft_3d(n, n, n, fwd_in, fwd_out, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
        backward = fftw_plan_dft_3d(n, n, n, fwd_out, fwd_in, FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
        break;
      default:
        throw std::invalid_argument("FftContext: d must be 1, 2, or 3");
    }
  }
  ~FftContext() {
    std::lock_guard lock(fftw_plan_mutex);
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(fwd_in);
    fftw_free(fwd_out);
  }
  FftContext(const FftContext&) = delete;
  FftContext& operator=(const FftContext&) = delete;
};

FftContext& context_for(int d, int n) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<FftContext>> cache;
  auto& slot = cache[{d, n}];
  if (!slot) slot = std::make_unique<FftContext>(d, n);
  return *slot;
}

/// Mode amplitudes sqrt(density(|w_n|) dw^d / N^d); throws on a genuinely
/// negative lattice value.
std::vector<double> mode_amplitudes(const GridSpec& spec,
                                    const SpectralDensity& density) {
  const std::size_t total = spec.num_points();
  const double dw = std::pow(2.0 * std::numbers::pi / spec.side_length,
                             spec.dimension);
  const double norm = dw / total;
  const double min_freq = 2.0 * std::numbers::pi / spec.side_length;
  std::vector<double> amp(total);
  for (std::size_t i = 0; i < total; ++i) {
    const double s = i == 0 ? min_freq : spec.frequency_magnitude(i);
    double v = density.eval(s);
    if (v < -1e-12) {
      std::ostringstream os;
      os << "sample_stationary: negative spectral density " << v
         << " at |w| = " << s << " (certificate required first)";
      throw std::runtime_error(os.str());
    }
    amp[i] = std::sqrt(std::max(v, 0.0) * norm);
  }
  return amp;
}

void synthesize_into(std::vector<double>& out, const GridSpec& spec,
                     const std::vector<double>& amp, RngStream& rng) {
  const std::size_t total = spec.num_points();
  bool all_zero = true;
  for (double a : amp)
    if (a != 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) return;

  auto& ctx = context_for(spec.dimension, spec.points_per_side);
  for (std::size_t i = 0; i < total; ++i) {
    ctx.fwd_in[i][0] = rng.normal();
    ctx.fwd_in[i][1] = 0.0;
  }
  fftw_execute(ctx.forward);
  for (std::size_t i = 0; i < total; ++i) {
    ctx.fwd_out[i][0] *= amp[i];
    ctx.fwd_out[i][1] *= amp[i];
  }
  fftw_execute(ctx.backward);
  // the amplitude array is even under k -> -k, so the imaginary part is
  // pure roundoff
  for (std::size_t i = 0; i < total; ++i) out[i] += ctx.fwd_in[i][0];
}

SpectralDensity layer_density(const kernels::SeedKernel& k, double t_from,
                              double t_to) {
  const int d = k.dimension;
  const double pref = 1.0 / sphere_area(d);
  const double e_from = std::exp(-t_from), e_to = std::exp(-t_to);
  SpectralDensity out;
  out.dimension = d;
  out.label = "K_layer";
  out.finite_at_zero = true;
  out.value_at_zero =
      k.hat_at_zero * (std::exp(-d * t_from) - std::exp(-d * t_to)) / d;
  out.eval = [k, pref, e_from, e_to, d](double s) {
    return pref * std::pow(s, -d) *
           (k.hat_mass_within(e_from * s) - k.hat_mass_within(e_to * s));
  };
  return out;
}

}  // namespace

GridField sample_stationary(const GridSpec& spec,
                            const SpectralDensity& density, RngStream rng) {
  spec.validate();
  if (density.dimension != spec.dimension)
    throw std::invalid_argument("sample_stationary: dimension mismatch");
  GridField field;
  field.grid = spec;
  field.values.assign(spec.num_points(), 0.0);
  field.meta.kind = density.label;
  field.meta.rng_seed = rng.master_seed();
  const auto amp = mode_amplitudes(spec, density);
  synthesize_into(field.values, spec, amp, rng);
  return field;
}

std::vector<GridField> sample_martingale_path(const kernels::SeedKernel& k,
                                              const GridSpec& spec,
                                              const std::vector<double>& t_nodes,
                                              RngStream rng) {
  spec.validate();
  if (t_nodes.empty() || t_nodes.front() < 0.0 ||
      !std::is_sorted(t_nodes.begin(), t_nodes.end()))
    throw std::invalid_argument(
        "sample_martingale_path: t_nodes must be nondecreasing and start >= 0");

  std::vector<GridField> path;
  path.reserve(t_nodes.size());
  std::vector<double> cumulative(spec.num_points(), 0.0);
  double t_prev = 0.0;
  for (std::size_t layer = 0; layer < t_nodes.size(); ++layer) {
    const double t = t_nodes[layer];
    if (t > t_prev) {
      const auto density = layer_density(k, t_prev, t);
      const auto amp = mode_amplitudes(spec, density);
      RngStream layer_rng = rng.split(layer);
      synthesize_into(cumulative, spec, amp, layer_rng);
    }
    GridField field;
    field.grid = spec;
    field.values = cumulative;
    field.meta.kind = "martingale_t";
    field.meta.t = t;
    field.meta.kernel_id = k.id;
    field.meta.rng_seed = rng.master_seed();
    field.meta.layer_count = static_cast<int>(layer) + 1;
    path.push_back(std::move(field));
    t_prev = t;
  }
  return path;
}

DecomposedField sample_decomposed_conv(const kernels::SeedKernel& k,
                                       const kernels::Mollifier& m,
                                       const DecompositionCertificate& cert,
                                       double eps, const GridSpec& spec,
                                       RngStream rng) {
  if (!cert.valid())
    throw std::invalid_argument("sample_decomposed_conv: invalid certificate");
  if (!(eps > 0.0) || eps >= cert.a_const)
    throw std::invalid_argument(
        "sample_decomposed_conv: eps must lie in (0, a_const)");
  const double t_eps = std::log(cert.a_const / eps);

  DecomposedField out;
  out.t_eps = t_eps;
  out.martingale =
      std::move(sample_martingale_path(k, spec, {t_eps}, rng.split(1))[0]);
  out.remainder = sample_stationary(
      spec, spectral::remainder_density(k, m, cert.a_const, t_eps),
      rng.split(2));
  out.vanishing = sample_stationary(
      spec, spectral::vanishing_density(k, m, cert.a_const, t_eps),
      rng.split(3));

  for (GridField* f : {&out.martingale, &out.remainder, &out.vanishing}) {
    f->meta.eps = eps;
    f->meta.a_const = cert.a_const;
    f->meta.kernel_id = k.id;
    f->meta.mollifier_id = m.id;
  }
  out.remainder.meta.kind = "W_t";
  out.remainder.meta.t = t_eps;
  out.vanishing.meta.kind = "Z_t";
  out.vanishing.meta.t = t_eps;

  out.sum.grid = spec;
  out.sum.values.resize(spec.num_points());
  for (std::size_t i = 0; i < out.sum.values.size(); ++i)
    out.sum.values[i] = out.martingale.values[i] + out.remainder.values[i] +
                        out.vanishing.values[i];
  out.sum.meta = out.martingale.meta;
  out.sum.meta.kind = "sum";
  out.sum.meta.mollifier_id = m.id;
  return out;
}

double lattice_covariance(const GridField& field, std::size_t lag_cells,
                          int axis) {
  const GridSpec& g = field.grid;
  const std::size_t n = g.points_per_side;
  const std::size_t total = g.num_points();
  if (axis < 0 || axis >= g.dimension)
    throw std::invalid_argument("lattice_covariance: bad axis");
  // stride of one step along the requested axis in row-major layout
  std::size_t stride = 1;
  for (int a = g.dimension - 1; a > axis; --a) stride *= n;
  double sum = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t axis_idx = (i / stride) % n;
    const std::size_t shifted = (axis_idx + lag_cells) % n;
    const std::size_t j = i - axis_idx * stride + shifted * stride;
    sum += field.values[i] * field.values[j];
  }
  return sum / total;
}

}  // namespace chaoscope::fields
