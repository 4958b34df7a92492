#ifndef CHAOSCOPE_SPECTRAL_HPP
#define CHAOSCOPE_SPECTRAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "chaoscope/kernels.hpp"

namespace chaoscope::spectral {

using kernels::Mollifier;
using kernels::SeedKernel;

/// Isotropic spectral density under the shared pairing
/// K(x) = \int hat(w) e^{iwx} dw. eval takes the radial frequency |w|.
struct SpectralDensity {
  int dimension = 1;
  std::string label;
  std::function<double(double)> eval;
  bool finite_at_zero = true;
  double value_at_zero = 0.0;  // radial limit, when finite

  double operator()(double s) const;
};

/// Radial scan grid: log-spaced nodes over (lo, hi] plus a fine linear band
/// around the spectral support edge where the cumulative mass kinks.
struct ScanGrid {
  std::vector<double> nodes;
  std::string describe() const;

  static ScanGrid standard(double lo = 1e-6, double hi = 1e3,
                           std::size_t log_nodes = 400,
                           std::size_t band_nodes = 200);
};

struct DecompositionCertificate {
  double a_const = 0.0;
  std::vector<double> t_grid;
  std::vector<double> identity_residual;  // per t
  double min_kw = 0.0;
  double min_kz = 0.0;
  double tol = 0.0;
  std::string scan_spec;
  std::string kernel_id, mollifier_id;

  bool valid() const { return min_kw >= -tol && min_kz >= -tol; }
};

/// cumulative spectral mass of the seed within the ball of radius |w|;
/// in [0,1], and exactly 1 for |w| >= 1 on a compliant kernel
double script_T(const SeedKernel& k, double s);

/// spectral density of the depth-t martingale approximation,
/// |S^{d-1}|^{-1} |w|^{-d} (T(w) - T(e^{-t} w)); finite at w = 0
SpectralDensity spectrum_Kt(const SeedKernel& k, double t);

/// spectral density of the mollified field at smoothing scale a e^{-t}:
/// |rhohat(a e^{-t} w)|^2 K^(w). Diverging total mass; w = 0 is rejected.
SpectralDensity spectrum_conv(const SeedKernel& k, const Mollifier& m,
                              double a, double t);

/// stationary remainder density: |S^{d-1}|^{-1}|w|^{-d} (T(w) - (1-|rhohat(a w)|^2))
double k_hat_W(const SeedKernel& k, const Mollifier& m, double a, double s);

/// vanishing-component density at depth t:
/// |S^{d-1}|^{-1}|w|^{-d} (1-|rhohat(a e^{-t} w)|^2)(1 - T(w))
double k_hat_Z(const SeedKernel& k, const Mollifier& m, double a, double t,
               double s);

/// remainder density rescaled to depth t, e^{-dt} k_hat_W(e^{-t} w)
double k_hat_W_at(const SeedKernel& k, const Mollifier& m, double a, double t,
                  double s);

/// density difference between the mollified and martingale covariances,
/// e^{-dt} K^(e^{-t}w) - (1-|rhohat(a e^{-t}w)|^2) K^(w)
double delta_hat(const SeedKernel& k, const Mollifier& m, double a, double t,
                 double s);

/// Density objects for field synthesis.
SpectralDensity remainder_density(const SeedKernel& k, const Mollifier& m,
                                  double a, double t);
SpectralDensity vanishing_density(const SeedKernel& k, const Mollifier& m,
                                  double a, double t);

/// max |delta - k_hat_W_t - k_hat_Z_t| over the scan; exact algebra, so the
/// result is pure roundoff
double verify_identity(const SeedKernel& k, const Mollifier& m, double a,
                       double t, const ScanGrid& scan);

/// Residual of the same identity with caller-supplied evaluations; used to
/// confirm that injected perturbations are detected.
double decomposition_residual(const std::function<double(double)>& delta,
                              const std::function<double(double)>& kw_t,
                              const std::function<double(double)>& kz_t,
                              const ScanGrid& scan);

/// Largest dyadic 2^-j making both decomposition components nonnegative on
/// the scan for every t in t_grid. Throws with the worst frequency if no
/// admissible constant exists down to 2^-40.
DecompositionCertificate find_admissible_a(
    const SeedKernel& k, const Mollifier& m, const ScanGrid& scan,
    double tol = 1e-12, std::vector<double> t_grid = {0, 1, 2, 4, 8, 16});

/// sup of the vanishing-component density over the scan at depth t
double sup_kz(const SeedKernel& k, const Mollifier& m, double a, double t,
              const ScanGrid& scan);

}  // namespace chaoscope::spectral

#endif
