#ifndef CHAOSCOPE_KERNELS_HPP
#define CHAOSCOPE_KERNELS_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace chaoscope::kernels {

/// Radial seed covariance profile together with its spectral profile.
///
/// Conventions: radial_hat is the spectral density in the pairing
/// K(x) = \int hat(w) e^{iwx} dw, so a unit-variance kernel has
/// \int hat = K(0) = 1. Immutable after construction.
struct SeedKernel {
  int dimension = 1;
  std::string id;

  std::function<double(double)> radial_eval;      // r  -> K(r), K(0) = 1
  std::function<double(double)> radial_hat_eval;  // s  -> hat(s) >= 0
  /// cumulative spectral mass within the centered ball of radius s
  std::function<double(double)> hat_mass_within;
  double hat_at_zero = 0.0;

  bool band_limited = false;
  double hat_support_radius = 0.0;  // meaningful when band_limited
  double decay_bound_c = 0.0;       // |K(r)| <= C (1+r)^-a
  double decay_exponent_a = 0.0;
  double trihat_lower = 0.0;  // lower/upper constants of the cumulative-mass
  double trihat_upper = 0.0;  // sandwich against |w|^d, for |w| < 1
};

/// Compactly supported unit-mass smoothing profile with its (real, radial)
/// Fourier profile. hat uses the mass pairing, hat(0) = \int rho = 1.
struct Mollifier {
  int dimension = 1;
  std::string id;
  int order = 1;  // hat(s) = 1 - s^(2*order) + O(s^(2*order+1))

  std::function<double(double)> profile_eval;  // r -> rho(r)
  std::function<double(double)> hat_eval;      // s -> hat(s)
  /// 1 - hat(s), computed without cancellation; O(s^(2*order)) near zero
  std::function<double(double)> one_minus_hat;
  double support_radius = 0.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double margin = 0.0;  // smallest slack observed; negative means violated
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::size_t scan_points = 0;
  bool all_passed() const;
  std::string summary() const;
};

/// Kernel whose spectral profile is the normalized indicator of the unit
/// ball; the physical profile has the closed radial form per dimension.
SeedKernel ball_seed_kernel(int d);

/// Even, compactly supported, smooth, unit-mass profile built from dilated
/// copies of the classical C_c^inf bump, with vanishing radial moments up
/// to 2*order-2 and the leading hat expansion pinned to 1 - s^(2*order).
/// Requires 2*order >= d.
Mollifier standard_mollifier(int d, int order);

/// Deliberately non-admissible profile whose |hat| exceeds 1 near zero
/// (positive second-moment defect); used to probe the failure paths.
Mollifier defective_mollifier(int d);

/// Pointwise product K * chi(delta .) where chi is the self-convolution of
/// a fixed smooth bump supported in B(0,1/2) with \int bump^2 = 1. The
/// result has support radius 1/delta and is positive definite; it is not
/// spectrally supported in the unit ball, so band_limited is false.
SeedKernel truncate_kernel(const SeedKernel& k, double delta,
                           double bump_support = 0.5);

/// chi = bump * bump profile used by truncate_kernel (chi(0) = 1).
const std::function<double(double)>& truncation_window(int d);

/// Scan-based checks of the seed-kernel assumptions on the given radii.
ValidationReport validate_seed(const SeedKernel& k,
                               std::span<const double> radii);

/// Scan-based checks of the mollifier assumptions (unit mass, hat(0) = 1,
/// local maximum of |hat| at 0, vanishing low-order derivatives at 0).
ValidationReport validate_mollifier(const Mollifier& m);

/// Tabulated two-column (radius, value) profile with one header line.
SeedKernel kernel_from_table(const std::string& path, int d,
                             bool band_limited);
Mollifier mollifier_from_table(const std::string& path, int d);

}  // namespace chaoscope::kernels

#endif
