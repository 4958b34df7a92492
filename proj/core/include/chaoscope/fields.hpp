#ifndef CHAOSCOPE_FIELDS_HPP
#define CHAOSCOPE_FIELDS_HPP

#include <cstdint>
#include <vector>

#include "chaoscope/grid.hpp"
#include "chaoscope/rng.hpp"
#include "chaoscope/spectral.hpp"

namespace chaoscope::fields {

using spectral::DecompositionCertificate;
using spectral::SpectralDensity;

/// Stationary centred Gaussian field on the torus by spectral synthesis:
/// independent complex Gaussian modes with variance density(|w_n|) dw^d,
/// Hermitian-symmetrized through an FFT of white noise. The zero mode uses
/// the density at the smallest nonzero lattice frequency. Lattice nodes
/// with density below -1e-12 abort; tiny negative values clamp to zero.
GridField sample_stationary(const GridSpec& spec,
                            const SpectralDensity& density, RngStream rng);

/// Cumulative scale-truncated fields at the given depths, built from
/// independent layer increments with spectral density K_t - K_s. Each
/// layer draws from a child stream split off the master seed, so any
/// prefix is reproducible without the later layers.
std::vector<GridField> sample_martingale_path(const kernels::SeedKernel& k,
                                              const GridSpec& spec,
                                              const std::vector<double>& t_nodes,
                                              RngStream rng);

struct DecomposedField {
  GridField martingale;  // depth t_eps
  GridField remainder;   // W at depth t_eps
  GridField vanishing;   // Z at depth t_eps
  GridField sum;         // equal in law to the mollified field at eps
  double t_eps = 0.0;
};

/// Three mutually independent components whose sum has, in law, the
/// covariance of the mollified field at smoothing scale eps < a, where
/// t_eps = log(a / eps).
DecomposedField sample_decomposed_conv(const kernels::SeedKernel& k,
                                       const kernels::Mollifier& m,
                                       const DecompositionCertificate& cert,
                                       double eps, const GridSpec& spec,
                                       RngStream rng);

/// Per-replica covariance estimate at a lattice lag, averaged over all grid
/// translations of one realization.
double lattice_covariance(const GridField& field, std::size_t lag_cells,
                          int axis = 0);

}  // namespace chaoscope::fields

#endif
