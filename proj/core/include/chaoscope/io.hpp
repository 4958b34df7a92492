#ifndef CHAOSCOPE_IO_HPP
#define CHAOSCOPE_IO_HPP

#include <string>
#include <vector>

#include "chaoscope/atomic.hpp"
#include "chaoscope/gmc.hpp"
#include "chaoscope/grid.hpp"
#include "chaoscope/spectral.hpp"

namespace chaoscope::io {

/// shortest round-trip decimal formatting; identical inputs give identical
/// bytes, which the reproducibility contract relies on
std::string format_double(double v);

/// Field snapshot: one-line JSON header, then N^d little-endian doubles in
/// row-major order.
void write_field(const std::string& path, const GridField& field);
GridField read_field(const std::string& path);

/// Measures persist in the same header+floats layout with regime metadata.
void write_measure(const std::string& path, const gmc::GridMeasure& mu);
gmc::GridMeasure read_measure(const std::string& path);

/// Atom list: CSV (x1..xd, z) plus a JSON meta sidecar at path + ".meta.json".
void write_atoms(const std::string& path, const atomic::AtomicMeasure& atoms);
atomic::AtomicMeasure read_atoms(const std::string& path);

/// Certificate: JSON document plus a CSV of (t, |w|, K_W, K_Z_t, Delta_t).
void write_certificate_json(const std::string& path,
                            const spectral::DecompositionCertificate& cert,
                            const std::string& config_hash, uint64_t seed);
spectral::DecompositionCertificate read_certificate_json(
    const std::string& path);
void write_certificate_csv(const std::string& path,
                           const kernels::SeedKernel& k,
                           const kernels::Mollifier& m,
                           const spectral::DecompositionCertificate& cert,
                           const spectral::ScanGrid& scan);

/// CSV of per-replica scalars, one column.
void write_scalar_csv(const std::string& path, const std::string& column,
                      const std::vector<double>& values);

void ensure_directory(const std::string& path);

}  // namespace chaoscope::io

#endif
