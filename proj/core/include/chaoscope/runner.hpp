#ifndef CHAOSCOPE_RUNNER_HPP
#define CHAOSCOPE_RUNNER_HPP

#include <string>
#include <vector>

#include "chaoscope/config.hpp"
#include "chaoscope/kernels.hpp"
#include "chaoscope/spectral.hpp"

namespace chaoscope::cli {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckOutcome> checks;
  bool passed() const;
};

struct RunOutcome {
  std::vector<SuiteReport> suites;
  bool ok() const;
  std::vector<std::string> failures() const;
};

kernels::SeedKernel build_kernel(const KernelSpec& spec);
kernels::Mollifier build_mollifier(const MollifierSpec& spec, int d);

/// Certificate for the configured kernel/mollifier pair, reusing the
/// on-disk copy in out_dir when one matches (field ensembles dominate
/// runtime; certificates are the cheap cacheable step before them).
spectral::DecompositionCertificate obtain_certificate(
    const RunConfig& cfg, const kernels::SeedKernel& k,
    const kernels::Mollifier& m);

/// Executes the configured suites in dependency order, writes one JSON
/// report per suite plus raw per-replica CSVs into cfg.out_dir, and prints
/// a human summary table. An empty suite list writes nothing.
RunOutcome run(const RunConfig& cfg);

SuiteReport run_suite(const RunConfig& cfg, const std::string& suite);

void write_suite_report(const RunConfig& cfg, const SuiteReport& report);
std::string summary_table(const RunOutcome& outcome);

}  // namespace chaoscope::cli

#endif
