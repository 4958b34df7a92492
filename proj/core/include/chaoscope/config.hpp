#ifndef CHAOSCOPE_CONFIG_HPP
#define CHAOSCOPE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chaoscope::cli {

struct KernelSpec {
  std::string kind = "ball";  // ball | table
  int dimension = 2;
  std::string table_path;
  bool band_limited = true;
};

struct MollifierSpec {
  std::string kind = "standard";  // standard | table
  int order = 0;                  // 0: smallest admissible for the dimension
  std::string table_path;
};

struct GridSettings {
  int points_per_side = 512;
  double side_length = 1.0;
};

struct RegimeSettings {
  double gamma = 3.0;
  std::vector<double> t_grid = {2, 4, 6, 8};
  std::vector<double> eps_grid;     // defaults to a * 2^-j when empty
  double a_override = 0.0;          // 0: search for the admissible constant
};

struct SamplerSettings {
  std::size_t replicas = 10000;
  double z_min = 1e-4;
  bool compensate = true;
  std::size_t field_replicas = 400;
};

struct RunConfig {
  KernelSpec kernel;
  MollifierSpec mollifier;
  GridSettings grid;
  RegimeSettings regime;
  SamplerSettings sampler;
  std::vector<std::string> suites;
  std::string out_dir = "out";
  uint64_t seed = 1;
  unsigned threads = 0;

  /// FNV-1a hash of the canonical serialization plus the seed; embedded in
  /// every artifact
  std::string config_hash() const;
  std::string canonical_text() const;
};

struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<std::string> violations;  // all of them, not just the first
  bool ok() const { return violations.empty() && config.has_value(); }
};

/// Flat-section key/value document: [section] headers, key = value lines,
/// '#' comments. Unknown keys, missing requirements, and regime/gamma
/// mismatches are all collected.
ParseResult parse_config(const std::string& text);
ParseResult parse_config_file(const std::string& path);

const std::vector<std::string>& known_suites();

}  // namespace chaoscope::cli

#endif
