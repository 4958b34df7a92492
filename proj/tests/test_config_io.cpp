#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chaoscope/config.hpp"
#include "chaoscope/io.hpp"
#include "chaoscope/runner.hpp"

using namespace chaoscope;
using namespace chaoscope::cli;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}
}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const auto result = parse_config(
      "[kernel]\nkind = ball\nd = 2\n\n[regime]\ngamma = 3\n");
  REQUIRE(result.ok());
  CHECK(result.config->kernel.dimension == 2);
  CHECK(result.config->regime.a_override == 0.0);  // auto
  CHECK(result.config->mollifier.order == 1);      // smallest admissible
  CHECK(result.config->suites.empty());
}

TEST_CASE("regime guard rejects subcritical gamma for atomic suites") {
  const auto result = parse_config(
      "[kernel]\nkind = ball\nd = 2\n[regime]\ngamma = 1.5\n"
      "[run]\nsuites = laplace\n");
  CHECK_FALSE(result.ok());
  bool found = false;
  for (const auto& v : result.violations)
    if (v.find("requires gamma > sqrt(2d)") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("all violations are reported at once") {
  const auto result = parse_config(
      "[kernel]\nkind = ball\nd = 7\nbogus = 1\n[regime]\ngamma = 1.5\n"
      "[run]\nsuites = laplace\n");
  CHECK_FALSE(result.ok());
  CHECK(result.violations.size() >= 3);  // bad d, unknown key, regime guard
}

TEST_CASE("config hash is stable and seed-sensitive") {
  auto a = parse_config("[kernel]\nkind = ball\nd = 2\n[run]\nseed = 1\n");
  auto b = parse_config("[kernel]\nkind = ball\nd = 2\n[run]\nseed = 1\n");
  auto c = parse_config("[kernel]\nkind = ball\nd = 2\n[run]\nseed = 2\n");
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  REQUIRE(c.ok());
  CHECK(a.config->config_hash() == b.config->config_hash());
  CHECK(a.config->config_hash() != c.config->config_hash());
}

TEST_CASE("field snapshots round-trip bit for bit") {
  GridField field;
  field.grid.dimension = 2;
  field.grid.points_per_side = 16;
  field.grid.side_length = 2.5;
  field.values.resize(field.grid.num_points());
  RngStream rng(3);
  for (auto& v : field.values) v = rng.normal();
  field.meta.kind = "martingale_t";
  field.meta.t = 1.5;
  field.meta.kernel_id = "ball_d2";
  field.meta.rng_seed = 3;
  field.meta.layer_count = 1;

  const std::string path = "roundtrip_field.bin";
  io::write_field(path, field);
  const auto loaded = io::read_field(path);
  CHECK(loaded.values == field.values);
  CHECK(loaded.meta.kind == field.meta.kind);
  CHECK(loaded.meta.t == field.meta.t);
  CHECK(loaded.grid.side_length == field.grid.side_length);

  SUBCASE("identical writes are byte-identical") {
    const std::string again = "roundtrip_field_2.bin";
    io::write_field(again, field);
    CHECK(slurp(path) == slurp(again));
    std::remove(again.c_str());
  }
  std::remove(path.c_str());
}

TEST_CASE("measure snapshots carry the regime metadata") {
  gmc::GridMeasure mu;
  mu.grid.dimension = 1;
  mu.grid.points_per_side = 8;
  mu.grid.side_length = 1.0;
  mu.weights = {0.1, 0.2, 0.3, 0.0, 0.0, 0.0, 0.4, 0.5};
  mu.meta.gamma = 3.0;
  mu.meta.regime = gmc::Regime::super_t;
  mu.meta.t = 4.0;
  mu.meta.overflow_count = 2;

  const std::string path = "roundtrip_measure.bin";
  io::write_measure(path, mu);
  const auto loaded = io::read_measure(path);
  CHECK(loaded.weights == mu.weights);
  CHECK(loaded.meta.regime == gmc::Regime::super_t);
  CHECK(loaded.meta.overflow_count == 2);
  std::remove(path.c_str());
}

TEST_CASE("atom lists round-trip through CSV plus sidecar") {
  atomic::AtomicMeasure atoms;
  atoms.meta.gamma = 3.0;
  atoms.meta.dimension = 2;
  atoms.meta.alpha = 2.0 / 3.0;
  atoms.meta.z_min = 1e-3;
  atoms.meta.compensator_mass = 0.1;
  atoms.meta.intensity_id = "lebesgue_box";
  atoms.locations = {{0.25, 0.5, 0.0}, {0.75, 0.1, 0.0}};
  atoms.masses = {1.5, 0.01};

  const std::string path = "roundtrip_atoms.csv";
  io::write_atoms(path, atoms);
  const auto loaded = io::read_atoms(path);
  REQUIRE(loaded.masses.size() == 2);
  CHECK(loaded.masses[0] == atoms.masses[0]);
  CHECK(loaded.locations[1][0] == atoms.locations[1][0]);
  CHECK(loaded.meta.compensator_mass == atoms.meta.compensator_mass);
  std::remove(path.c_str());
  std::remove((path + ".meta.json").c_str());
}

TEST_CASE("certificates round-trip and rewrite identically") {
  spectral::DecompositionCertificate cert;
  cert.a_const = 0.5;
  cert.t_grid = {0, 1, 2};
  cert.identity_residual = {1e-16, 2e-16, 3e-16};
  cert.min_kw = 0.0;
  cert.min_kz = -1e-15;
  cert.tol = 1e-12;
  cert.scan_spec = "600 radial nodes";
  cert.kernel_id = "ball_d2";
  cert.mollifier_id = "standard_d2_m1";

  const std::string path = "roundtrip_cert.json";
  io::write_certificate_json(path, cert, "deadbeef", 7);
  const auto loaded = io::read_certificate_json(path);
  CHECK(loaded.a_const == cert.a_const);
  CHECK(loaded.identity_residual == cert.identity_residual);
  CHECK(loaded.valid());

  const std::string again = "roundtrip_cert_2.json";
  io::write_certificate_json(again, cert, "deadbeef", 7);
  CHECK(slurp(path) == slurp(again));
  std::remove(path.c_str());
  std::remove(again.c_str());
}

TEST_CASE("empty suite list runs nothing and succeeds") {
  auto parsed = parse_config("[kernel]\nkind = ball\nd = 1\n");
  REQUIRE(parsed.ok());
  auto cfg = *parsed.config;
  cfg.out_dir = "empty-run-out";
  const auto outcome = run(cfg);
  CHECK(outcome.ok());
  CHECK(outcome.suites.empty());
  CHECK_FALSE(std::filesystem::exists(cfg.out_dir));
}
