// Command-line driver for the chaoscope toolkit: decomposition
// certificates, field simulation, chaos measures, atomic sampling, and the
// Monte Carlo verification suites.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "chaoscope/atomic.hpp"
#include "chaoscope/fields.hpp"
#include "chaoscope/gmc.hpp"
#include "chaoscope/io.hpp"
#include "chaoscope/runner.hpp"

#include <json.hpp>
#include <fstream>

namespace cc = chaoscope;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 0;
};

cc::cli::RunConfig load_config(const GlobalArgs& args) {
  cc::cli::ParseResult parsed;
  if (args.config_path.empty()) {
    parsed = cc::cli::parse_config("");  // defaults
  } else {
    parsed = cc::cli::parse_config_file(args.config_path);
  }
  if (!parsed.ok()) {
    for (const auto& v : parsed.violations)
      std::cerr << "config error: " << v << "\n";
    std::exit(2);
  }
  cc::cli::RunConfig cfg = *parsed.config;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed_set) cfg.seed = args.seed;
  if (args.threads > 0) cfg.threads = args.threads;
  return cfg;
}

int cmd_decompose(const GlobalArgs& args) {
  auto cfg = load_config(args);
  const auto kernel = cc::cli::build_kernel(cfg.kernel);
  const auto mollifier = cc::cli::build_mollifier(cfg.mollifier,
                                                  kernel.dimension);
  const auto cert = cc::cli::obtain_certificate(cfg, kernel, mollifier);
  const auto scan = cc::spectral::ScanGrid::standard();
  cc::io::ensure_directory(cfg.out_dir);
  cc::io::write_certificate_json(cfg.out_dir + "/certificate.json", cert,
                                 cfg.config_hash(), cfg.seed);
  cc::io::write_certificate_csv(cfg.out_dir + "/decomposition.csv", kernel,
                                mollifier, cert, scan);
  std::cout << "a_const = " << cert.a_const << "  min_KW = " << cert.min_kw
            << "  min_KZ = " << cert.min_kz << "\n";
  return cert.valid() ? 0 : 1;
}

int cmd_simulate_field(const GlobalArgs& args) {
  auto cfg = load_config(args);
  const auto kernel = cc::cli::build_kernel(cfg.kernel);
  cc::GridSpec spec;
  spec.dimension = kernel.dimension;
  spec.points_per_side = cfg.grid.points_per_side;
  spec.side_length = cfg.grid.side_length;
  cc::io::ensure_directory(cfg.out_dir);
  cc::RngStream rng(cfg.seed, {0x73696d});
  auto path = cc::fields::sample_martingale_path(kernel, spec,
                                                 cfg.regime.t_grid, rng);
  for (auto& field : path) {
    field.meta.config_hash = cfg.config_hash();
    std::ostringstream name;
    name << cfg.out_dir << "/field-t" << field.meta.t << ".bin";
    cc::io::write_field(name.str(), field);
    std::cout << "wrote " << name.str() << "\n";
  }
  return 0;
}

int cmd_measure(const GlobalArgs& args, const std::string& regime) {
  auto cfg = load_config(args);
  const auto kernel = cc::cli::build_kernel(cfg.kernel);
  cc::GridSpec spec;
  spec.dimension = kernel.dimension;
  spec.points_per_side = cfg.grid.points_per_side;
  spec.side_length = cfg.grid.side_length;
  cc::io::ensure_directory(cfg.out_dir);
  cc::RngStream rng(cfg.seed, {0x6d6561});
  const double t = cfg.regime.t_grid.empty() ? 4.0 : cfg.regime.t_grid.back();
  auto field = cc::fields::sample_martingale_path(kernel, spec, {t}, rng)[0];

  cc::gmc::GridMeasure mu;
  const int d = kernel.dimension;
  if (regime == "sub") {
    mu = cc::gmc::chaos_measure(field, cfg.regime.gamma, t, 1.0,
                                cc::gmc::Regime::sub);
  } else if (regime == "critical") {
    mu = cc::gmc::derivative_measure(field, t);
  } else if (regime == "super") {
    mu = cc::gmc::chaos_measure(
        field, cfg.regime.gamma, t,
        cc::gmc::supercritical_norm(d, cfg.regime.gamma,
                                    cc::gmc::NormMode::t, t),
        cc::gmc::Regime::super_t);
  } else {
    std::cerr << "unknown regime: " << regime << "\n";
    return 2;
  }
  mu.meta.config_hash = cfg.config_hash();
  const std::string path = cfg.out_dir + "/measure-" + regime + ".bin";
  cc::io::write_measure(path, mu);
  std::cout << "wrote " << path << "  total_mass = " << mu.total_mass()
            << "\n";
  return 0;
}

int cmd_sample_atomic(const GlobalArgs& args) {
  auto cfg = load_config(args);
  const int d = cfg.kernel.dimension;
  const auto nu = cc::atomic::lebesgue_box(d);
  cc::RngStream rng(cfg.seed, {0x61746f});
  auto atoms = cc::atomic::sample_atomic(nu, cfg.regime.gamma,
                                         cfg.sampler.z_min,
                                         cfg.sampler.compensate, rng);
  atoms.meta.config_hash = cfg.config_hash();
  cc::io::ensure_directory(cfg.out_dir);
  const std::string path = cfg.out_dir + "/atoms.csv";
  cc::io::write_atoms(path, atoms);
  std::cout << "wrote " << path << "  atoms = " << atoms.masses.size()
            << "  total_mass = " << atoms.total_mass() << "\n";
  return 0;
}

int cmd_verify(const GlobalArgs& args, const std::string& suite) {
  auto cfg = load_config(args);
  if (!suite.empty()) cfg.suites = {suite};
  // suite selection may bypass the config-time regime guard; re-validate
  const double gc = std::sqrt(2.0 * cfg.kernel.dimension);
  for (const auto& s : cfg.suites) {
    const bool needs_super = s == "laplace" || s == "moments" || s == "tails";
    if (needs_super && !(cfg.regime.gamma > gc)) {
      std::cerr << "suite " << s << " requires gamma > sqrt(2d) = " << gc
                << "\n";
      return 2;
    }
  }
  auto outcome = cc::cli::run(cfg);
  return outcome.ok() ? 0 : 1;
}

int cmd_report(const GlobalArgs& args) {
  auto cfg = load_config(args);
  namespace fs = std::filesystem;
  if (!fs::exists(cfg.out_dir)) {
    std::cerr << "no output directory: " << cfg.out_dir << "\n";
    return 1;
  }
  bool any = false, all_ok = true;
  for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
    const auto name = entry.path().filename().string();
    if (name.size() < 12 || name.substr(name.size() - 12) != "-report.json")
      continue;
    any = true;
    std::ifstream in(entry.path());
    auto j = nlohmann::json::parse(in);
    const bool ok = j.at("passed");
    all_ok = all_ok && ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << j.at("suite").get<std::string>()
              << "  (config " << j.at("config_hash").get<std::string>()
              << ", seed " << j.at("seed") << ")\n";
    for (const auto& c : j.at("checks"))
      std::cout << "  " << (c.at("passed").get<bool>() ? "pass" : "FAIL")
                << "  " << c.at("name").get<std::string>() << "  value="
                << c.at("value").get<double>() << "\n";
  }
  if (!any) std::cout << "no suite reports in " << cfg.out_dir << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chaoscope: simulation and verification toolkit for "
               "log-correlated Gaussian fields and their multiplicative "
               "chaos measures"};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "run configuration file")
      ->expected(1);
  app.add_option("--out", args.out_dir, "output directory override");
  auto* seed_opt =
      app.add_option("--seed", args.seed, "master seed override");
  app.add_option("--threads", args.threads,
                 "worker threads (default: CHAOSCOPE_THREADS or hardware)");

  auto* decompose = app.add_subcommand(
      "decompose", "search the admissible constant and emit the certificate");
  auto* simulate = app.add_subcommand(
      "simulate-field", "sample scale-truncated fields at the configured depths");
  auto* measure =
      app.add_subcommand("measure", "turn a field sample into a chaos measure");
  std::string regime = "sub";
  measure->add_option("--regime", regime, "sub | critical | super");
  auto* sample = app.add_subcommand("sample-atomic",
                                    "sample the limiting atomic measure");
  auto* verify =
      app.add_subcommand("verify", "run a Monte Carlo verification suite");
  std::string suite;
  verify->add_option("--suite", suite,
                     "laplace | moments | spectrum | kahane | decomp | tails");
  auto* report = app.add_subcommand("report", "summarize suite reports");
  for (auto* sub : {decompose, simulate, measure, sample, verify, report})
    sub->fallthrough();  // accept the global flags after the subcommand

  CLI11_PARSE(app, argc, argv);
  args.seed_set = seed_opt->count() > 0;

  try {
    if (decompose->parsed()) return cmd_decompose(args);
    if (simulate->parsed()) return cmd_simulate_field(args);
    if (measure->parsed()) return cmd_measure(args, regime);
    if (sample->parsed()) return cmd_sample_atomic(args);
    if (verify->parsed()) return cmd_verify(args, suite);
    if (report->parsed()) return cmd_report(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
