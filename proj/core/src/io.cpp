#include "chaoscope/io.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chaoscope::io {

using nlohmann::json;

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

namespace {

json grid_to_json(const GridSpec& g) {
  return json{{"d", g.dimension},
              {"n", g.points_per_side},
              {"length", g.side_length},
              {"origin", {g.origin[0], g.origin[1], g.origin[2]}}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.dimension = j.at("d");
  g.points_per_side = j.at("n");
  g.side_length = j.at("length");
  const auto& o = j.at("origin");
  g.origin = {o.at(0), o.at(1), o.at(2)};
  return g;
}

void write_header_and_values(const std::string& path, const json& header,
                             const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << header.dump() << "\n";
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
}

json read_header(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("missing header in " + path);
  return json::parse(line);
}

}  // namespace

void write_field(const std::string& path, const GridField& field) {
  json header{{"format", "chaoscope-field-v1"},
              {"grid", grid_to_json(field.grid)},
              {"meta",
               {{"kind", field.meta.kind},
                {"t", field.meta.t},
                {"eps", field.meta.eps},
                {"a_const", field.meta.a_const},
                {"kernel_id", field.meta.kernel_id},
                {"mollifier_id", field.meta.mollifier_id},
                {"rng_seed", field.meta.rng_seed},
                {"layer_count", field.meta.layer_count},
                {"config_hash", field.meta.config_hash}}}};
  write_header_and_values(path, header, field.values);
}

GridField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  const json header = read_header(in, path);
  if (header.at("format") != "chaoscope-field-v1")
    throw std::runtime_error("not a field snapshot: " + path);
  GridField field;
  field.grid = grid_from_json(header.at("grid"));
  const auto& m = header.at("meta");
  field.meta.kind = m.at("kind");
  field.meta.t = m.at("t");
  field.meta.eps = m.at("eps");
  field.meta.a_const = m.at("a_const");
  field.meta.kernel_id = m.at("kernel_id");
  field.meta.mollifier_id = m.at("mollifier_id");
  field.meta.rng_seed = m.at("rng_seed");
  field.meta.layer_count = m.at("layer_count");
  field.meta.config_hash = m.at("config_hash");
  field.values.resize(field.grid.num_points());
  in.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated field snapshot: " + path);
  return field;
}

void write_measure(const std::string& path, const gmc::GridMeasure& mu) {
  json header{{"format", "chaoscope-measure-v1"},
              {"grid", grid_to_json(mu.grid)},
              {"meta",
               {{"gamma", mu.meta.gamma},
                {"regime", gmc::regime_name(mu.meta.regime)},
                {"norm", mu.meta.norm},
                {"t", mu.meta.t},
                {"eps", mu.meta.eps},
                {"rng_seed", mu.meta.rng_seed},
                {"overflow_count", mu.meta.overflow_count},
                {"truncated_fraction", mu.meta.truncated_fraction},
                {"config_hash", mu.meta.config_hash}}}};
  write_header_and_values(path, header, mu.weights);
}

gmc::GridMeasure read_measure(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  const json header = read_header(in, path);
  if (header.at("format") != "chaoscope-measure-v1")
    throw std::runtime_error("not a measure snapshot: " + path);
  gmc::GridMeasure mu;
  mu.grid = grid_from_json(header.at("grid"));
  const auto& m = header.at("meta");
  mu.meta.gamma = m.at("gamma");
  mu.meta.regime = gmc::regime_from_name(m.at("regime"));
  mu.meta.norm = m.at("norm");
  mu.meta.t = m.at("t");
  mu.meta.eps = m.at("eps");
  mu.meta.rng_seed = m.at("rng_seed");
  mu.meta.overflow_count = m.at("overflow_count");
  mu.meta.truncated_fraction = m.at("truncated_fraction");
  mu.meta.config_hash = m.at("config_hash");
  mu.weights.resize(mu.grid.num_points());
  in.read(reinterpret_cast<char*>(mu.weights.data()),
          static_cast<std::streamsize>(mu.weights.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated measure snapshot: " + path);
  return mu;
}

void write_atoms(const std::string& path, const atomic::AtomicMeasure& atoms) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const int d = atoms.meta.dimension;
  for (int i = 0; i < d; ++i) out << "x" << (i + 1) << ",";
  out << "z\n";
  for (std::size_t i = 0; i < atoms.masses.size(); ++i) {
    for (int a = 0; a < d; ++a)
      out << format_double(atoms.locations[i][a]) << ",";
    out << format_double(atoms.masses[i]) << "\n";
  }
  json meta{{"gamma", atoms.meta.gamma},
            {"d", atoms.meta.dimension},
            {"alpha", atoms.meta.alpha},
            {"z_min", atoms.meta.z_min},
            {"compensator_mass", atoms.meta.compensator_mass},
            {"intensity_id", atoms.meta.intensity_id},
            {"rng_seed", atoms.meta.rng_seed},
            {"intensity_resolution", atoms.meta.intensity_resolution},
            {"config_hash", atoms.meta.config_hash}};
  std::ofstream side(path + ".meta.json");
  side << meta.dump(2) << "\n";
}

atomic::AtomicMeasure read_atoms(const std::string& path) {
  std::ifstream side(path + ".meta.json");
  if (!side) throw std::runtime_error("missing sidecar for " + path);
  json meta = json::parse(side);
  atomic::AtomicMeasure atoms;
  atoms.meta.gamma = meta.at("gamma");
  atoms.meta.dimension = meta.at("d");
  atoms.meta.alpha = meta.at("alpha");
  atoms.meta.z_min = meta.at("z_min");
  atoms.meta.compensator_mass = meta.at("compensator_mass");
  atoms.meta.intensity_id = meta.at("intensity_id");
  atoms.meta.rng_seed = meta.at("rng_seed");
  atoms.meta.intensity_resolution = meta.at("intensity_resolution");
  atoms.meta.config_hash = meta.at("config_hash");

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);  // header
  const int d = atoms.meta.dimension;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string cell;
    atomic::Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) {
      std::getline(is, cell, ',');
      p[a] = std::stod(cell);
    }
    std::getline(is, cell, ',');
    atoms.locations.push_back(p);
    atoms.masses.push_back(std::stod(cell));
  }
  return atoms;
}

void write_certificate_json(const std::string& path,
                            const spectral::DecompositionCertificate& cert,
                            const std::string& config_hash, uint64_t seed) {
  json j{{"a_const", cert.a_const},
         {"t_grid", cert.t_grid},
         {"identity_residual", cert.identity_residual},
         {"min_KW", cert.min_kw},
         {"min_KZ", cert.min_kz},
         {"tol", cert.tol},
         {"scan_spec", cert.scan_spec},
         {"kernel_id", cert.kernel_id},
         {"mollifier_id", cert.mollifier_id},
         {"config_hash", config_hash},
         {"seed", seed}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

spectral::DecompositionCertificate read_certificate_json(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j = json::parse(in);
  spectral::DecompositionCertificate cert;
  cert.a_const = j.at("a_const");
  cert.t_grid = j.at("t_grid").get<std::vector<double>>();
  cert.identity_residual =
      j.at("identity_residual").get<std::vector<double>>();
  cert.min_kw = j.at("min_KW");
  cert.min_kz = j.at("min_KZ");
  cert.tol = j.at("tol");
  cert.scan_spec = j.at("scan_spec");
  cert.kernel_id = j.at("kernel_id");
  cert.mollifier_id = j.at("mollifier_id");
  return cert;
}

void write_certificate_csv(const std::string& path,
                           const kernels::SeedKernel& k,
                           const kernels::Mollifier& m,
                           const spectral::DecompositionCertificate& cert,
                           const spectral::ScanGrid& scan) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,omega,k_hat_W,k_hat_Z_t,delta_hat_t\n";
  for (double t : cert.t_grid)
    for (double s : scan.nodes) {
      if (s <= 0.0) continue;
      out << format_double(t) << "," << format_double(s) << ","
          << format_double(spectral::k_hat_W(k, m, cert.a_const, s)) << ","
          << format_double(spectral::k_hat_Z(k, m, cert.a_const, t, s)) << ","
          << format_double(spectral::delta_hat(k, m, cert.a_const, t, s))
          << "\n";
    }
}

void write_scalar_csv(const std::string& path, const std::string& column,
                      const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << column << "\n";
  for (double v : values) out << format_double(v) << "\n";
}

}  // namespace chaoscope::io
