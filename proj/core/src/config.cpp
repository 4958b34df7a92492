#include "chaoscope/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace chaoscope::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

struct KeyValue {
  std::string value;
  bool used = false;
};

}  // namespace

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> suites = {
      "decomp", "spectrum", "laplace", "moments", "kahane", "tails"};
  return suites;
}

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  std::map<std::string, KeyValue> kv;
  std::string section;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        result.violations.push_back("line " + std::to_string(line_no) +
                                    ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      result.violations.push_back("line " + std::to_string(line_no) +
                                  ": expected key = value");
      continue;
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    kv[key] = {trim(line.substr(eq + 1)), false};
  }

  RunConfig cfg;
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  };
  auto take_double = [&](const std::string& key, double& dst) {
    if (auto v = take(key)) {
      try {
        dst = std::stod(*v);
      } catch (...) {
        result.violations.push_back(key + ": not a number: " + *v);
      }
    }
  };
  auto take_int = [&](const std::string& key, auto& dst) {
    if (auto v = take(key)) {
      try {
        dst = static_cast<std::remove_reference_t<decltype(dst)>>(
            std::stoll(*v));
      } catch (...) {
        result.violations.push_back(key + ": not an integer: " + *v);
      }
    }
  };
  auto take_bool = [&](const std::string& key, bool& dst) {
    if (auto v = take(key)) {
      if (*v == "true" || *v == "1")
        dst = true;
      else if (*v == "false" || *v == "0")
        dst = false;
      else
        result.violations.push_back(key + ": expected true/false: " + *v);
    }
  };
  auto take_list = [&](const std::string& key, std::vector<double>& dst) {
    if (auto v = take(key)) {
      try {
        dst = parse_list(*v);
      } catch (...) {
        result.violations.push_back(key + ": bad number list: " + *v);
      }
    }
  };

  if (auto v = take("kernel.kind")) cfg.kernel.kind = *v;
  take_int("kernel.d", cfg.kernel.dimension);
  if (auto v = take("kernel.file")) cfg.kernel.table_path = *v;
  take_bool("kernel.band_limited", cfg.kernel.band_limited);

  if (auto v = take("mollifier.kind")) cfg.mollifier.kind = *v;
  take_int("mollifier.order", cfg.mollifier.order);
  if (auto v = take("mollifier.file")) cfg.mollifier.table_path = *v;

  take_int("grid.n", cfg.grid.points_per_side);
  take_double("grid.length", cfg.grid.side_length);

  take_double("regime.gamma", cfg.regime.gamma);
  take_list("regime.t_grid", cfg.regime.t_grid);
  take_list("regime.eps_grid", cfg.regime.eps_grid);
  if (auto v = take("regime.a_const")) {
    if (*v != "auto") {
      try {
        cfg.regime.a_override = std::stod(*v);
      } catch (...) {
        result.violations.push_back("regime.a_const: expected auto or a "
                                    "number: " + *v);
      }
    }
  }

  take_int("sampler.replicas", cfg.sampler.replicas);
  take_double("sampler.z_min", cfg.sampler.z_min);
  take_bool("sampler.compensate", cfg.sampler.compensate);
  take_int("sampler.field_replicas", cfg.sampler.field_replicas);

  if (auto v = take("run.suites")) {
    std::istringstream is(*v);
    std::string item;
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (!item.empty()) cfg.suites.push_back(item);
    }
  }
  if (auto v = take("run.out")) cfg.out_dir = *v;
  take_int("run.seed", cfg.seed);
  take_int("run.threads", cfg.threads);

  for (const auto& [key, entry] : kv)
    if (!entry.used) result.violations.push_back("unknown key: " + key);

  // semantic checks
  if (cfg.kernel.kind != "ball" && cfg.kernel.kind != "table")
    result.violations.push_back("kernel.kind must be ball or table");
  if (cfg.kernel.kind == "table" && cfg.kernel.table_path.empty())
    result.violations.push_back("kernel.kind=table requires kernel.file");
  if (cfg.kernel.dimension < 1 || cfg.kernel.dimension > 3)
    result.violations.push_back("kernel.d must be 1, 2, or 3");
  if (cfg.mollifier.kind != "standard" && cfg.mollifier.kind != "table")
    result.violations.push_back("mollifier.kind must be standard or table");
  if (cfg.mollifier.kind == "table" && cfg.mollifier.table_path.empty())
    result.violations.push_back("mollifier.kind=table requires mollifier.file");
  if (cfg.mollifier.order == 0)
    cfg.mollifier.order = std::max(1, (cfg.kernel.dimension + 1) / 2);
  if (2 * cfg.mollifier.order < cfg.kernel.dimension)
    result.violations.push_back(
        "mollifier.order too small: need 2*order >= d");
  if (cfg.grid.points_per_side < 8 ||
      (cfg.grid.points_per_side & (cfg.grid.points_per_side - 1)) != 0)
    result.violations.push_back("grid.n must be a power of two >= 8");
  if (!(cfg.grid.side_length > 0.0))
    result.violations.push_back("grid.length must be positive");
  if (!(cfg.sampler.z_min > 0.0))
    result.violations.push_back("sampler.z_min must be positive");
  if (cfg.regime.a_override != 0.0 &&
      !(cfg.regime.a_override > 0.0 && cfg.regime.a_override < 1.0))
    result.violations.push_back("regime.a_const must lie in (0,1)");

  const double gamma_c = std::sqrt(2.0 * cfg.kernel.dimension);
  for (const auto& suite : cfg.suites) {
    const auto& known = known_suites();
    if (std::find(known.begin(), known.end(), suite) == known.end())
      result.violations.push_back("unknown suite: " + suite);
    const bool needs_supercritical =
        suite == "laplace" || suite == "moments" || suite == "tails";
    if (needs_supercritical && !(cfg.regime.gamma > gamma_c)) {
      std::ostringstream os;
      os << "suite " << suite << " requires gamma > sqrt(2d) = " << gamma_c
         << ", got " << cfg.regime.gamma;
      result.violations.push_back(os.str());
    }
  }

  if (result.violations.empty()) result.config = std::move(cfg);
  return result;
}

ParseResult parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.violations.push_back("cannot open config file: " + path);
    return r;
  }
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string RunConfig::canonical_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "kernel " << kernel.kind << " " << kernel.dimension << " "
     << kernel.table_path << " " << kernel.band_limited << "\n"
     << "mollifier " << mollifier.kind << " " << mollifier.order << " "
     << mollifier.table_path << "\n"
     << "grid " << grid.points_per_side << " " << grid.side_length << "\n"
     << "regime " << regime.gamma << " a=" << regime.a_override << " t=";
  for (double t : regime.t_grid) os << t << ",";
  os << " eps=";
  for (double e : regime.eps_grid) os << e << ",";
  os << "\nsampler " << sampler.replicas << " " << sampler.z_min << " "
     << sampler.compensate << " " << sampler.field_replicas << "\nsuites ";
  for (const auto& s : suites) os << s << ",";
  os << "\nseed " << seed << "\n";
  return os.str();
}

std::string RunConfig::config_hash() const {
  const std::string text = canonical_text();
  uint64_t h = UINT64_C(0xcbf29ce484222325);
  for (unsigned char c : text) {
    h ^= c;
    h *= UINT64_C(0x100000001b3);
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace chaoscope::cli
