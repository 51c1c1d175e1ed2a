#include "run_config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace spamri_cli {

const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = {
      {"seed", "0", "top-level seed; mask, noise and chain seeds derive from it"},
      {"out_dir", "out", "directory for every output file"},
      {"threads", "1", "worker threads for the benchmark command"},
      {"phantom", "shepp-logan", "shepp-logan | blocks"},
      {"height", "64", "image rows"},
      {"width", "64", "image columns"},
      {"coils", "1", "number of receiver coils"},
      {"coil_kind", "ones", "ones | gaussian-lobes"},
      {"snr_db", "30", "simulated measurement SNR in dB"},
      {"scheme", "variable-density-random", "uniform-random | variable-density-random"},
      {"ratio", "0.3", "fraction of k-space locations kept"},
      {"center_fraction", "0.04", "fully sampled central block, as a fraction of the grid"},
      {"method", "mcmc-tv", "mcmc-tv | admm-tv | admm-wav | ifft"},
      {"truth_file", "", "ground-truth image (default <out_dir>/truth.f64)"},
      {"coils_file", "", "coil maps (default <out_dir>/coils.c128)"},
      {"mask_file", "", "sampling mask (default <out_dir>/mask.pbm)"},
      {"kspace_file", "", "k-space data (default <out_dir>/kspace.c128)"},
      {"report_file", "", "report CSV (default <out_dir>/report.csv)"},
      {"rho", "0.005", "coupling std of the splitting terms"},
      {"alpha", "0.005", "std of the auxiliary variables"},
      {"sigma", "0", "noise std per component; 0 reads it from the k-space sidecar"},
      {"lambda", "0", "Moreau-Yosida parameter; 0 means rho^2"},
      {"gamma", "0", "Langevin step; 0 means rho^2/4"},
      {"n_mc", "2000", "total sampler iterations"},
      {"n_bi", "1700", "burn-in iterations"},
      {"tau_init", "0", "initial TV weight; 0 means dim / TV(x0)"},
      {"fix_tau", "false", "keep tau at tau_init instead of estimating it"},
      {"tv_variant", "isotropic", "isotropic | anisotropic"},
      {"tv_max_iters", "20", "Chambolle iterations per prox inside the sampler"},
      {"tv_tol", "1e-5", "Chambolle stopping tolerance inside the sampler"},
      {"tau_min", "1e-4", "lower bound of tau"},
      {"tau_max", "1e3", "upper bound of tau"},
      {"delta0", "10", "tau step scale"},
      {"decay", "0.8", "tau step decay exponent"},
      {"sapg_dim", "0", "dimension factor of the tau update; 0 means pixel count"},
      {"reg_weight", "0.1", "ADMM regularisation weight when no search is done"},
      {"admm_penalty", "1", "ADMM augmented-Lagrangian penalty"},
      {"admm_max_iters", "100", "ADMM iterations"},
      {"admm_tol", "1e-6", "ADMM relative residual tolerance"},
      {"admm_cg_iters", "10", "conjugate-gradient steps per ADMM x-update"},
      {"weight_search", "auto", "auto (search when truth_file exists) | off"},
      {"weight_grid", "1e-3,3e-3,1e-2,3e-2,1e-1,3e-1,1,3,10", "weights tried by the search"},
      {"ratios", "0.05,0.1,0.2,0.3,0.4", "benchmark sampling ratios"},
      {"seeds", "1,2,3", "benchmark seeds"},
      {"methods", "ifft,admm-wav,admm-tv,mcmc-tv", "methods for benchmark and report"},
      {"report_cc", "true", "report std/error correlation for mcmc-tv"},
      {"report_timing", "false", "fill the runtime_s column"},
      {"write_maps", "true", "benchmark writes reconstruction, error and std images"},
  };
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double d = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), d);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigKeyError("config key '" + key + "': '" + v + "' is not a number");
  }
  return d;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t u = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), u);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigKeyError("config key '" + key + "': '" + v + "' is not a non-negative integer");
  }
  return u;
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& k : known_keys()) values_[k.key] = k.default_value;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream s;
  s << in.rdbuf();
  load_text(s.str(), path);
}

void RunConfig::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigKeyError(origin + ":" + std::to_string(n) + ": expected 'key = value'");
    }
    try {
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigKeyError& e) {
      throw ConfigKeyError(origin + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigKeyError("unknown config key '" + key + "'");
  it->second = value;
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigKeyError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string& RunConfig::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigKeyError("unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::num(const std::string& key) const { return parse_double(key, str(key)); }

std::uint64_t RunConfig::uint(const std::string& key) const { return parse_uint(key, str(key)); }

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = str(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigKeyError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> RunConfig::num_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(str(key))) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::uint64_t> RunConfig::uint_list(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(str(key))) out.push_back(parse_uint(key, item));
  return out;
}

std::vector<std::string> RunConfig::str_list(const std::string& key) const {
  return split(str(key));
}

std::string RunConfig::path(const std::string& key, const std::string& fallback) const {
  const std::string& v = str(key);
  if (!v.empty()) return v;
  return (std::filesystem::path(str("out_dir")) / fallback).string();
}

std::string RunConfig::dump() const {
  std::ostringstream s;
  for (const auto& k : known_keys()) s << k.key << " = " << values_.at(k.key) << '\n';
  return s.str();
}

}  // namespace spamri_cli
