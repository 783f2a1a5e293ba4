#include "carroll/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace carroll::cli {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw UsageError("config: '" + key + "' is not a number: " + v);
  return out;
}
}  // namespace

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw UsageError("config: missing key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key) const { return parse_double(key, get(key)); }

long RunConfig::get_int(const std::string& key) const {
  const auto& v = get(key);
  long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw UsageError("config: '" + key + "' is not an integer: " + v);
  return out;
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw UsageError("config: '" + key + "' is an empty list");
  return out;
}

const std::vector<KeySpec>& common_keys() {
  static const std::vector<KeySpec> keys{
      {"m", "1", "mass"},
      {"c", "1", "speed of light"},
      {"hbar", "1", "reduced Planck constant"},
      {"omega", "0.7", "spatial oscillator frequency"},
      {"k_c", "1", "nearest-neighbour coupling"},
      {"omega_t", "1", "temporal oscillator frequency"},
      {"k_t", "0.5", "temporal coupling"},
      {"sigma", "1", "boundary pulse width"},
      {"t0", "0", "boundary pulse centre"},
      {"s_rel", "1", "relative profile width"},
      {"g0", "1", "contact coupling"},
      {"lambda", "0", "quartic-well shift"},
      {"seed", "1", "random seed (overridden by --seed)"},
  };
  return keys;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::pair<std::string, std::string> split_assignment(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

RunConfig resolve(const std::string& command, const std::vector<KeySpec>& command_keys,
                  const std::map<std::string, std::string>& file_values,
                  const std::vector<std::string>& sets, const std::string& out_dir,
                  const std::uint64_t* seed_flag) {
  RunConfig cfg;
  cfg.command = command;
  cfg.out_dir = out_dir;
  std::set<std::string> numeric;
  for (const auto& k : common_keys()) {
    cfg.values[k.name] = k.default_value;
    numeric.insert(k.name);
  }
  for (const auto& k : command_keys) cfg.values[k.name] = k.default_value;

  auto assign = [&](const std::string& key, const std::string& value) {
    if (!cfg.values.count(key)) {
      std::string known;
      for (const auto& [k, v] : cfg.values) known += (known.empty() ? "" : " ") + k;
      throw UsageError("config: unknown key '" + key + "' for " + command + " (known: " + known + ")");
    }
    cfg.values[key] = value;
  };
  for (const auto& [k, v] : file_values) assign(k, v);
  for (const auto& s : sets) {
    const auto [k, v] = split_assignment(s);
    assign(k, v);
  }
  if (seed_flag) cfg.values["seed"] = std::to_string(*seed_flag);

  for (const auto& k : numeric)
    if (k != "seed") parse_double(k, cfg.values[k]);
  const long seed = cfg.get_int("seed");
  if (seed < 0) throw UsageError("config: seed must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  return cfg;
}

PhysParams params_of(const RunConfig& cfg) {
  PhysParams p;
  p.m = cfg.get_double("m");
  p.c = cfg.get_double("c");
  p.hbar = cfg.get_double("hbar");
  p.omega = cfg.get_double("omega");
  p.k_c = cfg.get_double("k_c");
  p.omega_t = cfg.get_double("omega_t");
  p.k_t = cfg.get_double("k_t");
  p.sigma = cfg.get_double("sigma");
  p.t0 = cfg.get_double("t0");
  p.s_rel = cfg.get_double("s_rel");
  p.g0 = cfg.get_double("g0");
  p.lambda = cfg.get_double("lambda");
  return p;
}

}  // namespace carroll::cli
