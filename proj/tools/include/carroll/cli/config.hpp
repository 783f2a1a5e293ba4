#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "carroll/params.hpp"

namespace carroll::cli {

inline constexpr const char* kFormatTag = "carroll-lab format=1 version=v0.1.0";

// Bad flags, unknown keys, unparsable values. Maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  std::string name;
  std::string default_value;
  std::string help;
};

// Fully resolved configuration of one run.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> values;
  std::string out_dir = ".";
  std::uint64_t seed = 1;

  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_int(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;
};

// Keys shared by every command (physical parameters and seed).
const std::vector<KeySpec>& common_keys();

// Parses a flat key=value file; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Splits "key=value"; throws UsageError when there is no '='.
std::pair<std::string, std::string> split_assignment(const std::string& s);

// Layers defaults, file, and --set overrides; rejects keys not in
// common_keys() + command_keys and validates that numeric keys parse.
RunConfig resolve(const std::string& command, const std::vector<KeySpec>& command_keys,
                  const std::map<std::string, std::string>& file_values,
                  const std::vector<std::string>& sets, const std::string& out_dir,
                  const std::uint64_t* seed_flag);

PhysParams params_of(const RunConfig& cfg);

}  // namespace carroll::cli
