#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "carroll/cli/config.hpp"
#include "carroll/cli/csv.hpp"
#include "carroll/grid.hpp"

namespace carroll::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumeric = 3 };

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<KeySpec> keys;
  std::function<int(const RunConfig&, OutputDir&, std::ostream& log)> run;
};

const std::vector<CommandSpec>& commands();
// Throws UsageError for unknown names.
const CommandSpec& find_command(const std::string& name);

// Runs the command into cfg.out_dir and writes manifest.txt there. Errors
// propagate as exceptions; the return value is the command's exit status.
int execute(const CommandSpec& cmd, const RunConfig& cfg, std::ostream& log);

// Normalized Hermite functions on the grid (orbital fixtures for hbt).
std::vector<cplx> hermite_orbital(const TemporalGrid& g, int k);

// Maps exceptions from execute() to exit codes, printing to err.
int run_guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace carroll::cli
