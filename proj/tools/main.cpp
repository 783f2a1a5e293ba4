#include <CLI11.hpp>

#include <iostream>

#include "carroll/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace carroll::cli;
  CLI::App app{"carroll-lab: many-body Carroll-Schroedinger numerical lab"};
  std::string command, config_path, out_dir = ".";
  std::vector<std::string> sets;
  std::uint64_t seed = 0;

  std::string names;
  for (const auto& c : commands()) names += "\n  " + c.name + ": " + c.help;
  app.add_option("command", command, "one of:" + names)->required();
  app.add_option("--config", config_path, "flat key=value file");
  app.add_option("--set", sets, "override one key (repeatable)")->allow_extra_args(false);
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  return run_guarded(
      [&] {
        const auto& cmd = find_command(command);
        const auto file = config_path.empty() ? std::map<std::string, std::string>{} : read_config_file(config_path);
        const auto cfg = resolve(cmd.name, cmd.keys, file, sets, out_dir, seed_opt->count() ? &seed : nullptr);
        return execute(cmd, cfg, std::cout);
      },
      std::cerr);
}
