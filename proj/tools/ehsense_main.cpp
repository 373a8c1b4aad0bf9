#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ehsense/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Energy-harvesting channel sensing: solve, simulate, search, verify"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const ehsense::CommandOptions&, std::ostream&, std::ostream&);
  };
  const Sub subs[] = {
      {"solve", "value iteration; value, region and threshold files", ehsense::cmd_solve},
      {"simulate", "Monte Carlo throughput of the configured policies", ehsense::cmd_simulate},
      {"search", "direct threshold search from the solved policy", ehsense::cmd_search},
      {"verify", "oracle, structural and dominance checks", ehsense::cmd_verify},
      {"export-regions", "policy regions and thresholds only", ehsense::cmd_export_regions},
  };

  std::vector<std::pair<CLI::App*, const Sub*>> commands;
  std::vector<CLI::Option*> seed_opts;
  for (const auto& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    cmd->add_option("--config", config, "JSON experiment config")->required()->check(
        CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
    seed_opts.push_back(cmd->add_option("--seed", seed, "overrides simulation and search seeds"));
    cmd->add_flag("--quiet", quiet, "suppress progress messages");
    commands.emplace_back(cmd, &sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ehsense::kExitValidation;
  }

  ehsense::CommandOptions opts;
  opts.config = config;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  opts.quiet = quiet;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    if (!commands[k].first->parsed()) continue;
    if (seed_opts[k]->count() > 0) opts.seed = seed;
    return commands[k].second->run(opts, std::cout, std::cerr);
  }
  return ehsense::kExitValidation;
}
