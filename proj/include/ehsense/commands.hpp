#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>

namespace ehsense {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNonConvergence = 2,
  kExitVerification = 3,
};

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;  // overrides output_dir
  std::optional<std::uint64_t> seed;             // overrides simulation and search seeds
  bool quiet = false;
};

// Each command loads the config, runs every sweep point and returns an exit
// code. Progress goes to `log` unless quiet; errors always go to `err`.

/// value_<tag>.csv, regions_<tag>.csv, thresholds_<tag>.txt
int cmd_solve(const CommandOptions& opts, std::ostream& log = std::cout,
              std::ostream& err = std::cerr);
/// regions_<tag>.csv and thresholds_<tag>.txt only.
int cmd_export_regions(const CommandOptions& opts, std::ostream& log = std::cout,
                       std::ostream& err = std::cerr);
/// throughput.csv: one row per (sweep point, policy).
int cmd_simulate(const CommandOptions& opts, std::ostream& log = std::cout,
                 std::ostream& err = std::cerr);
/// search_thresholds_<tag>.txt, search_log_<tag>.csv, search_throughput.csv
int cmd_search(const CommandOptions& opts, std::ostream& log = std::cout,
               std::ostream& err = std::cerr);
/// Prints the check report (also verify_<tag>.txt); 0 iff every check passes.
int cmd_verify(const CommandOptions& opts, std::ostream& log = std::cout,
               std::ostream& err = std::cerr);

}  // namespace ehsense
