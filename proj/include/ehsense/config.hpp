#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehsense/model.hpp"
#include "ehsense/simulator.hpp"

namespace ehsense {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchSettings {
  int episodes = 8;
  long horizon = 20000;
  std::uint64_t seed = 1;
  int max_passes = 4;
  int neighborhood = 0;
  std::vector<double> candidates;  // empty selects default_candidates
  std::string init = "optimal";    // or "thresholds:PATH"
};

struct VerifySettings {
  int oracle_horizon = 8;
  int max_thresholds = 3;
  double dominance_min_belief = 0.05;
};

/// One point of the sweep: the base model with q and/or tau substituted.
struct SweepPoint {
  double q = 0.0;    // Pr[harvest > 0]
  double tau = 0.0;  // e_sense / e_tx
  SystemParams params;

  /// File-name fragment, e.g. "q0.1_tau0.2".
  std::string tag() const;
};

struct ExperimentConfig {
  SystemParams model;
  std::optional<int> harvest_amount;  // set when the two-point shorthand is used
  int grid_resolution = 1001;
  double tol = 1e-9;
  int max_iter = 0;
  RunConfig simulation;
  std::vector<double> sweep_q;    // empty: model as given
  std::vector<double> sweep_tau;  // empty: model as given
  std::vector<std::string> policies{"optimal"};
  SearchSettings search;
  VerifySettings verify;
  std::filesystem::path output_dir = "out";
  std::filesystem::path base_dir;  // relative paths inside the config resolve here
  std::uint64_t hash = 0;

  /// tau-major cartesian product of the sweep axes.
  std::vector<SweepPoint> sweep_points() const;
  std::filesystem::path resolve(const std::string& path) const;
};

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);

/// Parses and validates a JSON config. `seed_override` replaces both the
/// simulation and search seeds before hashing.
ExperimentConfig parse_config(const std::string& json_text,
                              std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace ehsense
