#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehsense/policy.hpp"
#include "ehsense/search.hpp"
#include "ehsense/simulator.hpp"
#include "ehsense/solver.hpp"

namespace ehsense {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "# config_hash=<16 hex digits>"
std::string hash_comment(std::uint64_t config_hash);

// Every CSV starts with the hash comment, then a header row.

/// battery,belief,V,Q_D,Q_L,Q_OD,Q_OT,Q_H (Q cells empty where undefined).
void write_value_csv(std::ostream& out, const ValueTable& v, std::uint64_t config_hash);
/// battery,belief,action with action codes D=0 L=1 OD=2 OT=3 H=4.
void write_region_csv(std::ostream& out, const PolicyTable& policy, std::uint64_t config_hash);

/// One line per battery level: "<b>: <x0> <A0> <x1> <A1> ... <xk>".
void write_thresholds(std::ostream& out, const ThresholdPolicy& policy,
                      std::uint64_t config_hash);
/// Inverse of write_thresholds; '#' lines are ignored. Rows must cover 0..B
/// in order.
ThresholdPolicy read_thresholds(std::istream& in);
ThresholdPolicy read_thresholds_file(const std::filesystem::path& path);

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace, std::uint64_t config_hash);

struct ThroughputRow {
  std::string policy;
  double q = 0.0;
  double tau = 0.0;
  ThroughputStats stats;
};
void write_throughput_csv(std::ostream& out, const std::vector<ThroughputRow>& rows,
                          std::uint64_t config_hash);

void write_search_log_csv(std::ostream& out, const std::vector<SearchLogEntry>& log,
                          std::uint64_t config_hash);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ehsense
