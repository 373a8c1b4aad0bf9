#include "ehsense/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ehsense {

namespace {

std::string num(double x, int digits = 12) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace

std::string hash_comment(std::uint64_t config_hash) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "# config_hash=%016" PRIx64, config_hash);
  return buf;
}

void write_value_csv(std::ostream& out, const ValueTable& v, std::uint64_t config_hash) {
  out << hash_comment(config_hash) << "\n";
  out << "battery,belief,V";
  for (Action a : kAllActions) out << ",Q_" << action_label(a);
  out << "\n";
  for (int b = 0; b <= v.b_max(); ++b) {
    for (int i = 0; i < v.cols(); ++i) {
      out << b << ',' << num(v.grid().point(i), 10) << ',' << num(v.value(b, i));
      for (Action a : kAllActions) {
        out << ',';
        if (v.has_q() && ValueTable::defined(v.q(a, b, i))) out << num(v.q(a, b, i));
      }
      out << "\n";
    }
  }
}

void write_region_csv(std::ostream& out, const PolicyTable& policy, std::uint64_t config_hash) {
  out << hash_comment(config_hash) << "\n";
  out << "battery,belief,action\n";
  for (int b = 0; b <= policy.b_max(); ++b) {
    for (int i = 0; i < policy.grid().size(); ++i) {
      out << b << ',' << num(policy.grid().point(i), 10) << ','
          << action_code(policy.at(b, i)) << "\n";
    }
  }
}

void write_thresholds(std::ostream& out, const ThresholdPolicy& policy,
                      std::uint64_t config_hash) {
  out << hash_comment(config_hash) << "\n";
  for (int b = 0; b <= policy.b_max(); ++b) {
    const auto& row = policy.rows[static_cast<std::size_t>(b)];
    out << b << ':';
    for (std::size_t k = 0; k < row.labels.size(); ++k)
      out << ' ' << num(row.breakpoints[k], 17) << ' ' << action_label(row.labels[k]);
    out << ' ' << num(row.breakpoints.back(), 17) << "\n";
  }
}

ThresholdPolicy read_thresholds(std::istream& in) {
  ThresholdPolicy policy;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const std::string& what) {
      throw FormatError("thresholds line " + std::to_string(line_no) + ": " + what);
    };
    const auto colon = line.find(':');
    if (colon == std::string::npos) fail("missing ':'");
    int b = -1;
    try {
      b = std::stoi(line.substr(0, colon));
    } catch (const std::exception&) {
      fail("bad battery level");
    }
    if (b != policy.b_max() + 1) fail("battery levels must be consecutive from 0");

    std::istringstream tokens(line.substr(colon + 1));
    ThresholdRow row;
    row.breakpoints.clear();
    row.labels.clear();
    std::string tok;
    bool expect_number = true;
    while (tokens >> tok) {
      if (expect_number) {
        try {
          std::size_t used = 0;
          row.breakpoints.push_back(std::stod(tok, &used));
          if (used != tok.size()) fail("bad breakpoint '" + tok + "'");
        } catch (const std::invalid_argument&) {
          fail("bad breakpoint '" + tok + "'");
        }
      } else {
        try {
          row.labels.push_back(parse_action(tok));
        } catch (const ModelError& e) {
          fail(e.what());
        }
      }
      expect_number = !expect_number;
    }
    if (row.labels.empty() || row.breakpoints.size() != row.labels.size() + 1)
      fail("expected alternating breakpoints and actions");
    if (row.breakpoints.front() != 0.0 || row.breakpoints.back() != 1.0)
      fail("row must span [0, 1]");
    for (std::size_t k = 0; k + 1 < row.breakpoints.size(); ++k) {
      if (!(row.breakpoints[k] <= row.breakpoints[k + 1])) fail("breakpoints must be sorted");
    }
    policy.rows.push_back(std::move(row));
  }
  if (policy.rows.empty()) throw FormatError("thresholds file has no rows");
  return policy;
}

ThresholdPolicy read_thresholds_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open thresholds file " + path.string());
  return read_thresholds(in);
}

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace, std::uint64_t config_hash) {
  out << hash_comment(config_hash) << "\n";
  out << "slot,channel_good,harvest,battery,belief,action,observation,bits,battery_next\n";
  for (const auto& r : trace.slots) {
    out << r.slot << ',' << (r.channel_good ? 1 : 0) << ',' << r.harvest << ',' << r.battery
        << ',' << num(r.belief) << ',' << action_code(r.action) << ','
        << observation_label(r.observation) << ',' << num(r.bits) << ',' << r.battery_next
        << "\n";
  }
}

void write_throughput_csv(std::ostream& out, const std::vector<ThroughputRow>& rows,
                          std::uint64_t config_hash) {
  out << hash_comment(config_hash) << "\n";
  out << "policy,q,tau,mean_bits_per_slot,std_error,episodes,horizon,seed\n";
  for (const auto& r : rows) {
    out << r.policy << ',' << num(r.q) << ',' << num(r.tau) << ','
        << num(r.stats.mean_bits_per_slot) << ',' << num(r.stats.std_error) << ','
        << r.stats.episodes << ',' << r.stats.horizon << ',' << r.stats.seed << "\n";
  }
}

void write_search_log_csv(std::ostream& out, const std::vector<SearchLogEntry>& log,
                          std::uint64_t config_hash) {
  out << hash_comment(config_hash) << "\n";
  out << "pass,battery,threshold,candidate,throughput,accepted\n";
  for (const auto& e : log) {
    out << e.pass << ',' << e.battery << ',' << e.threshold << ',' << num(e.candidate) << ','
        << num(e.throughput) << ',' << (e.accepted ? 1 : 0) << "\n";
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << content;
  if (!out) throw FormatError("write failed for " + path.string());
}

}  // namespace ehsense
