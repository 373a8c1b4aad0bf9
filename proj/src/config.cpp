#include "ehsense/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ehsense {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> known) {
  if (!obj.is_object()) throw ConfigError("'" + section + "' must be an object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + section);
  }
}

template <class T>
void read(const json& obj, const char* key, T& into) {
  if (auto it = obj.find(key); it != obj.end()) into = it->get<T>();
}

int e_sense_for(double tau, int e_tx) {
  const double exact = tau * e_tx;
  const double rounded = std::round(exact);
  if (std::abs(exact - rounded) > 1e-6)
    throw ConfigError("tau * e_tx must be an integer number of energy units");
  return static_cast<int>(rounded);
}

InitialConditions parse_initial(const json& j) {
  reject_unknown(j, "simulation.initial", {"battery", "belief", "good_probability"});
  InitialConditions init;
  read(j, "battery", init.battery);
  if (j.contains("belief") && !j["belief"].is_null()) init.belief = j["belief"].get<double>();
  if (j.contains("good_probability") && !j["good_probability"].is_null())
    init.good_probability = j["good_probability"].get<double>();
  return init;
}

void check_probability(std::optional<double> p, const char* what) {
  if (p && !(*p >= 0.0 && *p <= 1.0)) throw ConfigError(std::string(what) + " outside [0, 1]");
}

ExperimentConfig from_json(const json& root) {
  reject_unknown(root, "config",
                 {"model", "grid", "solver", "simulation", "sweep", "policies", "search",
                  "verify", "output_dir"});
  ExperimentConfig cfg;

  if (!root.contains("model")) throw ConfigError("missing 'model' section");
  const json& m = root["model"];
  reject_unknown(m, "model",
                 {"lambda0", "lambda1", "b_max", "e_tx", "e_sense", "tau", "r_low", "r_high",
                  "beta", "energy_pmf", "harvest"});
  for (const char* key : {"lambda0", "lambda1", "b_max", "e_tx", "r_high", "beta"}) {
    if (!m.contains(key)) throw ConfigError(std::string("model.") + key + " is required");
  }
  auto& p = cfg.model;
  read(m, "lambda0", p.lambda0);
  read(m, "lambda1", p.lambda1);
  read(m, "b_max", p.b_max);
  read(m, "e_tx", p.e_tx);
  read(m, "r_low", p.r_low);
  read(m, "r_high", p.r_high);
  read(m, "beta", p.beta);
  if (m.contains("e_sense") == m.contains("tau"))
    throw ConfigError("model needs exactly one of e_sense or tau");
  if (m.contains("e_sense")) {
    read(m, "e_sense", p.e_sense);
  } else {
    if (p.e_tx <= 0) throw ConfigError("model.e_tx must be positive");
    p.e_sense = e_sense_for(m["tau"].get<double>(), p.e_tx);
  }
  if (m.contains("energy_pmf") == m.contains("harvest"))
    throw ConfigError("model needs exactly one of energy_pmf or harvest");
  if (m.contains("harvest")) {
    const json& h = m["harvest"];
    reject_unknown(h, "model.harvest", {"amount", "q"});
    if (!h.contains("amount") || !h.contains("q"))
      throw ConfigError("model.harvest needs amount and q");
    cfg.harvest_amount = h["amount"].get<int>();
    if (*cfg.harvest_amount < 1) throw ConfigError("model.harvest.amount must be >= 1");
    p.energy_pmf = two_point_pmf(*cfg.harvest_amount, h["q"].get<double>());
  } else {
    p.energy_pmf = m["energy_pmf"].get<std::vector<double>>();
  }

  if (root.contains("grid")) {
    reject_unknown(root["grid"], "grid", {"resolution"});
    read(root["grid"], "resolution", cfg.grid_resolution);
  }
  if (cfg.grid_resolution < 2) throw ConfigError("grid.resolution must be >= 2");

  if (root.contains("solver")) {
    reject_unknown(root["solver"], "solver", {"tol", "max_iter"});
    read(root["solver"], "tol", cfg.tol);
    read(root["solver"], "max_iter", cfg.max_iter);
  }
  if (!(cfg.tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (cfg.max_iter < 0) throw ConfigError("solver.max_iter must be >= 0");

  if (root.contains("simulation")) {
    const json& s = root["simulation"];
    reject_unknown(s, "simulation", {"episodes", "horizon", "seed", "initial"});
    read(s, "episodes", cfg.simulation.episodes);
    read(s, "horizon", cfg.simulation.horizon);
    read(s, "seed", cfg.simulation.seed);
    if (s.contains("initial")) cfg.simulation.initial = parse_initial(s["initial"]);
  }
  if (cfg.simulation.episodes < 1 || cfg.simulation.horizon < 1)
    throw ConfigError("simulation needs episodes >= 1 and horizon >= 1");
  check_probability(cfg.simulation.initial.belief, "simulation.initial.belief");
  check_probability(cfg.simulation.initial.good_probability,
                    "simulation.initial.good_probability");

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    reject_unknown(s, "sweep", {"q", "tau"});
    if (s.contains("q")) {
      cfg.sweep_q = s["q"].get<std::vector<double>>();
      if (cfg.sweep_q.empty()) throw ConfigError("sweep.q must be nonempty");
      if (!cfg.harvest_amount) throw ConfigError("sweep.q needs the model.harvest shorthand");
    }
    if (s.contains("tau")) {
      cfg.sweep_tau = s["tau"].get<std::vector<double>>();
      if (cfg.sweep_tau.empty()) throw ConfigError("sweep.tau must be nonempty");
    }
  }

  if (root.contains("policies")) {
    cfg.policies = root["policies"].get<std::vector<std::string>>();
    if (cfg.policies.empty()) throw ConfigError("policies must be nonempty");
    for (const auto& name : cfg.policies) {
      if (name.rfind("thresholds:", 0) == 0) continue;
      if (name != "optimal" && name != "single_threshold" && name != "greedy" &&
          name != "opportunistic" && name != "defer")
        throw ConfigError("unknown policy '" + name + "'");
    }
  }

  if (root.contains("search")) {
    const json& s = root["search"];
    reject_unknown(s, "search",
                   {"episodes", "horizon", "seed", "max_passes", "neighborhood", "candidates",
                    "init"});
    read(s, "episodes", cfg.search.episodes);
    read(s, "horizon", cfg.search.horizon);
    read(s, "seed", cfg.search.seed);
    read(s, "max_passes", cfg.search.max_passes);
    read(s, "neighborhood", cfg.search.neighborhood);
    read(s, "candidates", cfg.search.candidates);
    read(s, "init", cfg.search.init);
  }
  if (cfg.search.init != "optimal" && cfg.search.init.rfind("thresholds:", 0) != 0)
    throw ConfigError("search.init must be 'optimal' or 'thresholds:PATH'");

  if (root.contains("verify")) {
    const json& v = root["verify"];
    reject_unknown(v, "verify", {"oracle_horizon", "max_thresholds", "dominance_min_belief"});
    read(v, "oracle_horizon", cfg.verify.oracle_horizon);
    read(v, "max_thresholds", cfg.verify.max_thresholds);
    read(v, "dominance_min_belief", cfg.verify.dominance_min_belief);
  }
  if (cfg.verify.oracle_horizon < 0) throw ConfigError("verify.oracle_horizon must be >= 0");

  if (root.contains("output_dir")) cfg.output_dir = root["output_dir"].get<std::string>();

  // Every sweep point must be a valid model before any job runs.
  try {
    cfg.model.validate();
    for (const auto& point : cfg.sweep_points()) point.params.validate();
  } catch (const ModelError& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
  return cfg;
}

}  // namespace

std::string SweepPoint::tag() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "q%g_tau%g", q, tau);
  return buf;
}

std::vector<SweepPoint> ExperimentConfig::sweep_points() const {
  const std::vector<double> taus = sweep_tau.empty() ? std::vector<double>{model.tau()} : sweep_tau;
  const double base_q = 1.0 - model.energy_pmf.at(0);
  const std::vector<double> qs = sweep_q.empty() ? std::vector<double>{base_q} : sweep_q;
  std::vector<SweepPoint> points;
  for (double tau : taus) {
    for (double q : qs) {
      SweepPoint point;
      point.params = model;
      point.tau = tau;
      point.q = q;
      if (!sweep_tau.empty()) point.params.e_sense = e_sense_for(tau, model.e_tx);
      if (!sweep_q.empty()) point.params.energy_pmf = two_point_pmf(*harvest_amount, q);
      points.push_back(std::move(point));
    }
  }
  return points;
}

std::filesystem::path ExperimentConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig parse_config(const std::string& json_text,
                              std::optional<std::uint64_t> seed_override) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  if (seed_override) {
    root["simulation"]["seed"] = *seed_override;
    root["search"]["seed"] = *seed_override;
  }
  try {
    ExperimentConfig cfg = from_json(root);
    cfg.hash = fnv1a64(root.dump());
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a wrongly typed value: ") + e.what());
  } catch (const ModelError& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  ExperimentConfig cfg = parse_config(text.str(), seed_override);
  cfg.base_dir = path.parent_path();
  return cfg;
}

}  // namespace ehsense
