#include "ehsense/commands.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "ehsense/belief.hpp"
#include "ehsense/checks.hpp"
#include "ehsense/config.hpp"
#include "ehsense/io.hpp"
#include "ehsense/policy.hpp"
#include "ehsense/search.hpp"
#include "ehsense/simulator.hpp"
#include "ehsense/solver.hpp"

namespace ehsense {

namespace {

struct Context {
  ExperimentConfig cfg;
  std::filesystem::path out_dir;
  std::ostream& log;
  std::ostream& err;
  bool quiet;

  void note(const std::string& line) const {
    if (!quiet) log << line << "\n";
  }

  SolverOptions solver_options() const {
    SolverOptions o;
    o.tol = cfg.tol;
    o.max_iter = cfg.max_iter;
    return o;
  }

  ValueTable solve(const SweepPoint& point) const {
    ValueTable v = value_iteration(point.params, BeliefGrid(cfg.grid_resolution), solver_options());
    std::ostringstream msg;
    msg << "solve " << point.tag() << ": " << v.iterations << " sweeps, residual " << v.residual;
    note(msg.str());
    return v;
  }

  template <class Writer>
  void emit(const std::string& name, Writer write) const {
    std::ostringstream buf;
    write(buf);
    write_text_file(out_dir / name, buf.str());
  }
};

int run_guarded(const CommandOptions& opts, std::ostream& log, std::ostream& err,
                const std::function<int(Context&)>& body) {
  try {
    ExperimentConfig cfg = load_config(opts.config, opts.seed);
    Context ctx{std::move(cfg), {}, log, err, opts.quiet};
    ctx.out_dir = opts.out_dir ? *opts.out_dir : ctx.cfg.output_dir;
    return body(ctx);
  } catch (const NonConvergence& e) {
    err << "error: value iteration did not converge after " << e.iterations()
        << " sweeps, residual " << e.residual() << "\n";
    return kExitNonConvergence;
  } catch (const StructureViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

ThresholdPolicy load_thresholds(const Context& ctx, const std::string& spec,
                                const SystemParams& params) {
  const auto path = ctx.cfg.resolve(spec.substr(std::string("thresholds:").size()));
  ThresholdPolicy t = read_thresholds_file(path);
  if (t.b_max() != params.b_max)
    throw ConfigError(path.string() + " has " + std::to_string(t.rows.size()) +
                      " rows, model needs " + std::to_string(params.b_max + 1));
  return t;
}

void write_regions(const Context& ctx, const SweepPoint& point, const ValueTable& v) {
  const PolicyTable table = extract_policy(v, point.params);
  ctx.emit("regions_" + point.tag() + ".csv",
           [&](std::ostream& o) { write_region_csv(o, table, ctx.cfg.hash); });
  try {
    const ThresholdPolicy t = extract_thresholds(table, point.params);
    ctx.emit("thresholds_" + point.tag() + ".txt",
             [&](std::ostream& o) { write_thresholds(o, t, ctx.cfg.hash); });
  } catch (const StructureViolation& e) {
    ctx.err << "warning: " << point.tag() << ": no threshold form: " << e.what() << "\n";
  }
}

}  // namespace

int cmd_solve(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  return run_guarded(opts, log, err, [](Context& ctx) {
    for (const auto& point : ctx.cfg.sweep_points()) {
      const ValueTable v = ctx.solve(point);
      ctx.emit("value_" + point.tag() + ".csv",
               [&](std::ostream& o) { write_value_csv(o, v, ctx.cfg.hash); });
      write_regions(ctx, point, v);
    }
    return kExitOk;
  });
}

int cmd_export_regions(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  return run_guarded(opts, log, err, [](Context& ctx) {
    for (const auto& point : ctx.cfg.sweep_points()) write_regions(ctx, point, ctx.solve(point));
    return kExitOk;
  });
}

int cmd_simulate(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  return run_guarded(opts, log, err, [](Context& ctx) {
    const auto points = ctx.cfg.sweep_points();
    // Threshold files are checked before any simulation runs.
    std::map<std::string, ThresholdPolicy> files;
    for (const auto& name : ctx.cfg.policies) {
      if (name.rfind("thresholds:", 0) == 0)
        files.emplace(name, load_thresholds(ctx, name, points.front().params));
    }

    const BeliefGrid grid(ctx.cfg.grid_resolution);
    std::vector<ThroughputRow> rows;
    for (const auto& point : points) {
      const auto& params = point.params;
      for (const auto& name : ctx.cfg.policies) {
        Policy policy;
        if (name == "optimal") {
          policy = table_policy(extract_policy(ctx.solve(point), params));
        } else if (name == "single_threshold") {
          policy = threshold_policy(single_threshold_policy(params, grid, ctx.solver_options()));
        } else if (name == "greedy") {
          policy = greedy_policy(params);
        } else if (name == "opportunistic") {
          policy = opportunistic_policy(params);
        } else if (name == "defer") {
          policy = defer_policy();
        } else {
          policy = threshold_policy(files.at(name));
        }
        ThroughputRow row{name, point.q, point.tau, run_episodes(policy, params, ctx.cfg.simulation)};
        std::ostringstream msg;
        msg << "simulate " << point.tag() << " " << name << ": " << row.stats.mean_bits_per_slot
            << " +- " << row.stats.std_error;
        ctx.note(msg.str());
        rows.push_back(std::move(row));
      }
    }
    ctx.emit("throughput.csv", [&](std::ostream& o) { write_throughput_csv(o, rows, ctx.cfg.hash); });
    return kExitOk;
  });
}

int cmd_search(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  return run_guarded(opts, log, err, [](Context& ctx) {
    const auto points = ctx.cfg.sweep_points();
    if (!ctx.cfg.model.single_rate())
      throw ConfigError("threshold search needs r_low = 0");

    std::vector<ThroughputRow> rows;
    for (const auto& point : points) {
      const auto& params = point.params;
      const ThresholdPolicy init =
          ctx.cfg.search.init == "optimal"
              ? extract_thresholds(extract_policy(ctx.solve(point), params), params)
              : load_thresholds(ctx, ctx.cfg.search.init, params);

      SearchConfig sc;
      sc.candidate_breakpoints = ctx.cfg.search.candidates.empty()
                                     ? default_candidates(params)
                                     : ctx.cfg.search.candidates;
      std::sort(sc.candidate_breakpoints.begin(), sc.candidate_breakpoints.end());
      sc.episodes = ctx.cfg.search.episodes;
      sc.horizon = ctx.cfg.search.horizon;
      sc.seed = ctx.cfg.search.seed;
      sc.max_passes = ctx.cfg.search.max_passes;
      sc.neighborhood = ctx.cfg.search.neighborhood;
      sc.initial = ctx.cfg.simulation.initial;

      const SearchResult res = search_thresholds(params, sc, init);
      ctx.emit("search_thresholds_" + point.tag() + ".txt",
               [&](std::ostream& o) { write_thresholds(o, res.policy, ctx.cfg.hash); });
      ctx.emit("search_log_" + point.tag() + ".csv",
               [&](std::ostream& o) { write_search_log_csv(o, res.log, ctx.cfg.hash); });

      // Final comparison on the simulation seed, not the one the search tuned on.
      rows.push_back({"initial", point.q, point.tau,
                      run_episodes(threshold_policy(init), params, ctx.cfg.simulation)});
      rows.push_back({"searched", point.q, point.tau,
                      run_episodes(threshold_policy(res.policy), params, ctx.cfg.simulation)});
      std::ostringstream msg;
      msg << "search " << point.tag() << ": " << res.passes << " passes, "
          << rows[rows.size() - 2].stats.mean_bits_per_slot << " -> "
          << rows.back().stats.mean_bits_per_slot;
      ctx.note(msg.str());
    }
    ctx.emit("search_throughput.csv",
             [&](std::ostream& o) { write_throughput_csv(o, rows, ctx.cfg.hash); });
    return kExitOk;
  });
}

int cmd_verify(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  return run_guarded(opts, log, err, [](Context& ctx) {
    bool all_passed = true;
    const BeliefGrid grid(ctx.cfg.grid_resolution);
    for (const auto& point : ctx.cfg.sweep_points()) {
      const auto& params = point.params;
      CheckReport report;

      std::vector<double> starts{0.0, 0.5, 1.0};
      if (params.lambda1 - params.lambda0 < 1.0) starts.push_back(stationary_belief(params));
      report.checks.push_back(
          check_oracle_agreement(params, grid, ctx.cfg.verify.oracle_horizon, starts));

      const ValueTable v = ctx.solve(point);
      for (auto& c : check_lemma_suite(v, params).checks) report.checks.push_back(c);
      DominanceOptions dom;
      dom.min_belief = ctx.cfg.verify.dominance_min_belief;
      for (auto& c : check_good_state_dominance(v, params, dom).checks) report.checks.push_back(c);
      report.checks.push_back(check_threshold_structure(v, params, ctx.cfg.verify.max_thresholds));

      const std::string text = report.to_text();
      ctx.emit("verify_" + point.tag() + ".txt", [&](std::ostream& o) {
        o << hash_comment(ctx.cfg.hash) << "\n" << text;
      });
      // The report is the command's output, so it is printed even when quiet.
      ctx.log << "== " << point.tag() << " ==\n" << text;
      all_passed = all_passed && report.all_passed();
    }
    ctx.log << (all_passed ? "verify: all checks passed\n" : "verify: FAILED\n");
    return all_passed ? kExitOk : kExitVerification;
  });
}

}  // namespace ehsense
