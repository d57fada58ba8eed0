#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mfc/artifact.hpp"
#include "mfc/bounds.hpp"
#include "mfc/config.hpp"
#include "mfc/errors.hpp"
#include "mfc/meanfield.hpp"
#include "mfc/nagent.hpp"
#include "mfc/npg.hpp"
#include "mfc/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  int workers = 1;
  bool timings = false;
};

mfc::ExperimentConfig load(const CommonOpts& opts, std::string* raw_text = nullptr) {
  const std::string text = mfc::read_text_file(opts.config_path);
  if (raw_text != nullptr) *raw_text = text;
  mfc::ExperimentConfig cfg = mfc::parse_config_text(text);
  if (opts.seed_override) cfg.master_seed = *opts.seed_override;
  if (opts.out_override) cfg.output_dir = *opts.out_override;
  return cfg;
}

std::string default_policy_path(const mfc::ExperimentConfig& cfg) {
  return cfg.output_dir + "/policy.json";
}

void print_estimate(const char* label, const mfc::ValueEstimate& est) {
  std::cout << label << " mean=" << mfc::format_double(est.mean)
            << " stderr=" << mfc::format_double(est.stderr_of_mean)
            << " rollouts=" << est.rollouts << " horizon=" << est.horizon
            << " tail_bound=" << mfc::format_double(est.tail_bound) << "\n";
}

int cmd_validate_config(const CommonOpts& opts) {
  load(opts);
  std::cout << "config ok: " << opts.config_path << "\n";
  return kExitOk;
}

int cmd_train(const CommonOpts& opts) {
  std::string config_text;
  mfc::ExperimentConfig cfg = load(opts, &config_text);
  const mfc::EnvironmentSpec env = mfc::build_environment(cfg);
  const mfc::PolicyParams phi0 = mfc::build_initial_policy(cfg, env);
  const mfc::StateDistribution mu0 = mfc::initial_state_distribution(cfg, env);
  const mfc::GlobalState g0 = mfc::initial_global_state(cfg, env);

  mfc::NPGConfig train = cfg.train;
  train.master_seed = cfg.master_seed;
  mfc::NpgEvalOptions eval;
  eval.rollouts = cfg.train_eval_rollouts;
  eval.collect_timings = opts.timings;

  const mfc::TrainingTrace trace = mfc::npg_run(env, phi0, mu0, g0, train, eval);

  std::filesystem::create_directories(cfg.output_dir);
  std::ostringstream csv;
  csv << "j,value_mean,value_stderr,w_norm,wall_time\n";
  for (const mfc::TraceRow& row : trace.rows) {
    csv << row.iteration << ',' << mfc::format_double(row.value_mean) << ','
        << mfc::format_double(row.value_stderr) << ',' << mfc::format_double(row.w_norm) << ','
        << mfc::format_double(row.wall_seconds) << "\n";
  }
  mfc::write_text_file(cfg.output_dir + "/train_trace.csv", csv.str());

  if (!trace.completed) {
    std::cerr << "training aborted: " << trace.abort_reason << " (partial trace written)\n";
    return kExitRuntime;
  }
  mfc::save_policy(default_policy_path(cfg), env, trace.rows.back().params);
  std::cout << "trained " << trace.rows.size() << " iterations; final value "
            << mfc::format_double(trace.rows.back().value_mean) << "; policy written to "
            << default_policy_path(cfg) << "\n";
  return kExitOk;
}

int cmd_simulate_nagent(const CommonOpts& opts, int n_agents, const std::string& policy_path) {
  mfc::ExperimentConfig cfg = load(opts);
  const mfc::EnvironmentSpec env = mfc::build_environment(cfg);
  const mfc::PolicyParams phi = policy_path.empty()
                                    ? mfc::build_initial_policy(cfg, env)
                                    : mfc::load_policy(policy_path, env);
  const mfc::StateDistribution mu0 = mfc::initial_state_distribution(cfg, env);
  const mfc::GlobalState g0 = mfc::initial_global_state(cfg, env);

  mfc::RngStream init_rng(mfc::substream_seed(cfg.master_seed, mfc::stream_tag("sim-init")));
  const std::vector<int> locals = mfc::draw_initial_locals(mu0, n_agents, init_rng);
  const mfc::ValueEstimate est = mfc::estimate_value_nagent(
      env, phi, locals, g0, cfg.eval.gamma, mfc::effective_eval_horizon(cfg), cfg.eval.rollouts,
      mfc::substream_seed(cfg.master_seed, mfc::stream_tag("sim-vn")), opts.workers);
  print_estimate("V_N", est);
  return kExitOk;
}

int cmd_simulate_mfc(const CommonOpts& opts, const std::string& policy_path, bool exact) {
  mfc::ExperimentConfig cfg = load(opts);
  const mfc::EnvironmentSpec env = mfc::build_environment(cfg);
  const mfc::PolicyParams phi = policy_path.empty()
                                    ? mfc::build_initial_policy(cfg, env)
                                    : mfc::load_policy(policy_path, env);
  const mfc::StateDistribution mu0 = mfc::initial_state_distribution(cfg, env);
  const mfc::GlobalState g0 = mfc::initial_global_state(cfg, env);
  const int horizon = mfc::effective_eval_horizon(cfg);

  if (exact) {
    const mfc::ExactMfcValue v =
        mfc::exact_value_mfc(env, phi, mu0, g0, cfg.eval.gamma, horizon);
    std::cout << "V_inf exact=" << mfc::format_double(v.value)
              << " dropped_mass=" << mfc::format_double(v.dropped_mass)
              << " nodes=" << v.nodes_expanded << " horizon=" << horizon << "\n";
    return kExitOk;
  }
  const mfc::ValueEstimate est = mfc::estimate_value_mfc_mc(
      env, phi, mu0, g0, cfg.eval.gamma, horizon, cfg.eval.mfc_rollouts,
      mfc::substream_seed(cfg.master_seed, mfc::stream_tag("sim-vinf")));
  print_estimate("V_inf", est);
  return kExitOk;
}

int cmd_error_sweep(const CommonOpts& opts, const std::string& policy_path) {
  std::string config_text;
  mfc::ExperimentConfig cfg = load(opts, &config_text);
  const mfc::EnvironmentSpec env = mfc::build_environment(cfg);

  const std::string path = policy_path.empty() ? default_policy_path(cfg) : policy_path;
  if (!std::filesystem::exists(path))
    throw mfc::CapacityError("missing policy artifact '" + path + "'; run `train` first");
  const mfc::PolicyParams phi = mfc::load_policy(path, env);

  const std::vector<mfc::SweepResultRow> rows =
      mfc::run_error_sweep(env, phi, cfg, opts.workers, opts.timings);
  mfc::persist_sweep(cfg.output_dir, rows, config_text, cfg.master_seed);

  for (const mfc::SweepSummaryRow& s : mfc::summarize_sweep(rows)) {
    std::cout << "N=" << s.n_agents << " mean_error=" << mfc::format_double(s.mean_error)
              << " std_error=" << mfc::format_double(s.std_error) << " seeds=" << s.seeds << "\n";
  }
  std::cout << "results written to " << cfg.output_dir << "\n";
  return kExitOk;
}

int cmd_bounds(const CommonOpts& opts) {
  mfc::ExperimentConfig cfg = load(opts);
  if (!cfg.bounds.has_value())
    throw mfc::ConfigError("bounds", "missing block required by the bounds subcommand");
  const auto& b = *cfg.bounds;
  const mfc::Theorem1Constants k1 = mfc::theorem1_constants(b.lipschitz);
  const mfc::Theorem2Constants k2 = mfc::theorem2_constants(b.lipschitz);

  std::cout << "constants: S_P=" << mfc::format_double(k1.S_P)
            << " S_R=" << mfc::format_double(k1.S_R) << " S_G=" << mfc::format_double(k1.S_G)
            << " C_P=" << mfc::format_double(k1.C_P) << " Q_P=" << mfc::format_double(k2.Q_P)
            << " Q_R=" << mfc::format_double(k2.Q_R) << "\n";
  std::cout << "N,theorem1_bound,theorem2_bound\n";
  for (double n : b.n_grid) {
    const double bound1 = mfc::theorem1_bound(k1, b.gamma, n, b.x_size, b.u_size, b.lipschitz.M,
                                              b.lipschitz.L_R, b.lipschitz.L_G);
    const double bound2 =
        mfc::theorem2_bound(k2, b.gamma, n, b.x_size, b.lipschitz.M, b.lipschitz.L_G);
    std::cout << mfc::format_double(n) << ',' << mfc::format_double(bound1) << ','
              << mfc::format_double(bound2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field control toolkit: N-agent simulation, mean-field dynamics, NPG training and error experiments"};
  app.require_subcommand(1);

  CommonOpts opts;
  int n_agents = 100;
  std::string policy_path;
  bool exact = false;

  auto add_common = [&](CLI::App* cmd, bool with_workers = false) {
    cmd->add_option("config", opts.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--seed", opts.seed_override, "override the config's master_seed");
    cmd->add_option("--out", opts.out_override, "override the config's output directory");
    if (with_workers) cmd->add_option("--workers", opts.workers, "worker threads");
    cmd->add_flag("--timings", opts.timings,
                  "record wall-clock columns (off by default; timed outputs are not byte-reproducible)");
  };

  CLI::App* validate = app.add_subcommand("validate-config", "parse and range-check a config");
  add_common(validate);
  CLI::App* train = app.add_subcommand("train", "run NPG training and persist the policy");
  add_common(train);
  CLI::App* sim_n = app.add_subcommand("simulate-nagent", "Monte-Carlo estimate of the N-agent value");
  add_common(sim_n, true);
  sim_n->add_option("--n", n_agents, "population size")->check(CLI::PositiveNumber);
  sim_n->add_option("--policy", policy_path, "policy artifact (default: fresh initial policy)");
  CLI::App* sim_mf = app.add_subcommand("simulate-mfc", "mean-field value of a policy");
  add_common(sim_mf);
  sim_mf->add_option("--policy", policy_path, "policy artifact (default: fresh initial policy)");
  sim_mf->add_flag("--exact", exact, "exact enumeration instead of Monte Carlo");
  CLI::App* sweep = app.add_subcommand("error-sweep", "error-vs-N experiment for a trained policy");
  add_common(sweep, true);
  sweep->add_option("--policy", policy_path, "policy artifact (default: <output.dir>/policy.json)");
  CLI::App* bounds = app.add_subcommand("bounds", "tabulate the closed-form error bounds");
  add_common(bounds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (validate->parsed()) return cmd_validate_config(opts);
    if (train->parsed()) return cmd_train(opts);
    if (sim_n->parsed()) return cmd_simulate_nagent(opts, n_agents, policy_path);
    if (sim_mf->parsed()) return cmd_simulate_mfc(opts, policy_path, exact);
    if (sweep->parsed()) return cmd_error_sweep(opts, policy_path);
    if (bounds->parsed()) return cmd_bounds(opts);
  } catch (const mfc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const mfc::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const mfc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}
