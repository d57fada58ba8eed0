#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfc/env.hpp"
#include "mfc/npg.hpp"
#include "mfc/policy.hpp"

namespace mfc {

/// Experiment configuration, loaded from a JSON file. Unknown keys are
/// rejected and every value is range-checked; violations raise ConfigError
/// carrying the offending field path.
struct ExperimentConfig {
  std::uint64_t master_seed = 1;

  struct Env {
    std::string kind = "firm";  // firm | bandit | random-finite | uniform-global
    FirmEnvParams firm;
    int local_states = 2;  // random-finite / uniform-global
    int actions = 2;
    int globals = 2;
    std::uint64_t env_seed = 7;
  } env;

  struct Policy {
    double w_max = kDefaultWeightCap;
    std::string init = "zeros";  // zeros | gaussian
    double init_stddev = 0.1;
    std::uint64_t init_seed = 11;
  } policy;

  NPGConfig train;          // master_seed is filled from the top level
  int train_eval_rollouts = 64;

  struct Eval {
    double gamma = 0.9;
    int horizon = 0;  // 0: derived from gamma
    int rollouts = 64;
    int mfc_rollouts = 1000;  // only used when the global chain is stochastic
  } eval;

  struct Init {
    std::vector<double> mu0;  // empty: uniform over X
    std::optional<double> g0; // absent: derived (firm) or index 0 (finite)
  } init;

  struct Sweep {
    std::vector<int> n_grid = {50, 100, 200, 500, 1000};
    int seeds = 25;
  } sweep;

  struct Bounds {
    LipschitzConstants lipschitz;
    double gamma = 0.3;
    int x_size = 10;
    int u_size = 2;
    std::vector<double> n_grid = {10, 100, 1000, 10000};
  };
  std::optional<Bounds> bounds;

  std::string output_dir = "runs/out";
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

EnvironmentSpec build_environment(const ExperimentConfig& config);
PolicyParams build_initial_policy(const ExperimentConfig& config, const EnvironmentSpec& env);
StateDistribution initial_state_distribution(const ExperimentConfig& config,
                                             const EnvironmentSpec& env);
GlobalState initial_global_state(const ExperimentConfig& config, const EnvironmentSpec& env);
int effective_eval_horizon(const ExperimentConfig& config);

/// FNV-1a of the raw config bytes, for the rerun metadata record.
std::string config_fingerprint(const std::string& text);

}  // namespace mfc
