#include "mfc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfc/errors.hpp"
#include "mfc/nagent.hpp"
#include "mfc/toy_envs.hpp"

namespace mfc {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& scope,
                         const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key()))
      throw ConfigError(scope.empty() ? item.key() : scope + "." + item.key(), "unknown key");
  }
}

double get_number(const json& obj, const std::string& scope, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(scope + "." + key, "must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& scope, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ConfigError(scope + "." + key, "must be an integer");
  return obj[key].get<int>();
}

std::string get_string(const json& obj, const std::string& scope, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw ConfigError(scope + "." + key, "must be a string");
  return obj[key].get<std::string>();
}

void require_range(double v, double lo, double hi, const std::string& field, bool open_ends) {
  const bool ok = open_ends ? (v > lo && v < hi) : (v >= lo && v <= hi);
  if (!ok) {
    std::ostringstream msg;
    msg << "value " << v << " outside " << (open_ends ? "(" : "[") << lo << ", " << hi
        << (open_ends ? ")" : "]");
    throw ConfigError(field, msg.str());
  }
}

void require_positive_int(int v, const std::string& field) {
  if (v < 1) throw ConfigError(field, "must be >= 1");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<root>", "top level must be an object");
  reject_unknown_keys(root, "", {"master_seed", "env", "policy", "train", "eval", "init", "sweep",
                                 "bounds", "output"});

  ExperimentConfig cfg;
  if (root.contains("master_seed")) {
    if (!root["master_seed"].is_number_unsigned() && !root["master_seed"].is_number_integer())
      throw ConfigError("master_seed", "must be a non-negative integer");
    cfg.master_seed = root["master_seed"].get<std::uint64_t>();
  }

  if (!root.contains("env")) throw ConfigError("env", "missing required block");
  {
    const json& env = root["env"];
    if (!env.is_object()) throw ConfigError("env", "must be an object");
    cfg.env.kind = get_string(env, "env", "kind", "firm");
    if (cfg.env.kind == "firm") {
      reject_unknown_keys(env, "env", {"kind", "quality_levels", "lambda0", "lambda1", "beta_R",
                                       "lambda_R"});
      cfg.env.firm.quality_levels = get_int(env, "env", "quality_levels", 10);
      if (cfg.env.firm.quality_levels < 2) throw ConfigError("env.quality_levels", "must be >= 2");
      cfg.env.firm.lambda0 = get_number(env, "env", "lambda0", 1.0);
      cfg.env.firm.lambda1 = get_number(env, "env", "lambda1", 0.5);
      cfg.env.firm.beta_R = get_number(env, "env", "beta_R", 0.5);
      cfg.env.firm.lambda_R = get_number(env, "env", "lambda_R", 0.5);
      if (cfg.env.firm.lambda0 < 0) throw ConfigError("env.lambda0", "must be >= 0");
      require_range(cfg.env.firm.lambda1, 0.0, 1.0, "env.lambda1", false);
      if (cfg.env.firm.beta_R < 0) throw ConfigError("env.beta_R", "must be >= 0");
      if (cfg.env.firm.lambda_R < 0) throw ConfigError("env.lambda_R", "must be >= 0");
    } else if (cfg.env.kind == "bandit") {
      reject_unknown_keys(env, "env", {"kind"});
    } else if (cfg.env.kind == "random-finite" || cfg.env.kind == "uniform-global") {
      reject_unknown_keys(env, "env", {"kind", "local_states", "actions", "globals", "env_seed"});
      cfg.env.local_states = get_int(env, "env", "local_states", 2);
      cfg.env.actions = get_int(env, "env", "actions", 2);
      cfg.env.globals = get_int(env, "env", "globals", 2);
      require_positive_int(cfg.env.local_states, "env.local_states");
      require_positive_int(cfg.env.actions, "env.actions");
      require_positive_int(cfg.env.globals, "env.globals");
      cfg.env.env_seed = static_cast<std::uint64_t>(get_int(env, "env", "env_seed", 7));
    } else {
      throw ConfigError("env.kind", "unknown environment kind '" + cfg.env.kind + "'");
    }
  }

  if (root.contains("policy")) {
    const json& pol = root["policy"];
    if (!pol.is_object()) throw ConfigError("policy", "must be an object");
    reject_unknown_keys(pol, "policy", {"w_max", "init", "init_stddev", "init_seed"});
    cfg.policy.w_max = get_number(pol, "policy", "w_max", kDefaultWeightCap);
    if (!(cfg.policy.w_max > 0)) throw ConfigError("policy.w_max", "must be > 0");
    cfg.policy.init = get_string(pol, "policy", "init", "zeros");
    if (cfg.policy.init != "zeros" && cfg.policy.init != "gaussian")
      throw ConfigError("policy.init", "must be 'zeros' or 'gaussian'");
    cfg.policy.init_stddev = get_number(pol, "policy", "init_stddev", 0.1);
    if (!(cfg.policy.init_stddev >= 0)) throw ConfigError("policy.init_stddev", "must be >= 0");
    cfg.policy.init_seed = static_cast<std::uint64_t>(get_int(pol, "policy", "init_seed", 11));
  }

  if (root.contains("train")) {
    const json& tr = root["train"];
    if (!tr.is_object()) throw ConfigError("train", "must be an object");
    reject_unknown_keys(tr, "train", {"eta", "alpha", "outer_iters", "inner_iters", "gamma",
                                      "horizon_cap", "eval_rollouts"});
    cfg.train.eta = get_number(tr, "train", "eta", cfg.train.eta);
    cfg.train.alpha = get_number(tr, "train", "alpha", cfg.train.alpha);
    cfg.train.outer_iters = get_int(tr, "train", "outer_iters", cfg.train.outer_iters);
    cfg.train.inner_iters = get_int(tr, "train", "inner_iters", cfg.train.inner_iters);
    cfg.train.gamma = get_number(tr, "train", "gamma", cfg.train.gamma);
    cfg.train.horizon_cap = get_int(tr, "train", "horizon_cap", cfg.train.horizon_cap);
    cfg.train_eval_rollouts = get_int(tr, "train", "eval_rollouts", cfg.train_eval_rollouts);
    if (!(cfg.train.eta >= 0)) throw ConfigError("train.eta", "must be >= 0");
    if (!(cfg.train.alpha > 0)) throw ConfigError("train.alpha", "must be > 0");
    require_positive_int(cfg.train.outer_iters, "train.outer_iters");
    require_positive_int(cfg.train.inner_iters, "train.inner_iters");
    require_range(cfg.train.gamma, 0.0, 1.0, "train.gamma", true);
    require_positive_int(cfg.train.horizon_cap, "train.horizon_cap");
    require_positive_int(cfg.train_eval_rollouts, "train.eval_rollouts");
  }

  if (root.contains("eval")) {
    const json& ev = root["eval"];
    if (!ev.is_object()) throw ConfigError("eval", "must be an object");
    reject_unknown_keys(ev, "eval", {"gamma", "horizon", "rollouts", "mfc_rollouts"});
    cfg.eval.gamma = get_number(ev, "eval", "gamma", cfg.eval.gamma);
    require_range(cfg.eval.gamma, 0.0, 1.0, "eval.gamma", true);
    cfg.eval.horizon = get_int(ev, "eval", "horizon", 0);
    if (cfg.eval.horizon < 0) throw ConfigError("eval.horizon", "must be >= 0 (0 = automatic)");
    cfg.eval.rollouts = get_int(ev, "eval", "rollouts", cfg.eval.rollouts);
    require_positive_int(cfg.eval.rollouts, "eval.rollouts");
    cfg.eval.mfc_rollouts = get_int(ev, "eval", "mfc_rollouts", cfg.eval.mfc_rollouts);
    require_positive_int(cfg.eval.mfc_rollouts, "eval.mfc_rollouts");
  }

  if (root.contains("init")) {
    const json& in = root["init"];
    if (!in.is_object()) throw ConfigError("init", "must be an object");
    reject_unknown_keys(in, "init", {"mu0", "g0"});
    if (in.contains("mu0")) {
      if (in["mu0"].is_string()) {
        if (in["mu0"].get<std::string>() != "uniform")
          throw ConfigError("init.mu0", "string form must be 'uniform'");
      } else if (in["mu0"].is_array()) {
        cfg.init.mu0 = in["mu0"].get<std::vector<double>>();
        if (!is_simplex(cfg.init.mu0, kSimplexTol))
          throw ConfigError("init.mu0", "must be a probability vector");
      } else {
        throw ConfigError("init.mu0", "must be 'uniform' or a probability vector");
      }
    }
    if (in.contains("g0")) {
      if (!in["g0"].is_number()) throw ConfigError("init.g0", "must be a number");
      cfg.init.g0 = in["g0"].get<double>();
    }
  }

  if (root.contains("sweep")) {
    const json& sw = root["sweep"];
    if (!sw.is_object()) throw ConfigError("sweep", "must be an object");
    reject_unknown_keys(sw, "sweep", {"n_grid", "seeds"});
    if (sw.contains("n_grid")) {
      if (!sw["n_grid"].is_array() || sw["n_grid"].empty())
        throw ConfigError("sweep.n_grid", "must be a non-empty array of integers");
      cfg.sweep.n_grid = sw["n_grid"].get<std::vector<int>>();
      for (int n : cfg.sweep.n_grid)
        if (n < 1) throw ConfigError("sweep.n_grid", "entries must be >= 1");
    }
    cfg.sweep.seeds = get_int(sw, "sweep", "seeds", cfg.sweep.seeds);
    require_positive_int(cfg.sweep.seeds, "sweep.seeds");
  }

  if (root.contains("bounds")) {
    const json& b = root["bounds"];
    if (!b.is_object()) throw ConfigError("bounds", "must be an object");
    reject_unknown_keys(b, "bounds",
                        {"M", "L_R", "L_P", "L_G", "L_Q", "gamma", "x_size", "u_size", "n_grid"});
    ExperimentConfig::Bounds bounds;
    bounds.lipschitz.M = get_number(b, "bounds", "M", 1.0);
    bounds.lipschitz.L_R = get_number(b, "bounds", "L_R", 0.0);
    bounds.lipschitz.L_P = get_number(b, "bounds", "L_P", 0.0);
    bounds.lipschitz.L_G = get_number(b, "bounds", "L_G", 0.0);
    bounds.lipschitz.L_Q = get_number(b, "bounds", "L_Q", 0.0);
    if (!(bounds.lipschitz.M > 0)) throw ConfigError("bounds.M", "must be > 0");
    for (auto [v, name] : {std::pair{bounds.lipschitz.L_R, "bounds.L_R"},
                           std::pair{bounds.lipschitz.L_P, "bounds.L_P"},
                           std::pair{bounds.lipschitz.L_G, "bounds.L_G"},
                           std::pair{bounds.lipschitz.L_Q, "bounds.L_Q"}}) {
      if (!(v >= 0)) throw ConfigError(name, "must be >= 0");
    }
    bounds.gamma = get_number(b, "bounds", "gamma", 0.3);
    require_range(bounds.gamma, 0.0, 1.0, "bounds.gamma", true);
    bounds.x_size = get_int(b, "bounds", "x_size", 10);
    bounds.u_size = get_int(b, "bounds", "u_size", 2);
    require_positive_int(bounds.x_size, "bounds.x_size");
    require_positive_int(bounds.u_size, "bounds.u_size");
    if (b.contains("n_grid")) {
      if (!b["n_grid"].is_array() || b["n_grid"].empty())
        throw ConfigError("bounds.n_grid", "must be a non-empty array of numbers");
      bounds.n_grid = b["n_grid"].get<std::vector<double>>();
      for (double n : bounds.n_grid)
        if (!(n >= 1)) throw ConfigError("bounds.n_grid", "entries must be >= 1");
    }
    cfg.bounds = bounds;
  }

  if (root.contains("output")) {
    const json& out = root["output"];
    if (!out.is_object()) throw ConfigError("output", "must be an object");
    reject_unknown_keys(out, "output", {"dir"});
    cfg.output_dir = get_string(out, "output", "dir", cfg.output_dir);
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

EnvironmentSpec build_environment(const ExperimentConfig& config) {
  if (config.env.kind == "firm") return firm_env_make(config.env.firm);
  if (config.env.kind == "bandit") return make_two_arm_bandit_env();
  if (config.env.kind == "random-finite")
    return make_random_finite_env(config.env.local_states, config.env.actions,
                                  config.env.globals, config.env.env_seed);
  if (config.env.kind == "uniform-global")
    return make_uniform_global_env(config.env.local_states, config.env.actions,
                                   config.env.globals);
  throw ConfigError("env.kind", "unknown environment kind '" + config.env.kind + "'");
}

PolicyParams build_initial_policy(const ExperimentConfig& config, const EnvironmentSpec& env) {
  if (config.policy.init == "gaussian")
    return make_gaussian_policy(env, config.policy.w_max, config.policy.init_stddev,
                                config.policy.init_seed);
  return make_zero_policy(env, config.policy.w_max);
}

StateDistribution initial_state_distribution(const ExperimentConfig& config,
                                             const EnvironmentSpec& env) {
  if (config.init.mu0.empty()) return uniform_state_distribution(env.local_state_count);
  if (static_cast<int>(config.init.mu0.size()) != env.local_state_count)
    throw ConfigError("init.mu0", "dimension does not match the environment's state count");
  return StateDistribution{config.init.mu0};
}

GlobalState initial_global_state(const ExperimentConfig& config, const EnvironmentSpec& env) {
  if (env.global_kind == EnvironmentSpec::GlobalKind::kScalar) {
    if (config.init.g0.has_value()) return GlobalState::scalar(*config.init.g0);
    // Default firm price: the price recursion applied to the initial
    // distribution, as if mu0 were also the previous step's distribution.
    const StateDistribution mu0 = initial_state_distribution(config, env);
    const double q = config.env.firm.quality_levels;
    return GlobalState::scalar(config.env.firm.lambda0 *
                               (1.0 - config.env.firm.lambda1 * mean_index(mu0) / q));
  }
  int index = 0;
  if (config.init.g0.has_value()) {
    const double raw = *config.init.g0;
    index = static_cast<int>(raw);
    if (static_cast<double>(index) != raw)
      throw ConfigError("init.g0", "must be an integer index for finite global states");
    if (index < 0 || index >= env.global_count) throw ConfigError("init.g0", "index out of range");
  }
  return GlobalState::finite(index);
}

int effective_eval_horizon(const ExperimentConfig& config) {
  return config.eval.horizon > 0 ? config.eval.horizon : default_horizon(config.eval.gamma);
}

std::string config_fingerprint(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) h = (h ^ c) * 0x100000001b3ULL;
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mfc
