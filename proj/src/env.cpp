#include "mfc/env.hpp"

#include <cmath>
#include <string>

#include "mfc/errors.hpp"

namespace mfc {

namespace {

void check_indices(const EnvironmentSpec& env, int x, int u) {
  if (x < 0 || x >= env.local_state_count)
    throw ArgumentError("local state index " + std::to_string(x) + " out of range [0, " +
                        std::to_string(env.local_state_count) + ")");
  if (u < 0 || u >= env.action_count)
    throw ArgumentError("action index " + std::to_string(u) + " out of range [0, " +
                        std::to_string(env.action_count) + ")");
}

void check_distributions(const EnvironmentSpec& env, const StateDistribution& mu,
                         const ActionDistribution& nu) {
  if (static_cast<int>(mu.w.size()) != env.local_state_count)
    throw ArgumentError("state distribution has wrong dimension");
  if (static_cast<int>(nu.w.size()) != env.action_count)
    throw ArgumentError("action distribution has wrong dimension");
  require_simplex(mu.w, "state distribution mu");
  require_simplex(nu.w, "action distribution nu");
}

}  // namespace

void validate_global_state(const EnvironmentSpec& env, const GlobalState& g) {
  if (env.global_kind == EnvironmentSpec::GlobalKind::kFinite) {
    if (g.kind != GlobalState::Kind::kFinite)
      throw ArgumentError("environment expects a finite global state");
    if (g.index < 0 || g.index >= env.global_count)
      throw ArgumentError("global state index " + std::to_string(g.index) +
                          " out of range [0, " + std::to_string(env.global_count) + ")");
  } else {
    if (g.kind != GlobalState::Kind::kScalar)
      throw ArgumentError("environment expects a scalar global state");
    if (!std::isfinite(g.value)) throw ArgumentError("scalar global state must be finite");
  }
}

StateDistribution local_transition_dist(const EnvironmentSpec& env, int x, int u,
                                        const StateDistribution& mu, const GlobalState& g,
                                        const ActionDistribution& nu) {
  check_indices(env, x, u);
  check_distributions(env, mu, nu);
  validate_global_state(env, g);
  StateDistribution next = env.local_transition(x, u, mu, g, nu);
  require_simplex(next.w, "local transition law");
  return next;
}

int local_transition_sample(const EnvironmentSpec& env, int x, int u,
                            const StateDistribution& mu, const GlobalState& g,
                            const ActionDistribution& nu, RngStream& rng) {
  StateDistribution law = local_transition_dist(env, x, u, mu, g, nu);
  return rng.categorical(law.w);
}

GlobalLaw global_transition_dist(const EnvironmentSpec& env, const StateDistribution& mu,
                                 const GlobalState& g, const ActionDistribution& nu) {
  check_distributions(env, mu, nu);
  validate_global_state(env, g);
  if (!env.global_transition)
    throw CapabilityError("environment '" + env.name +
                          "' has no enumerable global transition law");
  GlobalLaw law = env.global_transition(mu, g, nu);
  require_simplex(law.weights, "global transition law");
  return law;
}

GlobalState global_transition_sample(const EnvironmentSpec& env, const StateDistribution& mu,
                                     const GlobalState& g, const ActionDistribution& nu,
                                     RngStream& rng) {
  GlobalLaw law = global_transition_dist(env, mu, g, nu);
  return law.support[static_cast<std::size_t>(rng.categorical(law.weights))];
}

double reward(const EnvironmentSpec& env, int x, int u, const StateDistribution& mu,
              const GlobalState& g, const ActionDistribution& nu) {
  check_indices(env, x, u);
  check_distributions(env, mu, nu);
  validate_global_state(env, g);
  return env.reward(x, u, mu, g, nu);
}

std::vector<double> encode_global(const EnvironmentSpec& env, const GlobalState& g) {
  validate_global_state(env, g);
  return env.encode_global_fn(g);
}

EnvironmentSpec firm_env_make(const FirmEnvParams& params) {
  const int q = params.quality_levels;
  if (q < 2) throw ArgumentError("firm env: quality_levels must be >= 2");
  if (params.lambda0 < 0 || params.lambda1 < 0 || params.beta_R < 0 || params.lambda_R < 0)
    throw ArgumentError("firm env: rate parameters must be non-negative");
  if (params.lambda1 > 1.0)
    throw ArgumentError("firm env: lambda1 must be <= 1 so the price stays in [0, lambda0]");

  EnvironmentSpec env;
  env.name = "firm";
  env.local_state_count = q;
  env.action_count = 2;
  env.global_kind = EnvironmentSpec::GlobalKind::kScalar;
  env.global_count = 0;
  env.reward_bound = params.lambda0 * (q - 1) + params.beta_R * (q - 1) + params.lambda_R;

  const double lambda0 = params.lambda0;
  const double lambda1 = params.lambda1;
  const double beta_r = params.beta_R;
  const double lambda_r = params.lambda_R;

  env.local_transition = [q](int x, int u, const StateDistribution& mu, const GlobalState&,
                             const ActionDistribution&) {
    StateDistribution next{std::vector<double>(q, 0.0)};
    if (u == 0) {
      next.w[x] = 1.0;
      return next;
    }
    // Quality increment floor(chi * c) with chi ~ U[0,1],
    // c = headroom * (1 - mean_quality / Q), clamped at zero.
    const double headroom = static_cast<double>(q - 1 - x);
    const double c = std::max(0.0, headroom * (1.0 - mean_index(mu) / q));
    if (c <= 0.0) {
      next.w[x] = 1.0;
      return next;
    }
    const int k_max = static_cast<int>(std::ceil(c)) - 1;
    for (int k = 0; k <= k_max; ++k) {
      next.w[x + k] = (std::min(static_cast<double>(k + 1), c) - k) / c;
    }
    return next;
  };

  env.global_transition = [q, lambda0, lambda1](const StateDistribution& mu, const GlobalState&,
                                                const ActionDistribution&) {
    const double alpha_next = lambda0 * (1.0 - lambda1 * mean_index(mu) / q);
    return GlobalLaw{{1.0}, {GlobalState::scalar(alpha_next)}};
  };

  env.reward = [beta_r, lambda_r](int x, int u, const StateDistribution& mu, const GlobalState& g,
                                  const ActionDistribution&) {
    return g.value * x - beta_r * mean_index(mu) - lambda_r * u;
  };

  env.global_encoding_dim = 1;
  env.encode_global_fn = [lambda0](const GlobalState& g) {
    return std::vector<double>{lambda0 > 0.0 ? g.value / lambda0 : 0.0};
  };
  return env;
}

}  // namespace mfc
