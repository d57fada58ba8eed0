#include "mfc/meanfield.hpp"

#include <cmath>
#include <string>

#include "mfc/errors.hpp"

namespace mfc {

ActionDistribution nu_mf(const EnvironmentSpec& env, const PolicyParams& phi,
                         const StateDistribution& mu, const GlobalState& g) {
  if (static_cast<int>(mu.w.size()) != env.local_state_count)
    throw ArgumentError("state distribution has wrong dimension");
  require_simplex(mu.w, "state distribution mu");
  const SharedPolicyContext ctx(env, phi, mu, g);
  ActionDistribution nu{std::vector<double>(static_cast<std::size_t>(env.action_count), 0.0)};
  for (int x = 0; x < env.local_state_count; ++x) {
    if (mu.w[static_cast<std::size_t>(x)] == 0.0) continue;
    const ActionDistribution pi = ctx.dist_for(x);
    for (int u = 0; u < env.action_count; ++u)
      nu.w[static_cast<std::size_t>(u)] += pi.w[static_cast<std::size_t>(u)] * mu.w[static_cast<std::size_t>(x)];
  }
  return nu;
}

StateDistribution p_mf(const EnvironmentSpec& env, const PolicyParams& phi,
                       const StateDistribution& mu, const GlobalState& g) {
  const ActionDistribution nu = nu_mf(env, phi, mu, g);
  const SharedPolicyContext ctx(env, phi, mu, g);
  StateDistribution next{std::vector<double>(static_cast<std::size_t>(env.local_state_count), 0.0)};
  for (int x = 0; x < env.local_state_count; ++x) {
    const double mx = mu.w[static_cast<std::size_t>(x)];
    if (mx == 0.0) continue;
    const ActionDistribution pi = ctx.dist_for(x);
    for (int u = 0; u < env.action_count; ++u) {
      const double weight = pi.w[static_cast<std::size_t>(u)] * mx;
      if (weight == 0.0) continue;
      const StateDistribution law = env.local_transition(x, u, mu, g, nu);
      for (int y = 0; y < env.local_state_count; ++y)
        next.w[static_cast<std::size_t>(y)] += law.w[static_cast<std::size_t>(y)] * weight;
    }
  }
  // Renormalize the ulp-level mass defect. Kernels that mix mu into the law
  // amplify it geometrically over long chains if it is left in place.
  double sum = 0.0;
  for (double v : next.w) sum += v;
  if (sum > 0.0 && sum != 1.0) {
    for (double& v : next.w) v /= sum;
  }
  return next;
}

GlobalLaw pg_mf(const EnvironmentSpec& env, const PolicyParams& phi, const StateDistribution& mu,
                const GlobalState& g) {
  const ActionDistribution nu = nu_mf(env, phi, mu, g);
  return global_transition_dist(env, mu, g, nu);
}

double r_mf(const EnvironmentSpec& env, const PolicyParams& phi, const StateDistribution& mu,
            const GlobalState& g) {
  const ActionDistribution nu = nu_mf(env, phi, mu, g);
  const SharedPolicyContext ctx(env, phi, mu, g);
  double total = 0.0;
  for (int x = 0; x < env.local_state_count; ++x) {
    const double mx = mu.w[static_cast<std::size_t>(x)];
    if (mx == 0.0) continue;
    const ActionDistribution pi = ctx.dist_for(x);
    for (int u = 0; u < env.action_count; ++u) {
      const double weight = pi.w[static_cast<std::size_t>(u)] * mx;
      if (weight == 0.0) continue;
      total += weight * env.reward(x, u, mu, g, nu);
    }
  }
  return total;
}

std::vector<MfcStep> rollout_mfc(const EnvironmentSpec& env, const PolicyParams& phi,
                                 const StateDistribution& mu0, const GlobalState& g0, int horizon,
                                 RngStream& rng) {
  if (horizon < 1) throw ArgumentError("horizon must be >= 1");
  require_simplex(mu0.w, "initial state distribution");
  validate_global_state(env, g0);

  std::vector<MfcStep> steps;
  steps.reserve(static_cast<std::size_t>(horizon));
  StateDistribution mu = mu0;
  GlobalState g = g0;
  for (int t = 0; t < horizon; ++t) {
    const double r = r_mf(env, phi, mu, g);
    steps.push_back(MfcStep{mu, g, r});
    if (t + 1 == horizon) break;
    StateDistribution mu_next = p_mf(env, phi, mu, g);
    const GlobalLaw law = pg_mf(env, phi, mu, g);
    g = law.support[static_cast<std::size_t>(rng.categorical(law.weights))];
    mu = std::move(mu_next);
  }
  return steps;
}

ValueEstimate estimate_value_mfc_mc(const EnvironmentSpec& env, const PolicyParams& phi,
                                    const StateDistribution& mu0, const GlobalState& g0,
                                    double gamma, int horizon, int rollouts, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in (0, 1)");
  if (horizon < 1) throw ArgumentError("horizon must be >= 1");
  if (rollouts < 1) throw ArgumentError("rollout count must be >= 1");
  if (env.deterministic_global()) rollouts = 1;

  std::vector<double> returns(static_cast<std::size_t>(rollouts), 0.0);
  for (int r = 0; r < rollouts; ++r) {
    RngStream rng(substream_seed(seed, stream_tag("mfc-rollout"), static_cast<std::uint64_t>(r)));
    double acc = 0.0, disc = 1.0;
    StateDistribution mu = mu0;
    GlobalState g = g0;
    for (int t = 0; t < horizon; ++t) {
      acc += disc * r_mf(env, phi, mu, g);
      disc *= gamma;
      if (t + 1 == horizon) break;
      StateDistribution mu_next = p_mf(env, phi, mu, g);
      const GlobalLaw law = pg_mf(env, phi, mu, g);
      g = law.support[static_cast<std::size_t>(rng.categorical(law.weights))];
      mu = std::move(mu_next);
    }
    returns[static_cast<std::size_t>(r)] = acc;
  }
  const double tail = env.reward_bound * std::pow(gamma, horizon) / (1.0 - gamma);
  return summarize_returns(returns, horizon, tail);
}

namespace {

struct PathAccumulator {
  double value = 0.0;
  double dropped = 0.0;
  std::int64_t nodes = 0;
};

// Depth-first walk over global-state realisations. `disc` carries gamma^t
// and `path_prob` the probability of the realisation so far; both shrink
// monotonically, which is what makes pruning by path probability sound.
void enumerate_paths(const EnvironmentSpec& env, const PolicySequence& policies,
                     const StateDistribution& mu, const GlobalState& g, int t, int horizon,
                     double disc, double path_prob, double gamma, double prune,
                     PathAccumulator& acc) {
  ++acc.nodes;
  acc.value += disc * path_prob * r_mf(env, policies.at(t), mu, g);
  if (t + 1 >= horizon) return;
  const StateDistribution mu_next = p_mf(env, policies.at(t), mu, g);
  const GlobalLaw law = pg_mf(env, policies.at(t), mu, g);
  for (std::size_t i = 0; i < law.weights.size(); ++i) {
    const double branch_prob = path_prob * law.weights[i];
    if (branch_prob == 0.0) continue;
    if (branch_prob < prune) {
      acc.dropped += branch_prob;
      continue;
    }
    enumerate_paths(env, policies, mu_next, law.support[i], t + 1, horizon, disc * gamma,
                    branch_prob, gamma, prune, acc);
  }
}

void check_path_budget(const EnvironmentSpec& env, int horizon, double cap) {
  if (env.deterministic_global()) return;
  double paths = 1.0;
  for (int t = 0; t < horizon; ++t) {
    paths *= env.global_count;
    if (paths > cap)
      throw CapacityError("global path enumeration needs |G|^horizon = " +
                          std::to_string(env.global_count) + "^" + std::to_string(horizon) +
                          " paths, above the cap of " + std::to_string(cap));
  }
}

}  // namespace

ExactMfcValue exact_value_mfc(const EnvironmentSpec& env, const PolicySequence& policies,
                              const StateDistribution& mu0, const GlobalState& g0, double gamma,
                              int horizon, const ExactMfcOptions& options) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in (0, 1)");
  if (horizon < 1) throw ArgumentError("horizon must be >= 1");
  require_simplex(mu0.w, "initial state distribution");
  validate_global_state(env, g0);
  check_path_budget(env, horizon, options.path_cap);

  PathAccumulator acc;
  enumerate_paths(env, policies, mu0, g0, 0, horizon, 1.0, 1.0, gamma, options.prune_threshold,
                  acc);
  return ExactMfcValue{acc.value, acc.dropped, acc.nodes};
}

double composed_expected_reward(const EnvironmentSpec& env, const PolicySequence& policies,
                                const StateDistribution& mu0, const GlobalState& g0, int t,
                                const ExactMfcOptions& options) {
  if (t < 0) throw ArgumentError("time offset must be >= 0");
  require_simplex(mu0.w, "initial state distribution");
  check_path_budget(env, t + 1, options.path_cap);

  // Same walk with gamma = 1 and only depth-t rewards counted.
  struct Frame {
    StateDistribution mu;
    GlobalState g;
    double prob;
    int depth;
  };
  std::vector<Frame> stack{{mu0, g0, 1.0, 0}};
  double total = 0.0;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.depth == t) {
      total += f.prob * r_mf(env, policies.at(t), f.mu, f.g);
      continue;
    }
    const StateDistribution mu_next = p_mf(env, policies.at(f.depth), f.mu, f.g);
    const GlobalLaw law = pg_mf(env, policies.at(f.depth), f.mu, f.g);
    for (std::size_t i = 0; i < law.weights.size(); ++i) {
      const double p = f.prob * law.weights[i];
      if (p == 0.0) continue;
      stack.push_back(Frame{mu_next, law.support[i], p, f.depth + 1});
    }
  }
  return total;
}

}  // namespace mfc
