#include "mfc/toy_envs.hpp"

#include <vector>

namespace mfc {

namespace {

std::vector<double> one_hot(int n, int i) {
  std::vector<double> v(n, 0.0);
  v[i] = 1.0;
  return v;
}

void set_finite_global(EnvironmentSpec& env, int global_count) {
  env.global_kind = EnvironmentSpec::GlobalKind::kFinite;
  env.global_count = global_count;
  env.global_encoding_dim = global_count;
  env.encode_global_fn = [global_count](const GlobalState& g) {
    return one_hot(global_count, g.index);
  };
}

void set_identity_local(EnvironmentSpec& env) {
  const int n = env.local_state_count;
  env.local_transition = [n](int x, int, const StateDistribution&, const GlobalState&,
                             const ActionDistribution&) {
    return StateDistribution{one_hot(n, x)};
  };
}

void set_fixed_global(EnvironmentSpec& env) {
  env.global_transition = [](const StateDistribution&, const GlobalState& g,
                             const ActionDistribution&) {
    return GlobalLaw{{1.0}, {g}};
  };
}

}  // namespace

EnvironmentSpec make_identity_env(int local_states, int actions) {
  return make_constant_reward_env(local_states, actions, 0.0);
}

EnvironmentSpec make_constant_reward_env(int local_states, int actions, double c) {
  EnvironmentSpec env;
  env.name = "constant";
  env.local_state_count = local_states;
  env.action_count = actions;
  env.reward_bound = c == 0.0 ? 1.0 : std::abs(c);
  set_finite_global(env, 1);
  set_identity_local(env);
  set_fixed_global(env);
  env.reward = [c](int, int, const StateDistribution&, const GlobalState&,
                   const ActionDistribution&) { return c; };
  return env;
}

EnvironmentSpec make_uniform_global_env(int local_states, int actions, int global_count) {
  EnvironmentSpec env;
  env.name = "uniform-global";
  env.local_state_count = local_states;
  env.action_count = actions;
  env.reward_bound = 1.0;
  set_finite_global(env, global_count);
  set_identity_local(env);
  env.global_transition = [global_count](const StateDistribution&, const GlobalState&,
                                         const ActionDistribution&) {
    GlobalLaw law;
    law.weights.assign(global_count, 1.0 / global_count);
    for (int g = 0; g < global_count; ++g) law.support.push_back(GlobalState::finite(g));
    return law;
  };
  env.reward = [](int, int, const StateDistribution&, const GlobalState&,
                  const ActionDistribution&) { return 0.0; };
  return env;
}

EnvironmentSpec make_random_finite_env(int local_states, int actions, int global_count,
                                       std::uint64_t seed) {
  EnvironmentSpec env;
  env.name = "random-finite";
  env.local_state_count = local_states;
  env.action_count = actions;
  env.reward_bound = 1.0;
  set_finite_global(env, global_count);

  RngStream rng(seed);
  // base[x][u][g] local laws, baseG[g] global laws, r0[x][u][g] in [-1, 1].
  auto base = std::vector<std::vector<std::vector<std::vector<double>>>>(local_states);
  auto r0 = std::vector<std::vector<std::vector<double>>>(local_states);
  for (int x = 0; x < local_states; ++x) {
    base[x].resize(actions);
    r0[x].resize(actions);
    for (int u = 0; u < actions; ++u) {
      base[x][u].resize(global_count);
      r0[x][u].resize(global_count);
      for (int g = 0; g < global_count; ++g) {
        base[x][u][g] = random_simplex(local_states, rng);
        r0[x][u][g] = 2.0 * rng.uniform() - 1.0;
      }
    }
  }
  auto base_g = std::vector<std::vector<double>>(global_count);
  for (int g = 0; g < global_count; ++g) base_g[g] = random_simplex(global_count, rng);
  auto m_coeff = random_simplex(local_states, rng);
  auto a_coeff = random_simplex(actions, rng);

  const int nx = local_states;
  const int ng = global_count;
  env.local_transition = [base, nx](int x, int u, const StateDistribution& mu,
                                    const GlobalState& g, const ActionDistribution&) {
    StateDistribution next{std::vector<double>(nx)};
    for (int y = 0; y < nx; ++y) {
      next.w[y] = 0.7 * base[x][u][g.index][y] + 0.3 * mu.w[(y + x + u) % nx];
    }
    return next;
  };
  env.global_transition = [base_g, ng](const StateDistribution&, const GlobalState& g,
                                       const ActionDistribution& nu) {
    GlobalLaw law;
    law.weights.assign(ng, 0.0);
    const int nu_size = static_cast<int>(nu.w.size());
    for (int h = 0; h < ng; ++h) {
      // Action-distribution mass folded cyclically onto the global support.
      double lifted = 0.0;
      for (int u = h; u < nu_size; u += ng) lifted += nu.w[u];
      law.weights[h] = 0.7 * base_g[g.index][h] + 0.3 * lifted;
      law.support.push_back(GlobalState::finite(h));
    }
    // The folding preserves total mass; fold rounding dust back in so the
    // law sums to one exactly.
    double total = 0.0;
    for (double w : law.weights) total += w;
    law.weights[g.index] += 1.0 - total;
    return law;
  };
  env.reward = [r0, m_coeff, a_coeff](int x, int u, const StateDistribution& mu,
                                      const GlobalState& g, const ActionDistribution& nu) {
    double mu_term = 0.0;
    for (std::size_t i = 0; i < mu.w.size(); ++i) mu_term += m_coeff[i] * mu.w[i];
    double nu_term = 0.0;
    for (std::size_t i = 0; i < nu.w.size(); ++i) nu_term += a_coeff[i] * nu.w[i];
    return 0.5 * r0[x][u][g.index] + 0.25 * mu_term + 0.25 * nu_term;
  };
  return env;
}

EnvironmentSpec make_two_state_chain_env() {
  EnvironmentSpec env;
  env.name = "two-state-chain";
  env.local_state_count = 2;
  env.action_count = 1;
  env.reward_bound = 1.0;
  set_finite_global(env, 1);
  const std::vector<std::vector<double>> base = {{0.6, 0.4}, {0.2, 0.8}};
  env.local_transition = [base](int x, int, const StateDistribution& mu, const GlobalState&,
                                const ActionDistribution&) {
    StateDistribution next{{0.0, 0.0}};
    for (int y = 0; y < 2; ++y) next.w[y] = 0.7 * base[x][y] + 0.3 * mu.w[y];
    return next;
  };
  set_fixed_global(env);
  env.reward = [](int x, int, const StateDistribution& mu, const GlobalState&,
                  const ActionDistribution&) { return 0.1 * (x + 1) + 0.2 * mu.w[0]; };
  return env;
}

EnvironmentSpec make_two_arm_bandit_env() {
  EnvironmentSpec env;
  env.name = "two-arm-bandit";
  env.local_state_count = 1;
  env.action_count = 2;
  env.reward_bound = 1.0;
  set_finite_global(env, 1);
  set_identity_local(env);
  set_fixed_global(env);
  env.reward = [](int, int u, const StateDistribution&, const GlobalState&,
                  const ActionDistribution&) { return u == 0 ? 1.0 : 0.0; };
  return env;
}

}  // namespace mfc
