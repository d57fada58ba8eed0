#pragma once

#include <cstdint>

#include "mfc/env.hpp"

namespace mfc {

// Small finite environments used by tests and sanity experiments.

/// Identity local kernel, single global state, reward identically zero.
EnvironmentSpec make_identity_env(int local_states, int actions);

/// Every hook is trivial and the reward is the constant `c`.
EnvironmentSpec make_constant_reward_env(int local_states, int actions, double c);

/// Identity local kernel with a uniform kernel over `global_count` globals.
EnvironmentSpec make_uniform_global_env(int local_states, int actions, int global_count);

/// Random finite environment with kernels that genuinely depend on (mu, nu):
/// local law  P = 0.7 * base[x][u][g] + 0.3 * rotate(mu, x + u),
/// global law P_G = 0.7 * baseG[g] + 0.3 * lift(nu),
/// reward     r = 0.5 * r0[x][u][g] + 0.25 * <mu, m> + 0.25 * <nu, a>,
/// all Lipschitz in (mu, nu) and bounded by 1.
EnvironmentSpec make_random_finite_env(int local_states, int actions, int global_count,
                                       std::uint64_t seed);

/// Two-state, one-action, one-global chain with a mu-dependent kernel:
/// P(x, mu) = 0.7 * base[x] + 0.3 * mu and r = 0.1 * (x + 1) + 0.2 * mu(0).
/// Small enough for exhaustive joint-outcome enumeration.
EnvironmentSpec make_two_state_chain_env();

/// One local state, one global state, two actions with rewards 1 and 0.
EnvironmentSpec make_two_arm_bandit_env();

}  // namespace mfc
