#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mfc/env.hpp"
#include "mfc/policy.hpp"

namespace mfc {

/// Joint state of the finite system: per-agent local states plus the shared
/// global state.
struct NAgentState {
  std::vector<int> locals;
  GlobalState global;
  int t = 0;
};

/// Empirical distribution of N agents; entries are integer multiples of 1/N.
struct EmpiricalDistribution {
  std::vector<double> weights;
  int denominator = 0;
};

/// Monte-Carlo estimate of a discounted value. `tail_bound` is the worst
/// case contribution of the truncated tail, M * gamma^H / (1 - gamma).
struct ValueEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  int rollouts = 0;
  int horizon = 0;
  double tail_bound = 0.0;
};

EmpiricalDistribution empirical_state_dist(std::span<const int> locals, int state_count);
EmpiricalDistribution empirical_action_dist(std::span<const int> actions, int action_count);

inline StateDistribution to_state_distribution(const EmpiricalDistribution& e) {
  return StateDistribution{e.weights};
}
inline ActionDistribution to_action_distribution(const EmpiricalDistribution& e) {
  return ActionDistribution{e.weights};
}

/// One synchronous step of the N-agent system: per-agent actions drawn from
/// the shared policy, conditionally independent local transitions, one
/// global transition, and the agent-averaged reward.
std::pair<NAgentState, double> step_nagent(const EnvironmentSpec& env, const PolicyParams& phi,
                                           const NAgentState& state, RngStream& rng);

/// Draws N initial local states i.i.d. from mu0.
std::vector<int> draw_initial_locals(const StateDistribution& mu0, int n, RngStream& rng);

/// Smallest horizon H with gamma^H / (1 - gamma) < rel_tail, so the reported
/// truncation error is below rel_tail * M.
int default_horizon(double gamma, double rel_tail = 1e-3);

/// Monte-Carlo estimate of the N-agent discounted value from a fixed initial
/// condition. Rollouts are independent; with workers > 1 they are spread
/// over threads, each rollout on its own substream of `seed`, and the
/// aggregation is order-independent so the result does not depend on the
/// worker count.
ValueEstimate estimate_value_nagent(const EnvironmentSpec& env, const PolicyParams& phi,
                                    std::span<const int> initial_locals, const GlobalState& g0,
                                    double gamma, int horizon, int rollouts, std::uint64_t seed,
                                    int workers = 1);

/// Mean and standard error of pre-computed per-rollout returns, accumulated
/// with compensated summation in index order.
ValueEstimate summarize_returns(std::span<const double> returns, int horizon, double tail_bound);

}  // namespace mfc
