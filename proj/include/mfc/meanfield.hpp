#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfc/env.hpp"
#include "mfc/nagent.hpp"
#include "mfc/policy.hpp"

namespace mfc {

/// Mean-field action distribution: nu(u) = sum_x pi(x, mu, g)(u) * mu(x).
ActionDistribution nu_mf(const EnvironmentSpec& env, const PolicyParams& phi,
                         const StateDistribution& mu, const GlobalState& g);

/// Deterministic state-distribution update:
/// mu'(y) = sum_x sum_u P(x, u, mu, g, nu_mf)(y) * pi(x, mu, g)(u) * mu(x).
StateDistribution p_mf(const EnvironmentSpec& env, const PolicyParams& phi,
                       const StateDistribution& mu, const GlobalState& g);

/// Law of the next global state under the mean-field action distribution.
GlobalLaw pg_mf(const EnvironmentSpec& env, const PolicyParams& phi, const StateDistribution& mu,
                const GlobalState& g);

/// Population-averaged one-step reward under the policy.
double r_mf(const EnvironmentSpec& env, const PolicyParams& phi, const StateDistribution& mu,
            const GlobalState& g);

struct MfcStep {
  StateDistribution mu;
  GlobalState g;
  double reward;
};

/// Simulates the infinite-agent chain for `horizon` steps: mu evolves
/// deterministically through p_mf while the global state is sampled from
/// pg_mf (a no-op draw when the global chain is deterministic).
std::vector<MfcStep> rollout_mfc(const EnvironmentSpec& env, const PolicyParams& phi,
                                 const StateDistribution& mu0, const GlobalState& g0, int horizon,
                                 RngStream& rng);

/// Monte-Carlo estimate of the mean-field value. Environments with a
/// deterministic global chain need (and get) a single rollout with zero
/// standard error.
ValueEstimate estimate_value_mfc_mc(const EnvironmentSpec& env, const PolicyParams& phi,
                                    const StateDistribution& mu0, const GlobalState& g0,
                                    double gamma, int horizon, int rollouts, std::uint64_t seed);

/// Non-stationary view over policies: a fixed single policy or one policy
/// per step. The engine-level API is stationary; the per-step form exists so
/// the composed-dynamics recursions can be exercised as defined.
class PolicySequence {
 public:
  PolicySequence(const PolicyParams& stationary)  // NOLINT: implicit by design
      : stationary_(&stationary) {}
  explicit PolicySequence(std::span<const PolicyParams> per_step) : per_step_(per_step) {}

  const PolicyParams& at(int t) const {
    if (stationary_ != nullptr) return *stationary_;
    return per_step_[static_cast<std::size_t>(t)];
  }

 private:
  const PolicyParams* stationary_ = nullptr;
  std::span<const PolicyParams> per_step_;
};

struct ExactMfcOptions {
  // Upper bound on |G|^horizon before enumeration is refused.
  double path_cap = 1e6;
  // Branches whose cumulative probability falls below this are dropped; the
  // dropped mass is reported instead of silently ignored.
  double prune_threshold = 1e-15;
};

struct ExactMfcValue {
  double value = 0.0;
  double dropped_mass = 0.0;
  std::int64_t nodes_expanded = 0;
};

/// Exact truncated mean-field value by enumeration of global-state paths.
/// Walks the tree of global realisations depth-first, carrying the path
/// probability and the state distribution along the path, and accumulates
/// gamma^t * P(path) * r_mf(mu_t, g_t, pi_t) over all nodes with t < horizon.
/// For a deterministic global chain this reduces to the single rollout sum,
/// reproduced bit-for-bit.
ExactMfcValue exact_value_mfc(const EnvironmentSpec& env, const PolicySequence& policies,
                              const StateDistribution& mu0, const GlobalState& g0, double gamma,
                              int horizon, const ExactMfcOptions& options = {});

/// Expected reward t steps ahead under the composed dynamics: the sum over
/// global paths g_{1:t} of the path probability times the reward at the
/// path's end. Shares the enumeration core with exact_value_mfc.
double composed_expected_reward(const EnvironmentSpec& env, const PolicySequence& policies,
                                const StateDistribution& mu0, const GlobalState& g0, int t,
                                const ExactMfcOptions& options = {});

}  // namespace mfc
