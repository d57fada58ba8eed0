#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfc/rng.hpp"
#include "mfc/simplex.hpp"

namespace mfc {

/// Shared global state: either an index into a finite support or a real
/// scalar (the firm benchmark's price-per-quality is a scalar).
struct GlobalState {
  enum class Kind { kFinite, kScalar };

  Kind kind = Kind::kFinite;
  int index = 0;      // valid when kind == kFinite
  double value = 0.0; // valid when kind == kScalar

  static GlobalState finite(int i) { return GlobalState{Kind::kFinite, i, 0.0}; }
  static GlobalState scalar(double v) { return GlobalState{Kind::kScalar, 0, v}; }

  friend bool operator==(const GlobalState& a, const GlobalState& b) {
    if (a.kind != b.kind) return false;
    return a.kind == Kind::kFinite ? a.index == b.index : a.value == b.value;
  }
};

/// Enumerable distribution over global states. `weights[i]` is the
/// probability of `support[i]`. Deterministic kernels yield a point mass.
struct GlobalLaw {
  std::vector<double> weights;
  std::vector<GlobalState> support;
};

/// Composite Lipschitz/bound constants of a model instance: reward bound M
/// and the moduli of r, P, P_G and the policy class in their distribution
/// arguments (L1 metric throughout).
struct LipschitzConstants {
  double M = 1.0;
  double L_R = 0.0;
  double L_P = 0.0;
  double L_G = 0.0;
  double L_Q = 0.0;
};

/// A model instance: state/action space sizes, the global-state kind, the
/// reward bound, and the three transition/reward hooks. Hooks are pure
/// functions of (x, u, mu, g, nu); they see other agents only through the
/// distributions, which is what makes the agents exchangeable.
struct EnvironmentSpec {
  enum class GlobalKind { kFinite, kScalar };

  std::string name;
  int local_state_count = 1;  // |X|
  int action_count = 1;       // |U|
  GlobalKind global_kind = GlobalKind::kFinite;
  int global_count = 1;       // |G| when finite
  double reward_bound = 1.0;  // M

  // Full conditional distribution of the next local state.
  std::function<StateDistribution(int x, int u, const StateDistribution& mu,
                                  const GlobalState& g, const ActionDistribution& nu)>
      local_transition;

  // Enumerable conditional law of the next global state. Absent for kernels
  // that cannot be enumerated (none of the built-in environments).
  std::function<GlobalLaw(const StateDistribution& mu, const GlobalState& g,
                          const ActionDistribution& nu)>
      global_transition;

  std::function<double(int x, int u, const StateDistribution& mu, const GlobalState& g,
                       const ActionDistribution& nu)>
      reward;

  int global_encoding_dim = 1;
  std::function<std::vector<double>(const GlobalState& g)> encode_global_fn;

  /// True when the global chain has no randomness, in which case mean-field
  /// trajectories are fully deterministic. Scalar globals are deterministic
  /// by construction in this artifact.
  bool deterministic_global() const {
    return global_kind == GlobalKind::kScalar || global_count == 1;
  }
};

/// Parameters of the firm-investment benchmark.
struct FirmEnvParams {
  int quality_levels = 10;  // Q
  double lambda0 = 1.0;
  double lambda1 = 0.5;
  double beta_R = 0.5;
  double lambda_R = 0.5;
};

// ---- Environment operations ------------------------------------------------

// Validated access to the hooks. The *_sample forms draw from the returned
// law with the caller's stream.
StateDistribution local_transition_dist(const EnvironmentSpec& env, int x, int u,
                                        const StateDistribution& mu, const GlobalState& g,
                                        const ActionDistribution& nu);
int local_transition_sample(const EnvironmentSpec& env, int x, int u,
                            const StateDistribution& mu, const GlobalState& g,
                            const ActionDistribution& nu, RngStream& rng);
GlobalLaw global_transition_dist(const EnvironmentSpec& env, const StateDistribution& mu,
                                 const GlobalState& g, const ActionDistribution& nu);
GlobalState global_transition_sample(const EnvironmentSpec& env, const StateDistribution& mu,
                                     const GlobalState& g, const ActionDistribution& nu,
                                     RngStream& rng);
double reward(const EnvironmentSpec& env, int x, int u, const StateDistribution& mu,
              const GlobalState& g, const ActionDistribution& nu);
std::vector<double> encode_global(const EnvironmentSpec& env, const GlobalState& g);

/// Builds the firm-investment environment: X = {0..Q-1} quality levels,
/// U = {0,1} (invest or not), scalar global price alpha. Investment raises
/// quality by floor(chi * headroom * (1 - mean_quality/Q)) with chi uniform
/// on [0,1]; the price recursion is alpha' = lambda0 * (1 - lambda1 * mean_quality / Q).
EnvironmentSpec firm_env_make(const FirmEnvParams& params);

void validate_global_state(const EnvironmentSpec& env, const GlobalState& g);

}  // namespace mfc
