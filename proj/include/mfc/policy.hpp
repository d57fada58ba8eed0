#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfc/env.hpp"

namespace mfc {

/// Softmax-linear policy: logits are theta * features(x, mu, g) where the
/// feature vector is one-hot(x) (+) mu (+) encode(g) (+) bias. Every weight
/// is kept inside [-weight_cap, weight_cap], which gives the policy class an
/// analytic Lipschitz modulus in mu.
struct PolicyParams {
  int action_count = 0;
  int feature_dim = 0;
  double weight_cap = 10.0;
  std::vector<double> theta;  // row-major, action_count x feature_dim

  int param_count() const { return action_count * feature_dim; }
  double at(int action, int feature) const { return theta[action * feature_dim + feature]; }
  double& at(int action, int feature) { return theta[action * feature_dim + feature]; }
};

inline constexpr double kDefaultWeightCap = 10.0;

int feature_dim_for(const EnvironmentSpec& env);

PolicyParams make_zero_policy(const EnvironmentSpec& env, double weight_cap = kDefaultWeightCap);
PolicyParams make_gaussian_policy(const EnvironmentSpec& env, double weight_cap, double stddev,
                                  std::uint64_t seed);

/// one-hot(x) (+) mu (+) encode(g) (+) 1. All entries lie in [0, 1] for
/// valid inputs.
std::vector<double> features(const EnvironmentSpec& env, int x, const StateDistribution& mu,
                             const GlobalState& g);

/// Softmax over theta * features, stabilized by subtracting the max logit.
/// Entries are strictly positive.
ActionDistribution action_dist(const EnvironmentSpec& env, const PolicyParams& phi, int x,
                               const StateDistribution& mu, const GlobalState& g);

/// Analytic score of the chosen action: the block for action row a equals
/// (1{a == u} - pi(a)) * features(x, mu, g). Flat layout matches theta.
std::vector<double> log_prob_grad(const EnvironmentSpec& env, const PolicyParams& phi, int x,
                                  const StateDistribution& mu, const GlobalState& g, int u);

/// Upper bound L_Q with |pi(x, mu1, g) - pi(x, mu2, g)|_1 <= L_Q |mu1 - mu2|_1.
/// Derivation: mu1 - mu2 has zero sum, so each logit moves by at most
/// row-gap/2 per unit of L1 perturbation, and the softmax's mean absolute
/// deviation bound turns a logit spread into an L1 change of half that much.
double lipschitz_constant_lq(const PolicyParams& phi, int local_state_count);

/// Projects every weight onto [-weight_cap, weight_cap]. Idempotent.
PolicyParams clip_weights(PolicyParams phi);

/// Per-(mu, g) precomputation for evaluating the policy at many local
/// states, as the N-agent stepper does. Produces exactly the same
/// distribution as action_dist.
class SharedPolicyContext {
 public:
  SharedPolicyContext(const EnvironmentSpec& env, const PolicyParams& phi,
                      const StateDistribution& mu, const GlobalState& g);
  ActionDistribution dist_for(int x) const;

 private:
  const PolicyParams& phi_;
  std::vector<double> base_logits_;  // mu, encoding and bias contributions
};

}  // namespace mfc
