#include "mfc/policy.hpp"

#include <algorithm>
#include <cmath>

#include "mfc/errors.hpp"

namespace mfc {

namespace {

void check_policy_shape(const EnvironmentSpec& env, const PolicyParams& phi) {
  if (phi.action_count != env.action_count || phi.feature_dim != feature_dim_for(env))
    throw ArgumentError("policy parameters do not match the environment's dimensions");
  if (static_cast<int>(phi.theta.size()) != phi.param_count())
    throw ArgumentError("policy parameter matrix has wrong size");
}

ActionDistribution softmax(std::span<const double> logits) {
  double max_logit = logits[0];
  for (double s : logits) {
    if (std::isnan(s)) throw NumericError("policy logits contain NaN");
    max_logit = std::max(max_logit, s);
  }
  ActionDistribution pi{std::vector<double>(logits.size())};
  double sum = 0.0;
  for (std::size_t a = 0; a < logits.size(); ++a) {
    pi.w[a] = std::exp(logits[a] - max_logit);
    sum += pi.w[a];
  }
  for (double& p : pi.w) p /= sum;
  return pi;
}

}  // namespace

int feature_dim_for(const EnvironmentSpec& env) {
  return 2 * env.local_state_count + env.global_encoding_dim + 1;
}

PolicyParams make_zero_policy(const EnvironmentSpec& env, double weight_cap) {
  if (weight_cap <= 0) throw ArgumentError("weight cap must be positive");
  PolicyParams phi;
  phi.action_count = env.action_count;
  phi.feature_dim = feature_dim_for(env);
  phi.weight_cap = weight_cap;
  phi.theta.assign(static_cast<std::size_t>(phi.param_count()), 0.0);
  return phi;
}

PolicyParams make_gaussian_policy(const EnvironmentSpec& env, double weight_cap, double stddev,
                                  std::uint64_t seed) {
  PolicyParams phi = make_zero_policy(env, weight_cap);
  RngStream rng(seed);
  for (double& w : phi.theta) w = rng.gaussian(0.0, stddev);
  return clip_weights(std::move(phi));
}

std::vector<double> features(const EnvironmentSpec& env, int x, const StateDistribution& mu,
                             const GlobalState& g) {
  if (x < 0 || x >= env.local_state_count) throw ArgumentError("feature local state out of range");
  if (static_cast<int>(mu.w.size()) != env.local_state_count)
    throw ArgumentError("feature state distribution has wrong dimension");
  std::vector<double> f;
  f.reserve(static_cast<std::size_t>(feature_dim_for(env)));
  for (int i = 0; i < env.local_state_count; ++i) f.push_back(i == x ? 1.0 : 0.0);
  f.insert(f.end(), mu.w.begin(), mu.w.end());
  const std::vector<double> enc = encode_global(env, g);
  f.insert(f.end(), enc.begin(), enc.end());
  f.push_back(1.0);
  return f;
}

SharedPolicyContext::SharedPolicyContext(const EnvironmentSpec& env, const PolicyParams& phi,
                                         const StateDistribution& mu, const GlobalState& g)
    : phi_(phi) {
  check_policy_shape(env, phi);
  const std::vector<double> enc = encode_global(env, g);
  const int nx = env.local_state_count;
  base_logits_.assign(static_cast<std::size_t>(phi.action_count), 0.0);
  for (int a = 0; a < phi.action_count; ++a) {
    double s = 0.0;
    for (int i = 0; i < nx; ++i) s += phi.at(a, nx + i) * mu.w[i];
    for (std::size_t i = 0; i < enc.size(); ++i) s += phi.at(a, 2 * nx + static_cast<int>(i)) * enc[i];
    s += phi.at(a, phi.feature_dim - 1);
    base_logits_[a] = s;
  }
}

ActionDistribution SharedPolicyContext::dist_for(int x) const {
  std::vector<double> logits(base_logits_);
  for (std::size_t a = 0; a < logits.size(); ++a) logits[a] += phi_.at(static_cast<int>(a), x);
  return softmax(logits);
}

ActionDistribution action_dist(const EnvironmentSpec& env, const PolicyParams& phi, int x,
                               const StateDistribution& mu, const GlobalState& g) {
  if (x < 0 || x >= env.local_state_count) throw ArgumentError("local state out of range");
  return SharedPolicyContext(env, phi, mu, g).dist_for(x);
}

std::vector<double> log_prob_grad(const EnvironmentSpec& env, const PolicyParams& phi, int x,
                                  const StateDistribution& mu, const GlobalState& g, int u) {
  check_policy_shape(env, phi);
  if (u < 0 || u >= env.action_count) throw ArgumentError("action out of range");
  const ActionDistribution pi = action_dist(env, phi, x, mu, g);
  const std::vector<double> f = features(env, x, mu, g);
  std::vector<double> grad(static_cast<std::size_t>(phi.param_count()));
  for (int a = 0; a < phi.action_count; ++a) {
    const double coeff = (a == u ? 1.0 : 0.0) - pi.w[a];
    for (int i = 0; i < phi.feature_dim; ++i) grad[a * phi.feature_dim + i] = coeff * f[i];
  }
  return grad;
}

double lipschitz_constant_lq(const PolicyParams& phi, int local_state_count) {
  double max_row_gap = 0.0;
  for (int a = 0; a < phi.action_count; ++a) {
    double lo = phi.at(a, local_state_count);
    double hi = lo;
    for (int i = 1; i < local_state_count; ++i) {
      const double w = phi.at(a, local_state_count + i);
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    max_row_gap = std::max(max_row_gap, hi - lo);
  }
  return 0.5 * max_row_gap;
}

PolicyParams clip_weights(PolicyParams phi) {
  for (double& w : phi.theta) w = std::clamp(w, -phi.weight_cap, phi.weight_cap);
  return phi;
}

}  // namespace mfc
