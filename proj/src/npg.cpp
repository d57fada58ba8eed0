#include "mfc/npg.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "mfc/errors.hpp"

namespace mfc {

void validate(const NPGConfig& config) {
  if (!(config.eta >= 0.0)) throw ArgumentError("npg: eta must be non-negative");
  if (!(config.alpha > 0.0)) throw ArgumentError("npg: alpha must be positive");
  if (config.outer_iters < 1) throw ArgumentError("npg: outer_iters must be >= 1");
  if (config.inner_iters < 1) throw ArgumentError("npg: inner_iters must be >= 1");
  if (!(config.gamma > 0.0 && config.gamma < 1.0)) throw ArgumentError("npg: gamma must lie in (0, 1)");
  if (config.horizon_cap < 1) throw ArgumentError("npg: horizon_cap must be >= 1");
}

namespace {

// Representative-agent chain of the mean-field MDP: the local state and
// action are sampled while mu evolves deterministically.
struct ChainState {
  int x;
  int u;
  StateDistribution mu;
  GlobalState g;
  ActionDistribution nu;
};

void advance_chain(const EnvironmentSpec& env, const PolicyParams& phi, ChainState& s,
                   RngStream& rng) {
  const StateDistribution law = env.local_transition(s.x, s.u, s.mu, s.g, s.nu);
  const int x_next = rng.categorical(law.w);
  const GlobalState g_next = global_transition_sample(env, s.mu, s.g, s.nu, rng);
  StateDistribution mu_next = p_mf(env, phi, s.mu, s.g);
  s.x = x_next;
  s.g = g_next;
  s.mu = std::move(mu_next);
  s.u = rng.categorical(action_dist(env, phi, s.x, s.mu, s.g).w);
  s.nu = nu_mf(env, phi, s.mu, s.g);
}

}  // namespace

OccupancySample sample_occupancy(const EnvironmentSpec& env, const PolicyParams& phi,
                                 const StateDistribution& mu0, const GlobalState& g0, double gamma,
                                 RngStream& rng, int horizon_cap) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in [0, 1)");
  if (horizon_cap < 1) throw ArgumentError("horizon_cap must be >= 1");
  require_simplex(mu0.w, "initial state distribution");
  validate_global_state(env, g0);

  ChainState s;
  s.mu = mu0;
  s.g = g0;
  s.x = rng.categorical(mu0.w);
  s.u = rng.categorical(action_dist(env, phi, s.x, s.mu, s.g).w);
  s.nu = nu_mf(env, phi, s.mu, s.g);

  OccupancySample sample;
  int t = 0;
  while (!rng.bernoulli(1.0 - gamma)) {
    if (t >= horizon_cap) {
      sample.truncated = true;
      break;
    }
    advance_chain(env, phi, s, rng);
    ++t;
  }
  sample.stop_time = t;
  sample.x = s.x;
  sample.mu = s.mu;
  sample.g = s.g;
  sample.u = s.u;

  // Continuation: undiscounted rewards over an independent geometric length.
  // A fair coin decides whether it scores the accepted action (Q branch) or
  // a freshly drawn one (V branch).
  const bool q_branch = rng.bernoulli(0.5);
  if (!q_branch) s.u = rng.categorical(action_dist(env, phi, s.x, s.mu, s.g).w);

  double sum_rewards = 0.0;
  for (int steps = 0;; ++steps) {
    sum_rewards += env.reward(s.x, s.u, s.mu, s.g, s.nu);
    if (rng.bernoulli(1.0 - gamma)) break;
    if (steps + 1 >= horizon_cap) {  // at most horizon_cap rewards in the sum
      sample.truncated = true;
      break;
    }
    advance_chain(env, phi, s, rng);
  }

  const double q_hat = q_branch ? sum_rewards : 0.0;
  const double v_hat = q_branch ? 0.0 : sum_rewards;
  sample.advantage_estimate = 2.0 * (q_hat - v_hat);
  return sample;
}

std::vector<double> solve_w_sgd(const EnvironmentSpec& env, const PolicyParams& phi,
                                const StateDistribution& mu0, const GlobalState& g0, double alpha,
                                int inner_iters, double gamma, int horizon_cap, std::uint64_t seed,
                                OccupancyDiagnostics* diagnostics) {
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
  if (inner_iters < 1) throw ArgumentError("inner iteration count must be >= 1");

  const std::size_t d = static_cast<std::size_t>(phi.param_count());
  std::vector<double> w(d, 0.0);
  std::vector<double> w_sum(d, 0.0);
  for (int l = 0; l < inner_iters; ++l) {
    RngStream rng(substream_seed(seed, stream_tag("occupancy"), static_cast<std::uint64_t>(l)));
    const OccupancySample sample = sample_occupancy(env, phi, mu0, g0, gamma, rng, horizon_cap);
    if (diagnostics != nullptr) {
      ++diagnostics->samples;
      if (sample.truncated) ++diagnostics->truncated;
    }
    const std::vector<double> score = log_prob_grad(env, phi, sample.x, sample.mu, sample.g, sample.u);
    double w_dot_score = 0.0;
    for (std::size_t i = 0; i < d; ++i) w_dot_score += w[i] * score[i];
    const double residual = w_dot_score - sample.advantage_estimate / (1.0 - gamma);
    for (std::size_t i = 0; i < d; ++i) {
      w[i] -= alpha * residual * score[i];
      if (!std::isfinite(w[i]))
        throw NumericError("inner SGD iterate became non-finite at iteration " + std::to_string(l));
      w_sum[i] += w[i];
    }
  }
  for (double& v : w_sum) v /= inner_iters;
  return w_sum;
}

TrainingTrace npg_run(const EnvironmentSpec& env, const PolicyParams& phi0,
                      const StateDistribution& mu0, const GlobalState& g0, const NPGConfig& config,
                      const NpgEvalOptions& eval) {
  validate(config);
  const int eval_horizon = eval.horizon > 0 ? eval.horizon : default_horizon(config.gamma);

  TrainingTrace trace;
  PolicyParams phi = phi0;
  for (int j = 0; j < config.outer_iters; ++j) {
    const auto started = std::chrono::steady_clock::now();
    std::vector<double> w;
    try {
      w = solve_w_sgd(env, phi, mu0, g0, config.alpha, config.inner_iters, config.gamma,
                      config.horizon_cap,
                      substream_seed(config.master_seed, stream_tag("npg-outer"),
                                     static_cast<std::uint64_t>(j)));
    } catch (const NumericError& e) {
      trace.abort_reason = "outer iteration " + std::to_string(j) + ": " + e.what();
      return trace;
    }

    double norm_sq = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      norm_sq += w[i] * w[i];
      phi.theta[i] += config.eta * w[i];
    }
    phi = clip_weights(std::move(phi));

    const ValueEstimate value = estimate_value_mfc_mc(
        env, phi, mu0, g0, config.gamma, eval_horizon, eval.rollouts,
        substream_seed(config.master_seed, stream_tag("npg-eval"), static_cast<std::uint64_t>(j)));

    TraceRow row;
    row.iteration = j;
    row.value_mean = value.mean;
    row.value_stderr = value.stderr_of_mean;
    row.w_norm = std::sqrt(norm_sq);
    if (eval.collect_timings) {
      row.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    row.params = phi;
    trace.rows.push_back(std::move(row));
  }
  trace.completed = true;
  return trace;
}

}  // namespace mfc
