#include "mfc/nagent.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <thread>

#include "mfc/errors.hpp"

namespace mfc {

namespace {

EmpiricalDistribution empirical_dist(std::span<const int> indices, int support, const char* what) {
  if (indices.empty()) throw ArgumentError(std::string(what) + ": empty index vector");
  if (support < 1) throw ArgumentError(std::string(what) + ": support size must be >= 1");
  std::vector<int> counts(static_cast<std::size_t>(support), 0);
  for (int i : indices) {
    if (i < 0 || i >= support)
      throw ArgumentError(std::string(what) + ": index " + std::to_string(i) + " out of range");
    ++counts[static_cast<std::size_t>(i)];
  }
  EmpiricalDistribution e;
  e.denominator = static_cast<int>(indices.size());
  e.weights.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    e.weights[i] = static_cast<double>(counts[i]) / e.denominator;
  return e;
}

// Kahan summation in index order; the total is independent of how the
// entries were produced across workers.
double compensated_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

EmpiricalDistribution empirical_state_dist(std::span<const int> locals, int state_count) {
  return empirical_dist(locals, state_count, "empirical state distribution");
}

EmpiricalDistribution empirical_action_dist(std::span<const int> actions, int action_count) {
  return empirical_dist(actions, action_count, "empirical action distribution");
}

std::pair<NAgentState, double> step_nagent(const EnvironmentSpec& env, const PolicyParams& phi,
                                           const NAgentState& state, RngStream& rng) {
  const int n = static_cast<int>(state.locals.size());
  if (n < 1) throw ArgumentError("N-agent state must contain at least one agent");
  validate_global_state(env, state.global);

  const StateDistribution mu = to_state_distribution(empirical_state_dist(state.locals, env.local_state_count));
  const SharedPolicyContext policy_ctx(env, phi, mu, state.global);

  std::vector<int> actions(state.locals.size());
  for (int i = 0; i < n; ++i) {
    actions[static_cast<std::size_t>(i)] =
        rng.categorical(policy_ctx.dist_for(state.locals[static_cast<std::size_t>(i)]).w);
  }
  const ActionDistribution nu = to_action_distribution(empirical_action_dist(actions, env.action_count));

  double reward_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    reward_sum += env.reward(state.locals[static_cast<std::size_t>(i)],
                             actions[static_cast<std::size_t>(i)], mu, state.global, nu);
  }

  // Local transition laws only depend on the agent through (x, u); memoize
  // them for the step since (mu, g, nu) are shared.
  std::vector<std::optional<StateDistribution>> law_cache(
      static_cast<std::size_t>(env.local_state_count * env.action_count));
  NAgentState next;
  next.locals.resize(state.locals.size());
  for (int i = 0; i < n; ++i) {
    const int x = state.locals[static_cast<std::size_t>(i)];
    const int u = actions[static_cast<std::size_t>(i)];
    auto& slot = law_cache[static_cast<std::size_t>(x * env.action_count + u)];
    if (!slot) slot = env.local_transition(x, u, mu, state.global, nu);
    next.locals[static_cast<std::size_t>(i)] = rng.categorical(slot->w);
  }
  next.global = global_transition_sample(env, mu, state.global, nu, rng);
  next.t = state.t + 1;
  return {std::move(next), reward_sum / n};
}

std::vector<int> draw_initial_locals(const StateDistribution& mu0, int n, RngStream& rng) {
  if (n < 1) throw ArgumentError("population size must be >= 1");
  require_simplex(mu0.w, "initial state distribution");
  std::vector<int> locals(static_cast<std::size_t>(n));
  for (int& x : locals) x = rng.categorical(mu0.w);
  return locals;
}

int default_horizon(double gamma, double rel_tail) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in (0, 1)");
  int h = 1;
  double tail = gamma / (1.0 - gamma);
  while (tail >= rel_tail && h < 100000) {
    tail *= gamma;
    ++h;
  }
  return h;
}

ValueEstimate summarize_returns(std::span<const double> returns, int horizon, double tail_bound) {
  ValueEstimate est;
  est.rollouts = static_cast<int>(returns.size());
  est.horizon = horizon;
  est.tail_bound = tail_bound;
  est.mean = compensated_sum(returns) / est.rollouts;
  if (est.rollouts > 1) {
    std::vector<double> sq(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) {
      const double d = returns[i] - est.mean;
      sq[i] = d * d;
    }
    const double var = compensated_sum(sq) / (est.rollouts - 1);
    est.stderr_of_mean = std::sqrt(var / est.rollouts);
  }
  return est;
}

ValueEstimate estimate_value_nagent(const EnvironmentSpec& env, const PolicyParams& phi,
                                    std::span<const int> initial_locals, const GlobalState& g0,
                                    double gamma, int horizon, int rollouts, std::uint64_t seed,
                                    int workers) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in (0, 1)");
  if (horizon < 1) throw ArgumentError("horizon must be >= 1");
  if (rollouts < 1) throw ArgumentError("rollout count must be >= 1");
  if (initial_locals.empty()) throw ArgumentError("initial locals must be non-empty");

  NAgentState init;
  init.locals.assign(initial_locals.begin(), initial_locals.end());
  init.global = g0;

  std::vector<double> returns(static_cast<std::size_t>(rollouts), 0.0);
  auto run_range = [&](int lo, int hi) {
    for (int r = lo; r < hi; ++r) {
      RngStream rng(substream_seed(seed, stream_tag("nagent-rollout"), static_cast<std::uint64_t>(r)));
      NAgentState state = init;
      double acc = 0.0, disc = 1.0;
      for (int t = 0; t < horizon; ++t) {
        auto [next, step_reward] = step_nagent(env, phi, state, rng);
        acc += disc * step_reward;
        disc *= gamma;
        state = std::move(next);
      }
      returns[static_cast<std::size_t>(r)] = acc;
    }
  };

  const int nthreads = std::min(std::max(workers, 1), rollouts);
  if (nthreads <= 1) {
    run_range(0, rollouts);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    const int chunk = (rollouts + nthreads - 1) / nthreads;
    for (int w = 0; w < nthreads; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(rollouts, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  const double tail = env.reward_bound * std::pow(gamma, horizon) / (1.0 - gamma);
  return summarize_returns(returns, horizon, tail);
}

}  // namespace mfc
