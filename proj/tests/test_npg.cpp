#include <doctest.h>

#include <cmath>

#include "mfc/errors.hpp"
#include "mfc/npg.hpp"
#include "mfc/toy_envs.hpp"
#include "oracles.hpp"

using namespace mfc;

TEST_CASE("geometric stopping time") {
  const EnvironmentSpec env = make_two_state_chain_env();
  const PolicyParams phi = make_zero_policy(env);
  const StateDistribution mu0 = uniform_state_distribution(2);
  const GlobalState g0 = GlobalState::finite(0);

  SUBCASE("vanishing gamma stops immediately") {
    RngStream rng(1);
    for (int i = 0; i < 200; ++i) {
      const OccupancySample s = sample_occupancy(env, phi, mu0, g0, 1e-12, rng, 100);
      CHECK(s.stop_time == 0);
      for (int x = 0; x < 2; ++x) CHECK(s.mu.w[x] == mu0.w[x]);
    }
  }
  SUBCASE("empirical mean is gamma / (1 - gamma)") {
    RngStream rng(2);
    const double gamma = 0.9;
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
      sum += sample_occupancy(env, phi, mu0, g0, gamma, rng, 2000).stop_time;
    const double mean = sum / draws;
    CHECK(mean == doctest::Approx(gamma / (1.0 - gamma)).epsilon(0.05));
  }
}

TEST_CASE("advantage estimates are capped and unbiased on a tiny environment") {
  const EnvironmentSpec env = make_random_finite_env(2, 2, 1, 3);
  const PolicyParams phi = make_gaussian_policy(env, kDefaultWeightCap, 0.8, 4);
  const StateDistribution mu0 = uniform_state_distribution(2);
  const GlobalState g0 = GlobalState::finite(0);
  const double gamma = 0.5;
  const int cap = 200;

  const testing::ExactAdvantage exact = testing::oracle_exact_advantage(env, phi, mu0, g0, gamma, 60);

  // Conditioned on stopping immediately (mu still mu0), the estimator's mean
  // must match the backward-DP advantage per (x, u).
  double sum[2][2] = {};
  double sum_sq[2][2] = {};
  long count[2][2] = {};
  RngStream rng(5);
  for (int i = 0; i < 200000; ++i) {
    const OccupancySample s = sample_occupancy(env, phi, mu0, g0, gamma, rng, cap);
    CHECK(std::abs(s.advantage_estimate) <= 2.0 * env.reward_bound * cap);
    if (s.stop_time != 0) continue;
    sum[s.x][s.u] += s.advantage_estimate;
    sum_sq[s.x][s.u] += s.advantage_estimate * s.advantage_estimate;
    ++count[s.x][s.u];
  }
  for (int x = 0; x < 2; ++x) {
    for (int u = 0; u < 2; ++u) {
      REQUIRE(count[x][u] > 1000);
      const double mean = sum[x][u] / count[x][u];
      const double var = (sum_sq[x][u] - count[x][u] * mean * mean) / (count[x][u] - 1);
      const double se = std::sqrt(std::max(var, 0.0) / count[x][u]);
      CHECK(std::abs(mean - exact.advantage(x, u)) <= 3.0 * se);
    }
  }
}

TEST_CASE("solve_w_sgd degenerate cases") {
  SUBCASE("zero rewards keep w at the origin") {
    const EnvironmentSpec env = make_identity_env(2, 2);  // reward identically zero
    const PolicyParams phi = make_gaussian_policy(env, kDefaultWeightCap, 0.5, 6);
    const std::vector<double> w = solve_w_sgd(env, phi, uniform_state_distribution(2),
                                              GlobalState::finite(0), 0.1, 50, 0.8, 500, 7);
    for (double v : w) CHECK(v == 0.0);
  }
  SUBCASE("single-action environments have zero scores, hence w = 0") {
    const EnvironmentSpec env = make_constant_reward_env(2, 1, 0.9);
    const PolicyParams phi = make_zero_policy(env);
    const std::vector<double> w = solve_w_sgd(env, phi, uniform_state_distribution(2),
                                              GlobalState::finite(0), 0.1, 50, 0.8, 500, 8);
    for (double v : w) CHECK(v == 0.0);
  }
}

TEST_CASE("solve_w_sgd reduces the compatible regression objective on the bandit") {
  const EnvironmentSpec env = make_two_arm_bandit_env();
  const PolicyParams phi = make_zero_policy(env);
  const StateDistribution mu0{{1.0}};
  const GlobalState g0 = GlobalState::finite(0);
  const double gamma = 0.5;

  const std::vector<double> w =
      solve_w_sgd(env, phi, mu0, g0, /*alpha=*/0.01, /*inner_iters=*/2000, gamma, 2000, 9);

  // Exact advantages of the uniform bandit policy: A(0) = 1 - p, A(1) = -p
  // with p = 1/2. The Monte-Carlo objective uses fresh occupancy samples.
  auto objective = [&](const std::vector<double>& weights) {
    RngStream rng(10);
    double total = 0.0;
    const int samples = 4000;
    for (int i = 0; i < samples; ++i) {
      const OccupancySample s = sample_occupancy(env, phi, mu0, g0, gamma, rng, 2000);
      const double advantage = s.u == 0 ? 0.5 : -0.5;
      const std::vector<double> score = log_prob_grad(env, phi, s.x, s.mu, s.g, s.u);
      double fit = 0.0;
      for (std::size_t k = 0; k < score.size(); ++k) fit += weights[k] * score[k];
      const double residual = advantage - (1.0 - gamma) * fit;
      total += residual * residual;
    }
    return total / samples;
  };
  const std::vector<double> zero(w.size(), 0.0);
  CHECK(objective(w) < objective(zero));
}

TEST_CASE("diverging inner SGD raises a numeric error naming the iteration") {
  const EnvironmentSpec env = make_two_arm_bandit_env();
  const PolicyParams phi = make_zero_policy(env);
  CHECK_THROWS_WITH_AS(solve_w_sgd(env, phi, StateDistribution{{1.0}}, GlobalState::finite(0),
                                   /*alpha=*/1e300, 50, 0.9, 2000, 14),
                       doctest::Contains("iteration"), NumericError);
}

TEST_CASE("npg_run preserves the partial trace when the inner solver fails") {
  const EnvironmentSpec env = make_two_arm_bandit_env();
  NPGConfig config;
  config.eta = 0.05;
  config.alpha = 1e300;  // diverges on the first outer iteration
  config.outer_iters = 3;
  config.inner_iters = 50;
  config.master_seed = 15;
  const TrainingTrace trace =
      npg_run(env, make_zero_policy(env), StateDistribution{{1.0}}, GlobalState::finite(0), config);
  CHECK_FALSE(trace.completed);
  CHECK(trace.abort_reason.find("outer iteration 0") != std::string::npos);
  CHECK(trace.rows.empty());
}

TEST_CASE("average value improves as the iteration budget doubles") {
  const EnvironmentSpec env = make_two_arm_bandit_env();
  const PolicyParams phi0 = make_zero_policy(env);
  const StateDistribution mu0{{1.0}};
  const GlobalState g0 = GlobalState::finite(0);
  double prev_avg = -1e300;
  for (int j_budget : {4, 8, 16}) {
    NPGConfig config;
    config.eta = 0.05;
    config.alpha = 0.005;
    config.outer_iters = j_budget;
    config.inner_iters = 150;
    config.gamma = 0.9;
    config.master_seed = 16;  // shared seed: shorter runs are prefixes
    const TrainingTrace trace = npg_run(env, phi0, mu0, g0, config);
    REQUIRE(trace.completed);
    REQUIRE(static_cast<int>(trace.rows.size()) == j_budget);
    double avg = 0.0;
    for (const TraceRow& row : trace.rows) avg += row.value_mean;
    avg /= j_budget;
    CHECK(avg > prev_avg);  // equivalently: the average gap to 1/(1-gamma) shrinks
    prev_avg = avg;
  }
}

TEST_CASE("npg_run") {
  const EnvironmentSpec env = make_two_arm_bandit_env();
  const PolicyParams phi0 = make_zero_policy(env);
  const StateDistribution mu0{{1.0}};
  const GlobalState g0 = GlobalState::finite(0);

  SUBCASE("zero step size keeps the parameters fixed") {
    NPGConfig config;
    config.eta = 0.0;
    config.outer_iters = 1;
    config.inner_iters = 20;
    config.master_seed = 11;
    const TrainingTrace trace = npg_run(env, phi0, mu0, g0, config);
    REQUIRE(trace.completed);
    REQUIRE(trace.rows.size() == 1);
    CHECK(trace.rows[0].params.theta == phi0.theta);
  }
  SUBCASE("training improves the bandit value") {
    NPGConfig config;
    config.eta = 0.05;
    config.alpha = 0.005;
    config.outer_iters = 12;
    config.inner_iters = 150;
    config.gamma = 0.9;
    config.master_seed = 12;
    const TrainingTrace trace = npg_run(env, phi0, mu0, g0, config);
    REQUIRE(trace.completed);
    const double initial = 0.5 / (1.0 - config.gamma);  // uniform policy value
    CHECK(trace.rows.back().value_mean > initial);
    for (const TraceRow& row : trace.rows) {
      for (double v : row.params.theta) CHECK(std::abs(v) <= phi0.weight_cap);
      CHECK(row.wall_seconds == 0.0);  // timings disabled by default
    }
  }
  SUBCASE("identical configuration reproduces the trace bit for bit") {
    NPGConfig config;
    config.eta = 0.05;
    config.alpha = 0.005;
    config.outer_iters = 4;
    config.inner_iters = 60;
    config.master_seed = 13;
    const TrainingTrace a = npg_run(env, phi0, mu0, g0, config);
    const TrainingTrace b = npg_run(env, phi0, mu0, g0, config);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t j = 0; j < a.rows.size(); ++j) {
      CHECK(a.rows[j].params.theta == b.rows[j].params.theta);
      CHECK(a.rows[j].value_mean == b.rows[j].value_mean);
      CHECK(a.rows[j].w_norm == b.rows[j].w_norm);
    }
  }
  SUBCASE("invalid configuration is rejected") {
    NPGConfig config;
    config.gamma = 1.0;
    CHECK_THROWS_AS(npg_run(env, phi0, mu0, g0, config), ArgumentError);
  }
}
