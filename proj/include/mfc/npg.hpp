#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfc/meanfield.hpp"

namespace mfc {

/// Hyper-parameters of the natural-policy-gradient trainer: outer step size
/// eta, inner SGD step size alpha, J outer iterations, L inner iterations,
/// discount, master seed and a safety cap on geometric rollout lengths.
struct NPGConfig {
  double eta = 0.05;
  double alpha = 0.05;
  int outer_iters = 50;   // J
  int inner_iters = 500;  // L
  double gamma = 0.9;
  std::uint64_t master_seed = 1;
  int horizon_cap = 2000;
};

void validate(const NPGConfig& config);

/// One draw from the discounted state-action occupancy measure together with
/// an unbiased advantage estimate for the drawn pair.
struct OccupancySample {
  int x = 0;
  StateDistribution mu;
  GlobalState g;
  int u = 0;
  double advantage_estimate = 0.0;
  int stop_time = 0;     // T, the geometric stopping time of the first phase
  bool truncated = false;  // a geometric phase hit horizon_cap
};

/// Draws (x_T, mu_T, g_T, u_T) with T geometric of rate 1 - gamma (the
/// stopping check precedes the first transition, so T = 0 is reachable) by
/// rolling the representative-agent chain, then estimates the advantage with
/// a single undiscounted continuation of independent geometric length: a
/// fair coin assigns the continuation either to Q-hat (starting with the
/// accepted action) or to V-hat (the action is redrawn from the policy
/// first), and the estimate is 2 * (Q-hat - V-hat) with the unused branch
/// left at zero.
OccupancySample sample_occupancy(const EnvironmentSpec& env, const PolicyParams& phi,
                                 const StateDistribution& mu0, const GlobalState& g0, double gamma,
                                 RngStream& rng, int horizon_cap);

struct OccupancyDiagnostics {
  std::int64_t samples = 0;
  std::int64_t truncated = 0;
};

/// Solves the compatible-function-approximation regression by SGD: from
/// w = 0, each step draws a fresh occupancy sample and applies
/// w -= alpha * (w . score - A-hat / (1 - gamma)) * score.
/// Returns the average of the L post-update iterates.
std::vector<double> solve_w_sgd(const EnvironmentSpec& env, const PolicyParams& phi,
                                const StateDistribution& mu0, const GlobalState& g0, double alpha,
                                int inner_iters, double gamma, int horizon_cap, std::uint64_t seed,
                                OccupancyDiagnostics* diagnostics = nullptr);

struct TraceRow {
  int iteration = 0;       // j, 0-based
  double value_mean = 0.0; // mean-field value of the updated policy
  double value_stderr = 0.0;
  double w_norm = 0.0;     // |w_j|_2
  double wall_seconds = 0.0;
  PolicyParams params;     // Phi_{j+1}
};

struct TrainingTrace {
  std::vector<TraceRow> rows;
  bool completed = false;
  std::string abort_reason;
};

struct NpgEvalOptions {
  int horizon = 0;  // 0: derived from gamma via default_horizon
  int rollouts = 64;
  // Wall-clock measurement is off by default so traces are reproducible
  // bit for bit; turn on for profiling runs.
  bool collect_timings = false;
};

/// Runs Algorithm-style NPG: for j < J, w_j from the inner SGD, then
/// Phi_{j+1} = clip(Phi_j + eta * w_j), recording the mean-field value of
/// each iterate. A numeric failure aborts with the partial trace preserved.
TrainingTrace npg_run(const EnvironmentSpec& env, const PolicyParams& phi0,
                      const StateDistribution& mu0, const GlobalState& g0, const NPGConfig& config,
                      const NpgEvalOptions& eval = {});

}  // namespace mfc
