#pragma once

#include <string>
#include <vector>

#include "mfc/config.hpp"
#include "mfc/env.hpp"
#include "mfc/policy.hpp"

namespace mfc {

/// One (N, seed) cell of the error-vs-N experiment.
struct SweepResultRow {
  int n_agents = 0;
  int seed = 0;
  double v_n_mean = 0.0;
  double v_n_stderr = 0.0;
  double v_inf = 0.0;
  double error = 0.0;  // |v_n_mean - v_inf|
  double wall_time = 0.0;
};

struct SweepSummaryRow {
  int n_agents = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  int seeds = 0;
};

inline constexpr const char* kSweepCsvHeader = "N,seed,v_n_mean,v_n_stderr,v_inf,error,wall_time";
inline constexpr const char* kSummaryCsvHeader = "N,mean_error,std_error,seeds";

/// Runs the error-vs-N experiment for a trained policy. For every cell the
/// initial locals are drawn i.i.d. from mu0, V_N is estimated by rollouts
/// from that fixed draw, and the mean-field value is computed from the
/// empirical distribution of the same draw. Cells run on a bounded worker
/// pool; every random stream is derived from (master_seed, N, seed, purpose),
/// so results do not depend on the worker count. Wall-clock columns are
/// populated only when `timings` is set, keeping default outputs
/// byte-reproducible.
std::vector<SweepResultRow> run_error_sweep(const EnvironmentSpec& env, const PolicyParams& phi,
                                            const ExperimentConfig& config, int workers = 1,
                                            bool timings = false);

std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SweepResultRow>& rows);

std::string sweep_rows_to_csv(const std::vector<SweepResultRow>& rows);
std::string summary_rows_to_csv(const std::vector<SweepSummaryRow>& rows);
std::vector<SweepResultRow> parse_sweep_csv(const std::string& text);

/// Writes results.csv, summary.csv and a metadata sidecar (config hash,
/// master seed, artifact version) into `dir`.
void persist_sweep(const std::string& dir, const std::vector<SweepResultRow>& rows,
                   const std::string& config_text, std::uint64_t master_seed);

}  // namespace mfc
