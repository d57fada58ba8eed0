#include "mfc/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mfc/artifact.hpp"
#include "mfc/errors.hpp"
#include "mfc/meanfield.hpp"
#include "mfc/nagent.hpp"

namespace mfc {

std::vector<SweepResultRow> run_error_sweep(const EnvironmentSpec& env, const PolicyParams& phi,
                                            const ExperimentConfig& config, int workers,
                                            bool timings) {
  const StateDistribution mu0 = initial_state_distribution(config, env);
  const GlobalState g0 = initial_global_state(config, env);
  const double gamma = config.eval.gamma;
  const int horizon = effective_eval_horizon(config);
  const std::uint64_t master = config.master_seed;

  struct Cell {
    int n;
    int seed;
  };
  std::vector<Cell> cells;
  for (int n : config.sweep.n_grid)
    for (int s = 0; s < config.sweep.seeds; ++s) cells.push_back(Cell{n, s});

  std::vector<SweepResultRow> rows(cells.size());
  auto run_cell = [&](std::size_t idx) {
    const auto started = std::chrono::steady_clock::now();
    const Cell cell = cells[idx];
    RngStream init_rng(substream_seed(master, stream_tag("sweep-init"),
                                      static_cast<std::uint64_t>(cell.n),
                                      static_cast<std::uint64_t>(cell.seed)));
    const std::vector<int> locals = draw_initial_locals(mu0, cell.n, init_rng);
    const StateDistribution mu0_n =
        to_state_distribution(empirical_state_dist(locals, env.local_state_count));

    const ValueEstimate v_n = estimate_value_nagent(
        env, phi, locals, g0, gamma, horizon, config.eval.rollouts,
        substream_seed(master, stream_tag("sweep-vn"), static_cast<std::uint64_t>(cell.n),
                       static_cast<std::uint64_t>(cell.seed)),
        /*workers=*/1);
    const ValueEstimate v_inf = estimate_value_mfc_mc(
        env, phi, mu0_n, g0, gamma, horizon, config.eval.mfc_rollouts,
        substream_seed(master, stream_tag("sweep-vinf"), static_cast<std::uint64_t>(cell.n),
                       static_cast<std::uint64_t>(cell.seed)));

    SweepResultRow row;
    row.n_agents = cell.n;
    row.seed = cell.seed;
    row.v_n_mean = v_n.mean;
    row.v_n_stderr = v_n.stderr_of_mean;
    row.v_inf = v_inf.mean;
    row.error = std::abs(v_n.mean - v_inf.mean);
    if (timings) {
      row.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    rows[idx] = row;
  };

  const int nthreads = std::min<std::size_t>(std::max(workers, 1), cells.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
          run_cell(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SweepResultRow>& rows) {
  std::vector<SweepSummaryRow> summary;
  for (const SweepResultRow& row : rows) {
    if (summary.empty() || summary.back().n_agents != row.n_agents) {
      summary.push_back(SweepSummaryRow{row.n_agents, 0.0, 0.0, 0});
    }
    summary.back().mean_error += row.error;
    ++summary.back().seeds;
  }
  std::size_t idx = 0;
  for (SweepSummaryRow& s : summary) {
    s.mean_error /= s.seeds;
    double ss = 0.0;
    for (int k = 0; k < s.seeds; ++k, ++idx) {
      const double d = rows[idx].error - s.mean_error;
      ss += d * d;
    }
    s.std_error = s.seeds > 1 ? std::sqrt(ss / (s.seeds - 1)) : 0.0;
  }
  return summary;
}

std::string sweep_rows_to_csv(const std::vector<SweepResultRow>& rows) {
  std::ostringstream out;
  out << kSweepCsvHeader << "\n";
  for (const SweepResultRow& r : rows) {
    out << r.n_agents << ',' << r.seed << ',' << format_double(r.v_n_mean) << ','
        << format_double(r.v_n_stderr) << ',' << format_double(r.v_inf) << ','
        << format_double(r.error) << ',' << format_double(r.wall_time) << "\n";
  }
  return out.str();
}

std::string summary_rows_to_csv(const std::vector<SweepSummaryRow>& rows) {
  std::ostringstream out;
  out << kSummaryCsvHeader << "\n";
  for (const SweepSummaryRow& r : rows) {
    out << r.n_agents << ',' << format_double(r.mean_error) << ',' << format_double(r.std_error)
        << ',' << r.seeds << "\n";
  }
  return out.str();
}

std::vector<SweepResultRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader)
    throw ValidationError("sweep CSV header mismatch");
  std::vector<SweepResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> parts;
    while (std::getline(fields, field, ',')) parts.push_back(field);
    if (parts.size() != 7) throw ValidationError("sweep CSV row has wrong arity");
    SweepResultRow r;
    r.n_agents = std::stoi(parts[0]);
    r.seed = std::stoi(parts[1]);
    r.v_n_mean = std::strtod(parts[2].c_str(), nullptr);
    r.v_n_stderr = std::strtod(parts[3].c_str(), nullptr);
    r.v_inf = std::strtod(parts[4].c_str(), nullptr);
    r.error = std::strtod(parts[5].c_str(), nullptr);
    r.wall_time = std::strtod(parts[6].c_str(), nullptr);
    rows.push_back(r);
  }
  return rows;
}

void persist_sweep(const std::string& dir, const std::vector<SweepResultRow>& rows,
                   const std::string& config_text, std::uint64_t master_seed) {
  std::filesystem::create_directories(dir);
  write_text_file(dir + "/sweep_results.csv", sweep_rows_to_csv(rows));
  write_text_file(dir + "/sweep_summary.csv", summary_rows_to_csv(summarize_sweep(rows)));
  nlohmann::json meta;
  meta["artifact_version"] = "mfc-marl-1";
  meta["config_hash"] = config_fingerprint(config_text);
  meta["master_seed"] = master_seed;
  write_text_file(dir + "/metadata.json", meta.dump(2) + "\n");
}

}  // namespace mfc
