#pragma once

#include <cmath>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "mfc/errors.hpp"
#include "mfc/rng.hpp"

namespace mfc {

// Tolerance applied when validating externally supplied distributions.
inline constexpr double kSimplexTol = 1e-9;

/// Distribution over the local state space X.
struct StateDistribution {
  std::vector<double> w;
};

/// Distribution over the action space U.
struct ActionDistribution {
  std::vector<double> w;
};

inline bool is_simplex(std::span<const double> w, double tol) {
  if (w.empty()) return false;
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= -tol) || std::isnan(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

inline void require_simplex(std::span<const double> w, const char* what,
                            double tol = kSimplexTol) {
  if (!is_simplex(w, tol)) {
    throw ValidationError(std::string(what) + " is not a probability distribution within tolerance");
  }
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

/// Mean of the index under a state distribution: sum_x x * mu(x).
inline double mean_index(const StateDistribution& mu) {
  double m = 0.0;
  for (std::size_t x = 0; x < mu.w.size(); ++x) m += static_cast<double>(x) * mu.w[x];
  return m;
}

inline StateDistribution uniform_state_distribution(int n) {
  if (n < 1) throw ArgumentError("distribution support size must be >= 1");
  return StateDistribution{std::vector<double>(n, 1.0 / n)};
}

inline ActionDistribution uniform_action_distribution(int n) {
  if (n < 1) throw ArgumentError("distribution support size must be >= 1");
  return ActionDistribution{std::vector<double>(n, 1.0 / n)};
}

// Random point of the simplex (normalized exponentials; Dirichlet(1,..,1)).
inline std::vector<double> random_simplex(int n, RngStream& rng) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& v : w) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace mfc
