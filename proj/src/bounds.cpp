#include "mfc/bounds.hpp"

#include <cmath>
#include <string>

#include "mfc/errors.hpp"

namespace mfc {

namespace {

void check_lipschitz(const LipschitzConstants& c) {
  if (!(c.M > 0.0) || !std::isfinite(c.M)) throw ArgumentError("reward bound M must be positive and finite");
  for (double v : {c.L_R, c.L_P, c.L_G, c.L_Q}) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ArgumentError("Lipschitz constants must be non-negative and finite");
  }
}

void check_common(double gamma, double n_agents) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in (0, 1)");
  if (!(n_agents >= 1.0)) throw ArgumentError("population size must be >= 1");
}

}  // namespace

Theorem1Constants theorem1_constants(const LipschitzConstants& c) {
  check_lipschitz(c);
  Theorem1Constants k;
  k.S_P = 1.0 + 2.0 * c.L_P + c.L_Q * (1.0 + c.L_P);
  k.S_R = c.M + 2.0 * c.L_R + c.L_Q * (c.M + c.L_R);
  k.S_G = c.L_G * (2.0 + c.L_Q);
  k.C_P = 2.0 + c.L_P;
  return k;
}

Theorem2Constants theorem2_constants(const LipschitzConstants& c) {
  check_lipschitz(c);
  Theorem2Constants k;
  k.Q_P = 1.0 + c.L_P + c.L_Q;
  k.Q_R = c.M * (1.0 + c.L_Q) + c.L_R;
  return k;
}

double theorem1_bound(const Theorem1Constants& k, double gamma, double n_agents, int x_size,
                      int u_size, double M, double L_R, double L_G) {
  check_common(gamma, n_agents);
  if (!(k.S_P >= 1.0) || !(k.C_P >= 2.0))
    throw ArgumentError("constants violate S_P >= 1, C_P >= 2");
  if (x_size < 1 || u_size < 1) throw ArgumentError("state/action space sizes must be >= 1");
  if (!(gamma * k.S_P < 1.0))
    throw ValidityError("bound requires gamma * S_P < 1; got gamma * S_P = " +
                        std::to_string(gamma * k.S_P));

  const double sqrt_n = std::sqrt(n_agents);
  const double sqrt_x = std::sqrt(static_cast<double>(x_size));
  const double sqrt_u = std::sqrt(static_cast<double>(u_size));
  const double one_minus_g = 1.0 - gamma;
  const double one_minus_gsp = 1.0 - gamma * k.S_P;

  const double term1 = (M + L_R * sqrt_u) / one_minus_g / sqrt_n;
  const double term2 = sqrt_u / sqrt_n * M * L_G * gamma / (one_minus_g * one_minus_g);
  // Fully fused form of (C_P / (S_P-1)) [ (M S_G / (S_P-1) + S_R) D - gamma M S_G / (1-gamma)^2 ]
  // with D = 1/(1 - gamma S_P) - 1/(1 - gamma); algebraically identical for
  // S_P > 1, continuous at S_P = 1.
  const double factor =
      k.C_P * (k.S_R * gamma / (one_minus_gsp * one_minus_g) +
               M * k.S_G * gamma * gamma / (one_minus_gsp * one_minus_g * one_minus_g));
  const double term3 = factor * (sqrt_x + sqrt_u) / sqrt_n;
  return term1 + term2 + term3;
}

double theorem2_bound(const Theorem2Constants& k, double gamma, double n_agents, int x_size,
                      double M, double L_G) {
  check_common(gamma, n_agents);
  if (!(k.Q_P >= 1.0)) throw ArgumentError("constants violate Q_P >= 1");
  if (x_size < 1) throw ArgumentError("state space size must be >= 1");
  if (!(gamma * k.Q_P < 1.0))
    throw ValidityError("bound requires gamma * Q_P < 1; got gamma * Q_P = " +
                        std::to_string(gamma * k.Q_P));

  const double sqrt_n = std::sqrt(n_agents);
  const double sqrt_x = std::sqrt(static_cast<double>(x_size));
  const double one_minus_g = 1.0 - gamma;
  const double one_minus_gqp = 1.0 - gamma * k.Q_P;

  const double term1 = M / one_minus_g / sqrt_n;
  const double factor =
      2.0 * (k.Q_R * gamma / (one_minus_gqp * one_minus_g) +
             M * L_G * gamma * gamma / (one_minus_gqp * one_minus_g * one_minus_g));
  return term1 + factor * sqrt_x / sqrt_n;
}

}  // namespace mfc
