#pragma once

#include "mfc/env.hpp"

namespace mfc {

/// Composite constants of the general approximation-error bound.
struct Theorem1Constants {
  double S_P = 1.0;  // 1 + 2 L_P + L_Q (1 + L_P)
  double S_R = 0.0;  // M + 2 L_R + L_Q (M + L_R)
  double S_G = 0.0;  // L_G (2 + L_Q)
  double C_P = 2.0;  // 2 + L_P
};

/// Composite constants of the action-independent special case.
struct Theorem2Constants {
  double Q_P = 1.0;  // 1 + L_P + L_Q
  double Q_R = 0.0;  // M (1 + L_Q) + L_R
};

Theorem1Constants theorem1_constants(const LipschitzConstants& c);
Theorem2Constants theorem2_constants(const LipschitzConstants& c);

/// Evaluates the general value-gap bound between the N-agent optimum and the
/// mean-field optimum. Valid only when gamma * S_P < 1 (ValidityError
/// otherwise). The bracketed difference 1/(1 - gamma S_P) - 1/(1 - gamma) is
/// evaluated in the fused form gamma (S_P - 1) / ((1 - gamma S_P)(1 - gamma)),
/// which avoids catastrophic cancellation near gamma S_P = 1 and extends the
/// expression continuously to the degenerate point S_P = 1 (its analytic
/// limit), with no epsilon nudging.
double theorem1_bound(const Theorem1Constants& k, double gamma, double n_agents, int x_size,
                      int u_size, double M, double L_R, double L_G);

/// Action-independent special case; note the absence of an action-space
/// argument. Valid only when gamma * Q_P < 1.
double theorem2_bound(const Theorem2Constants& k, double gamma, double n_agents, int x_size,
                      double M, double L_G);

}  // namespace mfc
