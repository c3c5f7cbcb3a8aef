#pragma once

/// Per-BD rate computation under successive interference cancellation and the
/// closed-form optimal power-reflection-coefficient solution, plus a
/// brute-force grid oracle used for verification.
///
/// Every function here assumes the identity decoding order: index 0 is
/// decoded first and sees interference from all later indices. Callers
/// permute gains, coefficients and QoS targets before calling.

#include "risbc/types.hpp"

namespace risbc::power_alloc {

/// Relative margin used when checking the strict combined-gain ordering.
inline constexpr double kOrderEps = 1e-9;

struct QosTargets {
  RVector r_min_linear;  // per-BD SINR threshold, 2^R_min - 1

  static QosTargets from_rate_floors(const RVector& r_min_bits);
  int size() const { return static_cast<int>(r_min_linear.size()); }
};

/// optimal_w / brute_force_w outcome. `feasible == false` means the QoS
/// constraints cannot all be met; `w` is unspecified in that case.
struct WResult {
  bool feasible = false;
  RVector w;
};

/// log2(1 + w_k P H_k / (sum_{j>k} w_j P H_j + sigma2)).
double rate_k(const RVector& w, const RVector& gains, double p_t, double sigma2, int k);
RVector all_rates(const RVector& w, const RVector& gains, double p_t, double sigma2);

/// log2(1 + sum_k w_k P H_k / sigma2); equals the sum of rate_k by the
/// telescoping identity, for any decoding order.
double sum_rate(const RVector& w, const RVector& gains, double p_t, double sigma2);

/// Minimum reflection coefficients w^LB that satisfy every QoS constraint
/// when all later-decoded BDs also sit at their lower bounds. Throws
/// std::domain_error if some H_k <= 0 has a positive target.
RVector lower_bounds(const RVector& gains, const QosTargets& targets, double p_t,
                     double sigma2);

/// Closed-form optimum of  max sum_k w_k H_k  s.t. QoS and 0 <= w <= 1:
/// a prefix of ones, then at most one interior coefficient capped by the
/// earlier BDs' QoS, then lower bounds. Requires gains strictly decreasing
/// (throws std::invalid_argument otherwise).
WResult optimal_w(const RVector& gains, const QosTargets& targets, double p_t,
                  double sigma2);

/// Exhaustive grid search over [0,1]^K at grid_step resolution. Verification
/// oracle; refuses K > 3 (std::invalid_argument).
WResult brute_force_w(const RVector& gains, const QosTargets& targets, double p_t,
                      double sigma2, double grid_step);

/// True when every QoS constraint holds with relative slack rel_tol.
bool qos_satisfied(const RVector& w, const RVector& gains, const QosTargets& targets,
                   double p_t, double sigma2, double rel_tol = kOrderEps);

/// Strictly decreasing within kOrderEps relative (near-ties pass).
bool strictly_ordered(const RVector& gains, double rel_eps = kOrderEps);

}  // namespace risbc::power_alloc
