#pragma once

/// Small dense convex QCQP solved by a log-barrier interior-point method
/// with Newton inner steps:
///
///     minimize    q0(x)
///     subject to  qi(x) <= 0,  i = 1..m
///
/// where every q(x) = 0.5 x'Px + b'x + c has symmetric PSD P. Problems here
/// are tiny (a handful of variables), so everything is dense. Callers are
/// expected to hand in data of roughly unit scale.

#include <stdexcept>
#include <vector>

#include "risbc/types.hpp"

namespace risbc::qcqp {

struct QuadForm {
  RMatrix P;  // zero-sized means the zero matrix
  RVector b;
  double c = 0.0;

  double value(const RVector& x) const;
  RVector gradient(const RVector& x) const;
};

struct Options {
  double t0 = 1.0;           // initial barrier weight
  double t_growth = 10.0;    // barrier escalation per outer stage
  double gap_target = 1e-9;  // stop once m / t falls below this
  double newton_tol = 1e-12; // on the squared Newton decrement / 2
  int max_newton = 600;      // Newton step budget for the escalation stages
  double kkt_target = 5e-8;  // stationarity polish goal at the final stage
  double infeas_slack = 1e-12;  // phase-1 margin below which we call it infeasible
};

struct Solution {
  bool feasible = false;  // phase-1 verdict; remaining fields valid only if true
  RVector x;
  RVector lambda;          // multiplier estimates, one per constraint
  double kkt_residual = 0.0;
  int newton_steps = 0;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// x0 is a starting point; it does not need to be feasible (an internal
/// phase-1 searches for a strictly feasible point when it is not).
/// Throws SolverError on numerical breakdown.
Solution minimize(const QuadForm& objective, const std::vector<QuadForm>& constraints,
                  const RVector& x0, const Options& opts = {});

}  // namespace risbc::qcqp
