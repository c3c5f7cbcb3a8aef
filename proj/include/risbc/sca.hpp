#pragma once

/// Successive convex approximation for the auxiliary-variable problem of the
/// penalized passive-beamforming formulation. The nonconvex terms |a_k|^2 are
/// replaced by their tangent minorant f_sca at a reference point; each round
/// solves a convex QCQP over the 2K real components of a, then relinearizes.
///
/// All tolerances act in an internally normalized domain (the variables are
/// divided by the dominant signal magnitude), so the same settings work at
/// milliwatt channel scales and at unit test scales.

#include <stdexcept>
#include <vector>

#include "risbc/power_alloc.hpp"
#include "risbc/qcqp.hpp"
#include "risbc/types.hpp"

namespace risbc::sca {

struct PenaltyConfig {
  double mu = 10.0;        // initial penalty weight
  double mu_growth = 5.0;  // escalation factor when the residual is too big
  double mu_max = 1e8;
  double eps_pen = 1e-6;  // |a_k - b_k^H v| tolerance, relative to signal scale
};

struct ScaOptions {
  double eps_obj = 1e-6;   // relative objective-change stopping rule
  int max_iter = 50;       // SCA rounds
  int feas_max_iter = 50;  // feasibility-search rounds
  double eps_feas = 1e-8;  // slack level that counts as feasible
  double eps_ord = 1e-9;   // ordering margin (normalized domain)
  qcqp::Options solver;
};

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tangent minorant of |a|^2 at a_ref: 2 Re(conj(a_ref) a) - |a_ref|^2.
double f_sca(cxd a, cxd a_ref);

/// -sum_k w_k |a_k|^2 + mu * sum_k |a_k - c_k|^2, the penalized objective
/// with c_k = b_k^H v.
double penalty_objective(const CVector& a, const RVector& w, const CVector& c, double mu);

/// Constraint check at a point's own linearization (f_sca(a,a) = |a|^2):
/// QoS rows and the pairwise ordering rows, with slack `tol` in the
/// normalized domain.
bool point_feasible(const CVector& a, const RVector& w,
                    const power_alloc::QosTargets& targets, double noise_ratio,
                    double eps_ord = 1e-9, double tol = 1e-7);

struct SubproblemResult {
  CVector a;
  double objective = 0.0;  // penalized objective at a (raw scale)
  double kkt_residual = 0.0;
};

/// One convex subproblem: minimize the linearized penalized objective subject
/// to the linearized QoS and ordering constraints. Throws Infeasible when the
/// linearized constraint set has no interior, SolverError on breakdown.
SubproblemResult solve_subproblem(const CVector& a_ref, const RVector& w, const CVector& c,
                                  const power_alloc::QosTargets& targets,
                                  double noise_ratio, double mu,
                                  const ScaOptions& opts = {});

struct ScaResult {
  CVector a;
  std::vector<double> objective_trace;  // penalized objective per accepted round
  bool converged = false;
  double max_kkt_residual = 0.0;
  int iterations = 0;
};

/// Iterates solve_subproblem from a feasible starting point until the
/// penalized objective stalls. The trace is non-increasing by the minorant
/// property.
ScaResult run(const CVector& a_init, const RVector& w, const CVector& c,
              const power_alloc::QosTargets& targets, double noise_ratio, double mu,
              const ScaOptions& opts = {});

struct FeasibleStart {
  CVector a;
  std::vector<double> slack_trace;  // infeasibility indicator per round
};

/// Minimizes a common slack over the linearized constraints, relinearizing
/// each round, until the slack is negligible. Throws Infeasible when the
/// slack stalls above eps_feas.
FeasibleStart find_feasible_start(const CVector& a_guess, const RVector& w,
                                  const power_alloc::QosTargets& targets,
                                  double noise_ratio, const ScaOptions& opts = {});

}  // namespace risbc::sca
