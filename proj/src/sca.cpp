#include "risbc/sca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace risbc::sca {

namespace {

double scale_of(const CVector& a, const CVector& b, double noise_ratio) {
  double s2 = noise_ratio;
  for (int i = 0; i < a.size(); ++i) s2 = std::max(s2, std::norm(a[i]));
  for (int i = 0; i < b.size(); ++i) s2 = std::max(s2, std::norm(b[i]));
  return std::sqrt(std::max(s2, std::numeric_limits<double>::min()));
}

CVector to_complex(const RVector& x, int k) {
  CVector a(k);
  for (int i = 0; i < k; ++i) a[i] = cxd(x[2 * i], x[2 * i + 1]);
  return a;
}

RVector to_real(const CVector& a, int extra = 0) {
  RVector x = RVector::Zero(2 * a.size() + extra);
  for (int i = 0; i < a.size(); ++i) {
    x[2 * i] = a[i].real();
    x[2 * i + 1] = a[i].imag();
  }
  return x;
}

// Linearized QoS and ordering rows at reference `ref`, in the normalized
// domain, over n variables (n = 2K, or 2K+1 when a trailing slack column is
// shared by every row).
std::vector<qcqp::QuadForm> constraint_rows(const CVector& ref, const RVector& w,
                                            const power_alloc::QosTargets& targets,
                                            double noise_ratio_n, double eps_ord,
                                            bool with_slack) {
  const int k = static_cast<int>(ref.size());
  const int n = 2 * k + (with_slack ? 1 : 0);
  std::vector<qcqp::QuadForm> rows;

  auto minus_fsca = [&](qcqp::QuadForm& q, int i, double weight) {
    q.b[2 * i] -= 2.0 * weight * ref[i].real();
    q.b[2 * i + 1] -= 2.0 * weight * ref[i].imag();
    q.c += weight * std::norm(ref[i]);
  };

  for (int i = 0; i < k; ++i) {
    const double r = targets.r_min_linear[i];
    if (r <= 0.0) continue;  // vacuous in the original problem
    qcqp::QuadForm q;
    q.P = RMatrix::Zero(n, n);
    q.b = RVector::Zero(n);
    for (int j = i + 1; j < k; ++j) {
      q.P(2 * j, 2 * j) = 2.0 * r * w[j];
      q.P(2 * j + 1, 2 * j + 1) = 2.0 * r * w[j];
    }
    minus_fsca(q, i, w[i]);
    q.c += r * noise_ratio_n;
    if (with_slack) q.b[2 * k] = -1.0;
    rows.push_back(std::move(q));
  }

  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      qcqp::QuadForm q;
      q.P = RMatrix::Zero(n, n);
      q.b = RVector::Zero(n);
      q.P(2 * j, 2 * j) = 2.0;
      q.P(2 * j + 1, 2 * j + 1) = 2.0;
      minus_fsca(q, i, 1.0);
      q.c += eps_ord;
      if (with_slack) q.b[2 * k] = -1.0;
      rows.push_back(std::move(q));
    }
  }
  return rows;
}

}  // namespace

double f_sca(cxd a, cxd a_ref) {
  return 2.0 * (a_ref.real() * a.real() + a_ref.imag() * a.imag()) - std::norm(a_ref);
}

double penalty_objective(const CVector& a, const RVector& w, const CVector& c, double mu) {
  double obj = 0.0;
  for (int i = 0; i < a.size(); ++i)
    obj += -w[i] * std::norm(a[i]) + mu * std::norm(a[i] - c[i]);
  return obj;
}

bool point_feasible(const CVector& a, const RVector& w,
                    const power_alloc::QosTargets& targets, double noise_ratio,
                    double eps_ord, double tol) {
  const int k = static_cast<int>(a.size());
  const double s2 = std::pow(scale_of(a, CVector(), noise_ratio), 2);
  for (int i = 0; i < k; ++i) {
    const double r = targets.r_min_linear[i];
    if (r <= 0.0) continue;
    double rhs = noise_ratio;
    for (int j = i + 1; j < k; ++j) rhs += w[j] * std::norm(a[j]);
    if (w[i] * std::norm(a[i]) < r * rhs - tol * s2) return false;
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::norm(a[i]) < std::norm(a[j]) + (eps_ord - tol) * s2) return false;
  return true;
}

SubproblemResult solve_subproblem(const CVector& a_ref, const RVector& w, const CVector& c,
                                  const power_alloc::QosTargets& targets,
                                  double noise_ratio, double mu, const ScaOptions& opts) {
  const int k = static_cast<int>(a_ref.size());
  if (w.size() != k || c.size() != k || targets.size() != k)
    throw std::invalid_argument("solve_subproblem: dimension mismatch");

  const double s = scale_of(a_ref, c, noise_ratio);
  const CVector ref = a_ref / s;
  const CVector cn = c / s;
  const double nr = noise_ratio / (s * s);

  // The objective enters divided by max(1, mu) so the multiplier scale (and
  // with it the reachable KKT precision) stays O(1) under penalty escalation.
  const double s_f = std::max(1.0, mu);
  qcqp::QuadForm obj;
  obj.P = RMatrix::Identity(2 * k, 2 * k) * (2.0 * mu / s_f);
  obj.b = RVector::Zero(2 * k);
  for (int i = 0; i < k; ++i) {
    obj.b[2 * i] = -2.0 * (w[i] * ref[i].real() + mu * cn[i].real()) / s_f;
    obj.b[2 * i + 1] = -2.0 * (w[i] * ref[i].imag() + mu * cn[i].imag()) / s_f;
    obj.c += (mu * std::norm(cn[i]) + w[i] * std::norm(ref[i])) / s_f;
  }

  const auto rows = constraint_rows(ref, w, targets, nr, opts.eps_ord, false);
  const auto sol = qcqp::minimize(obj, rows, to_real(ref), opts.solver);
  if (!sol.feasible) throw Infeasible("sca subproblem: no strictly feasible point");

  SubproblemResult out;
  out.a = s * to_complex(sol.x, k);
  out.objective = 0.0;
  for (int i = 0; i < k; ++i)
    out.objective +=
        -w[i] * f_sca(out.a[i], a_ref[i]) + mu * std::norm(out.a[i] - c[i]);
  out.kkt_residual = sol.kkt_residual;
  return out;
}

ScaResult run(const CVector& a_init, const RVector& w, const CVector& c,
              const power_alloc::QosTargets& targets, double noise_ratio, double mu,
              const ScaOptions& opts) {
  ScaResult res;
  res.a = a_init;
  double obj = penalty_objective(res.a, w, c, mu);
  res.objective_trace.push_back(obj);
  for (int it = 1; it <= opts.max_iter; ++it) {
    auto sub = solve_subproblem(res.a, w, c, targets, noise_ratio, mu, opts);
    res.a = sub.a;
    res.max_kkt_residual = std::max(res.max_kkt_residual, sub.kkt_residual);
    const double next = penalty_objective(res.a, w, c, mu);
    res.objective_trace.push_back(next);
    res.iterations = it;
    const double span =
        std::max({std::abs(obj), std::abs(next), std::numeric_limits<double>::min()});
    if (std::abs(next - obj) <= opts.eps_obj * span) {
      res.converged = true;
      break;
    }
    obj = next;
  }
  return res;
}

FeasibleStart find_feasible_start(const CVector& a_guess, const RVector& w,
                                  const power_alloc::QosTargets& targets,
                                  double noise_ratio, const ScaOptions& opts) {
  const int k = static_cast<int>(a_guess.size());
  if (w.size() != k || targets.size() != k)
    throw std::invalid_argument("find_feasible_start: dimension mismatch");

  // One fixed scale for the whole search so slack values are comparable
  // across rounds.
  const double s = scale_of(a_guess, CVector(), noise_ratio);
  const double nr = noise_ratio / (s * s);
  CVector ref = a_guess / s;

  FeasibleStart out;
  qcqp::QuadForm obj;
  obj.b = RVector::Zero(2 * k + 1);
  obj.b[2 * k] = 1.0;

  double prev_slack = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.feas_max_iter; ++it) {
    auto rows = constraint_rows(ref, w, targets, nr, opts.eps_ord, true);
    {
      qcqp::QuadForm nonneg;  // -x_s <= 0
      nonneg.b = RVector::Zero(2 * k + 1);
      nonneg.b[2 * k] = -1.0;
      rows.push_back(std::move(nonneg));
    }
    RVector x0 = to_real(ref, 1);
    double viol = 0.0;
    for (const auto& r : rows) viol = std::max(viol, r.value(x0));
    x0[2 * k] = viol + 1.0;

    const auto sol = qcqp::minimize(obj, rows, x0, opts.solver);
    if (!sol.feasible) throw Infeasible("feasibility search: solver found no interior");
    const double slack = std::max(0.0, sol.x[2 * k]);
    out.slack_trace.push_back(slack);
    ref = to_complex(sol.x, k);
    if (slack <= opts.eps_feas) {
      out.a = s * ref;
      return out;
    }
    if (prev_slack - slack <= 1e-12 * std::max(1.0, prev_slack))
      throw Infeasible("feasibility search: slack stalled above tolerance");
    prev_slack = slack;
  }
  throw Infeasible("feasibility search: iteration cap reached");
}

}  // namespace risbc::sca
