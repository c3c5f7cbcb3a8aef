#include "risbc/qcqp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace risbc::qcqp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double QuadForm::value(const RVector& x) const {
  double v = c;
  if (b.size()) v += b.dot(x);
  if (P.size()) v += 0.5 * x.dot(P * x);
  return v;
}

RVector QuadForm::gradient(const RVector& x) const {
  RVector g = RVector::Zero(x.size());
  if (b.size()) g += b;
  if (P.size()) g += P * x;
  return g;
}

namespace {

struct Barrier {
  const QuadForm& f0;
  const std::vector<QuadForm>& cons;
  double t;

  double value(const RVector& x) const {
    double phi = t * f0.value(x);
    for (const auto& g : cons) {
      const double gi = g.value(x);
      if (!(gi < 0.0)) return kInf;
      phi -= std::log(-gi);
    }
    return phi;
  }

  RVector grad(const RVector& x) const {
    RVector g = t * f0.gradient(x);
    for (const auto& c : cons) g += c.gradient(x) / (-c.value(x));
    return g;
  }

  void grad_hess(const RVector& x, RVector& grad_out, RMatrix& hess) const {
    const int n = static_cast<int>(x.size());
    grad_out = t * f0.gradient(x);
    hess = RMatrix::Zero(n, n);
    if (f0.P.size()) hess = t * f0.P;
    for (const auto& g : cons) {
      const double gi = g.value(x);
      const RVector dg = g.gradient(x);
      grad_out += dg / (-gi);
      if (g.P.size()) hess += g.P / (-gi);
      hess += dg * dg.transpose() / (gi * gi);
    }
  }

  bool strictly_feasible(const RVector& x) const {
    for (const auto& g : cons)
      if (!(g.value(x) < 0.0)) return false;
    return true;
  }
};

// Newton descent on the barrier. Stops on the squared-decrement rule, or on
// the gradient norm when grad_goal > 0 (the decrement underestimates true
// stationarity once the barrier weight is large). Near the optimum the
// barrier value changes fall below float resolution, so a step that shrinks
// the gradient norm is also accepted.
bool center(const Barrier& bar, RVector& x, const Options& opts, int& steps_used,
            double grad_goal, int max_steps) {
  const int n = static_cast<int>(x.size());
  RVector grad(n);
  RMatrix hess(n, n);
  for (int it = 0; it < max_steps; ++it) {
    bar.grad_hess(x, grad, hess);
    const double gn = grad.lpNorm<Eigen::Infinity>();
    if (grad_goal > 0.0 && gn <= grad_goal) return true;

    RVector dx;
    double ridge = 0.0;
    for (;;) {
      RMatrix h = hess;
      if (ridge > 0.0) h.diagonal().array() += ridge;
      Eigen::LDLT<RMatrix> ldlt(h);
      dx = ldlt.solve(-grad);
      const bool ok = ldlt.info() == Eigen::Success && dx.allFinite() &&
                      -grad.dot(dx) >= -1e-12 * grad.norm() * dx.norm();
      if (ok) break;
      ridge = ridge == 0.0 ? 1e-10 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff())
                           : ridge * 100.0;
      if (!std::isfinite(ridge) || ridge > 1e30)
        throw SolverError("qcqp: Newton system unsolvable");
    }
    const double lambda2 = -grad.dot(dx);
    ++steps_used;
    if (grad_goal <= 0.0 && lambda2 / 2.0 <= opts.newton_tol) return true;

    const double phi0 = bar.value(x);
    double step = 1.0;
    bool moved = false;
    while (step > 1e-24) {
      RVector xn = x + step * dx;
      if (bar.strictly_feasible(xn)) {
        const double phin = bar.value(xn);
        const bool phi_ok = phin <= phi0 - 0.25 * step * lambda2;
        const bool grad_ok =
            phin <= phi0 + 1e-9 * std::abs(phi0) &&
            bar.grad(xn).lpNorm<Eigen::Infinity>() <= (1.0 - 0.1 * step) * gn;
        if (phi_ok || grad_ok) {
          x = std::move(xn);
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) return false;  // float resolution floor
  }
  return false;
}

double max_violation(const std::vector<QuadForm>& cons, const RVector& x) {
  double v = -kInf;
  for (const auto& g : cons) v = std::max(v, g.value(x));
  return v;
}

// Minimizes a shared slack s over {q_i(x) <= s, s >= -1} until s is strictly
// negative; overwrites x on success.
bool phase1(const std::vector<QuadForm>& cons, RVector& x, const Options& opts,
            int& steps_used) {
  const int n = static_cast<int>(x.size());
  std::vector<QuadForm> aug;
  aug.reserve(cons.size() + 1);
  for (const auto& g : cons) {
    QuadForm a;
    if (g.P.size()) {
      a.P = RMatrix::Zero(n + 1, n + 1);
      a.P.topLeftCorner(n, n) = g.P;
    }
    a.b = RVector::Zero(n + 1);
    if (g.b.size()) a.b.head(n) = g.b;
    a.b[n] = -1.0;
    a.c = g.c;
    aug.push_back(std::move(a));
  }
  {
    QuadForm lo;  // -s - 1 <= 0 keeps the slack bounded below
    lo.b = RVector::Zero(n + 1);
    lo.b[n] = -1.0;
    lo.c = -1.0;
    aug.push_back(std::move(lo));
  }

  QuadForm obj;
  obj.b = RVector::Zero(n + 1);
  obj.b[n] = 1.0;

  RVector y(n + 1);
  y.head(n) = x;
  y[n] = std::max(0.0, max_violation(cons, x)) + 1.0;

  Barrier bar{obj, aug, opts.t0};
  const std::size_t m = aug.size();
  while (steps_used < opts.max_newton) {
    center(bar, y, opts, steps_used, 0.0, 80);
    if (y[n] < -1e-4) break;  // comfortably interior, stop early
    if (static_cast<double>(m) / bar.t <= opts.gap_target) break;
    bar.t *= opts.t_growth;
  }
  if (!(y[n] < -opts.infeas_slack)) return false;
  x = y.head(n);
  return max_violation(cons, x) < 0.0;
}

}  // namespace

Solution minimize(const QuadForm& objective, const std::vector<QuadForm>& constraints,
                  const RVector& x0, const Options& opts) {
  Solution sol;
  sol.x = x0;
  const std::size_t m = constraints.size();

  if (m > 0 && !(max_violation(constraints, sol.x) < 0.0)) {
    if (!phase1(constraints, sol.x, opts, sol.newton_steps)) return sol;  // infeasible
  }
  sol.feasible = true;

  Barrier bar{objective, constraints, opts.t0};
  if (m == 0) {
    bar.t = 1.0;
    center(bar, sol.x, opts, sol.newton_steps, opts.kkt_target / 2.0, 200);
    sol.lambda = RVector();
    sol.kkt_residual = objective.gradient(sol.x).lpNorm<Eigen::Infinity>();
    return sol;
  }

  while (sol.newton_steps < opts.max_newton) {
    center(bar, sol.x, opts, sol.newton_steps, 0.0, 80);
    if (static_cast<double>(m) / bar.t <= opts.gap_target) break;
    bar.t *= opts.t_growth;
  }

  auto measured_kkt = [&](const RVector& x) {
    // Complementarity is 1/t by construction of the barrier multipliers.
    return std::max(bar.grad(x).lpNorm<Eigen::Infinity>() / bar.t, 1.0 / bar.t);
  };

  // Terminal polish: minimize the true stationarity residual (the decrement
  // rule alone leaves it orders looser). Evaluating the barrier gradient near
  // an active constraint carries float noise that grows with t, so when the
  // goal is missed, retreat to a smaller weight and re-center.
  RVector best_x = sol.x;
  double best_t = bar.t;
  double best_kkt = kInf;
  for (;;) {
    center(bar, sol.x, opts, sol.newton_steps, 0.5 * opts.kkt_target * bar.t, 200);
    const double kkt = measured_kkt(sol.x);
    if (kkt < best_kkt) {
      best_kkt = kkt;
      best_x = sol.x;
      best_t = bar.t;
    }
    if (best_kkt <= opts.kkt_target || bar.t <= 4.0 / opts.kkt_target) break;
    bar.t /= opts.t_growth;
  }
  sol.x = best_x;
  bar.t = best_t;
  sol.kkt_residual = best_kkt;

  sol.lambda.resize(static_cast<int>(m));
  for (std::size_t i = 0; i < m; ++i)
    sol.lambda[static_cast<int>(i)] = 1.0 / (bar.t * (-constraints[i].value(sol.x)));
  return sol;
}

}  // namespace risbc::qcqp
