#include "risbc/power_alloc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace risbc::power_alloc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

QosTargets QosTargets::from_rate_floors(const RVector& r_min_bits) {
  QosTargets t;
  t.r_min_linear = (r_min_bits.array() >= 0.0)
                       .select(Eigen::pow(2.0, r_min_bits.array()) - 1.0, 0.0);
  if ((r_min_bits.array() < 0.0).any())
    throw std::invalid_argument("QosTargets: rate floors must be >= 0");
  return t;
}

double rate_k(const RVector& w, const RVector& gains, double p_t, double sigma2, int k) {
  const int n = static_cast<int>(w.size());
  if (gains.size() != n || k < 0 || k >= n)
    throw std::invalid_argument("rate_k: dimension mismatch");
  double interference = 0.0;
  for (int j = k + 1; j < n; ++j) interference += w[j] * p_t * gains[j];
  return std::log2(1.0 + w[k] * p_t * gains[k] / (interference + sigma2));
}

RVector all_rates(const RVector& w, const RVector& gains, double p_t, double sigma2) {
  RVector r(w.size());
  for (int k = 0; k < w.size(); ++k) r[k] = rate_k(w, gains, p_t, sigma2, k);
  return r;
}

double sum_rate(const RVector& w, const RVector& gains, double p_t, double sigma2) {
  return std::log2(1.0 + w.dot(gains) * p_t / sigma2);
}

RVector lower_bounds(const RVector& gains, const QosTargets& targets, double p_t,
                     double sigma2) {
  const int n = static_cast<int>(gains.size());
  if (targets.size() != n) throw std::invalid_argument("lower_bounds: dimension mismatch");
  RVector lb(n);
  double prod = 1.0;  // prod_{j>k} (r_j + 1), built right to left
  for (int k = n - 1; k >= 0; --k) {
    const double r = targets.r_min_linear[k];
    if (r <= 0.0) {
      lb[k] = 0.0;
    } else if (gains[k] <= 0.0) {
      throw std::domain_error("lower_bounds: zero gain with positive QoS target");
    } else {
      lb[k] = sigma2 * r / (p_t * gains[k]) * prod;
    }
    prod *= r + 1.0;
  }
  return lb;
}

bool qos_satisfied(const RVector& w, const RVector& gains, const QosTargets& targets,
                   double p_t, double sigma2, double rel_tol) {
  const int n = static_cast<int>(w.size());
  for (int k = 0; k < n; ++k) {
    const double r = targets.r_min_linear[k];
    if (r <= 0.0) continue;
    double interference = 0.0;
    for (int j = k + 1; j < n; ++j) interference += w[j] * p_t * gains[j];
    const double need = r * (interference + sigma2);
    if (w[k] * p_t * gains[k] < need * (1.0 - rel_tol)) return false;
  }
  return true;
}

bool strictly_ordered(const RVector& gains, double rel_eps) {
  for (int i = 0; i + 1 < gains.size(); ++i)
    if (!(gains[i] > gains[i + 1] * (1.0 - rel_eps) && gains[i] > 0.0)) return false;
  return true;
}

WResult optimal_w(const RVector& gains, const QosTargets& targets, double p_t,
                  double sigma2) {
  const int n = static_cast<int>(gains.size());
  if (targets.size() != n) throw std::invalid_argument("optimal_w: dimension mismatch");
  if (!strictly_ordered(gains))
    throw std::invalid_argument("optimal_w: gains must be strictly decreasing");

  WResult out;
  for (int k = 0; k < n; ++k)
    if (gains[k] <= 0.0 && targets.r_min_linear[k] > 0.0) return out;  // infeasible

  RVector lb = lower_bounds(gains, targets, p_t, sigma2);
  if ((lb.array() > 1.0 + 1e-12).any()) return out;

  RVector w = RVector::Ones(n);
  const double noise_ratio = sigma2 / p_t;
  bool capped = false;
  for (int k = 1; k < n && !capped; ++k) {
    // Tightest bound on w_k over the earlier BDs' QoS constraints, with
    // intermediate coefficients at 1 and later ones at their lower bounds.
    double tail = 0.0;
    for (int j = k + 1; j < n; ++j) tail += lb[j] * gains[j];
    double ub = kInf;
    double between = 0.0;  // sum_{n=m+1..k-1} H_n, grown as m walks down
    for (int m = k - 1; m >= 0; --m) {
      const double r_m = targets.r_min_linear[m];
      if (r_m > 0.0) {
        const double cand = (gains[m] / r_m - between - tail - noise_ratio) / gains[k];
        // Smallest m wins ties, so strict < while scanning m downward keeps
        // the last (= smallest m) among equals.
        if (cand <= ub) ub = cand;
      }
      between += gains[m];
    }
    if (ub < lb[k] - 1e-12) return out;  // BD k cannot meet its own QoS
    if (ub < 1.0) {
      w[k] = std::max(ub, lb[k]);
      for (int j = k + 1; j < n; ++j) w[j] = lb[j];
      capped = true;
    }
  }
  w = w.cwiseMax(0.0).cwiseMin(1.0);
  if (!qos_satisfied(w, gains, targets, p_t, sigma2)) return out;
  out.feasible = true;
  out.w = std::move(w);
  return out;
}

WResult brute_force_w(const RVector& gains, const QosTargets& targets, double p_t,
                      double sigma2, double grid_step) {
  const int n = static_cast<int>(gains.size());
  if (n > 3) throw std::invalid_argument("brute_force_w: refuses K > 3");
  if (targets.size() != n) throw std::invalid_argument("brute_force_w: dimension mismatch");
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw std::invalid_argument("brute_force_w: bad grid step");

  const int steps = static_cast<int>(std::lround(1.0 / grid_step));
  auto grid = [&](int i) { return static_cast<double>(i) / steps; };

  WResult best;
  double best_obj = -kInf;
  RVector w(n);

  // Enumerate the grid over w_1..w_{K-1}; for each suffix the objective is
  // increasing in w_0 and w_0 appears in no other BD's constraint, so w_0 = 1
  // is optimal whenever the suffix admits any feasible w_0.
  std::vector<int> idx(std::max(0, n - 1), 0);
  while (true) {
    for (int d = 1; d < n; ++d) w[d] = grid(idx[d - 1]);
    w[0] = 1.0;
    if (qos_satisfied(w, gains, targets, p_t, sigma2)) {
      const double obj = w.dot(gains);
      if (obj > best_obj) {
        best_obj = obj;
        best.w = w;
        best.feasible = true;
      }
    }
    int d = 0;
    for (; d < n - 1; ++d) {
      if (++idx[d] <= steps) break;
      idx[d] = 0;
    }
    if (d == n - 1) break;
  }
  return best;
}

}  // namespace risbc::power_alloc
