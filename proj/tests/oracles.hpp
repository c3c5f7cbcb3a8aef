#pragma once

// Independent reference computations used by the unit and acceptance suites.
// Everything here deliberately avoids the library's own solution paths.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "risbc/channel.hpp"
#include "risbc/manifold.hpp"
#include "risbc/power_alloc.hpp"
#include "risbc/sca.hpp"
#include "risbc/types.hpp"

namespace oracles {

using risbc::CMatrix;
using risbc::CVector;
using risbc::cxd;
using risbc::RVector;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline cxd rand_cx(std::mt19937_64& r, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale / std::sqrt(2.0));
  const double re = g(r);
  const double im = g(r);
  return {re, im};
}

// ---------------------------------------------------------------------------
// Channel assembly from raw links (mirrors the stacked-vector definition).

inline risbc::channel::ChannelSet assemble_channels(const CVector& h, const CVector& h_tilde,
                                                    const CMatrix& f, const CVector& g) {
  risbc::channel::ChannelSet ch;
  ch.h = h;
  ch.h_tilde = h_tilde;
  ch.f = f;
  ch.g = g;
  const int q = static_cast<int>(g.size());
  const int k = static_cast<int>(h.size());
  ch.bd_x = RVector::Zero(k);
  ch.b.resize(q + 1, k);
  for (int i = 0; i < k; ++i) {
    for (int r = 0; r < q; ++r)
      ch.b(r, i) = std::conj(h[i] * std::conj(g[r]) * f(r, i));
    ch.b(q, i) = std::conj(h[i] * h_tilde[i]);
  }
  return ch;
}

inline risbc::channel::ChannelSet random_channels(std::mt19937_64& r, int k, int q,
                                                  double g_scale = 1.0) {
  CVector h(k), ht(k), g(q);
  CMatrix f(q, k);
  for (int i = 0; i < k; ++i) h[i] = rand_cx(r);
  for (int i = 0; i < k; ++i) ht[i] = rand_cx(r);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < q; ++j) f(j, i) = rand_cx(r);
  for (int j = 0; j < q; ++j) g[j] = rand_cx(r, g_scale);
  return assemble_channels(h, ht, f, g);
}

// ---------------------------------------------------------------------------
// Power allocation.

struct PaInstance {
  RVector gains;
  risbc::power_alloc::QosTargets targets;
  double p_t = 1.0;
  double sigma2 = 0.1;
};

// Sorted, well-separated gains and moderate QoS targets.
inline PaInstance random_pa_instance(std::mt19937_64& r, int k, double max_rate_bits = 1.2) {
  std::uniform_real_distribution<double> ug(0.2, 3.0);
  std::uniform_real_distribution<double> ur(0.0, max_rate_bits);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  PaInstance inst;
  for (;;) {
    inst.gains.resize(k);
    for (int i = 0; i < k; ++i) inst.gains[i] = ug(r);
    std::sort(inst.gains.data(), inst.gains.data() + k, std::greater<double>());
    bool separated = true;
    for (int i = 0; i + 1 < k; ++i)
      separated = separated && inst.gains[i] > inst.gains[i + 1] * (1.0 + 1e-3);
    if (separated) break;
  }
  RVector bits(k);
  for (int i = 0; i < k; ++i) bits[i] = u01(r) < 0.3 ? 0.0 : ur(r);
  inst.targets = risbc::power_alloc::QosTargets::from_rate_floors(bits);
  inst.p_t = std::uniform_real_distribution<double>(0.5, 4.0)(r);
  inst.sigma2 = std::uniform_real_distribution<double>(0.02, 0.5)(r);
  return inst;
}

// Full K-dimensional grid enumeration with no pruning; only for tiny K and
// coarse steps. Validates the library's pruned oracle.
inline risbc::power_alloc::WResult naive_grid_w(const PaInstance& inst, double step) {
  const int k = static_cast<int>(inst.gains.size());
  const int steps = static_cast<int>(std::lround(1.0 / step));
  risbc::power_alloc::WResult best;
  double best_obj = -std::numeric_limits<double>::infinity();
  std::vector<int> idx(k, 0);
  RVector w(k);
  for (;;) {
    for (int d = 0; d < k; ++d) w[d] = static_cast<double>(idx[d]) / steps;
    if (risbc::power_alloc::qos_satisfied(w, inst.gains, inst.targets, inst.p_t,
                                          inst.sigma2)) {
      const double obj = w.dot(inst.gains);
      if (obj > best_obj) {
        best_obj = obj;
        best.w = w;
        best.feasible = true;
      }
    }
    int d = 0;
    for (; d < k; ++d) {
      if (++idx[d] <= steps) break;
      idx[d] = 0;
    }
    if (d == k) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Manifold objective oracles.

inline CVector finite_difference_grad(const risbc::manifold::QuadraticObjective& obj,
                                      const CVector& v, double delta = 1e-5) {
  CVector g(v.size());
  for (int q = 0; q < v.size(); ++q) {
    CVector vp = v, vm = v;
    vp[q] += delta;
    vm[q] -= delta;
    const double dre = (obj.value(vp) - obj.value(vm)) / (2.0 * delta);
    vp = v;
    vm = v;
    vp[q] += cxd(0.0, delta);
    vm[q] -= cxd(0.0, delta);
    const double dim = (obj.value(vp) - obj.value(vm)) / (2.0 * delta);
    g[q] = cxd(dre, dim);
  }
  return g;
}

inline double dense_lambda_max(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  return es.eigenvalues().maxCoeff();
}

// ---------------------------------------------------------------------------
// Grid oracle for the 2-complex-variable SCA subproblem: coarse-to-fine
// search over the linearized constraint set.

struct ScaInstance {
  CVector a_ref;  // feasible for its own linearization
  CVector c;
  RVector w;
  risbc::power_alloc::QosTargets targets;
  double noise_ratio = 0.1;
  double mu = 10.0;
};

inline ScaInstance random_sca_instance(std::mt19937_64& r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScaInstance inst;
  inst.w.resize(2);
  inst.w << 1.0, 0.3 + 0.7 * u(r);
  RVector bits(2);
  bits << 0.2 + 0.8 * u(r), 0.2 + 0.8 * u(r);
  inst.targets = risbc::power_alloc::QosTargets::from_rate_floors(bits);
  inst.noise_ratio = 0.02 + 0.2 * u(r);
  inst.mu = 2.0 + 30.0 * u(r);
  inst.c.resize(2);
  inst.c << rand_cx(r), rand_cx(r);

  // Reference point feasible with margin: a2 covers its own QoS, a1 covers
  // both the ordering and BD 1's QoS.
  const double r1 = inst.targets.r_min_linear[0];
  const double r2 = inst.targets.r_min_linear[1];
  double m2 = std::max(0.3 + 0.5 * u(r), 1.3 * r2 * inst.noise_ratio / inst.w[1]);
  double m1 = 1.5 * std::max(m2, r1 * (inst.w[1] * m2 + inst.noise_ratio) / inst.w[0]);
  inst.a_ref.resize(2);
  inst.a_ref << std::polar(std::sqrt(m1), 6.28 * u(r)), std::polar(std::sqrt(m2), 6.28 * u(r));
  return inst;
}

inline double sca_subproblem_objective(const ScaInstance& inst, const CVector& a) {
  double obj = 0.0;
  for (int i = 0; i < 2; ++i)
    obj += -inst.w[i] * risbc::sca::f_sca(a[i], inst.a_ref[i]) +
           inst.mu * std::norm(a[i] - inst.c[i]);
  return obj;
}

inline bool sca_point_ok(const ScaInstance& inst, const CVector& a) {
  const double f1 = risbc::sca::f_sca(a[0], inst.a_ref[0]);
  const double f2 = risbc::sca::f_sca(a[1], inst.a_ref[1]);
  const double r1 = inst.targets.r_min_linear[0];
  const double r2 = inst.targets.r_min_linear[1];
  if (inst.w[0] * f1 < r1 * (inst.w[1] * std::norm(a[1]) + inst.noise_ratio)) return false;
  if (inst.w[1] * f2 < r2 * inst.noise_ratio) return false;
  if (f1 < std::norm(a[1])) return false;
  return true;
}

// For fixed a_2 every a_1 constraint collapses into one half-plane
// 2 Re(conj(ref_1) a_1) >= tau, and the a_1 terms complete the square to an
// isotropic disk around z* = c_1 + (w_1/mu) ref_1, so the optimal a_1 is the
// Euclidean projection of z* onto that half-plane. The oracle is then an
// exhaustive coarse-to-fine grid over a_2 alone.
inline bool sca_best_a1(const ScaInstance& inst, cxd a2, cxd& a1_out) {
  const double r1 = inst.targets.r_min_linear[0];
  // Required f_sca(a_1): ordering and BD 1's QoS.
  double s_min = std::norm(a2);
  s_min = std::max(s_min, r1 * (inst.w[1] * std::norm(a2) + inst.noise_ratio) / inst.w[0]);
  const cxd z = inst.c[0] + (inst.w[0] / inst.mu) * inst.a_ref[0];
  const double rmag = std::abs(inst.a_ref[0]);
  const double tau = s_min + std::norm(inst.a_ref[0]);
  if (rmag < 1e-300) {
    a1_out = z;
    return s_min <= 0.0;  // f_sca is identically zero
  }
  const double gap = tau - 2.0 * (std::conj(inst.a_ref[0]) * z).real();
  a1_out = gap <= 0.0
               ? z
               : z + (inst.a_ref[0] / rmag) * (gap / (2.0 * rmag) + 1e-12 * (1.0 + rmag));
  return true;
}

inline double sca_grid_oracle(const ScaInstance& inst) {
  const double r2 = inst.targets.r_min_linear[1];
  auto a2_ok = [&](cxd a2) {
    return inst.w[1] * risbc::sca::f_sca(a2, inst.a_ref[1]) >= r2 * inst.noise_ratio;
  };
  auto value_at = [&](cxd a2, double& out) {
    cxd a1;
    if (!a2_ok(a2) || !sca_best_a1(inst, a2, a1)) return false;
    CVector a(2);
    a << a1, a2;
    if (!sca_point_ok(inst, a)) return false;
    out = sca_subproblem_objective(inst, a);
    return true;
  };

  cxd center = inst.a_ref[1];
  double radius = 1.0;
  for (int i = 0; i < 2; ++i)
    radius = std::max({radius, std::abs(inst.a_ref[i]), std::abs(inst.c[i])});
  radius *= 2.0;
  const double radius0 = radius;

  double best = std::numeric_limits<double>::infinity();
  cxd best_a2 = center;
  const int n = 41;
  for (int level = 0; level < 60; ++level) {
    const double d = 2.0 * radius / (n - 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const cxd a2 = center + cxd(-radius + i * d, -radius + j * d);
        double obj;
        if (value_at(a2, obj) && obj < best) {
          best = obj;
          best_a2 = a2;
        }
      }
    center = best_a2;  // incumbent stays inside the next, smaller box
    radius /= 1.25;
  }

  // The reduced objective is convex but kinked where the active set changes,
  // and box refinement crawls along those curves. All kink loci are known in
  // closed form (the a_2 QoS line and circles |a_2| = const), so scan each
  // densely with local zoom and keep the overall best.
  auto try_point = [&](cxd a2) {
    double obj;
    if (value_at(a2, obj) && obj < best) {
      best = obj;
      best_a2 = a2;
    }
  };

  auto scan_line = [&](cxd p0, cxd dir) {
    double t_lo = -4.0 * radius0, t_hi = 4.0 * radius0;
    for (int round = 0; round < 14; ++round) {
      const int pts = round == 0 ? 4001 : 81;
      double best_t = 0.5 * (t_lo + t_hi);
      double local = std::numeric_limits<double>::infinity();
      for (int i = 0; i < pts; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / (pts - 1);
        double obj;
        if (value_at(p0 + t * dir, obj) && obj < local) {
          local = obj;
          best_t = t;
        }
      }
      if (local < best) {
        best = local;
        best_a2 = p0 + best_t * dir;
      }
      const double span = (t_hi - t_lo) / (pts - 1);
      t_lo = best_t - 2.0 * span;
      t_hi = best_t + 2.0 * span;
    }
  };

  auto scan_circle = [&](double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) return;
    double lo = 0.0, hi = 2.0 * 3.14159265358979323846;
    for (int round = 0; round < 14; ++round) {
      const int pts = round == 0 ? 4001 : 81;
      double best_t = 0.5 * (lo + hi);
      double local = std::numeric_limits<double>::infinity();
      for (int i = 0; i < pts; ++i) {
        const double t = lo + (hi - lo) * i / (pts - 1);
        double obj;
        if (value_at(std::polar(rho, t), obj) && obj < local) {
          local = obj;
          best_t = t;
        }
      }
      if (local < best) {
        best = local;
        best_a2 = std::polar(rho, best_t);
      }
      const double span = (hi - lo) / (pts - 1);
      lo = best_t - 2.0 * span;
      hi = best_t + 2.0 * span;
    }
  };

  const double w0 = inst.w[0], w1 = inst.w[1];
  const double r1 = inst.targets.r_min_linear[0];
  const cxd ref1 = inst.a_ref[0], ref2 = inst.a_ref[1];

  // Active a_2 QoS: f_sca(a_2, ref_2) = r_2 nr / w_2. The exact line is a
  // feasibility knife-edge under float rounding, so scan copies nudged just
  // inside the feasible side.
  if (std::abs(ref2) > 1e-300) {
    const double s2req = r2 * inst.noise_ratio / w1;
    const cxd p0 = ref2 * (s2req + std::norm(ref2)) / (2.0 * std::norm(ref2));
    const cxd inward = ref2 / std::abs(ref2);
    for (double eta : {1e-9, 1e-7, 1e-5})
      scan_line(p0 + eta * (1.0 + std::abs(p0)) * inward,
                cxd(0.0, 1.0) * ref2 / std::abs(ref2));
  }
  // Tie between the two pieces of the required f_sca(a_1).
  if (w0 - r1 * w1 > 1e-12)
    scan_circle(std::sqrt(r1 * inst.noise_ratio / (w0 - r1 * w1)));
  // Switch between slack and tight a_1 half-plane: s_min(a_2) = f_sca(z, ref_1).
  {
    const cxd z = inst.c[0] + (w0 / inst.mu) * ref1;
    const double s_z = risbc::sca::f_sca(z, ref1);
    if (s_z > 0.0) scan_circle(std::sqrt(s_z));
    const double rho2 = (w0 * s_z / std::max(r1, 1e-300) - inst.noise_ratio) / w1;
    if (r1 > 0.0 && rho2 > 0.0) scan_circle(std::sqrt(rho2));
  }

  // Smooth-interior finisher.
  const int dirs = 32;
  double step = radius0;
  while (step > 1e-11) {
    bool improved = false;
    for (int k = 0; k < dirs; ++k) {
      const double ang = 2.0 * 3.14159265358979323846 * k / dirs;
      double obj;
      const cxd a2 = best_a2 + step * cxd(std::cos(ang), std::sin(ang));
      if (value_at(a2, obj) && obj < best) {
        best = obj;
        best_a2 = a2;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  (void)try_point;
  return best;
}

}  // namespace oracles
