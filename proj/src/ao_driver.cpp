#include "risbc/ao_driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace risbc::ao {

namespace {

using power_alloc::QosTargets;

double penalty_residual_rel(const CVector& a, const CVector& c, double noise_ratio) {
  const double scale = std::max({c.lpNorm<Eigen::Infinity>(), std::sqrt(noise_ratio),
                                 std::numeric_limits<double>::min()});
  return (a - c).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace

DecodingOrder DecodingOrder::identity(int k) {
  DecodingOrder d;
  d.position.resize(k);
  std::iota(d.position.begin(), d.position.end(), 0);
  return d;
}

DecodingOrder DecodingOrder::from_sequence(const std::vector<int>& seq) {
  DecodingOrder d;
  d.position.assign(seq.size(), -1);
  for (int slot = 0; slot < static_cast<int>(seq.size()); ++slot) {
    const int bd = seq[slot];
    if (bd < 0 || bd >= static_cast<int>(seq.size()) || d.position[bd] != -1)
      throw std::invalid_argument("DecodingOrder: sequence is not a permutation");
    d.position[bd] = slot;
  }
  return d;
}

std::vector<int> DecodingOrder::sequence() const {
  std::vector<int> seq(position.size());
  for (int bd = 0; bd < size(); ++bd) seq[position[bd]] = bd;
  return seq;
}

std::vector<DecodingOrder> all_orders(int k) {
  std::vector<int> seq(k);
  std::iota(seq.begin(), seq.end(), 0);
  std::vector<DecodingOrder> orders;
  do {
    orders.push_back(DecodingOrder::from_sequence(seq));
  } while (std::next_permutation(seq.begin(), seq.end()));
  return orders;
}

SolveResult solve_fixed_order(const channel::ChannelSet& ch,
                              const channel::ScenarioConfig& cfg,
                              const DecodingOrder& order,
                              const manifold::BeamVector& v0,
                              const SolverConfig& scfg) {
  cfg.validate();
  const int k = ch.n_bds();
  const int q = ch.n_ris();
  if (order.size() != k) throw std::invalid_argument("solve_fixed_order: order size");
  if (v0.v.size() != q + 1) throw std::invalid_argument("solve_fixed_order: v0 size");

  const auto seq = order.sequence();
  CMatrix bp(q + 1, k);
  RVector r_min(k);
  for (int slot = 0; slot < k; ++slot) {
    bp.col(slot) = ch.b.col(seq[slot]);
    r_min[slot] = cfg.r_min_bits[seq[slot]];
  }
  const QosTargets targets = QosTargets::from_rate_floors(r_min);
  const double noise_ratio = cfg.sigma2_mw / cfg.p_t_mw;

  auto gains = [&](const CVector& v) -> RVector { return (bp.adjoint() * v).cwiseAbs2(); };

  SolveResult res;
  res.order = order;
  res.orders_evaluated = 1;

  CVector v = v0.v;
  RVector h = gains(v);
  CVector a;
  double mu = scfg.penalty.mu;

  // Restores the slot ordering of the combined gains by steering the
  // auxiliary variables to a feasible point and chasing them with the beam,
  // iterating since one fit rarely reorders the gains outright.
  auto repair_ordering = [&](const RVector& w_hint, CVector& vv, RVector& hh,
                             CVector& aa) -> bool {
    for (int round = 0; round < 8; ++round) {
      try {
        aa = sca::find_feasible_start(bp.adjoint() * vv, w_hint, targets, noise_ratio,
                                      scfg.sca)
                 .a;
      } catch (const sca::Infeasible&) {
        return false;
      }
      auto des = manifold::descend(manifold::QuadraticObjective::penalty_fit(bp, aa),
                                   manifold::BeamVector{vv}, scfg.descent);
      vv = des.v.v;
      hh = gains(vv);
      if (power_alloc::strictly_ordered(hh)) return true;
    }
    return false;
  };

  if (!power_alloc::strictly_ordered(h)) {
    if (!repair_ordering(RVector::Ones(k), v, h, a))
      return res;  // infeasible for this order
  }

  auto wres = power_alloc::optimal_w(h, targets, cfg.p_t_mw, cfg.sigma2_mw);
  if (!wres.feasible) return res;
  RVector w = wres.w;
  double rate = power_alloc::sum_rate(w, h, cfg.p_t_mw, cfg.sigma2_mw);
  res.ao_trace.push_back(rate);
  res.status = Status::iteration_capped;

  for (int t4 = 1; t4 <= scfg.t4_max; ++t4) {
    res.outer_iterations = t4;
    CVector c = bp.adjoint() * v;

    // Auxiliary update.
    CVector a_start = a.size() == k ? a : c;
    if (!sca::point_feasible(a_start, w, targets, noise_ratio, scfg.sca.eps_ord)) {
      try {
        a_start = sca::find_feasible_start(a_start, w, targets, noise_ratio, scfg.sca).a;
      } catch (const sca::Infeasible&) {
        break;
      }
    }
    CVector a_new;
    try {
      a_new = sca::run(a_start, w, c, targets, noise_ratio, mu, scfg.sca).a;
    } catch (const sca::Infeasible&) {
      break;
    }

    // Beam update, then ordering maintenance before the next w update.
    auto des = manifold::descend(manifold::QuadraticObjective::penalty_fit(bp, a_new),
                                 manifold::BeamVector{v}, scfg.descent);
    CVector v_new = des.v.v;
    RVector h_new = gains(v_new);
    if (!power_alloc::strictly_ordered(h_new)) {
      try {
        a_new = sca::find_feasible_start(bp.adjoint() * v_new, w, targets, noise_ratio,
                                         scfg.sca)
                    .a;
      } catch (const sca::Infeasible&) {
        break;
      }
      auto des2 = manifold::descend(manifold::QuadraticObjective::penalty_fit(bp, a_new),
                                    manifold::BeamVector{v_new}, scfg.descent);
      v_new = des2.v.v;
      h_new = gains(v_new);
      if (!power_alloc::strictly_ordered(h_new)) break;
    }

    auto wres_new = power_alloc::optimal_w(h_new, targets, cfg.p_t_mw, cfg.sigma2_mw);
    if (!wres_new.feasible) break;
    const double rate_new =
        power_alloc::sum_rate(wres_new.w, h_new, cfg.p_t_mw, cfg.sigma2_mw);

    if (rate_new >= rate - 1e-12 * std::max(1.0, std::abs(rate))) {
      const double gain = rate_new - rate;
      w = wres_new.w;
      v = std::move(v_new);
      h = std::move(h_new);
      a = std::move(a_new);
      rate = std::max(rate, rate_new);
      res.ao_trace.push_back(rate);
      res.penalty_residual = penalty_residual_rel(a, bp.adjoint() * v, noise_ratio);
      const bool residual_ok = res.penalty_residual <= scfg.penalty.eps_pen;
      if (!residual_ok) mu = std::min(mu * scfg.penalty.mu_growth, scfg.penalty.mu_max);
      if (std::abs(gain) < scfg.eps_ao && residual_ok) {
        res.status = Status::converged;
        break;
      }
    } else {
      // The beam chased a poorly coupled auxiliary point; tighten the penalty
      // and retry from the current iterate.
      a = std::move(a_new);
      if (mu >= scfg.penalty.mu_max) {
        res.status = Status::converged;
        break;
      }
      mu = std::min(mu * scfg.penalty.mu_growth, scfg.penalty.mu_max);
    }
  }

  // Export in BD indexing.
  res.w.resize(k);
  res.per_bd_rates.resize(k);
  const RVector slot_rates = power_alloc::all_rates(w, h, cfg.p_t_mw, cfg.sigma2_mw);
  for (int slot = 0; slot < k; ++slot) {
    res.w[seq[slot]] = w[slot];
    res.per_bd_rates[seq[slot]] = slot_rates[slot];
  }
  res.v.v = std::move(v);
  res.sum_rate_bits = rate;
  return res;
}

SolveResult solve(const channel::ChannelSet& ch, const channel::ScenarioConfig& cfg,
                  std::mt19937_64& rng, const SolverConfig& scfg) {
  const int k = ch.n_bds();
  const manifold::BeamVector v0 = manifold::random_beam(ch.n_ris(), rng);

  std::vector<DecodingOrder> orders;
  if (k <= scfg.order_enum_cap) {
    orders = all_orders(k);
  } else {
    // Too many permutations; fall back to sorting by the RIS-free gains.
    std::vector<int> seq(k);
    std::iota(seq.begin(), seq.end(), 0);
    RVector h0(k);
    for (int i = 0; i < k; ++i) h0[i] = std::norm(ch.h_tilde[i] * ch.h[i]);
    std::stable_sort(seq.begin(), seq.end(), [&](int x, int y) { return h0[x] > h0[y]; });
    orders.push_back(DecodingOrder::from_sequence(seq));
  }

  SolveResult best;
  for (const auto& order : orders) {
    SolveResult r = solve_fixed_order(ch, cfg, order, v0, scfg);
    if (r.feasible() && (!best.feasible() || r.sum_rate_bits > best.sum_rate_bits)) {
      best = std::move(r);
    }
  }
  best.orders_evaluated = static_cast<int>(orders.size());
  return best;
}

RateReport rate_report(const SolveResult& result, const channel::ChannelSet& ch,
                       const channel::ScenarioConfig& cfg) {
  RateReport rep;
  if (!result.feasible()) {
    rep.violations.push_back("result is infeasible");
    return rep;
  }
  const int k = ch.n_bds();
  auto flag = [&](const std::string& msg) { rep.violations.push_back(msg); };

  for (int q = 0; q < result.v.v.size(); ++q)
    if (std::abs(std::abs(result.v.v[q]) - 1.0) > 1e-12)
      flag("beam entry " + std::to_string(q) + " is not unit-modulus");
  for (int i = 0; i < k; ++i)
    if (result.w[i] < -1e-12 || result.w[i] > 1.0 + 1e-12)
      flag("w[" + std::to_string(i) + "] outside [0,1]");

  // Gains recomputed through the phase-shift matrix, independent of the
  // stacked-vector path used by the solver.
  const RVector theta = result.v.theta();
  RVector h_bd(k);
  for (int i = 0; i < k; ++i) h_bd[i] = channel::combined_gain_theta(ch, theta, i);

  const auto seq = result.order.sequence();
  RVector h(k), w(k), r_min(k);
  for (int slot = 0; slot < k; ++slot) {
    h[slot] = h_bd[seq[slot]];
    w[slot] = result.w[seq[slot]];
    r_min[slot] = cfg.r_min_bits[seq[slot]];
  }
  if (!power_alloc::strictly_ordered(h)) flag("combined gains not strictly ordered");

  const RVector slot_rates = power_alloc::all_rates(w, h, cfg.p_t_mw, cfg.sigma2_mw);
  rep.per_bd_rates.resize(k);
  for (int slot = 0; slot < k; ++slot) {
    rep.per_bd_rates[seq[slot]] = slot_rates[slot];
    if (slot_rates[slot] < r_min[slot] - 1e-6)
      flag("QoS violated for BD " + std::to_string(seq[slot]));
  }
  rep.sum_rate_bits = slot_rates.sum();
  if (std::abs(rep.sum_rate_bits - result.sum_rate_bits) > 1e-6)
    flag("sum rate mismatch against recomputation");
  return rep;
}

}  // namespace risbc::ao
