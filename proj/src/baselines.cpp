#include "risbc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace risbc::baselines {

namespace {

using power_alloc::QosTargets;

// Best closed-form power allocation over candidate decoding orders for fixed
// combined gains. Only orders that keep the per-slot gains strictly
// decreasing are admissible.
ao::SolveResult best_fixed_gain(const channel::ScenarioConfig& cfg, const RVector& h_bd,
                                const manifold::BeamVector& v) {
  const int k = static_cast<int>(h_bd.size());
  std::vector<ao::DecodingOrder> orders;
  if (k <= 5) {
    orders = ao::all_orders(k);
  } else {
    std::vector<int> seq(k);
    std::iota(seq.begin(), seq.end(), 0);
    std::stable_sort(seq.begin(), seq.end(), [&](int x, int y) { return h_bd[x] > h_bd[y]; });
    orders.push_back(ao::DecodingOrder::from_sequence(seq));
  }

  ao::SolveResult best;
  for (const auto& order : orders) {
    const auto seq = order.sequence();
    RVector h(k), r_min(k);
    for (int slot = 0; slot < k; ++slot) {
      h[slot] = h_bd[seq[slot]];
      r_min[slot] = cfg.r_min_bits[seq[slot]];
    }
    if (!power_alloc::strictly_ordered(h)) continue;
    const auto targets = QosTargets::from_rate_floors(r_min);
    const auto wres = power_alloc::optimal_w(h, targets, cfg.p_t_mw, cfg.sigma2_mw);
    if (!wres.feasible) continue;
    const double rate = power_alloc::sum_rate(wres.w, h, cfg.p_t_mw, cfg.sigma2_mw);
    if (best.feasible() && rate <= best.sum_rate_bits) continue;

    best.status = ao::Status::converged;
    best.order = order;
    best.sum_rate_bits = rate;
    best.ao_trace = {rate};
    best.v = v;
    best.w.resize(k);
    best.per_bd_rates.resize(k);
    const RVector slot_rates = power_alloc::all_rates(wres.w, h, cfg.p_t_mw, cfg.sigma2_mw);
    for (int slot = 0; slot < k; ++slot) {
      best.w[seq[slot]] = wres.w[slot];
      best.per_bd_rates[seq[slot]] = slot_rates[slot];
    }
  }
  return best;
}

RVector no_ris_gains(const channel::ChannelSet& ch) {
  RVector h0(ch.n_bds());
  for (int i = 0; i < ch.n_bds(); ++i) h0[i] = std::norm(ch.h_tilde[i] * ch.h[i]);
  return h0;
}

}  // namespace

ao::SolveResult random_ris(const channel::ChannelSet& ch,
                           const channel::ScenarioConfig& cfg, std::mt19937_64& rng,
                           int n_draws) {
  cfg.validate();
  if (n_draws < 1) throw std::invalid_argument("random_ris: n_draws must be >= 1");
  ao::SolveResult best;
  for (int d = 0; d < n_draws; ++d) {
    const manifold::BeamVector v = manifold::random_beam(ch.n_ris(), rng);
    const RVector h_bd = channel::combined_gains(ch, v.v);
    ao::SolveResult cand = best_fixed_gain(cfg, h_bd, v);
    if (cand.feasible() && (!best.feasible() || cand.sum_rate_bits > best.sum_rate_bits))
      best = std::move(cand);
  }
  return best;
}

ao::SolveResult nomabc_no_ris(const channel::ChannelSet& ch,
                              const channel::ScenarioConfig& cfg) {
  cfg.validate();
  manifold::BeamVector v;
  v.v = CVector::Ones(ch.n_ris() + 1);
  return best_fixed_gain(cfg, no_ris_gains(ch), v);
}

ao::SolveResult omabc_no_ris(const channel::ChannelSet& ch,
                             const channel::ScenarioConfig& cfg) {
  cfg.validate();
  const int k = ch.n_bds();
  const RVector h0 = no_ris_gains(ch);

  ao::SolveResult res;
  res.order = ao::DecodingOrder::identity(k);
  res.v.v = CVector::Ones(ch.n_ris() + 1);
  res.w = RVector::Ones(k);
  res.per_bd_rates.resize(k);
  bool ok = true;
  for (int i = 0; i < k; ++i) {
    res.per_bd_rates[i] =
        std::log2(1.0 + cfg.p_t_mw * h0[i] / cfg.sigma2_mw) / static_cast<double>(k);
    if (res.per_bd_rates[i] < cfg.r_min_bits[i] - 1e-12) ok = false;
  }
  res.sum_rate_bits = res.per_bd_rates.sum();
  res.ao_trace = {res.sum_rate_bits};
  res.status = ok ? ao::Status::converged : ao::Status::infeasible;
  return res;
}

}  // namespace risbc::baselines
