#pragma once

/// Scenario geometry, channel realizations and combined-gain evaluation for
/// the RIS-assisted NOMA backscatter link model. A scenario has one carrier
/// transmitter (CT), one backscatter receiver (BR), one RIS with q_ris
/// reflecting elements and k_bds backscatter devices (BDs) placed uniformly
/// on a segment. The CT-RIS link is blocked, so every RIS path is
/// BD -> RIS -> BR.

#include <cstdint>
#include <random>

#include "risbc/types.hpp"

namespace risbc::channel {

struct ScenarioConfig {
  int k_bds = 3;
  int q_ris = 30;
  double p_t_mw = dbm_to_mw(35.0);
  double sigma2_mw = dbm_to_mw(-114.0);
  RVector r_min_bits = RVector::Constant(3, 1.0);  // per-BD rate floor, bits/s/Hz

  Eigen::Vector2d ct_pos{0.0, 10.0};
  Eigen::Vector2d ris_pos{65.0, 10.0};
  Eigen::Vector2d br_pos{70.0, 10.0};
  double bd_x_min = 40.0;
  double bd_x_max = 50.0;
  double bd_y = 0.0;

  // Path-loss exponent and Rician factor per link class.
  double alpha_ct_bd = 2.5, alpha_bd_br = 2.5, alpha_bd_ris = 2.1, alpha_ris_br = 2.1;
  double kappa_ct_bd = 0.0, kappa_bd_br = 0.0, kappa_bd_ris = 3.0, kappa_ris_br = 3.0;
  double rho = db_to_linear(-30.0);  // reference path loss at 1 m, linear

  std::uint64_t seed = 1;

  void set_uniform_r_min(double bits);
  /// Throws std::invalid_argument on any violated field constraint.
  void validate() const;
};

/// One realization of every link. Column k of `f` is the BD_k -> RIS vector;
/// column k of `b` stacks the per-element RIS products and the direct path,
/// conjugated, so that b_k^H v is the effective BD_k -> BR channel (including
/// the CT -> BD_k carrier) for a beam vector v of unit-modulus entries.
struct ChannelSet {
  CVector h;        // CT -> BD_k
  CVector h_tilde;  // BD_k -> BR
  CMatrix f;        // BD_k -> RIS, (q_ris x k_bds)
  CVector g;        // RIS -> BR
  CMatrix b;        // ((q_ris+1) x k_bds), derived
  RVector bd_x;     // sampled BD abscissae

  int n_bds() const { return static_cast<int>(h.size()); }
  int n_ris() const { return static_cast<int>(g.size()); }
};

/// rho * d^(-alpha). Throws std::domain_error for d <= 0.
double path_loss(double d, double alpha, double rho);

/// n samples of sqrt(kappa/(1+kappa)) * 1 + sqrt(1/(1+kappa)) * CN(0,1).
/// The line-of-sight component is the all-ones vector; each entry has unit
/// average power. Throws std::domain_error for kappa < 0.
CVector sample_rician(double kappa, int n, std::mt19937_64& rng);

ChannelSet generate_channels(const ScenarioConfig& cfg, std::mt19937_64& rng);

/// Combined channel gain H_k = |b_k^H v|^2 for a beam vector of length
/// q_ris + 1. Throws std::invalid_argument on dimension mismatch.
double combined_gain(const ChannelSet& ch, const CVector& v, int k);
RVector combined_gains(const ChannelSet& ch, const CVector& v);

/// The same gain evaluated through the explicit phase-shift matrix,
/// H_k = |(h~_k + g^H diag(e^{j theta}) f_k) h_k|^2. Kept as an independent
/// evaluation path for cross-checking the stacked form.
double combined_gain_theta(const ChannelSet& ch, const RVector& theta, int k);

}  // namespace risbc::channel
