#include "risbc/channel.hpp"

#include <stdexcept>

namespace risbc::channel {

void ScenarioConfig::set_uniform_r_min(double bits) {
  r_min_bits = RVector::Constant(k_bds, bits);
}

void ScenarioConfig::validate() const {
  if (k_bds < 1) throw std::invalid_argument("k_bds must be >= 1");
  if (q_ris < 1) throw std::invalid_argument("q_ris must be >= 1");
  if (!(p_t_mw > 0.0)) throw std::invalid_argument("p_t_mw must be > 0");
  if (!(sigma2_mw > 0.0)) throw std::invalid_argument("sigma2_mw must be > 0");
  if (r_min_bits.size() != k_bds)
    throw std::invalid_argument("r_min_bits must have one entry per BD");
  if ((r_min_bits.array() < 0.0).any())
    throw std::invalid_argument("r_min_bits must be >= 0");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  if (!(bd_x_max >= bd_x_min)) throw std::invalid_argument("bd_x range is empty");
  for (double a : {alpha_ct_bd, alpha_bd_br, alpha_bd_ris, alpha_ris_br})
    if (!(a >= 0.0)) throw std::invalid_argument("path-loss exponents must be >= 0");
  for (double k : {kappa_ct_bd, kappa_bd_br, kappa_bd_ris, kappa_ris_br})
    if (!(k >= 0.0)) throw std::invalid_argument("Rician factors must be >= 0");
}

double path_loss(double d, double alpha, double rho) {
  if (!(d > 0.0)) throw std::domain_error("path_loss: distance must be > 0");
  return rho * std::pow(d, -alpha);
}

CVector sample_rician(double kappa, int n, std::mt19937_64& rng) {
  if (kappa < 0.0) throw std::domain_error("sample_rician: kappa must be >= 0");
  if (n < 1) throw std::domain_error("sample_rician: n must be >= 1");
  const double los_w = std::sqrt(kappa / (1.0 + kappa));
  const double nlos_w = std::sqrt(1.0 / (1.0 + kappa));
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
  CVector out(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    out[i] = cxd(los_w, 0.0) + nlos_w * cxd(re, im);
  }
  return out;
}

ChannelSet generate_channels(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const int k = cfg.k_bds;
  const int q = cfg.q_ris;

  ChannelSet ch;
  ch.bd_x.resize(k);
  // Positions first, then the Q-independent links, so that realizations with
  // the same seed share BD placement and direct paths across q_ris values.
  std::uniform_real_distribution<double> ux(cfg.bd_x_min, cfg.bd_x_max);
  for (int i = 0; i < k; ++i) ch.bd_x[i] = ux(rng);

  auto dist = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - b).norm();
  };

  ch.h.resize(k);
  ch.h_tilde.resize(k);
  ch.f.resize(q, k);
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d bd(ch.bd_x[i], cfg.bd_y);
    const double amp = std::sqrt(path_loss(dist(cfg.ct_pos, bd), cfg.alpha_ct_bd, cfg.rho));
    ch.h[i] = amp * sample_rician(cfg.kappa_ct_bd, 1, rng)[0];
  }
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d bd(ch.bd_x[i], cfg.bd_y);
    const double amp = std::sqrt(path_loss(dist(bd, cfg.br_pos), cfg.alpha_bd_br, cfg.rho));
    ch.h_tilde[i] = amp * sample_rician(cfg.kappa_bd_br, 1, rng)[0];
  }
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d bd(ch.bd_x[i], cfg.bd_y);
    const double amp = std::sqrt(path_loss(dist(bd, cfg.ris_pos), cfg.alpha_bd_ris, cfg.rho));
    ch.f.col(i) = amp * sample_rician(cfg.kappa_bd_ris, q, rng);
  }
  {
    const double amp =
        std::sqrt(path_loss(dist(cfg.ris_pos, cfg.br_pos), cfg.alpha_ris_br, cfg.rho));
    ch.g = amp * sample_rician(cfg.kappa_ris_br, q, rng);
  }

  // b_k = [h_k g^H diag(f_k), h_k h~_k]^H
  ch.b.resize(q + 1, k);
  for (int i = 0; i < k; ++i) {
    for (int r = 0; r < q; ++r)
      ch.b(r, i) = std::conj(ch.h[i] * std::conj(ch.g[r]) * ch.f(r, i));
    ch.b(q, i) = std::conj(ch.h[i] * ch.h_tilde[i]);
  }
  return ch;
}

double combined_gain(const ChannelSet& ch, const CVector& v, int k) {
  if (v.size() != ch.n_ris() + 1)
    throw std::invalid_argument("combined_gain: v must have q_ris + 1 entries");
  if (k < 0 || k >= ch.n_bds()) throw std::invalid_argument("combined_gain: BD index");
  return std::norm(ch.b.col(k).dot(v));
}

RVector combined_gains(const ChannelSet& ch, const CVector& v) {
  if (v.size() != ch.n_ris() + 1)
    throw std::invalid_argument("combined_gains: v must have q_ris + 1 entries");
  return (ch.b.adjoint() * v).cwiseAbs2();
}

double combined_gain_theta(const ChannelSet& ch, const RVector& theta, int k) {
  if (theta.size() != ch.n_ris())
    throw std::invalid_argument("combined_gain_theta: theta must have q_ris entries");
  if (k < 0 || k >= ch.n_bds()) throw std::invalid_argument("combined_gain_theta: BD index");
  cxd ris_path(0.0, 0.0);
  for (int r = 0; r < ch.n_ris(); ++r)
    ris_path += std::conj(ch.g[r]) * std::polar(1.0, theta[r]) * ch.f(r, k);
  return std::norm((ch.h_tilde[k] + ris_path) * ch.h[k]);
}

}  // namespace risbc::channel
