#include "risbc/manifold.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace risbc::manifold {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CVector BeamVector::canonical() const {
  const cxd last = v[v.size() - 1];
  const double mag = std::abs(last);
  if (mag <= 0.0) throw std::domain_error("BeamVector: zero reference entry");
  return v * (std::conj(last) / mag);
}

RVector BeamVector::theta() const {
  const CVector cv = canonical();
  RVector th(n_elements());
  for (int q = 0; q < th.size(); ++q) {
    double a = std::arg(cv[q]);
    if (a < 0.0) a += kTwoPi;
    th[q] = a;
  }
  return th;
}

BeamVector random_beam(int q_ris, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  BeamVector b;
  b.v.resize(q_ris + 1);
  for (int q = 0; q < q_ris; ++q) b.v[q] = std::polar(1.0, phase(rng));
  b.v[q_ris] = cxd(1.0, 0.0);
  return b;
}

QuadraticObjective QuadraticObjective::penalty_fit(const CMatrix& b_cols,
                                                   const CVector& a) {
  if (b_cols.cols() != a.size())
    throw std::invalid_argument("penalty_fit: one column per auxiliary variable");
  QuadraticObjective obj;
  obj.A = b_cols * b_cols.adjoint();
  obj.c = b_cols * a;
  obj.constant = a.squaredNorm();
  return obj;
}

double QuadraticObjective::value(const CVector& v) const {
  return (v.dot(A * v)).real() - 2.0 * c.dot(v).real() + constant;
}

CVector euclidean_grad(const QuadraticObjective& obj, const CVector& v) {
  if (v.size() != obj.A.rows()) throw std::invalid_argument("euclidean_grad: dims");
  return 2.0 * (obj.A * v - obj.c);
}

CVector riemannian_grad(const CVector& eg, const CVector& v) {
  if (eg.size() != v.size()) throw std::invalid_argument("riemannian_grad: dims");
  CVector out(v.size());
  for (int q = 0; q < v.size(); ++q) {
    if (std::abs(std::abs(v[q]) - 1.0) > 1e-6)
      throw std::invalid_argument("riemannian_grad: v must be unit-modulus");
    const double radial = (std::conj(eg[q]) * v[q]).real();
    out[q] = eg[q] - radial * v[q];
  }
  return out;
}

double max_step(const QuadraticObjective& obj, double fallback) {
  const int n = static_cast<int>(obj.A.rows());
  if (n == 0 || obj.A.cwiseAbs().maxCoeff() <= 0.0) return fallback;

  // Deterministic start vector; redraw in the unlikely nullspace hit.
  std::mt19937_64 rng(0x6d616e69666f6cULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector x(n);
  for (int i = 0; i < n; ++i) x[i] = cxd(gauss(rng), gauss(rng));
  x.normalize();

  double lambda = 0.0;
  for (int it = 0; it < 50000; ++it) {
    const CVector y = obj.A * x;
    lambda = x.dot(y).real();
    const double ny = y.norm();
    if (ny <= std::numeric_limits<double>::min()) {
      for (int i = 0; i < n; ++i) x[i] = cxd(gauss(rng), gauss(rng));
      x.normalize();
      continue;
    }
    // The eigenvalue residual bounds the distance to the spectrum, which is
    // a sound stop even when the top eigenvalues nearly tie.
    if ((y - lambda * x).norm() <= 1e-8 * lambda) break;
    x = y / ny;
  }
  if (!(lambda > 0.0)) return fallback;
  return 1.0 / lambda;
}

CVector retract(const CVector& v_tilde) {
  CVector out(v_tilde.size());
  for (int q = 0; q < v_tilde.size(); ++q) {
    const double m = std::abs(v_tilde[q]);
    if (m <= std::numeric_limits<double>::min())
      throw std::domain_error("retract: zero entry");
    out[q] = v_tilde[q] / m;
  }
  return out;
}

CVector retract(const CVector& v_tilde, const CVector& prev) {
  CVector out(v_tilde.size());
  for (int q = 0; q < v_tilde.size(); ++q) {
    const double m = std::abs(v_tilde[q]);
    out[q] = m <= std::numeric_limits<double>::min() ? prev[q] : v_tilde[q] / m;
  }
  return out;
}

DescendResult descend(const QuadraticObjective& obj, const BeamVector& v0,
                      const DescendOptions& opts) {
  for (int q = 0; q < v0.v.size(); ++q)
    if (std::abs(std::abs(v0.v[q]) - 1.0) > 1e-9)
      throw std::invalid_argument("descend: v0 must be unit-modulus");

  DescendResult res;
  res.v.v = v0.v;
  double f = obj.value(res.v.v);
  res.trace.f.push_back(f);
  const double f_scale = std::max(std::abs(f), std::numeric_limits<double>::min());
  const double step0 = max_step(obj, opts.fallback_step);

  auto track_modulus = [&](const CVector& v) {
    for (int q = 0; q < v.size(); ++q)
      res.trace.max_modulus_dev =
          std::max(res.trace.max_modulus_dev, std::abs(std::abs(v[q]) - 1.0));
  };
  track_modulus(res.v.v);

  for (int it = 0; it < opts.max_iter; ++it) {
    const CVector eg = euclidean_grad(obj, res.v.v);
    const CVector rg = riemannian_grad(eg, res.v.v);
    for (int q = 0; q < rg.size(); ++q)
      res.trace.max_tangency_residual = std::max(
          res.trace.max_tangency_residual, std::abs((rg[q] * std::conj(res.v.v[q])).real()));
    if (rg.lpNorm<Eigen::Infinity>() == 0.0) {
      res.converged = true;
      break;
    }

    double step = step0;
    bool accepted = false;
    CVector cand;
    double f_cand = f;
    for (int h = 0; h < 60; ++h) {
      cand = retract(res.v.v - step * rg, res.v.v);
      f_cand = obj.value(cand);
      if (f_cand <= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
      ++res.trace.backtracks;
    }
    if (!accepted) {
      res.converged = true;  // no descent direction left at float resolution
      break;
    }
    res.v.v = std::move(cand);
    track_modulus(res.v.v);
    res.trace.f.push_back(f_cand);
    if (std::abs(f - f_cand) <= opts.tol * f_scale) {
      f = f_cand;
      res.converged = true;
      break;
    }
    f = f_cand;
  }
  return res;
}

}  // namespace risbc::manifold
