#pragma once

/// Riemannian gradient descent on the product of unit circles for the
/// passive beamforming subproblem: minimize f(v) = v^H A v - 2 Re(c^H v) + d
/// over complex vectors with unit-modulus entries. The step size follows the
/// 1/lambda_max(A) rule; retraction is elementwise normalization.

#include <random>
#include <vector>

#include "risbc/types.hpp"

namespace risbc::manifold {

/// Passive beamforming vector of q_ris + 1 unit-modulus entries (the RIS
/// phases plus the appended direct-path entry). The exported phase vector is
/// referenced to the last entry.
struct BeamVector {
  CVector v;

  int n_elements() const { return static_cast<int>(v.size()) - 1; }
  /// Rotated so the last entry is exactly 1.
  CVector canonical() const;
  /// theta_q = phase(v_q) - phase(v_last), wrapped to [0, 2*pi).
  RVector theta() const;
};

/// Uniform phases on [0, 2*pi), last entry 1.
BeamVector random_beam(int q_ris, std::mt19937_64& rng);

struct QuadraticObjective {
  CMatrix A;  // Hermitian PSD
  CVector c;
  double constant = 0.0;

  /// Objective of the penalty fit sum_k |a_k - b_k^H v|^2, with b columns.
  static QuadraticObjective penalty_fit(const CMatrix& b_cols, const CVector& a);
  double value(const CVector& v) const;
};

/// 2 A v - 2 c.
CVector euclidean_grad(const QuadraticObjective& obj, const CVector& v);

/// Projection of eg onto the tangent space at v:
/// eg - Re(conj(eg) .* v) .* v. Requires unit-modulus v.
CVector riemannian_grad(const CVector& eg, const CVector& v);

/// 1 / lambda_max(A), the largest eigenvalue found by power iteration
/// (1e-8 relative tolerance). Returns `fallback` for A = 0.
double max_step(const QuadraticObjective& obj, double fallback = 1.0);

/// Elementwise v_q / |v_q|. The two-argument form replaces zero entries with
/// the previous iterate's entry; the one-argument form throws on them.
CVector retract(const CVector& v_tilde);
CVector retract(const CVector& v_tilde, const CVector& prev);

struct DescendOptions {
  double tol = 1e-10;  // objective-change stop, relative to the initial value
  int max_iter = 2000;
  double fallback_step = 1.0;
};

struct DescendTrace {
  std::vector<double> f;              // objective per accepted iterate
  double max_modulus_dev = 0.0;       // max over iterates of ||v_q| - 1|
  double max_tangency_residual = 0.0; // max |Re(rgrad_q conj(v_q))|
  int backtracks = 0;
};

struct DescendResult {
  BeamVector v;
  bool converged = false;
  DescendTrace trace;
};

/// Fixed-step descent with the max_step rule; the step is halved locally if a
/// trial point fails to decrease f, so the trace is non-increasing by
/// construction.
DescendResult descend(const QuadraticObjective& obj, const BeamVector& v0,
                      const DescendOptions& opts = {});

}  // namespace risbc::manifold
