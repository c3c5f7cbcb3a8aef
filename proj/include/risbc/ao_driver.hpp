#pragma once

/// Alternating optimization over reflection coefficients, auxiliary variables
/// and RIS phases, with decoding-order enumeration. Each outer iteration
/// updates w in closed form, runs the SCA solver for the auxiliary variables,
/// descends the beam vector on the circle manifold, and accepts the new
/// iterate only if the sum rate did not drop (otherwise the penalty weight is
/// escalated and the step retried), so the reported objective trace is
/// non-decreasing by construction.

#include <random>
#include <string>
#include <vector>

#include "risbc/channel.hpp"
#include "risbc/manifold.hpp"
#include "risbc/power_alloc.hpp"
#include "risbc/sca.hpp"
#include "risbc/types.hpp"

namespace risbc::ao {

/// position[k] = slot at which BD k is decoded (0-based). Earlier slots see
/// interference from every later slot.
struct DecodingOrder {
  std::vector<int> position;

  static DecodingOrder identity(int k);
  static DecodingOrder from_sequence(const std::vector<int>& seq);
  /// seq[slot] = BD index decoded at that slot.
  std::vector<int> sequence() const;
  int size() const { return static_cast<int>(position.size()); }
};

/// All K! orders, lexicographic in decode sequence.
std::vector<DecodingOrder> all_orders(int k);

enum class Status { converged, infeasible, iteration_capped };

struct SolverConfig {
  double eps_ao = 1e-4;   // absolute sum-rate change, bits/s/Hz
  int t4_max = 30;        // outer iterations
  int order_enum_cap = 5; // enumerate K! orders up to this K, else sort by gain
  sca::PenaltyConfig penalty;
  sca::ScaOptions sca;
  manifold::DescendOptions descent;
};

struct SolveResult {
  Status status = Status::infeasible;
  RVector w;                   // by BD index
  manifold::BeamVector v;
  DecodingOrder order;
  RVector per_bd_rates;        // by BD index, bits/s/Hz
  double sum_rate_bits = 0.0;
  std::vector<double> ao_trace;   // sum rate after each accepted outer iteration
  double penalty_residual = 0.0;  // max_k |a_k - b_k^H v|, relative, at exit
  int outer_iterations = 0;
  int orders_evaluated = 0;

  bool feasible() const { return status != Status::infeasible; }
};

/// Solves with the BD indexing permuted by `order`; v0 is the starting beam.
SolveResult solve_fixed_order(const channel::ChannelSet& ch,
                              const channel::ScenarioConfig& cfg,
                              const DecodingOrder& order,
                              const manifold::BeamVector& v0,
                              const SolverConfig& scfg = {});

/// Draws one random starting beam from `rng`, runs solve_fixed_order for
/// every candidate decoding order and returns the best feasible result.
SolveResult solve(const channel::ChannelSet& ch, const channel::ScenarioConfig& cfg,
                  std::mt19937_64& rng, const SolverConfig& scfg = {});

struct RateReport {
  RVector per_bd_rates;
  double sum_rate_bits = 0.0;
  std::vector<std::string> violations;  // empty on a clean result
};

/// Recomputes the gains from scratch through the phase-shift-matrix form and
/// re-audits every constraint of the solved problem.
RateReport rate_report(const SolveResult& result, const channel::ChannelSet& ch,
                       const channel::ScenarioConfig& cfg);

}  // namespace risbc::ao
