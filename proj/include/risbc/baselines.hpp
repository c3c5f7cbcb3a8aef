#pragma once

/// Comparison schemes: random RIS phases with closed-form power allocation,
/// the NOMA backscatter system without a RIS, and equal-time-share OMA
/// without a RIS.

#include <random>

#include "risbc/ao_driver.hpp"
#include "risbc/channel.hpp"

namespace risbc::baselines {

enum class Kind { random_ris, nomabc_no_ris, omabc_no_ris };

/// Draws n_draws beam vectors with uniform phases, applies the closed-form
/// reflection coefficients under the gain-sorted decoding order for each, and
/// returns the best feasible draw.
ao::SolveResult random_ris(const channel::ChannelSet& ch,
                           const channel::ScenarioConfig& cfg, std::mt19937_64& rng,
                           int n_draws = 1);

/// RIS terms removed (H_k = |h~_k h_k|^2), closed-form coefficients, best
/// decoding order by enumeration.
ao::SolveResult nomabc_no_ris(const channel::ChannelSet& ch,
                              const channel::ScenarioConfig& cfg);

/// Equal-time TDMA without a RIS: each BD alone for a 1/K share with full
/// reflection; QoS checked against the shared-time rates.
ao::SolveResult omabc_no_ris(const channel::ChannelSet& ch,
                             const channel::ScenarioConfig& cfg);

}  // namespace risbc::baselines
