#pragma once

/// Monte-Carlo sweep harness. One channel realization per (value, trial) is
/// shared across all schemes, so comparisons are paired; every trial owns its
/// RNG stream, so results are identical for any worker count.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "risbc/ao_driver.hpp"
#include "risbc/baselines.hpp"
#include "risbc/channel.hpp"

namespace risbc::experiments {

enum class SweepVariable { q_ris, p_t_dbm, r_min };
enum class Scheme { proposed, random_ris, nomabc_no_ris, omabc_no_ris };

const char* to_string(SweepVariable v);
const char* to_string(Scheme s);
SweepVariable sweep_variable_from(const std::string& name);
Scheme scheme_from(const std::string& name);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::q_ris;
  std::vector<double> values;  // non-empty, strictly increasing
  int n_trials = 100;
  std::vector<Scheme> schemes;
  channel::ScenarioConfig base;
  ao::SolverConfig solver;
  int random_ris_draws = 1;

  void validate() const;  // throws ConfigError
};

struct SweepRow {
  double value = 0.0;
  Scheme scheme = Scheme::proposed;
  double mean_sum_rate = 0.0;  // over feasible trials
  double std_error = 0.0;
  double feasible_frac = 0.0;
  int n_trials = 0;
};

struct SweepData {
  std::vector<SweepRow> rows;  // value-major, then scheme order of the spec
  // per_trial[(vi * n_schemes + si) * n_trials + t]; NaN marks infeasible.
  std::vector<double> per_trial;
  int n_values = 0, n_schemes = 0, n_trials = 0;

  double trial(int vi, int si, int t) const {
    return per_trial[(static_cast<std::size_t>(vi) * n_schemes + si) * n_trials + t];
  }
};

/// n_threads <= 1 runs the serial reference loop; larger values run the same
/// trials under OpenMP. Outputs are identical either way.
SweepData run_sweep_detailed(const SweepSpec& spec, int n_threads = 1);
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int n_threads = 1);

/// Header `variable,value,scheme,mean_sum_rate,stderr,feasible_frac,n_trials`,
/// LF line endings, floats with 9 significant digits.
void emit_csv(const std::vector<SweepRow>& rows, const SweepVariable& variable,
              const std::string& path);
std::string csv_string(const std::vector<SweepRow>& rows, const SweepVariable& variable);

struct ParsedCsv {
  SweepVariable variable;
  std::vector<SweepRow> rows;
};
ParsedCsv parse_csv(const std::string& path);

/// The baseline scenario used throughout: CT (0,10), RIS (65,10), BR (70,10),
/// BDs uniform on x in [40,50] at y = 0, exponents (2.5, 2.5, 2.1, 2.1),
/// -30 dB reference loss, Rician factor 3 on the RIS links, K = 3 BDs,
/// -114 dBm noise.
channel::ScenarioConfig default_paper_scenario();

/// fig3: sum rate vs q_ris in {10..50} at 35 dBm; fig4: vs transmit power in
/// {30..45} dBm at q_ris 50; fig5: vs the QoS floor in {0.5..2} at q_ris 50,
/// 40 dBm. Throws ConfigError for unknown names.
SweepSpec preset(const std::string& name);

/// JSON config: {"scenario": {...}, "sweep": {...}}. Throws ConfigError with
/// parser diagnostics.
SweepSpec load_config(const std::string& path);

}  // namespace risbc::experiments
