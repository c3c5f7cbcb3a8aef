#include "risbc/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace risbc::experiments {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::q_ris: return "q_ris";
    case SweepVariable::p_t_dbm: return "p_t_dbm";
    case SweepVariable::r_min: return "r_min";
  }
  return "?";
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::random_ris: return "random_ris";
    case Scheme::nomabc_no_ris: return "nomabc_no_ris";
    case Scheme::omabc_no_ris: return "omabc_no_ris";
  }
  return "?";
}

SweepVariable sweep_variable_from(const std::string& name) {
  if (name == "q_ris") return SweepVariable::q_ris;
  if (name == "p_t_dbm") return SweepVariable::p_t_dbm;
  if (name == "r_min") return SweepVariable::r_min;
  throw ConfigError("unknown sweep variable: " + name);
}

Scheme scheme_from(const std::string& name) {
  if (name == "proposed") return Scheme::proposed;
  if (name == "random_ris") return Scheme::random_ris;
  if (name == "nomabc_no_ris") return Scheme::nomabc_no_ris;
  if (name == "omabc_no_ris") return Scheme::omabc_no_ris;
  throw ConfigError("unknown scheme: " + name);
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep values must be non-empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw ConfigError("sweep values must be increasing");
  if (n_trials < 1) throw ConfigError("trials must be >= 1");
  if (schemes.empty()) throw ConfigError("at least one scheme is required");
  if (random_ris_draws < 1) throw ConfigError("random_ris draws must be >= 1");
  if (variable == SweepVariable::q_ris)
    for (double v : values)
      if (v < 1.0 || v != std::floor(v)) throw ConfigError("q_ris values must be integers >= 1");
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

namespace {

channel::ScenarioConfig apply_value(const channel::ScenarioConfig& base, SweepVariable var,
                                    double value) {
  channel::ScenarioConfig cfg = base;
  switch (var) {
    case SweepVariable::q_ris: cfg.q_ris = static_cast<int>(value); break;
    case SweepVariable::p_t_dbm: cfg.p_t_mw = dbm_to_mw(value); break;
    case SweepVariable::r_min: cfg.set_uniform_r_min(value); break;
  }
  return cfg;
}

double run_scheme(Scheme scheme, const channel::ChannelSet& ch,
                  const channel::ScenarioConfig& cfg, std::mt19937_64 rng,
                  const SweepSpec& spec) {
  ao::SolveResult r;
  switch (scheme) {
    case Scheme::proposed: r = ao::solve(ch, cfg, rng, spec.solver); break;
    case Scheme::random_ris:
      r = baselines::random_ris(ch, cfg, rng, spec.random_ris_draws);
      break;
    case Scheme::nomabc_no_ris: r = baselines::nomabc_no_ris(ch, cfg); break;
    case Scheme::omabc_no_ris: r = baselines::omabc_no_ris(ch, cfg); break;
  }
  return r.feasible() ? r.sum_rate_bits : kNaN;
}

void run_task(int vi, int t, const SweepSpec& spec, SweepData& data) {
  const channel::ScenarioConfig cfg =
      apply_value(spec.base, spec.variable, spec.values[vi]);
  auto rng = make_trial_rng(cfg.seed, static_cast<std::uint64_t>(t));
  const channel::ChannelSet ch = channel::generate_channels(cfg, rng);
  // Every scheme starts from an identical copy of the post-generation stream,
  // so the proposed solver's initial beam equals the random-RIS first draw.
  for (int si = 0; si < data.n_schemes; ++si) {
    const double sum = run_scheme(spec.schemes[si], ch, cfg, rng, spec);
    data.per_trial[(static_cast<std::size_t>(vi) * data.n_schemes + si) * data.n_trials +
                   t] = sum;
  }
}

}  // namespace

SweepData run_sweep_detailed(const SweepSpec& spec, int n_threads) {
  spec.validate();
  SweepData data;
  data.n_values = static_cast<int>(spec.values.size());
  data.n_schemes = static_cast<int>(spec.schemes.size());
  data.n_trials = spec.n_trials;
  data.per_trial.assign(
      static_cast<std::size_t>(data.n_values) * data.n_schemes * data.n_trials, kNaN);

  const std::int64_t n_tasks = static_cast<std::int64_t>(data.n_values) * data.n_trials;
  if (n_threads <= 1) {
    for (std::int64_t idx = 0; idx < n_tasks; ++idx)
      run_task(static_cast<int>(idx / data.n_trials),
               static_cast<int>(idx % data.n_trials), spec, data);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
    for (std::int64_t idx = 0; idx < n_tasks; ++idx)
      run_task(static_cast<int>(idx / data.n_trials),
               static_cast<int>(idx % data.n_trials), spec, data);
#else
    for (std::int64_t idx = 0; idx < n_tasks; ++idx)
      run_task(static_cast<int>(idx / data.n_trials),
               static_cast<int>(idx % data.n_trials), spec, data);
#endif
  }

  // Single-threaded reduction in trial order, independent of scheduling.
  for (int vi = 0; vi < data.n_values; ++vi) {
    for (int si = 0; si < data.n_schemes; ++si) {
      SweepRow row;
      row.value = spec.values[vi];
      row.scheme = spec.schemes[si];
      row.n_trials = data.n_trials;
      int feasible = 0;
      double sum = 0.0;
      for (int t = 0; t < data.n_trials; ++t) {
        const double x = data.trial(vi, si, t);
        if (std::isnan(x)) continue;
        ++feasible;
        sum += x;
      }
      row.feasible_frac = static_cast<double>(feasible) / data.n_trials;
      if (feasible > 0) {
        row.mean_sum_rate = sum / feasible;
        double ss = 0.0;
        for (int t = 0; t < data.n_trials; ++t) {
          const double x = data.trial(vi, si, t);
          if (std::isnan(x)) continue;
          ss += (x - row.mean_sum_rate) * (x - row.mean_sum_rate);
        }
        row.std_error =
            feasible > 1 ? std::sqrt(ss / (feasible - 1)) / std::sqrt(feasible) : 0.0;
      } else {
        row.mean_sum_rate = kNaN;
        row.std_error = kNaN;
      }
      data.rows.push_back(row);
    }
  }
  return data;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int n_threads) {
  return run_sweep_detailed(spec, n_threads).rows;
}

std::string csv_string(const std::vector<SweepRow>& rows, const SweepVariable& variable) {
  std::string out = "variable,value,scheme,mean_sum_rate,stderr,feasible_frac,n_trials\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.9g,%s,%.9g,%.9g,%.9g,%d\n", to_string(variable),
                  r.value, to_string(r.scheme), r.mean_sum_rate, r.std_error,
                  r.feasible_frac, r.n_trials);
    out += buf;
  }
  return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const SweepVariable& variable,
              const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
  f << csv_string(rows, variable);
  if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

ParsedCsv parse_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("parse_csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("parse_csv: empty file");
  ParsedCsv out;
  bool have_var = false;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7) throw std::runtime_error("parse_csv: bad row: " + line);
    if (!have_var) {
      out.variable = sweep_variable_from(fields[0]);
      have_var = true;
    }
    SweepRow r;
    r.value = std::stod(fields[1]);
    r.scheme = scheme_from(fields[2]);
    r.mean_sum_rate = std::stod(fields[3]);
    r.std_error = std::stod(fields[4]);
    r.feasible_frac = std::stod(fields[5]);
    r.n_trials = std::stoi(fields[6]);
    out.rows.push_back(r);
  }
  return out;
}

channel::ScenarioConfig default_paper_scenario() {
  channel::ScenarioConfig cfg;  // field defaults carry the scenario
  return cfg;
}

SweepSpec preset(const std::string& name) {
  SweepSpec spec;
  spec.base = default_paper_scenario();
  spec.schemes = {Scheme::proposed, Scheme::random_ris, Scheme::nomabc_no_ris,
                  Scheme::omabc_no_ris};
  spec.n_trials = 100;
  if (name == "fig3") {
    spec.variable = SweepVariable::q_ris;
    spec.values = {10, 20, 30, 40, 50};
    spec.base.p_t_mw = dbm_to_mw(35.0);
  } else if (name == "fig4") {
    spec.variable = SweepVariable::p_t_dbm;
    spec.values = {30, 35, 40, 45};
    spec.base.q_ris = 50;
  } else if (name == "fig5") {
    spec.variable = SweepVariable::r_min;
    spec.values = {0.5, 1.0, 1.5, 2.0};
    spec.base.q_ris = 50;
    spec.base.p_t_mw = dbm_to_mw(40.0);
  } else {
    throw ConfigError("unknown preset: " + name + " (expected fig3, fig4 or fig5)");
  }
  return spec;
}

namespace {

using nlohmann::json;

void parse_scenario(const json& s, channel::ScenarioConfig& cfg) {
  if (s.contains("k")) cfg.k_bds = s.at("k").get<int>();
  if (s.contains("q_ris")) cfg.q_ris = s.at("q_ris").get<int>();
  if (s.contains("p_t_dbm")) cfg.p_t_mw = dbm_to_mw(s.at("p_t_dbm").get<double>());
  if (s.contains("sigma2_dbm")) cfg.sigma2_mw = dbm_to_mw(s.at("sigma2_dbm").get<double>());
  if (s.contains("rho_db")) cfg.rho = db_to_linear(s.at("rho_db").get<double>());
  if (s.contains("seed")) cfg.seed = s.at("seed").get<std::uint64_t>();
  if (s.contains("r_min")) {
    const auto& r = s.at("r_min");
    if (r.is_array()) {
      cfg.r_min_bits.resize(static_cast<int>(r.size()));
      for (int i = 0; i < cfg.r_min_bits.size(); ++i)
        cfg.r_min_bits[i] = r.at(i).get<double>();
    } else {
      cfg.set_uniform_r_min(r.get<double>());
    }
  } else if (cfg.r_min_bits.size() != cfg.k_bds) {
    cfg.set_uniform_r_min(1.0);
  }
  if (s.contains("positions")) {
    const auto& p = s.at("positions");
    auto vec2 = [](const json& j) {
      return Eigen::Vector2d(j.at(0).get<double>(), j.at(1).get<double>());
    };
    if (p.contains("ct")) cfg.ct_pos = vec2(p.at("ct"));
    if (p.contains("ris")) cfg.ris_pos = vec2(p.at("ris"));
    if (p.contains("br")) cfg.br_pos = vec2(p.at("br"));
    if (p.contains("bd_x")) {
      cfg.bd_x_min = p.at("bd_x").at(0).get<double>();
      cfg.bd_x_max = p.at("bd_x").at(1).get<double>();
    }
    if (p.contains("bd_y")) cfg.bd_y = p.at("bd_y").get<double>();
  }
  if (s.contains("alpha")) {
    const auto& a = s.at("alpha");
    if (a.contains("ct_bd")) cfg.alpha_ct_bd = a.at("ct_bd").get<double>();
    if (a.contains("bd_br")) cfg.alpha_bd_br = a.at("bd_br").get<double>();
    if (a.contains("bd_ris")) cfg.alpha_bd_ris = a.at("bd_ris").get<double>();
    if (a.contains("ris_br")) cfg.alpha_ris_br = a.at("ris_br").get<double>();
  }
  if (s.contains("kappa")) {
    const auto& k = s.at("kappa");
    if (k.contains("ct_bd")) cfg.kappa_ct_bd = k.at("ct_bd").get<double>();
    if (k.contains("bd_br")) cfg.kappa_bd_br = k.at("bd_br").get<double>();
    if (k.contains("bd_ris")) cfg.kappa_bd_ris = k.at("bd_ris").get<double>();
    if (k.contains("ris_br")) cfg.kappa_ris_br = k.at("ris_br").get<double>();
  }
}

}  // namespace

SweepSpec load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error in ") + path + ": " + e.what());
  }

  SweepSpec spec;
  spec.base = default_paper_scenario();
  try {
    if (doc.contains("scenario")) parse_scenario(doc.at("scenario"), spec.base);
    if (!doc.contains("sweep")) throw ConfigError("config needs a \"sweep\" table");
    const auto& sw = doc.at("sweep");
    spec.variable = sweep_variable_from(sw.at("variable").get<std::string>());
    spec.values = sw.at("values").get<std::vector<double>>();
    if (sw.contains("trials")) spec.n_trials = sw.at("trials").get<int>();
    if (sw.contains("random_ris_draws"))
      spec.random_ris_draws = sw.at("random_ris_draws").get<int>();
    if (sw.contains("schemes")) {
      for (const auto& s : sw.at("schemes"))
        spec.schemes.push_back(scheme_from(s.get<std::string>()));
    } else {
      spec.schemes = {Scheme::proposed, Scheme::random_ris, Scheme::nomabc_no_ris,
                      Scheme::omabc_no_ris};
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error in ") + path + ": " + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace risbc::experiments
