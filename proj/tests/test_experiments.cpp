#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "risbc/experiments.hpp"

using namespace risbc;
namespace xp = risbc::experiments;

namespace {

xp::SweepSpec tiny_spec() {
  xp::SweepSpec spec;
  spec.base = xp::default_paper_scenario();
  spec.base.k_bds = 2;
  spec.base.set_uniform_r_min(0.5);
  spec.base.q_ris = 4;
  spec.base.seed = 17;
  spec.variable = xp::SweepVariable::q_ris;
  spec.values = {4, 12};
  spec.n_trials = 4;
  spec.schemes = {xp::Scheme::proposed, xp::Scheme::random_ris,
                  xp::Scheme::nomabc_no_ris, xp::Scheme::omabc_no_ris};
  return spec;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f);
  return std::string((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("default scenario constants") {
  const auto cfg = xp::default_paper_scenario();
  CHECK(cfg.k_bds == 3);
  CHECK(cfg.sigma2_mw == doctest::Approx(std::pow(10.0, -11.4)).epsilon(1e-12));
  CHECK(cfg.rho == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(cfg.ct_pos.x() == 0.0);
  CHECK(cfg.ris_pos.x() == 65.0);
  CHECK(cfg.br_pos.x() == 70.0);
  CHECK(cfg.alpha_ct_bd == 2.5);
  CHECK(cfg.alpha_bd_ris == 2.1);
  CHECK(cfg.kappa_bd_ris == 3.0);
  CHECK(cfg.kappa_ct_bd == 0.0);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("presets pin the figure scenarios") {
  const auto f3 = xp::preset("fig3");
  CHECK(f3.variable == xp::SweepVariable::q_ris);
  CHECK(f3.values == std::vector<double>{10, 20, 30, 40, 50});
  CHECK(f3.base.p_t_mw == doctest::Approx(dbm_to_mw(35.0)));

  const auto f4 = xp::preset("fig4");
  CHECK(f4.variable == xp::SweepVariable::p_t_dbm);
  CHECK(f4.base.q_ris == 50);

  const auto f5 = xp::preset("fig5");
  CHECK(f5.variable == xp::SweepVariable::r_min);
  CHECK(f5.base.q_ris == 50);
  CHECK(f5.base.p_t_mw == doctest::Approx(dbm_to_mw(40.0)));

  CHECK_THROWS_AS(xp::preset("fig9"), xp::ConfigError);
}

TEST_CASE("single point sweep produces one row per scheme") {
  auto spec = tiny_spec();
  spec.values = {4};
  spec.schemes = {xp::Scheme::nomabc_no_ris};
  spec.n_trials = 1;
  const auto rows = xp::run_sweep(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].value == 4);
  CHECK(rows[0].n_trials == 1);
}

TEST_CASE("csv format and round trip") {
  auto spec = tiny_spec();
  spec.values = {4};
  spec.n_trials = 2;
  const auto rows = xp::run_sweep(spec);
  const std::string path = "test_rows.csv";
  xp::emit_csv(rows, spec.variable, path);

  const std::string text = slurp(path);
  CHECK(text.rfind("variable,value,scheme,mean_sum_rate,stderr,feasible_frac,n_trials\n",
                   0) == 0);
  CHECK(text.find("\r") == std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + static_cast<long>(rows.size()));

  const auto parsed = xp::parse_csv(path);
  CHECK(parsed.variable == spec.variable);
  REQUIRE(parsed.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed.rows[i].scheme == rows[i].scheme);
    CHECK(parsed.rows[i].value == doctest::Approx(rows[i].value));
    CHECK(parsed.rows[i].mean_sum_rate ==
          doctest::Approx(rows[i].mean_sum_rate).epsilon(1e-8));
    CHECK(parsed.rows[i].n_trials == rows[i].n_trials);
  }
  std::remove(path.c_str());
}

TEST_CASE("parallel and serial paths agree bit for bit") {
  const auto spec = tiny_spec();
  const auto serial = xp::run_sweep_detailed(spec, 1);
  const auto parallel = xp::run_sweep_detailed(spec, 4);
  REQUIRE(serial.per_trial.size() == parallel.per_trial.size());
  for (std::size_t i = 0; i < serial.per_trial.size(); ++i) {
    const double a = serial.per_trial[i];
    const double b = parallel.per_trial[i];
    CHECK(((std::isnan(a) && std::isnan(b)) || a == b));
  }
  CHECK(xp::csv_string(serial.rows, spec.variable) ==
        xp::csv_string(parallel.rows, spec.variable));
}

TEST_CASE("identical seeds give identical csv bytes") {
  const auto spec = tiny_spec();
  const auto a = xp::csv_string(xp::run_sweep(spec, 2), spec.variable);
  const auto b = xp::csv_string(xp::run_sweep(spec, 2), spec.variable);
  CHECK(a == b);
}

TEST_CASE("paired means keep the proposed scheme on top") {
  auto spec = tiny_spec();
  spec.n_trials = 3;
  const auto data = xp::run_sweep_detailed(spec, 4);
  for (int vi = 0; vi < data.n_values; ++vi) {
    const auto& prop = data.rows[vi * data.n_schemes + 0];
    const auto& rand_row = data.rows[vi * data.n_schemes + 1];
    const auto& noma = data.rows[vi * data.n_schemes + 2];
    CHECK(prop.mean_sum_rate >= rand_row.mean_sum_rate - 1e-6);
    CHECK(prop.mean_sum_rate >= noma.mean_sum_rate - 1e-6);
  }
}

TEST_CASE("config loading applies overrides and rejects junk") {
  const std::string path = "test_cfg.json";
  {
    std::ofstream f(path);
    f << R"({
      "scenario": {"k": 2, "q_ris": 6, "p_t_dbm": 30.0, "r_min": [0.5, 0.25], "seed": 9},
      "sweep": {"variable": "p_t_dbm", "values": [30, 35], "trials": 2,
                "schemes": ["nomabc_no_ris", "omabc_no_ris"]}
    })";
  }
  const auto spec = xp::load_config(path);
  CHECK(spec.base.k_bds == 2);
  CHECK(spec.base.q_ris == 6);
  CHECK(spec.base.seed == 9);
  CHECK(spec.base.r_min_bits[1] == doctest::Approx(0.25));
  CHECK(spec.variable == xp::SweepVariable::p_t_dbm);
  CHECK(spec.n_trials == 2);
  CHECK(spec.schemes.size() == 2);
  std::remove(path.c_str());

  {
    std::ofstream f(path);
    f << "{ not json";
  }
  CHECK_THROWS_AS(xp::load_config(path), xp::ConfigError);
  std::remove(path.c_str());

  auto bad = tiny_spec();
  bad.values = {12, 4};  // unsorted
  CHECK_THROWS_AS(bad.validate(), xp::ConfigError);
  bad = tiny_spec();
  bad.n_trials = 0;
  CHECK_THROWS_AS(bad.validate(), xp::ConfigError);
}
