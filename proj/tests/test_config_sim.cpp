#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmac/config.hpp"
#include "gmac/potential.hpp"
#include "gmac/sim.hpp"

using namespace gmac;

namespace {

ExperimentConfig small_point() {
  return parse_config_text(
      "[model]\n"
      "B = 4\n"
      "ebn0_db = 9\n"
      "mu = 0.5\n"
      "[decode]\n"
      "stop = fixed:8\n"
      "[sim]\n"
      "users = 256\n"
      "trials = 4\n");
}

}  // namespace

TEST_CASE("config parsing: values land, round trip is a fixed point") {
  const auto cfg = small_point();
  CHECK(cfg.B == 4);
  CHECK(cfg.ebn0_db == 9.0);
  CHECK(cfg.mu == 0.5);
  CHECK(cfg.users == 256);
  CHECK(cfg.trials == 4);
  CHECK(cfg.stop.kind == StopRule::Kind::FixedT);
  CHECK(cfg.stop.fixed_t == 8);

  const std::string text = config_to_text(cfg);
  const auto back = parse_config_text(text);
  CHECK(config_to_text(back) == text);
}

TEST_CASE("config parsing: stop-rule grammar variants") {
  auto cfg = parse_config_text("[decode]\nstop = se_converged:1e-4:50\n");
  CHECK(cfg.stop.kind == StopRule::Kind::SeConverged);
  CHECK(cfg.stop.delta == 1e-4);
  CHECK(cfg.stop.cap == 50);
  cfg = parse_config_text("[decode]\nstop = se_converged:0.01\n");
  CHECK(cfg.stop.cap == 400);
  cfg = parse_config_text("[decode]\nstop = se_bound:77\n");
  CHECK(cfg.stop.kind == StopRule::Kind::SeBound);
  CHECK(cfg.stop.cap == 77);
  CHECK_THROWS_AS(parse_config_text("[decode]\nstop = sometimes\n"),
                  std::invalid_argument);
}

TEST_CASE("config parsing: unknown keys and sections are named in the error") {
  CHECK_THROWS_WITH_AS(parse_config_text("[model]\nBB = 4\n"),
                       doctest::Contains("BB"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[modle]\nB = 4\n"),
                       doctest::Contains("modle"), std::invalid_argument);
}

TEST_CASE("validate reports the offending constraint") {
  auto cfg = small_point();
  cfg.B = 3;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("model.B"),
                       std::invalid_argument);
  cfg = small_point();
  cfg.omega = 4;
  cfg.lambda = 2;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("coupling.omega"),
                       std::invalid_argument);
  cfg = small_point();
  cfg.trace = "sometimes";
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sim.trace"),
                       std::invalid_argument);
  cfg = small_point();
  cfg.omega = 2;
  cfg.lambda = 5;
  cfg.users = 256;  // not a multiple of lambda
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("lambda"),
                       std::invalid_argument);
  cfg = small_point();
  cfg.n = 100;
  cfg.omega = 3;
  cfg.lambda = 7;  // R = 9 does not divide 100
  cfg.users = 252;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sim.n"),
                       std::invalid_argument);
}

TEST_CASE("derived sizes: n rounding, mu re-derivation, default trials") {
  auto cfg = small_point();
  cfg.omega = 3;
  cfg.lambda = 7;
  cfg.users = 504;
  cfg.mu = 0.73;
  const int R = cfg.lambda + cfg.omega - 1;
  const auto n = cfg.resolved_n();
  CHECK(n % static_cast<std::size_t>(R) == 0);
  CHECK(std::abs(static_cast<double>(n) - 504.0 / 0.73) <=
        static_cast<double>(R) / 2.0 + 1.0);
  CHECK(cfg.resolved_mu() == doctest::Approx(504.0 / double(n)));

  cfg.n = 720;  // explicit n wins
  CHECK(cfg.resolved_n() == 720);

  auto d = small_point();
  d.trials = 0;
  d.users = 500;
  CHECK(d.resolved_trials() == 200);  // ceil(1e5 / users)
  d.trials = 7;
  CHECK(d.resolved_trials() == 7);
}

TEST_CASE("presets scale coupled runs but never override explicit keys") {
  std::vector<std::string> seen;
  auto cfg = parse_config_text(
      "[coupling]\nomega = 4\nlambda = 10\n[sim]\nusers = 120\n", &seen);
  apply_preset(cfg, "desk", seen);
  CHECK(cfg.users == 120);   // explicitly set, preserved
  CHECK(cfg.lambda == 10);   // explicitly set, preserved

  seen.clear();
  cfg = parse_config_text("[coupling]\nomega = 4\nlambda = 10\n", &seen);
  apply_preset(cfg, "desk", seen);
  CHECK(cfg.users == 1000);
  CHECK(cfg.lambda == 10);  // explicitly set, preserved

  seen.clear();
  cfg = parse_config_text("[coupling]\nomega = 4\n", &seen);
  apply_preset(cfg, "paper-scale", seen);
  CHECK(cfg.users == 5000);
  CHECK(cfg.lambda == 50);
  CHECK(cfg.rho == 0.0);

  CHECK_THROWS_AS(apply_preset(cfg, "huge", seen), std::invalid_argument);
}

TEST_CASE("trial results are reproducible and order-independent") {
  const auto cfg = small_point();
  const auto a = run_trial(cfg, 3);
  const auto b = run_trial(cfg, 3);
  CHECK(a.xhat == b.xhat);
  CHECK(a.uer == b.uer);
  CHECK(a.mse_trace == b.mse_trace);

  const auto serial = run_point(cfg, 1);
  const auto parallel = run_point(cfg, 4);
  CHECK(serial.uer_mean == parallel.uer_mean);
  CHECK(serial.uer_se == parallel.uer_se);
  CHECK(serial.trials == parallel.trials);
  CHECK(serial.diverged == parallel.diverged);
  CHECK(serial.trials == 4);
  CHECK(serial.uer_mean >= 0.0);
  CHECK(serial.uer_se >= 0.0);
}

TEST_CASE("sweep row counts: grid mode and omega scan mode") {
  auto cfg = small_point();
  cfg.users = 64;
  cfg.trials = 2;
  cfg.stop = StopRule::fixed(4);
  cfg.sweep_mode = "grid";
  cfg.mu_grid = {0.4, 0.5};
  cfg.ebn0_grid = {8.0, 9.0, 10.0};
  const auto rows = run_sweep(cfg, 1);
  CHECK(rows.size() == 6);
  for (const auto& r : rows) CHECK(r.omega == cfg.omega);

  auto oc = small_point();
  oc.users = 60;
  oc.trials = 2;
  oc.stop = StopRule::fixed(4);
  oc.sweep_mode = "omega_opt";
  oc.omega = 2;
  oc.lambda = 5;
  oc.omega_min = 1;
  oc.omega_max = 3;
  oc.mu_grid = {0.5};
  const auto orows = run_sweep(oc, 1);
  CHECK(orows.size() == 3);
}

TEST_CASE("omega selection takes the smallest error, ties to narrower bands") {
  std::vector<SweepRow> rows;
  auto add = [&](double mu, int omega, double uer) {
    SweepRow r;
    r.mu = mu;
    r.omega = omega;
    r.uer_mean = uer;
    rows.push_back(r);
  };
  add(0.5, 1, 0.5);
  add(0.5, 2, 0.1);
  add(0.5, 3, 0.1);
  add(0.9, 1, 0.2);
  add(0.9, 2, 0.3);
  const auto best = pick_best_omega(rows);
  REQUIRE(best.size() == 2);
  CHECK(best[0].mu == 0.5);
  CHECK(best[0].omega == 2);  // tie with omega=3 resolves down
  CHECK(best[1].omega == 1);
}

TEST_CASE("analytic region curves: grid size in, point count out") {
  const auto prior = SectionPrior::flat(4, 1.0);
  // An empty grid cannot come from a config (it resolves to {mu}), so the
  // library treats it as a caller error.
  CHECK_THROWS_AS(region_curve(prior, Scheme::IidAmp, {}, 1e-3),
                  std::invalid_argument);
  const auto two = region_curve(prior, Scheme::Converse, {0.3, 0.5}, 1e-3);
  REQUIRE(two.points.size() == 2);
  CHECK(two.points[0].mu == 0.3);
  CHECK(two.points[1].mu == 0.5);
  CHECK(two.points[0].reachable);
  CHECK(two.points[0].ebn0_db <= two.points[1].ebn0_db);
}
