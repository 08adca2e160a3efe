#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmac/csv.hpp"
#include "gmac/potential.hpp"
#include "gmac/sim.hpp"
#include "gmac/threading.hpp"
#include "gmac/version.hpp"

namespace {

using gmac::CsvWriter;
using gmac::ExperimentConfig;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::string preset;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "experiment config file");
  cmd->add_option("--out", a.out_dir, "output directory (created if missing)");
  cmd->add_option("--preset", a.preset, "desk or paper-scale")
      ->check(CLI::IsMember({"desk", "paper-scale"}));
  cmd->add_option("--seed", a.seed, "master seed override")
      ->each([&a](const std::string&) { a.seed_set = true; });
  cmd->add_option("--threads", a.threads, "worker threads (0 = hardware)");
}

ExperimentConfig finalize(const CommonArgs& a) {
  ExperimentConfig cfg;
  std::vector<std::string> keys_seen;
  if (!a.config_path.empty()) cfg = gmac::load_config(a.config_path, &keys_seen);
  if (!a.preset.empty()) gmac::apply_preset(cfg, a.preset, keys_seen);
  if (a.seed_set) cfg.master_seed = a.seed;
  cfg.validate();
  std::filesystem::create_directories(a.out_dir);
  return cfg;
}

std::string path_in(const CommonArgs& a, const char* name) {
  return (std::filesystem::path(a.out_dir) / name).string();
}

void write_manifest(const CommonArgs& a, const std::string& command,
                    const ExperimentConfig& cfg,
                    const std::vector<std::string>& outputs, double wall_s) {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = gmac::kVersion;
  j["config"] = gmac::config_to_text(cfg);
  j["outputs"] = outputs;
  j["threads"] = a.threads;
  j["timings"]["wall_s"] = wall_s;
  std::ofstream out(path_in(a, "manifest.json"));
  out << j.dump(2) << "\n";
}

const char* scheme_name(gmac::Scheme s) {
  switch (s) {
    case gmac::Scheme::IidAmp: return "iid_amp";
    case gmac::Scheme::ScAmp: return "sc_amp";
    case gmac::Scheme::Converse: return "converse";
  }
  return "?";
}

std::vector<double> mu_list(const ExperimentConfig& cfg) {
  return cfg.mu_grid.empty() ? std::vector<double>{cfg.mu} : cfg.mu_grid;
}

std::vector<double> ebn0_list(const ExperimentConfig& cfg) {
  return cfg.ebn0_grid.empty() ? std::vector<double>{cfg.ebn0_db}
                               : cfg.ebn0_grid;
}

// Writes rows (trial, t, empirical_mse, se_psi_bar, uer_if_hardened); the
// hardened-UER column runs one entry short of the mse columns (no t = T+1
// hardening beyond the decoder's own final output).
void write_trace_rows(CsvWriter& csv, int trial, const gmac::TrialResult& r) {
  for (std::size_t t = 0; t < r.mse_trace.size(); ++t) {
    csv.write_row({CsvWriter::num(trial), CsvWriter::num(t),
                   CsvWriter::num(r.mse_trace[t]),
                   CsvWriter::num(r.se_psi_bar[t]),
                   t < r.uer_trace.size()
                       ? CsvWriter::num(r.uer_trace[t])
                       : std::string("nan")});
  }
}

int cmd_region(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = finalize(a);
  const gmac::SectionPrior prior = cfg.prior();
  CsvWriter csv(path_in(a, "region.csv"),
                {"scheme", "mu", "min_ebn0_db", "reachable", "target_uer",
                 "payload_bits"});
  for (gmac::Scheme s : {gmac::Scheme::IidAmp, gmac::Scheme::ScAmp,
                         gmac::Scheme::Converse}) {
    const gmac::RegionCurve curve =
        gmac::region_curve(prior, s, mu_list(cfg), cfg.target_uer);
    for (const gmac::RegionPoint& pt : curve.points)
      csv.write_row({scheme_name(s), CsvWriter::num(pt.mu),
                     CsvWriter::num(pt.ebn0_db),
                     CsvWriter::num(static_cast<int>(pt.reachable)),
                     CsvWriter::num(curve.target_uer),
                     CsvWriter::num(curve.payload_bits)});
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(a, "region", cfg, {"region.csv"}, wall);
  std::printf("region: %zu mu points -> %s\n", mu_list(cfg).size(),
              path_in(a, "region.csv").c_str());
  return 0;
}

int cmd_se(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = finalize(a);
  const gmac::SEParams p = cfg.se_params();
  const gmac::SEFixedPoint fp =
      gmac::se_fixed_point(p, 1e-10, cfg.stop.cap, true);
  CsvWriter csv(path_in(a, "se_trace.csv"),
                {"t", "block", "gamma", "phi", "tau", "psi"});
  const std::size_t R = fp.trace.front().gamma.size();
  const std::size_t C = fp.trace.front().tau.size();
  for (const gmac::SEState& s : fp.trace) {
    for (std::size_t b = 0; b < std::max(R, C); ++b)
      csv.write_row(
          {CsvWriter::num(s.t), CsvWriter::num(b),
           b < R ? CsvWriter::num(s.gamma[b]) : std::string("nan"),
           b < R ? CsvWriter::num(s.phi[b]) : std::string("nan"),
           b < C ? CsvWriter::num(s.tau[b]) : std::string("nan"),
           b < C ? CsvWriter::num(s.psi[b]) : std::string("nan")});
  }
  const gmac::SEState& last = fp.trace.back();
  std::printf("se: %d iterations (%s), predicted uer %.3e, mse bound %.3e\n",
              fp.iters, fp.converged ? "converged" : "iteration cap",
              gmac::predicted_uer(p.prior, last),
              gmac::uer_mse_bound(p.prior, last));
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(a, "se", cfg, {"se_trace.csv"}, wall);
  return 0;
}

int cmd_simulate(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = finalize(a);
  const int trials = cfg.resolved_trials();
  std::vector<gmac::TrialResult> results(static_cast<std::size_t>(trials));
  gmac::parallel_for(static_cast<std::size_t>(trials), a.threads,
                     [&](std::size_t i) { results[i] = run_trial(cfg, i); });

  long long errors = 0;
  int diverged = 0;
  for (const gmac::TrialResult& r : results) {
    errors += r.diverged ? cfg.users : std::llround(r.uer * cfg.users);
    if (r.diverged) ++diverged;
  }
  const double sections =
      static_cast<double>(cfg.users) * static_cast<double>(trials);
  const double uer_mean = static_cast<double>(errors) / sections;
  const double uer_se =
      std::sqrt(std::max(uer_mean * (1.0 - uer_mean), 0.0) / sections);

  CsvWriter point(path_in(a, "point.csv"),
                  {"mu", "ebn0_db", "omega", "lambda", "uer_mean", "uer_se",
                   "trials", "diverged"});
  point.write_row({CsvWriter::num(cfg.resolved_mu()),
                   CsvWriter::num(cfg.ebn0_db), CsvWriter::num(cfg.omega),
                   CsvWriter::num(cfg.lambda), CsvWriter::num(uer_mean),
                   CsvWriter::num(uer_se), CsvWriter::num(trials),
                   CsvWriter::num(diverged)});

  std::vector<std::string> outputs{"point.csv"};
  if (cfg.trace != "none") {
    CsvWriter trace(path_in(a, "trial_trace.csv"),
                    {"trial", "t", "empirical_mse", "se_psi_bar",
                     "uer_if_hardened"});
    if (cfg.trace == "first") {
      write_trace_rows(trace, 0, results.front());
    } else {
      for (int i = 0; i < trials; ++i)
        write_trace_rows(trace, i, results[static_cast<std::size_t>(i)]);
    }
    outputs.push_back("trial_trace.csv");
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(a, "simulate", cfg, outputs, wall);
  std::printf("simulate: uer %.4e (se %.1e) over %d trials, %d diverged\n",
              uer_mean, uer_se, trials, diverged);
  return 0;
}

int cmd_sweep(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = finalize(a);
  std::vector<std::string> outputs;
  if (cfg.sweep_mode == "bisect") {
    CsvWriter csv(path_in(a, "bisect.csv"),
                  {"mu", "empirical_min_ebn0_db", "reachable", "nonmonotone",
                   "analytic_min_ebn0_db", "analytic_reachable",
                   "target_uer"});
    const gmac::Scheme scheme =
        cfg.coupled() ? gmac::Scheme::ScAmp : gmac::Scheme::IidAmp;
    for (double mu : mu_list(cfg)) {
      const gmac::EmpiricalMinEbn0 emp = gmac::empirical_min_ebn0(
          cfg, mu, cfg.target_uer, cfg.tol_db, a.threads);
      const gmac::MinEbn0 ana =
          gmac::min_ebn0(cfg.prior(), scheme, mu, cfg.target_uer, 0.01);
      csv.write_row({CsvWriter::num(mu), CsvWriter::num(emp.ebn0_db),
                     CsvWriter::num(static_cast<int>(emp.reachable)),
                     CsvWriter::num(static_cast<int>(emp.nonmonotone)),
                     CsvWriter::num(ana.ebn0_db),
                     CsvWriter::num(static_cast<int>(ana.reachable)),
                     CsvWriter::num(cfg.target_uer)});
      std::printf("bisect mu %.3f: empirical %.2f dB (analytic %.2f dB)\n", mu,
                  emp.ebn0_db, ana.ebn0_db);
    }
    outputs.push_back("bisect.csv");
  } else {
    const std::vector<gmac::SweepRow> rows = gmac::run_sweep(cfg, a.threads);
    CsvWriter csv(path_in(a, "sweep.csv"),
                  {"mu", "ebn0_db", "omega", "uer_mean", "uer_se", "trials",
                   "diverged"});
    for (const gmac::SweepRow& r : rows)
      csv.write_row({CsvWriter::num(r.mu), CsvWriter::num(r.ebn0_db),
                     CsvWriter::num(r.omega), CsvWriter::num(r.uer_mean),
                     CsvWriter::num(r.uer_se), CsvWriter::num(r.trials),
                     CsvWriter::num(r.diverged)});
    outputs.push_back("sweep.csv");
    if (cfg.sweep_mode == "omega_opt") {
      CsvWriter best(path_in(a, "best_omega.csv"),
                     {"mu", "omega", "uer_mean"});
      for (const gmac::OmegaChoice& c : gmac::pick_best_omega(rows))
        best.write_row({CsvWriter::num(c.mu), CsvWriter::num(c.omega),
                        CsvWriter::num(c.uer_mean)});
      outputs.push_back("best_omega.csv");
    }
    std::printf("sweep: %zu rows -> %s\n", rows.size(),
                path_in(a, "sweep.csv").c_str());
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(a, "sweep", cfg, outputs, wall);
  return 0;
}

int cmd_thresholds(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = finalize(a);
  CsvWriter csv(
      path_in(a, "thresholds.csv"),
      {"mu", "ebn0_db", "payload_bits", "spectral_eff", "s_amp", "s_opt",
       "vartheta", "delta", "omega_star", "rho_star", "wave_bound",
       "recommendation", "rec_omega", "rec_lambda", "phase", "uer_bound"});
  const double payload = cfg.prior().payload_bits();
  for (double mu : mu_list(cfg)) {
    for (double db : ebn0_list(cfg)) {
      const double ebn0 = std::pow(10.0, db / 10.0);
      const gmac::CoupledThresholds ct = gmac::coupled_design_thresholds(
          mu, cfg.B, ebn0, cfg.omega, cfg.lambda);
      const gmac::DesignRecommendation rec =
          gmac::recommend_design(mu, cfg.B, ebn0);
      const gmac::PhaseResult ph =
          gmac::payload_phase(mu, cfg.B, ebn0, cfg.th_delta,
                              cfg.th_delta_tilde, cfg.th_k, cfg.th_k1,
                              cfg.th_delta2);
      const char* rec_name =
          rec.outcome == gmac::DesignOutcome::IidSufficient ? "iid"
          : rec.outcome == gmac::DesignOutcome::Coupled     ? "coupled"
                                                            : "infeasible";
      const char* phase_name =
          ph.phase == gmac::PayloadPhase::Below   ? "below"
          : ph.phase == gmac::PayloadPhase::Above ? "above"
                                                  : "indeterminate";
      csv.write_row(
          {CsvWriter::num(mu), CsvWriter::num(db), CsvWriter::num(payload),
           CsvWriter::num(mu * payload), CsvWriter::num(ct.s_amp),
           CsvWriter::num(ct.s_opt), CsvWriter::num(ct.vartheta),
           CsvWriter::num(ct.delta), CsvWriter::num(ct.omega_star),
           CsvWriter::num(ct.rho_star),
           ct.delta_positive
               ? CsvWriter::num(
                     gmac::wave_iteration_bound(ct, cfg.omega, cfg.lambda))
               : std::string("nan"),
           rec_name, CsvWriter::num(rec.omega), CsvWriter::num(rec.lambda),
           phase_name, CsvWriter::num(ph.uer_bound)});
    }
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(a, "thresholds", cfg, {"thresholds.csv"}, wall);
  std::printf("thresholds: %zu rows -> %s\n",
              mu_list(cfg).size() * ebn0_list(cfg).size(),
              path_in(a, "thresholds.csv").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random linear coding with AMP decoding on the Gaussian "
               "multiple-access channel"};
  app.set_version_flag("--version", gmac::kVersion);
  app.require_subcommand(1);

  CommonArgs args[5];
  CLI::App* region =
      app.add_subcommand("region", "analytic achievability and converse curves");
  add_common(region, args[0]);
  CLI::App* se = app.add_subcommand("se", "deterministic state-evolution trace");
  add_common(se, args[1]);
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo at one point");
  add_common(simulate, args[2]);
  CLI::App* sweep =
      app.add_subcommand("sweep", "grid / omega-optimization / bisection sweeps");
  add_common(sweep, args[3]);
  CLI::App* thresholds = app.add_subcommand(
      "thresholds", "coupled-design and large-payload threshold quantities");
  add_common(thresholds, args[4]);

  CLI11_PARSE(app, argc, argv);
  try {
    if (region->parsed()) return cmd_region(args[0]);
    if (se->parsed()) return cmd_se(args[1]);
    if (simulate->parsed()) return cmd_simulate(args[2]);
    if (sweep->parsed()) return cmd_sweep(args[3]);
    if (thresholds->parsed()) return cmd_thresholds(args[4]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
