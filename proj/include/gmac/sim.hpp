#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmac/amp.hpp"
#include "gmac/config.hpp"

namespace gmac {

// One end-to-end decode: derive (design, message, noise) streams from
// (master_seed, trial_index), sample the operator and channel, run AMP,
// harden.  Bit-reproducible for fixed inputs.
TrialResult run_trial(const ExperimentConfig& cfg, std::uint64_t trial_index);

struct PointResult {
  double uer_mean = 0.0;  // error sections / (L * trials); diverged trials
                          // count as fully in error
  double uer_se = 0.0;    // binomial standard error over L * trials sections
  int trials = 0;
  int diverged = 0;
  TrialResult first_trial;  // traces of trial 0
};

// Runs cfg.resolved_trials() independent trials (parallel across threads,
// deterministic aggregation).
PointResult run_point(const ExperimentConfig& cfg, unsigned threads);

struct EmpiricalMinEbn0 {
  double ebn0_db = 0.0;
  bool reachable = false;
  bool nonmonotone = false;  // observations stayed inconsistent after the
                             // automatic trial-count escalation
};

// Bisection in dB over run_point outcomes, bracket seeded from the analytic
// curve +- 3 dB, capped to [-10, +40] dB.
EmpiricalMinEbn0 empirical_min_ebn0(const ExperimentConfig& cfg, double mu,
                                    double target_uer, double tol_db,
                                    unsigned threads);

struct SweepRow {
  double mu = 0.0;
  double ebn0_db = 0.0;
  int omega = 0;
  double uer_mean = 0.0;
  double uer_se = 0.0;
  int trials = 0;
  int diverged = 0;
};

// mode "grid": every (mu, ebn0) pair.  mode "omega_opt": per mu, scan omega
// in [omega_min, omega_max] at fixed ebn0 and report every row (the best is
// the row with minimal uer_mean, ties to the smaller omega).
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, unsigned threads);

// Best omega per mu from omega_opt sweep rows.
struct OmegaChoice {
  double mu = 0.0;
  int omega = 0;
  double uer_mean = 0.0;
};
std::vector<OmegaChoice> pick_best_omega(const std::vector<SweepRow>& rows);

}  // namespace gmac
