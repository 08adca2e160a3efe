#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmac/amp.hpp"
#include "gmac/base_matrix.hpp"
#include "gmac/design_operator.hpp"
#include "gmac/prior.hpp"
#include "gmac/state_evolution.hpp"

namespace gmac {

// Experiment description parsed from line-oriented `key = value` text with
// [section] headers and '#' comments.  Unknown sections or keys are errors.
// Precedence: file > preset > built-in defaults.
struct ExperimentConfig {
  // [model]
  PriorKind prior_kind = PriorKind::Flat;
  int B = 4;
  double energy = 1.0;
  double ebn0_db = 6.0;
  double mu = 0.7;

  // [coupling]
  int omega = 1;
  int lambda = 1;
  double rho = 0.0;

  // [operator]
  OperatorKind op_kind = OperatorKind::DenseGaussian;
  std::size_t max_dense_elements = std::size_t{1} << 31;

  // [decode]
  StopRule stop = StopRule::fixed(25);
  bool onsager = true;
  bool empirical_coeffs = true;

  // [sim]
  int users = 500;       // L
  std::size_t n = 0;     // 0 -> round(users / mu), then rounded to R | n
  int trials = 0;        // 0 -> max(1, ceil(1e5 / users))
  double target_uer = 1e-3;
  std::uint64_t master_seed = 1;
  std::string trace = "first";  // none | first | all

  // [sweep]
  std::string sweep_mode = "grid";  // grid | bisect | omega_opt
  std::vector<double> mu_grid;      // empty -> {mu}
  std::vector<double> ebn0_grid;    // empty -> {ebn0_db}
  int omega_min = 1;
  int omega_max = 12;
  double tol_db = 0.1;

  // [thresholds]
  double th_delta = 0.1;
  double th_delta_tilde = 0.5;
  double th_k = 1.0;
  double th_k1 = 1.0;
  double th_delta2 = 0.0;  // 0 -> midpoint default
  double tau_bar_eps = 0.0;

  bool coupled() const { return !(omega == 1 && lambda == 1); }
  SectionPrior prior() const;
  BaseMatrix base() const;
  double ebn0_linear() const;
  double sigma2() const;
  std::size_t resolved_n() const;   // honours R | n
  double resolved_mu() const;       // users / resolved_n
  int resolved_trials() const;
  SEParams se_params() const;       // with resolved_mu
  AmpOptions amp_options() const;

  void validate() const;  // throws std::invalid_argument with the constraint
};

// Parses config text; keys_seen (optional) collects "section.key" names so
// preset application can skip explicitly set keys.
ExperimentConfig parse_config_text(const std::string& text,
                                   std::vector<std::string>* keys_seen = nullptr);
ExperimentConfig load_config(const std::string& path,
                             std::vector<std::string>* keys_seen = nullptr);

// Presets: "desk" (defaults; coupled runs get users=1000, lambda=20) and
// "paper-scale" (coupled runs get users=5000, lambda=50, rho=0).  Keys the
// file set explicitly are left untouched.
void apply_preset(ExperimentConfig& cfg, const std::string& name,
                  const std::vector<std::string>& keys_seen);

// Round-trip serialisation of the effective config (for run manifests).
std::string config_to_text(const ExperimentConfig& cfg);

}  // namespace gmac
