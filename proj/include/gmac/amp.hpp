#pragma once

#include <span>
#include <vector>

#include "gmac/design_operator.hpp"
#include "gmac/prior.hpp"
#include "gmac/state_evolution.hpp"

namespace gmac {

// When to stop iterating.  The decoder computes s^0 .. s^T and hardens s^T
// (one iteration past the threshold crossing, matching the analysis):
//   FixedT:      T given directly.
//   SeConverged: T = first t with max_c tau_c^t <= max_c tau_c^{FP} + delta
//                (from the deterministic SE trace), capped.
//   SeBound:     T = ceil(lambda * omega_star / (2 omega)) from the coupled
//                design thresholds, capped; requires a feasible design.
struct StopRule {
  enum class Kind { FixedT, SeConverged, SeBound };
  Kind kind = Kind::FixedT;
  int fixed_t = 25;
  double delta = 1e-4;  // absolute, in tau units
  int cap = 400;

  static StopRule fixed(int t);
  static StopRule se_converged(double delta, int cap = 400);
  static StopRule se_bound(int cap = 400);
};

struct AmpOptions {
  StopRule stop = StopRule::fixed(25);
  bool onsager = true;           // diagnostic ablation when false
  bool empirical_coeffs = true;  // estimate coefficients from residuals
  double explosion_ratio = 1e6;   // ||q^t|| above this multiple of ||q^0||
                                  // aborts the trial as diverged
};

struct TrialResult {
  std::vector<double> xhat;        // hardened estimate, length L*B
  std::vector<double> mse_trace;   // ||x^t - x||^2 / L, t = 0 .. T+1
  std::vector<double> se_psi_bar;  // (1/C) sum_c psi_c^t, same indexing
  std::vector<double> uer_trace;   // UER of harden(s^t), t = 0 .. T
  double uer = 0.0;                // = uer_trace.back()
  double mse_uer_bound = 0.0;      // (4/C) sum_c psi_c / E at the final state
  int iters = 0;                   // T + 1 iterations executed
  bool diverged = false;
};

// Fraction of sections decoded incorrectly (exact comparison; both sides
// take values on the discrete prior support).
double user_error_rate(std::span<const double> xhat,
                       std::span<const double> truth, std::size_t L, int B);

// Coupled decoder: q^t = y - A x^t + upsilon^t (.) q^{t-1} with the row-block
// Onsager coefficients upsilon_i = mu_inner gamma_{r(i)}^t / phi_{r(i)}^{t-1},
// and s^t = x^t + (S (.) A)^T q^t with S_ij = tau_{c(j)}^t / phi_{r(i)}^t.
// Coefficients are estimated from the running residuals by default; with
// empirical_coeffs = false they are read off the deterministic SE trace
// instead, which matches the analysis but loses self-correction: once a
// finite-size trajectory drifts from the schedule the mismatch compounds,
// so that mode is for validation at well-margined operating points only.
// truth (optional) enables mse/uer traces.
TrialResult amp_decode_coupled(const DesignOperator& op,
                               std::span<const double> y, const SEParams& p,
                               const AmpOptions& opts,
                               std::span<const double> truth = {});

// Uncoupled decoder: scalar coefficients mu psi^t / tau^{t-1} and unit
// adjoint scaling.  Bit-identical to amp_decode_coupled on a trivial base.
TrialResult amp_decode_iid(const DesignOperator& op, std::span<const double> y,
                           const SEParams& p, const AmpOptions& opts,
                           std::span<const double> truth = {});

}  // namespace gmac
