#pragma once

#include <vector>

#include "gmac/base_matrix.hpp"
#include "gmac/prior.hpp"

namespace gmac {

struct SEParams {
  SectionPrior prior;
  BaseMatrix base;  // trivial() for the uncoupled system
  double mu;        // users per channel use (outer density L/n)
  double sigma2;    // channel noise variance
};

// One synchronous state: gamma_r = sum_c W_rc psi_c, phi_r = sigma2 +
// mu_inner gamma_r, tau_c = [sum_r W_rc / phi_r]^{-1}, all consistent with
// psi at iteration t.  psi starts at E and is non-increasing in t.
struct SEState {
  std::vector<double> gamma, phi;  // per row block, size R
  std::vector<double> tau, psi;    // per column block, size C
  int t = 0;
};

SEState se_init(const SEParams& p);
SEState se_step(const SEParams& p, const SEState& s);

// Scalar uncoupled update: mmse(1 / (sigma2 + mu psi)), evaluated through the
// shared interpolation table (bit-identical to se_step on a trivial base).
double se_scalar_step(const SectionPrior& prior, double mu, double sigma2,
                      double psi);

struct SEFixedPoint {
  SEState state;
  bool converged = false;
  int iters = 0;
  std::vector<SEState> trace;  // filled when keep_trace;
};

// Iterates until max_c |psi change| <= tol * E or max_iters (flagged, not an
// exception: the recursion is monotone and bounded).
SEFixedPoint se_fixed_point(const SEParams& p, double tol = 1e-8,
                            int max_iters = 10000, bool keep_trace = false);

// Mean over column blocks of the hard-decision error probability at tau_c.
double predicted_uer(const SectionPrior& prior, const SEState& s);
// (4 / C) sum_c psi_c / E: an upper bound on the asymptotic UER from the MSE.
double uer_mse_bound(const SectionPrior& prior, const SEState& s);

// ---- Large-payload thresholds (Flat prior, payload log2 B bits) ----

// Spectral efficiency limit of uncoupled AMP as B -> infinity:
// (1/ln2 - 1/ebn0) / 2 bits per channel use (may be <= 0).
double amp_spectral_threshold(double ebn0);

// Largest root of S = (1/2) log2(1 + 2 S ebn0); zero (flagged) when
// ebn0 <= ln 2.
struct SpectralRoot {
  double value = 0.0;
  bool positive = false;
};
SpectralRoot optimal_spectral_threshold(double ebn0, double tol = 1e-12);

// Coupled-design quantities at vartheta = 1 + (omega - 1) / lambda:
//   snr   = 2 ebn0 mu log2 B
//   delta = ln(1 + vartheta snr) / (2 vartheta) - mu ln B
//   omega_star = (vartheta snr^2 / (1 + vartheta snr)) / delta
//   rho_star   = min(delta / (3 snr), 1/2)
// delta <= 0 flags an infeasible spectral efficiency (omega_star = +inf).
struct CoupledThresholds {
  double vartheta = 1.0;
  double snr = 0.0;
  double delta = 0.0;
  double omega_star = 0.0;
  double rho_star = 0.0;
  double s_amp = 0.0;
  double s_opt = 0.0;
  bool delta_positive = false;
  bool window_ok = false;  // s_amp/vartheta <= mu log2 B < s_opt/vartheta
};
CoupledThresholds coupled_design_thresholds(double mu, int B, double ebn0,
                                            int omega, int lambda);
// ceil(lambda * omega_star / (2 omega)): iteration bound for the decoding
// wave to clear the whole chain.  Requires delta_positive.
long wave_iteration_bound(const CoupledThresholds& t, int omega, int lambda);

enum class DesignOutcome { IidSufficient, Coupled, Infeasible };
struct DesignRecommendation {
  DesignOutcome outcome = DesignOutcome::IidSufficient;
  int omega = 1;
  int lambda = 1;
  double vartheta0 = 1.0;
  double s = 0.0;
  double s_amp = 0.0;
  double s_opt = 0.0;
};
// Two-branch procedure at spectral efficiency S = mu log2 B: below s_amp the
// uncoupled design suffices; at or above s_opt nothing works.  In between,
// delta(vartheta0) = 0 exactly at vartheta0 = s_opt / S (the defining
// equation of s_opt), so omega_star(vartheta0) is infinite; the selection
// therefore targets the interior point vartheta_t = (1 + vartheta0) / 2,
// returning the minimal integer omega > omega_star(vartheta_t) and the
// minimal valid lambda keeping 1 + (omega-1)/lambda <= vartheta_t.
DesignRecommendation recommend_design(double mu, int B, double ebn0);

// Large-payload phase of uncoupled AMP at (mu, B, ebn0).  The bounds use
// caller-visible constants k, k1 (unknown in general; defaults of 1 make the
// outputs diagnostic rather than rigorous).  delta2 = 0 requests the default
// midpoint of its valid interval (0, sqrt(2) - sqrt(2 - delta_tilde)).
enum class PayloadPhase { Below, Above, Indeterminate };
struct PhaseResult {
  PayloadPhase phase = PayloadPhase::Indeterminate;
  double uer_bound = 0.0;  // <= 4f when Below, >= 1 - h when Above
  double f = 0.0, g = 0.0, h = 0.0;
};
PhaseResult payload_phase(double mu, int B, double ebn0, double delta,
                          double delta_tilde, double k = 1.0, double k1 = 1.0,
                          double delta2 = 0.0);

}  // namespace gmac
