#pragma once

#include <vector>

#include "gmac/prior.hpp"

namespace gmac {

// Scalar potential over psi in [0, E], with tau = sigma2 + mu psi:
//   F(mu, sigma2, psi) = I(E/tau) + (1/(2 mu)) [ln(tau/sigma2) - mu psi/tau].
// Its stationary points are exactly the fixed points of the uncoupled state
// evolution, and its global minimiser governs the coupled threshold.
double potential(const SectionPrior& prior, double mu, double sigma2,
                 double psi);
// dF/dpsi = (mu / (2 tau^2)) (psi - mmse(1/tau)).
double potential_derivative(const SectionPrior& prior, double mu,
                            double sigma2, double psi);

// Global minimisers of F over [0, E]: dense grid (uniform plus logarithmic
// refinement near 0) with golden-section polish per basin; returns every
// local minimiser whose value is within refine_tol of the global minimum
// (near-degenerate double minima at phase boundaries yield two entries).
struct MinimizerSet {
  std::vector<double> psi;  // ascending
  double f_min = 0.0;
};
MinimizerSet minimizer_set(const SectionPrior& prior, double mu, double sigma2,
                           int grid_size = 4096, double refine_tol = 1e-9);

// Largest root of dF/dpsi on [0, E] (equals the uncoupled SE fixed point);
// 0 when the derivative has no sign change.
double largest_stationary(const SectionPrior& prior, double mu, double sigma2);

// tau* = sigma2 + mu max(minimizer_set).
double global_min_tau(const SectionPrior& prior, double mu, double sigma2);
// sigma2 + vartheta mu (max minimiser at density vartheta mu + eps), with
// vartheta = 1 + (omega - 1) / lambda: the coupled fixed-point ceiling.
double coupled_bound_tau(const SectionPrior& prior, double mu, double sigma2,
                         int omega, int lambda, double eps);

// ---- Achievability / converse curves ----

enum class Scheme { IidAmp, ScAmp, Converse };

struct MinEbn0 {
  double ebn0_db = 0.0;
  bool reachable = false;
};

// Smallest Eb/N0 (dB, bisection to tol_db) at which the scheme's predicted
// error probability meets target_uer: pe(tau_fp) for IidAmp, pe(tau*) for
// ScAmp (the large-omega,lambda limit), closed form for Converse.  The
// search is capped to [-10, +40] dB; hitting the cap flags unreachable.
MinEbn0 min_ebn0(const SectionPrior& prior, Scheme scheme, double mu,
                 double target_uer, double tol_db = 0.01);

// Eb/N0 lower bounds (linear) for any code with M messages per user at
// user density mu and target error eps:
//   single_user: sign-preserving square of Q^{-1}(1/M) - Q^{-1}(1-eps),
//                over 2 log2 M;
//   capacity:    (2^{2 mu (log2 M - eps log2(M-1) - Hb(eps))} - 1) /
//                (2 mu log2 M).
struct ConverseTerms {
  double single_user = 0.0;
  double capacity = 0.0;
};
ConverseTerms converse_terms(double mu, double M, double eps);
double converse_min_ebn0(double mu, double M, double eps);  // max of the two

struct RegionPoint {
  double mu = 0.0;
  double ebn0_db = 0.0;
  bool reachable = false;
};
struct RegionCurve {
  Scheme scheme = Scheme::IidAmp;
  double target_uer = 0.0;
  double payload_bits = 0.0;
  std::vector<RegionPoint> points;
};
RegionCurve region_curve(const SectionPrior& prior, Scheme scheme,
                         const std::vector<double>& mu_grid,
                         double target_uer);

}  // namespace gmac
