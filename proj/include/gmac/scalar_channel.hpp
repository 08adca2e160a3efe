#pragma once

#include <memory>

#include "gmac/prior.hpp"

namespace gmac {

// Dimensionless scalar-channel functionals.  With r = E / tau,
//   mmse(prior, 1/tau)        = E * mmse_ratio(kind, B, r)
//   mutual_info(prior, tau)   = mi_nats(kind, B, r)
//   error_prob(prior, tau)    = error_prob_r(kind, B, r)
// All three are evaluated by deterministic quadrature; the B-dimensional
// expectations over a section reduce to nested one-dimensional integrals
// because the inactive entries are i.i.d., which factorises the Laplace
// transform of their sum (and a Frullani integral handles the log term in
// the mutual information).
namespace scalar {

double mmse_ratio(PriorKind kind, int B, double r);
double mi_nats(PriorKind kind, int B, double r);
double error_prob_r(PriorKind kind, int B, double r);

// Entropy of one section in nats: ln B (Flat), ln 2B (BinaryModulated).
double section_entropy_nats(PriorKind kind, int B);
// Beyond this r the functionals are saturated to machine precision and the
// table layer returns the exact limits (0 and the section entropy).
double saturation_r(PriorKind kind, int B);

}  // namespace scalar

// Monotone cubic interpolation tables of mmse_ratio and mi_nats over log r,
// shared per (kind, B) process-wide.  State evolution and the potential both
// evaluate through the same table, so fixed points, stationary points and
// minimisers are mutually consistent to interpolation accuracy rather than
// to quadrature accuracy.
class ScalarChannelTable {
 public:
  static const ScalarChannelTable& get(PriorKind kind, int B);
  static const ScalarChannelTable& get(const SectionPrior& prior);

  double mmse_ratio(double r) const;
  double mi_nats(double r) const;

  double mmse(double E, double tau) const { return E * mmse_ratio(E / tau); }
  double mi(double E, double tau) const { return mi_nats(E / tau); }

  ~ScalarChannelTable();

 private:
  ScalarChannelTable(PriorKind kind, int B);
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gmac
