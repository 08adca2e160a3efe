#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gmac {

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
struct GaussLegendre {
  std::vector<double> x, w;
};
const GaussLegendre& gauss_legendre(int n);

// Integral of f(z) * phi(z) dz over [a, b] where phi is the standard normal
// density, via composite Gauss-Legendre panels of width at most panel_width.
double gauss_weighted_integral(const std::function<double(double)>& f,
                               double a, double b, double panel_width = 0.5,
                               int order = 32);

// Standard normal helpers.
double norm_pdf(double z);
double norm_cdf(double z);
double log_norm_cdf(double z);
// Upper tail Q(z) = P(Z > z).
double norm_q(double z);
// Inverse of the standard normal CDF, accurate to full double precision.
double norm_cdf_inv(double p);
// Inverse upper tail: z with Q(z) = p.
double norm_q_inv(double p);

// Binary entropy in bits; h2(0) = h2(1) = 0.
double binary_entropy_bits(double p);

}  // namespace gmac
