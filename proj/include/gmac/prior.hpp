#pragma once

#include <span>
#include <vector>

#include "gmac/rng.hpp"

namespace gmac {

// Section priors for random linear coding.  A section is a length-B vector
// with a single active entry:
//   Flat:            value +sqrt(E), position uniform; payload log2(B) bits.
//   BinaryModulated: value +-sqrt(E) equiprobable, position uniform; payload
//                    1 + log2(B) bits (B = 1 is antipodal signalling).
enum class PriorKind { Flat, BinaryModulated };

struct SectionPrior {
  PriorKind kind;
  int B;
  double E;

  static SectionPrior flat(int B, double energy);
  static SectionPrior binary_modulated(int B, double energy);
  // E = energy_per_bit * payload_bits.
  static SectionPrior from_energy_per_bit(PriorKind kind, int B,
                                          double energy_per_bit);

  double payload_bits() const;
  double amplitude() const;  // sqrt(E)
  // Noise variance on the channel that realises a given Eb/N0 (linear) while
  // keeping E fixed: sigma^2 = E / (2 * payload_bits * ebn0).
  double sigma2_for_ebn0(double ebn0_linear) const;
  double ebn0_for_sigma2(double sigma2) const;
};

// Effective noise level of the scalar observation channel s = x + sqrt(tau) Z.
struct EffectiveNoise {
  double tau;
  explicit EffectiveNoise(double t);
};

// Draws one section into out (size B).
void sample_section(const SectionPrior& prior, Rng& rng,
                    std::span<double> out);
// Draws L sections, concatenated.
std::vector<double> sample_message(const SectionPrior& prior, int L, Rng& rng);

// Scalar-channel MMSE at noise level 1/inv_tau: E||X - E[X|X + sqrt(tau) Z]||^2.
// Evaluated by deterministic nested quadrature (see scalar_channel.cpp).
double mmse(const SectionPrior& prior, double inv_tau);

// Posterior mean of one section given s = x + sqrt(tau) Z.
void denoise(const SectionPrior& prior, std::span<const double> s,
             EffectiveNoise tau, std::span<double> out);

// Sectionwise MAP decision; ties resolve to the lowest index.
void hard_decision(const SectionPrior& prior, std::span<const double> s,
                   EffectiveNoise tau, std::span<double> out);

// Probability the MAP decision differs from the transmitted section.
double error_prob(const SectionPrior& prior, EffectiveNoise tau);

// Mutual information I(X_section; X_section + sqrt(tau) Z) in nats.
double mutual_info(const SectionPrior& prior, EffectiveNoise tau);

}  // namespace gmac
