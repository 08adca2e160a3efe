#include "gmac/prior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gmac/scalar_channel.hpp"

namespace gmac {

namespace {

bool is_power_of_two(int b) { return b >= 1 && (b & (b - 1)) == 0; }

void validate(PriorKind, int B, double energy) {
  if (!is_power_of_two(B))
    throw std::invalid_argument("section size B must be a power of two");
  if (!(energy > 0.0) || !std::isfinite(energy))
    throw std::invalid_argument("section energy must be positive and finite");
}

}  // namespace

SectionPrior SectionPrior::flat(int B, double energy) {
  validate(PriorKind::Flat, B, energy);
  return {PriorKind::Flat, B, energy};
}

SectionPrior SectionPrior::binary_modulated(int B, double energy) {
  validate(PriorKind::BinaryModulated, B, energy);
  return {PriorKind::BinaryModulated, B, energy};
}

SectionPrior SectionPrior::from_energy_per_bit(PriorKind kind, int B,
                                               double energy_per_bit) {
  validate(kind, B, energy_per_bit);
  SectionPrior p{kind, B, 1.0};
  if (p.payload_bits() == 0.0)
    throw std::domain_error("prior carries no payload; per-bit energy undefined");
  p.E = energy_per_bit * p.payload_bits();
  return p;
}

double SectionPrior::payload_bits() const {
  const double lb = std::log2(static_cast<double>(B));
  return kind == PriorKind::Flat ? lb : 1.0 + lb;
}

double SectionPrior::amplitude() const { return std::sqrt(E); }

double SectionPrior::sigma2_for_ebn0(double ebn0_linear) const {
  if (!(ebn0_linear > 0.0))
    throw std::domain_error("Eb/N0 must be positive (linear scale)");
  if (payload_bits() == 0.0)
    throw std::domain_error("prior carries no payload; Eb/N0 undefined");
  return E / (2.0 * payload_bits() * ebn0_linear);
}

double SectionPrior::ebn0_for_sigma2(double sigma2) const {
  if (!(sigma2 > 0.0))
    throw std::domain_error("sigma^2 must be positive");
  if (payload_bits() == 0.0)
    throw std::domain_error("prior carries no payload; Eb/N0 undefined");
  return E / (2.0 * payload_bits() * sigma2);
}

EffectiveNoise::EffectiveNoise(double t) : tau(t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("effective noise tau must be positive and finite");
}

void sample_section(const SectionPrior& prior, Rng& rng,
                    std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(prior.B))
    throw std::invalid_argument("sample_section: output span size != B");
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t pos = rng.index(static_cast<std::size_t>(prior.B));
  double v = prior.amplitude();
  if (prior.kind == PriorKind::BinaryModulated && rng.next_u64() & 1u) v = -v;
  out[pos] = v;
}

std::vector<double> sample_message(const SectionPrior& prior, int L, Rng& rng) {
  if (L < 1) throw std::invalid_argument("sample_message: L must be >= 1");
  std::vector<double> x(static_cast<std::size_t>(L) *
                        static_cast<std::size_t>(prior.B));
  for (int l = 0; l < L; ++l) {
    sample_section(prior, rng,
                   std::span<double>(x.data() + static_cast<std::size_t>(l) * prior.B,
                                     static_cast<std::size_t>(prior.B)));
  }
  return x;
}

double mmse(const SectionPrior& prior, double inv_tau) {
  if (!(inv_tau > 0.0) || !std::isfinite(inv_tau))
    throw std::domain_error("mmse: 1/tau must be positive and finite");
  return prior.E * scalar::mmse_ratio(prior.kind, prior.B, prior.E * inv_tau);
}

void denoise(const SectionPrior& prior, std::span<const double> s,
             EffectiveNoise tau, std::span<double> out) {
  const std::size_t B = static_cast<std::size_t>(prior.B);
  if (s.size() != B || out.size() != B)
    throw std::invalid_argument("denoise: span size != B");
  const double a = prior.amplitude() / tau.tau;
  if (prior.kind == PriorKind::Flat) {
    double mx = -1e300;
    for (std::size_t j = 0; j < B; ++j) mx = std::max(mx, a * s[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < B; ++j) {
      out[j] = std::exp(a * s[j] - mx);
      sum += out[j];
    }
    const double scale = prior.amplitude() / sum;
    for (std::size_t j = 0; j < B; ++j) out[j] *= scale;
    return;
  }
  double mx = 0.0;
  for (std::size_t j = 0; j < B; ++j) mx = std::max(mx, std::abs(a * s[j]));
  double den = 0.0;
  for (std::size_t j = 0; j < B; ++j) {
    const double x = a * s[j];
    const double ep = std::exp(x - mx);
    const double em = std::exp(-x - mx);
    out[j] = ep - em;
    den += ep + em;
  }
  const double scale = prior.amplitude() / den;
  for (std::size_t j = 0; j < B; ++j) out[j] *= scale;
}

void hard_decision(const SectionPrior& prior, std::span<const double> s,
                   EffectiveNoise tau, std::span<double> out) {
  (void)tau;  // the argmax does not depend on tau; kept for interface symmetry
  const std::size_t B = static_cast<std::size_t>(prior.B);
  if (s.size() != B || out.size() != B)
    throw std::invalid_argument("hard_decision: span size != B");
  std::size_t best = 0;
  if (prior.kind == PriorKind::Flat) {
    for (std::size_t j = 1; j < B; ++j)
      if (s[j] > s[best]) best = j;
    std::fill(out.begin(), out.end(), 0.0);
    out[best] = prior.amplitude();
    return;
  }
  for (std::size_t j = 1; j < B; ++j)
    if (std::abs(s[j]) > std::abs(s[best])) best = j;
  std::fill(out.begin(), out.end(), 0.0);
  out[best] = s[best] >= 0.0 ? prior.amplitude() : -prior.amplitude();
}

double error_prob(const SectionPrior& prior, EffectiveNoise tau) {
  return scalar::error_prob_r(prior.kind, prior.B, prior.E / tau.tau);
}

double mutual_info(const SectionPrior& prior, EffectiveNoise tau) {
  return scalar::mi_nats(prior.kind, prior.B, prior.E / tau.tau);
}

}  // namespace gmac
