#include "gmac/state_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gmac/scalar_channel.hpp"

namespace gmac {

namespace {

constexpr double kMonotoneSlack = 1e-12;  // relative, covers rounding ties

void validate_params(const SEParams& p) {
  if (!(p.mu > 0.0) || !std::isfinite(p.mu))
    throw std::invalid_argument("mu must be positive and finite");
  if (!(p.sigma2 > 0.0) || !std::isfinite(p.sigma2))
    throw std::invalid_argument("sigma2 must be positive and finite");
}

// gamma, phi, tau from psi.  Columns with a single nonzero base entry take
// tau = phi_r / W_rc directly, which keeps the trivial-base recursion
// bit-identical to the scalar one (no reciprocal round trip).
void refresh(const SEParams& p, SEState& s) {
  const BaseMatrix& bm = p.base;
  const double mu_in = bm.mu_inner(p.mu);
  for (int r = 0; r < bm.R; ++r) {
    double acc = 0.0;
    for (int c = 0; c < bm.C; ++c) acc += bm.at(r, c) * s.psi[c];
    s.gamma[r] = acc;
    s.phi[r] = p.sigma2 + mu_in * acc;
  }
  for (int c = 0; c < bm.C; ++c) {
    int nz = -1, count = 0;
    for (int r = 0; r < bm.R && count < 2; ++r)
      if (bm.at(r, c) != 0.0) {
        nz = r;
        ++count;
      }
    if (count == 1) {
      s.tau[c] = s.phi[nz] / bm.at(nz, c);
      continue;
    }
    double acc = 0.0;
    for (int r = 0; r < bm.R; ++r) {
      const double w = bm.at(r, c);
      if (w != 0.0) acc += w / s.phi[r];
    }
    s.tau[c] = 1.0 / acc;
  }
}

}  // namespace

SEState se_init(const SEParams& p) {
  validate_params(p);
  SEState s;
  s.gamma.resize(p.base.R);
  s.phi.resize(p.base.R);
  s.tau.resize(p.base.C);
  s.psi.assign(p.base.C, p.prior.E);
  s.t = 0;
  refresh(p, s);
  return s;
}

SEState se_step(const SEParams& p, const SEState& s) {
  const auto& table = ScalarChannelTable::get(p.prior);
  SEState nxt = s;
  for (int c = 0; c < p.base.C; ++c)
    nxt.psi[c] = p.prior.E * table.mmse_ratio(p.prior.E / s.tau[c]);
  refresh(p, nxt);
  nxt.t = s.t + 1;
  return nxt;
}

double se_scalar_step(const SectionPrior& prior, double mu, double sigma2,
                      double psi) {
  const auto& table = ScalarChannelTable::get(prior);
  const double tau = sigma2 + mu * psi;
  return prior.E * table.mmse_ratio(prior.E / tau);
}

SEFixedPoint se_fixed_point(const SEParams& p, double tol, int max_iters,
                            bool keep_trace) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  SEFixedPoint out;
  SEState cur = se_init(p);
  if (keep_trace) out.trace.push_back(cur);
  const double E = p.prior.E;
  for (int it = 1; it <= max_iters; ++it) {
    SEState nxt = se_step(p, cur);
    double dmax = 0.0;
    for (int c = 0; c < p.base.C; ++c) {
      dmax = std::max(dmax, std::fabs(nxt.psi[c] - cur.psi[c]));
      if (nxt.psi[c] > cur.psi[c] + kMonotoneSlack * E)
        throw std::logic_error("state evolution: psi increased between iterations");
      if (nxt.tau[c] > cur.tau[c] * (1.0 + kMonotoneSlack))
        throw std::logic_error("state evolution: tau increased between iterations");
    }
    cur = std::move(nxt);
    if (keep_trace) out.trace.push_back(cur);
    out.iters = it;
    if (dmax <= tol * E) {
      out.converged = true;
      break;
    }
  }
  out.state = std::move(cur);
  return out;
}

double predicted_uer(const SectionPrior& prior, const SEState& s) {
  double acc = 0.0;
  for (double tau : s.tau)
    acc += scalar::error_prob_r(prior.kind, prior.B, prior.E / tau);
  return acc / static_cast<double>(s.tau.size());
}

double uer_mse_bound(const SectionPrior& prior, const SEState& s) {
  double acc = 0.0;
  for (double psi : s.psi) acc += psi / prior.E;
  return 4.0 * acc / static_cast<double>(s.psi.size());
}

double amp_spectral_threshold(double ebn0) {
  if (!(ebn0 > 0.0))
    throw std::invalid_argument("ebn0 must be positive (linear scale)");
  return 0.5 * (1.0 / std::numbers::ln2 - 1.0 / ebn0);
}

SpectralRoot optimal_spectral_threshold(double ebn0, double tol) {
  if (!(ebn0 > 0.0) || !std::isfinite(ebn0))
    throw std::invalid_argument("ebn0 must be positive and finite");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const double a = ebn0 / std::numbers::ln2;
  if (a <= 1.0) return {0.0, false};
  // Largest root of x = a ln(1+x), via h(x) = x - a ln(1+x): h is convex
  // with h(0) = 0, h < 0 at the minimum x = a-1, h -> +inf.
  const auto h = [a](double x) { return x - a * std::log1p(x); };
  double lo = a - 1.0;
  double hi = std::max(2.0 * lo, 1.0);
  while (h(hi) <= 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && (hi - lo) > 0.25 * tol * ebn0; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi) / (2.0 * ebn0), true};
}

CoupledThresholds coupled_design_thresholds(double mu, int B, double ebn0,
                                            int omega, int lambda) {
  if (!(mu > 0.0) || !(ebn0 > 0.0) || B < 1)
    throw std::invalid_argument("mu, ebn0 must be positive; B >= 1");
  if (omega < 1 || lambda < 1 || (omega > 1 && lambda < 2 * omega - 1))
    throw std::invalid_argument("invalid coupling parameters");
  CoupledThresholds t;
  const double log2B = std::log2(static_cast<double>(B));
  t.vartheta = 1.0 + static_cast<double>(omega - 1) / lambda;
  t.snr = 2.0 * ebn0 * mu * log2B;
  t.delta = std::log1p(t.vartheta * t.snr) / (2.0 * t.vartheta) -
            mu * std::log(static_cast<double>(B));
  t.delta_positive = t.delta > 0.0;
  if (t.delta_positive) {
    t.omega_star = (t.vartheta * t.snr * t.snr / (1.0 + t.vartheta * t.snr)) /
                   t.delta;
    t.rho_star = std::min(t.delta / (3.0 * t.snr), 0.5);
  } else {
    t.omega_star = std::numeric_limits<double>::infinity();
    t.rho_star = 0.0;
  }
  t.s_amp = amp_spectral_threshold(ebn0);
  const SpectralRoot s_opt = optimal_spectral_threshold(ebn0);
  t.s_opt = s_opt.value;
  const double s = mu * log2B;
  t.window_ok = s_opt.positive && t.s_amp / t.vartheta <= s &&
                s < t.s_opt / t.vartheta;
  return t;
}

long wave_iteration_bound(const CoupledThresholds& t, int omega, int lambda) {
  if (!t.delta_positive)
    throw std::domain_error("wave iteration bound undefined: delta <= 0");
  if (omega < 1 || lambda < 1)
    throw std::invalid_argument("invalid coupling parameters");
  return static_cast<long>(
      std::ceil(lambda * t.omega_star / (2.0 * omega)));
}

DesignRecommendation recommend_design(double mu, int B, double ebn0) {
  if (!(mu > 0.0) || !(ebn0 > 0.0))
    throw std::invalid_argument("mu and ebn0 must be positive");
  if (B < 2)
    throw std::invalid_argument("design recommendation needs payload, B >= 2");
  DesignRecommendation rec;
  const double log2B = std::log2(static_cast<double>(B));
  rec.s = mu * log2B;
  rec.s_amp = amp_spectral_threshold(ebn0);
  const SpectralRoot s_opt = optimal_spectral_threshold(ebn0);
  rec.s_opt = s_opt.value;
  if (!s_opt.positive || rec.s >= rec.s_opt) {
    rec.outcome = DesignOutcome::Infeasible;
    return rec;
  }
  if (rec.s < rec.s_amp) {
    rec.outcome = DesignOutcome::IidSufficient;
    return rec;
  }
  rec.outcome = DesignOutcome::Coupled;
  rec.vartheta0 = rec.s_opt / rec.s;
  const double vt = 0.5 * (1.0 + rec.vartheta0);
  const double snr = 2.0 * ebn0 * rec.s;
  const double delta =
      std::log1p(vt * snr) / (2.0 * vt) - rec.s * std::numbers::ln2;
  // delta(vt) > 0 for vt < vartheta0 because vartheta -> ln(1+vartheta snr) /
  // (2 vartheta) is strictly decreasing and vanishes at vartheta0.
  const double omega_star = (vt * snr * snr / (1.0 + vt * snr)) / delta;
  rec.omega = static_cast<int>(std::floor(omega_star)) + 1;
  const long need =
      static_cast<long>(std::ceil((rec.omega - 1) / (vt - 1.0)));
  rec.lambda = static_cast<int>(
      std::max<long>(std::max<long>(need, 2L * rec.omega - 1), 1L));
  return rec;
}

PhaseResult payload_phase(double mu, int B, double ebn0, double delta,
                          double delta_tilde, double k, double k1,
                          double delta2) {
  if (!(mu > 0.0) || !(ebn0 > 0.0))
    throw std::invalid_argument("mu and ebn0 must be positive");
  if (B < 2) throw std::invalid_argument("payload phase needs B >= 2");
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("delta must lie in (0, 1/2)");
  if (!(delta_tilde > 0.0 && delta_tilde < 1.0))
    throw std::invalid_argument("delta_tilde must lie in (0, 1)");
  if (!(k > 0.0) || !(k1 > 0.0))
    throw std::invalid_argument("k and k1 must be positive");
  const double d2_max = std::numbers::sqrt2 - std::sqrt(2.0 - delta_tilde);
  if (delta2 == 0.0) delta2 = 0.5 * d2_max;
  if (!(delta2 > 0.0 && delta2 < d2_max))
    throw std::invalid_argument(
        "delta2 must lie in (0, sqrt(2) - sqrt(2 - delta_tilde))");

  const double lnB = std::log(static_cast<double>(B));
  const double s = mu * (lnB / std::numbers::ln2);
  PhaseResult res;
  res.f = std::exp(-k * delta * delta * lnB) / (delta * std::sqrt(lnB));
  res.g = std::exp(-k1 * delta_tilde * delta_tilde * lnB);
  res.h = std::exp(-0.5 * delta2 * delta2 * lnB) / (delta2 * std::sqrt(lnB)) +
          std::exp(-delta2 * delta2 * lnB);
  const double below_thr =
      0.5 * (1.0 / ((1.0 + 0.5 * delta) * std::numbers::ln2) - 1.0 / ebn0);
  const double above_thr =
      (1.0 / (2.0 * (1.0 - res.g))) *
      (1.0 / ((1.0 - 0.5 * delta_tilde) * std::numbers::ln2) - 1.0 / ebn0);
  if (s < below_thr) {
    res.phase = PayloadPhase::Below;
    res.uer_bound = 4.0 * res.f;
  } else if (s > above_thr) {
    res.phase = PayloadPhase::Above;
    res.uer_bound = 1.0 - res.h;
  } else {
    res.phase = PayloadPhase::Indeterminate;
    res.uer_bound = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

}  // namespace gmac
