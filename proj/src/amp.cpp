#include "gmac/amp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmac {

namespace {

double max_tau(const SEState& s) {
  double m = s.tau[0];
  for (double t : s.tau) m = std::max(m, t);
  return m;
}

double mean_psi(const SEState& s) {
  double acc = 0.0;
  for (double p : s.psi) acc += p;
  return acc / static_cast<double>(s.psi.size());
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double mse_against(const std::vector<double>& x, std::span<const double> truth,
                   std::size_t L) {
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - truth[j];
    acc += d * d;
  }
  return acc / static_cast<double>(L);
}

// phi_hat per row block: mean of q_i^2 over the block.
void block_mean_sq(const std::vector<double>& q, const BlockMaps& maps,
                   std::vector<double>& out) {
  out.assign(maps.R, 0.0);
  const std::size_t rpb = maps.rows_per_block;
  for (int r = 0; r < maps.R; ++r) {
    double acc = 0.0;
    const std::size_t off = rpb * static_cast<std::size_t>(r);
    for (std::size_t i = 0; i < rpb; ++i) acc += q[off + i] * q[off + i];
    out[r] = acc / static_cast<double>(rpb);
  }
}

// tau_c = [sum_r W_rc / phi_r]^{-1}.  Columns supported on a single row
// block short-circuit to phi_r / W_rc, keeping tau == phi exact when W = [1].
void tau_from_phi(const BaseMatrix& base, const std::vector<double>& phi,
                  std::vector<double>& tau) {
  tau.assign(base.C, 0.0);
  for (int c = 0; c < base.C; ++c) {
    int support = 0, last = 0;
    for (int r = 0; r < base.R; ++r) {
      if (base.at(r, c) > 0.0) {
        ++support;
        last = r;
      }
    }
    if (support == 1) {
      tau[c] = phi[last] / base.at(last, c);
    } else {
      double acc = 0.0;
      for (int r = 0; r < base.R; ++r)
        if (base.at(r, c) > 0.0) acc += base.at(r, c) / phi[r];
      tau[c] = 1.0 / acc;
    }
  }
}

// psi_hat per column block: E - ||x_c||^2 / (L / C), using the estimator's
// asymptotic orthogonality to its own error; clamped at zero.
void empirical_psi(const std::vector<double>& x, const BlockMaps& maps,
                   double E, std::size_t L, std::vector<double>& psi) {
  psi.assign(maps.C, 0.0);
  const std::size_t cpb = maps.cols_per_block;
  const double sections =
      static_cast<double>(L) / static_cast<double>(maps.C);
  for (int c = 0; c < maps.C; ++c) {
    double acc = 0.0;
    const std::size_t off = cpb * static_cast<std::size_t>(c);
    for (std::size_t j = 0; j < cpb; ++j) acc += x[off + j] * x[off + j];
    psi[c] = std::max(E - acc / sections, 0.0);
  }
}

// Deterministic SE schedule driving the decoder: states 0 .. T+1.
struct Schedule {
  int T = 0;
  std::vector<SEState> states;
};

void extend_states(const SEParams& p, int upto, std::vector<SEState>& states) {
  if (states.empty()) states.push_back(se_init(p));
  while (states.back().t < upto) states.push_back(se_step(p, states.back()));
}

Schedule resolve_schedule(const SEParams& p, const StopRule& stop) {
  if (stop.cap < 0)
    throw std::invalid_argument("stop rule cap must be >= 0");
  Schedule sch;
  switch (stop.kind) {
    case StopRule::Kind::FixedT:
      if (stop.fixed_t < 0)
        throw std::invalid_argument("FixedT stop rule needs fixed_t >= 0");
      sch.T = stop.fixed_t;
      break;
    case StopRule::Kind::SeConverged: {
      if (!(stop.delta > 0.0))
        throw std::invalid_argument("SeConverged stop rule needs delta > 0");
      SEFixedPoint fp = se_fixed_point(p, 1e-8, 10000, true);
      const double threshold = max_tau(fp.state) + stop.delta;
      int first = static_cast<int>(fp.trace.size()) - 1;
      for (std::size_t t = 0; t < fp.trace.size(); ++t) {
        if (max_tau(fp.trace[t]) <= threshold) {
          first = static_cast<int>(t);
          break;
        }
      }
      sch.T = std::min(first, stop.cap);
      sch.states = std::move(fp.trace);
      if (sch.states.size() > static_cast<std::size_t>(sch.T) + 2)
        sch.states.resize(static_cast<std::size_t>(sch.T) + 2);
      break;
    }
    case StopRule::Kind::SeBound: {
      if (p.prior.kind != PriorKind::Flat)
        throw std::invalid_argument(
            "SeBound stop rule is defined for the flat prior");
      const double ebn0 = p.prior.ebn0_for_sigma2(p.sigma2);
      const CoupledThresholds ct = coupled_design_thresholds(
          p.mu, p.prior.B, ebn0, p.base.omega, p.base.lambda);
      const bool feasible = ct.delta_positive && ct.window_ok &&
                            static_cast<double>(p.base.omega) > ct.omega_star &&
                            p.base.rho > 0.0 && p.base.rho <= ct.rho_star;
      if (!feasible)
        throw std::domain_error(
            "SeBound stop rule requires a feasible coupled design "
            "(window, omega > omega*, 0 < rho <= rho*)");
      const long bound = wave_iteration_bound(ct, p.base.omega, p.base.lambda);
      sch.T = static_cast<int>(std::min<long>(bound, stop.cap));
      break;
    }
  }
  extend_states(p, sch.T + 1, sch.states);
  return sch;
}

void validate_common(const DesignOperator& op, std::span<const double> y,
                     const SEParams& p, const AmpOptions& opts,
                     std::span<const double> truth) {
  if (y.size() != op.rows())
    throw std::invalid_argument("amp: y length does not match operator rows");
  if (op.section_size() != p.prior.B)
    throw std::invalid_argument(
        "amp: prior section size differs from the operator's");
  if (!truth.empty() && truth.size() != op.cols())
    throw std::invalid_argument(
        "amp: truth length does not match operator columns");
  if (!(opts.explosion_ratio > 0.0))
    throw std::invalid_argument("amp: explosion_ratio must be positive");
  if (!(p.sigma2 > 0.0))
    throw std::invalid_argument("amp: sigma2 must be positive");
  const double inst_mu =
      static_cast<double>(op.users()) / static_cast<double>(op.rows());
  if (!(std::fabs(p.mu - inst_mu) <= 1e-9 * inst_mu))
    throw std::invalid_argument("amp: p.mu must equal users / rows");
}

void harden_all(const SectionPrior& prior, const BlockMaps& maps,
                const std::vector<double>& s, const std::vector<double>& tau,
                std::size_t L, std::vector<double>& out) {
  const int B = prior.B;
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t off = l * static_cast<std::size_t>(B);
    const int c = maps.col_block(off);
    hard_decision(prior,
                  std::span<const double>(s.data() + off,
                                          static_cast<std::size_t>(B)),
                  EffectiveNoise(tau[c]),
                  std::span<double>(out.data() + off,
                                    static_cast<std::size_t>(B)));
  }
}

}  // namespace

StopRule StopRule::fixed(int t) {
  StopRule r;
  r.kind = Kind::FixedT;
  r.fixed_t = t;
  return r;
}

StopRule StopRule::se_converged(double delta, int cap) {
  StopRule r;
  r.kind = Kind::SeConverged;
  r.delta = delta;
  r.cap = cap;
  return r;
}

StopRule StopRule::se_bound(int cap) {
  StopRule r;
  r.kind = Kind::SeBound;
  r.cap = cap;
  return r;
}

double user_error_rate(std::span<const double> xhat,
                       std::span<const double> truth, std::size_t L, int B) {
  if (L == 0 || B < 1)
    throw std::invalid_argument("user_error_rate: bad shape");
  if (xhat.size() != truth.size() ||
      xhat.size() != L * static_cast<std::size_t>(B))
    throw std::invalid_argument("user_error_rate: shape mismatch");
  std::size_t bad = 0;
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t off = l * static_cast<std::size_t>(B);
    bool same = true;
    for (int j = 0; j < B && same; ++j) same = xhat[off + j] == truth[off + j];
    if (!same) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(L);
}

TrialResult amp_decode_coupled(const DesignOperator& op,
                               std::span<const double> y, const SEParams& p,
                               const AmpOptions& opts,
                               std::span<const double> truth) {
  validate_common(op, y, p, opts, truth);
  const BaseMatrix& base = op.base();
  if (p.base.R != base.R || p.base.C != base.C || p.base.w != base.w)
    throw std::invalid_argument(
        "amp: state evolution base differs from the operator's");

  const std::size_t n = op.rows(), N = op.cols(), L = op.users();
  const int B = p.prior.B, R = base.R, C = base.C;
  const BlockMaps& maps = op.blocks();
  const double mu_inner = base.mu_inner(p.mu);
  const bool have_truth = !truth.empty();

  const Schedule sch = resolve_schedule(p, opts.stop);
  const int T = sch.T;

  TrialResult res;
  std::vector<double> x(N, 0.0), xnext(N), s(N);
  std::vector<double> ax(n), q(n, 0.0), q_prev(n, 0.0);
  std::vector<double> sscale(static_cast<std::size_t>(R) * C);
  std::vector<double> ups(R, 0.0), tau_cur(C, 0.0), hard(N, 0.0);
  std::vector<double> psi_hat(C, p.prior.E), gamma_hat(R), phi_hat(R),
      phi_prev_hat(R), tau_hat(C);

  res.se_psi_bar.push_back(mean_psi(sch.states[0]));
  if (have_truth) res.mse_trace.push_back(mse_against(x, truth, L));

  double q0_norm = 0.0;
  int done = 0;  // iterations that produced an effective observation
  for (int t = 0; t <= T; ++t) {
    op.forward(x, ax);
    if (t == 0 || !opts.onsager) {
      for (std::size_t i = 0; i < n; ++i) q[i] = y[i] - ax[i];
    } else {
      if (opts.empirical_coeffs) {
        for (int r = 0; r < R; ++r) {
          double acc = 0.0;
          for (int c = 0; c < C; ++c) acc += base.at(r, c) * psi_hat[c];
          gamma_hat[r] = acc;
        }
        for (int r = 0; r < R; ++r)
          ups[r] = mu_inner * gamma_hat[r] / phi_prev_hat[r];
      } else {
        for (int r = 0; r < R; ++r)
          ups[r] = mu_inner * sch.states[t].gamma[r] / sch.states[t - 1].phi[r];
      }
      for (int r = 0; r < R; ++r) {
        const std::size_t off = maps.rows_per_block * static_cast<std::size_t>(r);
        for (std::size_t i = 0; i < maps.rows_per_block; ++i)
          q[off + i] = y[off + i] - ax[off + i] + ups[r] * q_prev[off + i];
      }
    }
    if (!all_finite(q))
      throw std::runtime_error("amp: non-finite residual at iteration " +
                               std::to_string(t));
    const double qn = norm2(q);
    if (t == 0) {
      q0_norm = qn;
    } else if (qn > opts.explosion_ratio * q0_norm) {
      res.diverged = true;
      break;
    }

    if (opts.empirical_coeffs) {
      block_mean_sq(q, maps, phi_hat);
      tau_from_phi(base, phi_hat, tau_hat);
      tau_cur = tau_hat;
      for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c)
          sscale[static_cast<std::size_t>(r) * C + c] = tau_hat[c] / phi_hat[r];
    } else {
      tau_cur = sch.states[t].tau;
      for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c)
          sscale[static_cast<std::size_t>(r) * C + c] =
              sch.states[t].tau[c] / sch.states[t].phi[r];
    }
    op.adjoint_scaled(q, sscale, s);
    for (std::size_t j = 0; j < N; ++j) s[j] += x[j];
    if (!all_finite(s))
      throw std::runtime_error(
          "amp: non-finite effective observation at iteration " +
          std::to_string(t));
    done = t + 1;

    if (have_truth) {
      harden_all(p.prior, maps, s, tau_cur, L, hard);
      res.uer_trace.push_back(user_error_rate(hard, truth, L, B));
    }

    for (std::size_t l = 0; l < L; ++l) {
      const std::size_t off = l * static_cast<std::size_t>(B);
      const int c = maps.col_block(off);
      denoise(p.prior,
              std::span<const double>(s.data() + off,
                                      static_cast<std::size_t>(B)),
              EffectiveNoise(tau_cur[c]),
              std::span<double>(xnext.data() + off,
                                static_cast<std::size_t>(B)));
    }
    if (have_truth) res.mse_trace.push_back(mse_against(xnext, truth, L));
    res.se_psi_bar.push_back(mean_psi(sch.states[static_cast<std::size_t>(t) + 1]));
    if (opts.empirical_coeffs) {
      empirical_psi(xnext, maps, p.prior.E, L, psi_hat);
      phi_prev_hat = phi_hat;
    }
    std::swap(x, xnext);
    std::swap(q, q_prev);
  }

  harden_all(p.prior, maps, s, tau_cur, L, hard);
  res.xhat = std::move(hard);
  res.iters = done;
  if (!res.uer_trace.empty()) res.uer = res.uer_trace.back();
  res.mse_uer_bound = uer_mse_bound(p.prior, sch.states[done]);
  return res;
}

TrialResult amp_decode_iid(const DesignOperator& op, std::span<const double> y,
                           const SEParams& p, const AmpOptions& opts,
                           std::span<const double> truth) {
  validate_common(op, y, p, opts, truth);
  if (!op.base().is_trivial() || !p.base.is_trivial())
    throw std::invalid_argument("amp_decode_iid requires the trivial base");

  const std::size_t n = op.rows(), N = op.cols(), L = op.users();
  const int B = p.prior.B;
  const BlockMaps& maps = op.blocks();
  const bool have_truth = !truth.empty();

  const Schedule sch = resolve_schedule(p, opts.stop);
  const int T = sch.T;

  TrialResult res;
  std::vector<double> x(N, 0.0), xnext(N), s(N);
  std::vector<double> ax(n), q(n, 0.0), q_prev(n, 0.0);
  std::vector<double> tau_cur(1, 0.0), hard(N, 0.0);
  std::vector<double> psi_hat(1, p.prior.E), phi_hat(1), phi_prev_hat(1),
      tau_hat(1);

  res.se_psi_bar.push_back(mean_psi(sch.states[0]));
  if (have_truth) res.mse_trace.push_back(mse_against(x, truth, L));

  double q0_norm = 0.0;
  int done = 0;
  for (int t = 0; t <= T; ++t) {
    op.forward(x, ax);
    if (t == 0 || !opts.onsager) {
      for (std::size_t i = 0; i < n; ++i) q[i] = y[i] - ax[i];
    } else {
      const double coef =
          opts.empirical_coeffs
              ? p.mu * psi_hat[0] / phi_prev_hat[0]
              : p.mu * sch.states[t].psi[0] / sch.states[t - 1].tau[0];
      for (std::size_t i = 0; i < n; ++i)
        q[i] = y[i] - ax[i] + coef * q_prev[i];
    }
    if (!all_finite(q))
      throw std::runtime_error("amp: non-finite residual at iteration " +
                               std::to_string(t));
    const double qn = norm2(q);
    if (t == 0) {
      q0_norm = qn;
    } else if (qn > opts.explosion_ratio * q0_norm) {
      res.diverged = true;
      break;
    }

    if (opts.empirical_coeffs) {
      block_mean_sq(q, maps, phi_hat);
      tau_from_phi(p.base, phi_hat, tau_hat);
      tau_cur = tau_hat;
    } else {
      tau_cur = sch.states[t].tau;
    }
    op.adjoint(q, s);
    for (std::size_t j = 0; j < N; ++j) s[j] += x[j];
    if (!all_finite(s))
      throw std::runtime_error(
          "amp: non-finite effective observation at iteration " +
          std::to_string(t));
    done = t + 1;

    if (have_truth) {
      harden_all(p.prior, maps, s, tau_cur, L, hard);
      res.uer_trace.push_back(user_error_rate(hard, truth, L, B));
    }

    for (std::size_t l = 0; l < L; ++l) {
      const std::size_t off = l * static_cast<std::size_t>(B);
      denoise(p.prior,
              std::span<const double>(s.data() + off,
                                      static_cast<std::size_t>(B)),
              EffectiveNoise(tau_cur[0]),
              std::span<double>(xnext.data() + off,
                                static_cast<std::size_t>(B)));
    }
    if (have_truth) res.mse_trace.push_back(mse_against(xnext, truth, L));
    res.se_psi_bar.push_back(mean_psi(sch.states[static_cast<std::size_t>(t) + 1]));
    if (opts.empirical_coeffs) {
      empirical_psi(xnext, maps, p.prior.E, L, psi_hat);
      phi_prev_hat = phi_hat;
    }
    std::swap(x, xnext);
    std::swap(q, q_prev);
  }

  harden_all(p.prior, maps, s, tau_cur, L, hard);
  res.xhat = std::move(hard);
  res.iters = done;
  if (!res.uer_trace.empty()) res.uer = res.uer_trace.back();
  res.mse_uer_bound = uer_mse_bound(p.prior, sch.states[done]);
  return res;
}

}  // namespace gmac
