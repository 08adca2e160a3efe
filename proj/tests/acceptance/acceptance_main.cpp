// Release gate: every criterion prints exactly one PASS/FAIL line with the
// measured values next to their limits.  The process exit code is the number
// of failed criteria, so CTest fails if any gate fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "gmac/amp.hpp"
#include "gmac/base_matrix.hpp"
#include "gmac/config.hpp"
#include "gmac/design_operator.hpp"
#include "gmac/potential.hpp"
#include "gmac/prior.hpp"
#include "gmac/quad.hpp"
#include "gmac/rng.hpp"
#include "gmac/sim.hpp"
#include "gmac/state_evolution.hpp"

using namespace gmac;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int id, const std::string& name, bool pass,
            const std::string& detail, double secs) {
  if (!pass) ++g_failures;
  std::printf("[%d] %-34s %s  %s  (%.1fs)\n", id, name.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

struct Instance {
  DesignOperator op;
  SEParams p;
  std::vector<double> x, y;
};

Instance make_instance(const SectionPrior& prior, const BaseMatrix& bm,
                       std::size_t n, std::size_t L, OperatorKind kind,
                       std::uint64_t op_seed, std::uint64_t inst_seed,
                       double sigma2) {
  Instance inst{DesignOperator::sample(bm, n, L, prior.B, kind, op_seed),
                SEParams{}, {}, {}};
  Rng mrng(derive_seed(inst_seed, kStreamMessage, 0));
  inst.x = sample_message(prior, static_cast<int>(L), mrng);
  inst.y.resize(n);
  inst.op.forward(inst.x, inst.y);
  Rng nrng(derive_seed(inst_seed, kStreamNoise, 0));
  const double sd = std::sqrt(sigma2);
  for (auto& v : inst.y) v += sd * nrng.gaussian();
  inst.p.prior = prior;
  inst.p.base = bm;
  inst.p.mu = static_cast<double>(L) / static_cast<double>(n);
  inst.p.sigma2 = sigma2;
  return inst;
}

// ---- 1: per-iteration concentration of the decoder on its schedule ----

void criterion_concentration() {
  Timer timer;
  const auto prior = SectionPrior::flat(4, 1.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.6));
  const std::size_t L = 1024;
  const std::size_t n = 1463;  // round(L / 0.7)
  const int seeds = 20;

  AmpOptions opts;
  opts.stop = StopRule::se_converged(1e-4);

  std::vector<double> mean_trace;
  std::vector<double> psi_trace;
  double per_seed_worst = 0.0;
  double uer_sum = 0.0;
  double pe = 0.0;
  int diverged = 0;
  for (int s = 1; s <= seeds; ++s) {
    auto inst =
        make_instance(prior, BaseMatrix::trivial(), n, L,
                      OperatorKind::DenseGaussian, static_cast<std::uint64_t>(s),
                      static_cast<std::uint64_t>(101 * s), sigma2);
    const auto r = amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x);
    if (r.diverged) {
      ++diverged;
      continue;
    }
    if (mean_trace.empty()) {
      mean_trace.assign(r.mse_trace.size(), 0.0);
      psi_trace = r.se_psi_bar;
      const double psi_T = r.se_psi_bar[static_cast<std::size_t>(r.iters) - 1];
      pe = error_prob(prior, EffectiveNoise(sigma2 + inst.p.mu * psi_T));
    }
    for (std::size_t t = 0; t < r.mse_trace.size(); ++t) {
      mean_trace[t] += r.mse_trace[t] / seeds;
      per_seed_worst = std::max(
          per_seed_worst, std::abs(r.mse_trace[t] - r.se_psi_bar[t]) / prior.E);
    }
    uer_sum += r.uer * static_cast<double>(L);
  }
  double mean_worst = 0.0;
  for (std::size_t t = 0; t < mean_trace.size(); ++t)
    mean_worst = std::max(mean_worst,
                          std::abs(mean_trace[t] - psi_trace[t]) / prior.E);
  const double sections = static_cast<double>(L) * seeds;
  const double uer_hat = uer_sum / sections;
  const double se3 = 3.0 * std::sqrt(pe * (1.0 - pe) / sections);
  const bool pass = diverged == 0 && mean_worst <= 0.05 &&
                    std::abs(uer_hat - pe) <= se3;
  // Context for the operating point: distance to the analytic waterfall.
  const double thr = min_ebn0(prior, Scheme::IidAmp,
                              static_cast<double>(L) / n, 1e-3)
                         .ebn0_db;
  report(1, "schedule concentration", pass,
         fmt("worst |mse-psi| = %.4f E (limit 0.05, per-seed %.4f); "
             "|uer-pe| = %.4f (limit 3se = %.4f); diverged %d; point sits "
             "%.2f dB below the analytic waterfall (%.2f dB)",
             mean_worst, per_seed_worst, std::abs(uer_hat - pe), se3,
             diverged, thr - 6.0, thr),
         timer.seconds());
}

// ---- 2: coupled fixed point saturates the optimal threshold ----

void criterion_saturation() {
  Timer timer;
  const auto prior = SectionPrior::flat(256, 1.0);
  const double mu = 0.25;
  const int omega = 8, lambda = 40;
  const double rho = 0.01;
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 1.0));  // 10 dB

  SEParams p;
  p.prior = prior;
  p.base = BaseMatrix::build(omega, lambda, rho);
  p.mu = mu;
  p.sigma2 = sigma2;
  const auto fp = se_fixed_point(p);
  double max_tau_sc = 0.0;
  for (double t : fp.state.tau) max_tau_sc = std::max(max_tau_sc, t);

  const double tau_bar = coupled_bound_tau(prior, mu, sigma2, omega, lambda,
                                           1e-3);
  const double tau_fp = sigma2 + mu * largest_stationary(prior, mu, sigma2);
  const double tau_star = global_min_tau(prior, mu, sigma2);
  const double margin = tau_fp - tau_star;

  const bool pass = fp.converged && max_tau_sc <= tau_bar && margin > 1e-9;
  report(2, "threshold saturation", pass,
         fmt("max tau_sc = %.6f <= tau_bar = %.6f; uncoupled tau_fp = %.4f vs "
             "tau* = %.4f (margin %.4f)",
             max_tau_sc, tau_bar, tau_fp, tau_star, margin),
         timer.seconds());
}

// ---- 3: shape of the achievability region curves ----

void criterion_region_shape() {
  Timer timer;
  const double target = 1e-3;

  // The two curves agree exactly below a separation density and split
  // discontinuously there (first-order transition), so the boundary is
  // checked as a measured landmark with the same +-10% density tolerance as
  // the cap-hit onset, with the agreement gap evaluated inside the region.
  struct Payload {
    SectionPrior prior;
    std::vector<double> coincide;  // inside the claimed agreement region
    double sep_claim;              // claimed separation density
    double diverge_mu;             // clearly separated density
    double onset_lo, onset_hi, onset_center, onset_tol;
  };
  const Payload payloads[] = {
      {SectionPrior::flat(4, 1.0), {0.3, 0.5, 0.65, 0.72}, 0.80, 0.9, 0.80,
       1.40, 1.0, 0.10},
      {SectionPrior::flat(256, 1.0), {0.05, 0.10, 0.135}, 0.15, 0.18, 0.15,
       0.35, 0.2, 0.02},
  };

  bool pass = true;
  std::string detail;
  for (const auto& pl : payloads) {
    auto gap_at = [&](double mu) {
      const auto iid = min_ebn0(pl.prior, Scheme::IidAmp, mu, target);
      const auto sc = min_ebn0(pl.prior, Scheme::ScAmp, mu, target);
      if (!sc.reachable) return -1.0;           // sc must always reach
      if (!iid.reachable) return 99.0;          // cap-hit counts as split
      return iid.ebn0_db - sc.ebn0_db;
    };

    double worst_coincide = 0.0;
    for (double mu : pl.coincide) {
      const double g = gap_at(mu);
      if (g < 0.0) pass = false;
      worst_coincide = std::max(worst_coincide, std::abs(g));
    }
    if (worst_coincide > 0.05) pass = false;

    // Locate the separation density: first mu where the gap exceeds the
    // agreement tolerance.
    double lo = pl.coincide.back(), hi = pl.diverge_mu;
    double sep = 0.0;
    if (gap_at(lo) <= 0.05 && gap_at(hi) > 0.05) {
      for (int it = 0; it < 9; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gap_at(mid) <= 0.05 ? lo : hi) = mid;
      }
      sep = 0.5 * (lo + hi);
      if (std::abs(sep - pl.sep_claim) > 0.10 * pl.sep_claim) pass = false;
    } else {
      pass = false;
    }

    const double diverge_gap = gap_at(pl.diverge_mu);
    if (diverge_gap <= 0.05) pass = false;

    // Bisect the user density where the iid curve stops being reachable.
    auto reachable = [&](double mu) {
      return min_ebn0(pl.prior, Scheme::IidAmp, mu, target).reachable;
    };
    double rlo = pl.onset_lo, rhi = pl.onset_hi;
    double onset = 0.0;
    if (reachable(rlo) && !reachable(rhi)) {
      for (int it = 0; it < 10; ++it) {
        const double mid = 0.5 * (rlo + rhi);
        (reachable(mid) ? rlo : rhi) = mid;
      }
      onset = 0.5 * (rlo + rhi);
      if (std::abs(onset - pl.onset_center) > pl.onset_tol) pass = false;
    } else {
      pass = false;
    }
    detail += fmt("%db: coincide %.3f dB, separation mu = %.3f (want %.2f "
                  "+-10%%), diverge gap %.2f dB, cap onset mu = %.3f (want "
                  "%.2f +- %.2f); ",
                  static_cast<int>(pl.prior.payload_bits()), worst_coincide,
                  sep, pl.sep_claim, diverge_gap, onset, pl.onset_center,
                  pl.onset_tol);
  }
  report(3, "region curve shape", pass, detail, timer.seconds());
}

// ---- 4: large-payload limit constants ----

void criterion_limit_constants() {
  Timer timer;
  const double lim = 1.0 / (2.0 * std::log(2.0));
  const double amp_gap = std::abs(amp_spectral_threshold(1e12) - lim);

  double worst_res = 0.0;
  bool all_positive = true;
  for (const double e : {0.75, 1.0, 2.0, 5.0, 31.6, 1000.0}) {
    const auto s = optimal_spectral_threshold(e);
    all_positive = all_positive && s.positive;
    worst_res = std::max(
        worst_res,
        std::abs(s.value - 0.5 * std::log2(1.0 + 2.0 * s.value * e)));
  }

  double worst_conv = 0.0;
  for (const double mu : {0.2, 0.7}) {
    for (const double M : {4.0, 256.0}) {
      const double S = mu * std::log2(M);
      const double limit = (std::pow(2.0, 2.0 * S) - 1.0) / (2.0 * S);
      const double got = converse_terms(mu, M, 1e-9).capacity;
      worst_conv = std::max(worst_conv, std::abs(got / limit - 1.0));
    }
  }

  const bool pass =
      amp_gap <= 1e-5 && all_positive && worst_res <= 1e-10 &&
      worst_conv <= 1e-3;
  report(4, "large-payload constants", pass,
         fmt("|s_amp(1e12) - 1/(2 ln 2)| = %.2e (limit 1e-5); s_opt residual "
             "%.2e (limit 1e-10); converse limit gap %.2e (limit 1e-3)",
             amp_gap, worst_res, worst_conv),
         timer.seconds());
}

// ---- 5: potential gradient vs finite differences ----

void criterion_gradient() {
  Timer timer;
  Rng rng(17);
  const auto prior = SectionPrior::flat(4, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double mu = 0.1 + 1.4 * rng.uniform();
    const double sigma2 =
        std::exp(std::log(0.05) + std::log(1.0 / 0.05) * rng.uniform());
    const double psi = std::min(0.999, std::max(1e-3, rng.uniform())) * prior.E;
    const double h = 1e-5 * std::max(psi, 0.1);
    const double fd = (potential(prior, mu, sigma2, psi + h) -
                       potential(prior, mu, sigma2, psi - h)) /
                      (2.0 * h);
    const double ex = potential_derivative(prior, mu, sigma2, psi);
    const double tau = sigma2 + mu * psi;
    const double scale =
        std::max(std::abs(ex), mu / (2.0 * tau * tau) * prior.E * 1e-3);
    worst = std::max(worst, std::abs(fd - ex) / scale);
  }
  report(5, "potential gradient check", worst <= 1e-4,
         fmt("worst relative error %.2e over 20 random points (limit 1e-4)",
             worst),
         timer.seconds());
}

// ---- 6: oracle equivalences ----

bool bit_identical(const TrialResult& a, const TrialResult& b) {
  return a.xhat == b.xhat && a.mse_trace == b.mse_trace &&
         a.se_psi_bar == b.se_psi_bar && a.uer_trace == b.uer_trace &&
         a.uer == b.uer && a.iters == b.iters && a.diverged == b.diverged;
}

std::vector<double> materialize(const DesignOperator& op) {
  const std::size_t n = op.rows(), N = op.cols();
  std::vector<double> a(n * N, 0.0), e(N, 0.0), col(n);
  for (std::size_t j = 0; j < N; ++j) {
    e[j] = 1.0;
    op.forward(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) a[i * N + j] = col[i];
  }
  return a;
}

double scaled_adjoint_oracle_gap(const DesignOperator& op,
                                 std::uint64_t seed) {
  const auto a = materialize(op);
  const auto& bm = op.base();
  const auto& maps = op.blocks();
  Rng rng(seed);
  std::vector<double> q(op.rows());
  for (auto& v : q) v = rng.gaussian();
  std::vector<double> s_block(static_cast<std::size_t>(bm.R) * bm.C);
  for (auto& s : s_block) s = 0.25 + rng.uniform();
  std::vector<double> got(op.cols());
  op.adjoint_scaled(q, s_block, got);
  double worst = 0.0;
  for (std::size_t j = 0; j < op.cols(); ++j) {
    double want = 0.0;
    const int c = maps.col_block(j);
    for (std::size_t i = 0; i < op.rows(); ++i)
      want += s_block[static_cast<std::size_t>(maps.row_block(i)) * bm.C + c] *
              a[i * op.cols() + j] * q[i];
    worst = std::max(worst, std::abs(got[j] - want));
  }
  return worst;
}

void criterion_oracles() {
  Timer timer;
  // (a) the coupled code path on a trivial base is the iid decoder.
  const auto prior = SectionPrior::flat(4, 1.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.6));
  bool identical = true;
  for (const auto kind :
       {OperatorKind::DenseGaussian, OperatorKind::StructuredDct}) {
    for (const bool empirical : {true, false}) {
      auto inst = make_instance(prior, BaseMatrix::trivial(), 160, 120, kind,
                                99, 7, sigma2);
      AmpOptions opts;
      opts.stop = StopRule::fixed(12);
      opts.empirical_coeffs = empirical;
      const auto a = amp_decode_coupled(inst.op, inst.y, inst.p, opts, inst.x);
      const auto b = amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x);
      identical = identical && bit_identical(a, b);
    }
  }

  // (b) the block-scaled adjoint against an entrywise oracle.
  BaseMatrix hand;
  hand.omega = 2;
  hand.lambda = 2;
  hand.rho = 0.0;
  hand.R = 3;
  hand.C = 2;
  hand.w = {0.5, 0.2, 0.3, 0.5, 0.2, 0.3};
  const auto op_dense = DesignOperator::sample(hand, 12, 4, 2,
                                               OperatorKind::DenseGaussian, 77);
  const auto op_dct =
      DesignOperator::sample(BaseMatrix::build(2, 4, 0.2), 40, 16, 2,
                             OperatorKind::StructuredDct, 99);
  const double adj_gap = std::max(scaled_adjoint_oracle_gap(op_dense, 770),
                                  scaled_adjoint_oracle_gap(op_dct, 990));

  // (c) closed-form section error probability against argmax Monte Carlo.
  double worst_pe_sigmas = 0.0;
  for (const int B : {2, 4, 8}) {
    const auto pb = SectionPrior::flat(B, 1.0);
    const double r = 4.0;
    const double tau = pb.E / r;
    const double sq = std::sqrt(tau);
    Rng rng(500 + B);
    std::vector<double> x(B), s(B), xmap(B);
    const int trials = 150000;
    int errors = 0;
    for (int t = 0; t < trials; ++t) {
      sample_section(pb, rng, x);
      for (int i = 0; i < B; ++i) s[i] = x[i] + sq * rng.gaussian();
      hard_decision(pb, s, EffectiveNoise(tau), xmap);
      if (xmap != x) ++errors;
    }
    const double mc = static_cast<double>(errors) / trials;
    const double cf = error_prob(pb, EffectiveNoise(tau));
    const double se = std::sqrt(std::max(cf * (1.0 - cf), 1e-12) / trials);
    worst_pe_sigmas = std::max(worst_pe_sigmas, std::abs(mc - cf) / se);
  }

  const bool pass = identical && adj_gap <= 1e-10 && worst_pe_sigmas <= 3.0;
  report(6, "oracle equivalences", pass,
         fmt("trivial-base paths identical: %s; adjoint oracle gap %.1e "
             "(limit 1e-10); pe mc gap %.2f sigma (limit 3)",
             identical ? "yes" : "no", adj_gap, worst_pe_sigmas),
         timer.seconds());
}

// ---- 7: decoding-wave iteration bound on a recommended design ----

void criterion_wave_bound() {
  Timer timer;
  const double mu = 0.08, ebn0_db = 4.0;
  const int B = 256;
  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  const auto rec = recommend_design(mu, B, ebn0);
  if (rec.outcome != DesignOutcome::Coupled) {
    report(7, "wave iteration bound", false,
           "design recommendation did not select a coupled system",
           timer.seconds());
    return;
  }
  const auto ct =
      coupled_design_thresholds(mu, B, ebn0, rec.omega, rec.lambda);
  const bool premise = ct.delta_positive && ct.window_ok &&
                       static_cast<double>(rec.omega) > ct.omega_star &&
                       ct.rho_star > 0.0;
  const long bound = wave_iteration_bound(ct, rec.omega, rec.lambda);

  // Wave-completion target on the mse profile; delta chosen so the target
  // sits strictly inside (0, E).
  const double delta = 0.45, k = 1.0;
  const double f = std::pow(static_cast<double>(B), -k * delta * delta) /
                   (delta * std::sqrt(std::log(static_cast<double>(B))));

  const auto prior = SectionPrior::flat(B, 1.0);
  SEParams p;
  p.prior = prior;
  p.base = BaseMatrix::build(rec.omega, rec.lambda,
                             std::min(ct.rho_star, 0.5));
  p.mu = mu;
  p.sigma2 = prior.sigma2_for_ebn0(ebn0);
  SEState st = se_init(p);
  int T_meas = -1;
  for (int t = 1; t <= 200 && T_meas < 0; ++t) {
    st = se_step(p, st);
    double mx = 0.0;
    for (double ps : st.psi) mx = std::max(mx, ps);
    if (mx <= prior.E * f) T_meas = t;
  }
  const bool pass = premise && f < 1.0 && T_meas >= 1 && T_meas <= bound;
  report(7, "wave iteration bound", pass,
         fmt("design omega=%d lambda=%d rho=%.4f; measured T = %d <= bound "
             "%ld (target %.3f E, premise %s)",
             rec.omega, rec.lambda, std::min(ct.rho_star, 0.5), T_meas, bound,
             f, premise ? "holds" : "violated"),
         timer.seconds());
}

// ---- 8: per-density coupling-width selection is near-monotone ----

void criterion_width_schedule() {
  Timer timer;
  struct Point {
    double mu, ebn0_db;
  };
  // Operating points: per-density coupled threshold (lambda = 20) + 4 dB,
  // so the finite-size wave completes inside the iteration budget.
  const Point points[] = {{0.9, 11.75}, {1.1, 13.72}, {1.3, 16.93}};

  std::vector<int> selections;
  std::string measured;
  for (const auto& pt : points) {
    ExperimentConfig cfg;
    cfg.prior_kind = PriorKind::Flat;
    cfg.B = 4;
    cfg.energy = 1.0;
    cfg.ebn0_db = pt.ebn0_db;
    cfg.mu = pt.mu;
    cfg.omega = 2;  // coupled; the sweep scans omega
    cfg.lambda = 20;
    cfg.rho = 0.0;
    cfg.op_kind = OperatorKind::StructuredDct;
    cfg.stop = StopRule::fixed(300);
    cfg.users = 1000;
    cfg.trials = 24;
    cfg.master_seed = 1;
    cfg.sweep_mode = "omega_opt";
    cfg.omega_min = 1;
    cfg.omega_max = 9;
    cfg.mu_grid = {pt.mu};
    cfg.validate();
    const auto rows = run_sweep(cfg, 0);
    const auto best = pick_best_omega(rows);
    if (best.size() != 1) {
      report(8, "coupling-width schedule", false,
             "omega sweep returned an unexpected row set", timer.seconds());
      return;
    }
    selections.push_back(best[0].omega);
    measured += fmt("mu=%.1f -> omega=%d (uer %.4f); ", pt.mu, best[0].omega,
                    best[0].uer_mean);
  }

  // Within +-2 of some monotone nondecreasing schedule <=> no later
  // selection drops more than 4 below an earlier one.
  bool pass = true;
  for (std::size_t i = 0; i < selections.size(); ++i)
    for (std::size_t j = i + 1; j < selections.size(); ++j)
      if (selections[i] - selections[j] > 4) pass = false;
  report(8, "coupling-width schedule", pass,
         measured + "widths fit a monotone schedule within +-2",
         timer.seconds());
}

}  // namespace

int main() {
  std::printf("acceptance gate: decoder, analysis and design criteria\n");
  criterion_concentration();
  criterion_saturation();
  criterion_region_shape();
  criterion_limit_constants();
  criterion_gradient();
  criterion_oracles();
  criterion_wave_bound();
  criterion_width_schedule();
  std::printf("%d of 8 criteria passed\n", 8 - g_failures);
  return g_failures;
}
