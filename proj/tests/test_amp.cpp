#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gmac/amp.hpp"
#include "gmac/base_matrix.hpp"
#include "gmac/design_operator.hpp"
#include "gmac/prior.hpp"
#include "gmac/rng.hpp"
#include "gmac/state_evolution.hpp"

using namespace gmac;

namespace {

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

bool bit_identical(const TrialResult& a, const TrialResult& b) {
  return a.xhat == b.xhat && a.mse_trace == b.mse_trace &&
         a.se_psi_bar == b.se_psi_bar && a.uer_trace == b.uer_trace &&
         a.uer == b.uer && a.mse_uer_bound == b.mse_uer_bound &&
         a.iters == b.iters && a.diverged == b.diverged;
}

// Largest per-iteration gap between the empirical mse trace and the
// deterministic schedule, in units of E.
double worst_schedule_gap(const TrialResult& r, double E) {
  double worst = 0.0;
  for (std::size_t t = 0; t < r.mse_trace.size(); ++t)
    worst = std::max(worst, std::abs(r.mse_trace[t] - r.se_psi_bar[t]) / E);
  return worst;
}

}  // namespace

TEST_CASE("coupled decoder on the trivial base is bit-identical to the iid one") {
  const auto prior = SectionPrior::flat(4, 1.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.6));
  for (const auto kind :
       {OperatorKind::DenseGaussian, OperatorKind::StructuredDct}) {
    for (const bool empirical : {true, false}) {
      CAPTURE(static_cast<int>(kind));
      CAPTURE(empirical);
      auto inst = make_instance(prior, BaseMatrix::trivial(), 160, 120, kind,
                                99, 7, sigma2);
      AmpOptions opts;
      opts.stop = StopRule::fixed(12);
      opts.empirical_coeffs = empirical;
      const auto a = amp_decode_coupled(inst.op, inst.y, inst.p, opts, inst.x);
      const auto b = amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x);
      CHECK(bit_identical(a, b));
    }
  }
}

TEST_CASE("near-noiseless overdetermined instance decodes exactly") {
  const auto prior = SectionPrior::flat(4, 1.0);
  auto inst = make_instance(prior, BaseMatrix::trivial(), 64, 2,
                            OperatorKind::DenseGaussian, 5, 6, 1e-12);
  AmpOptions opts;
  opts.stop = StopRule::fixed(10);
  const auto r = amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x);
  CHECK(r.uer == 0.0);
  CHECK(r.xhat == inst.x);
}

TEST_CASE("degenerate single-point support always decodes") {
  const auto prior = SectionPrior::flat(1, 1.0);
  BaseMatrix bm = BaseMatrix::trivial();
  Instance inst{DesignOperator::sample(bm, 48, 32, 1,
                                       OperatorKind::DenseGaussian, 31),
                SEParams{}, {}, {}};
  Rng mrng(derive_seed(9, kStreamMessage, 0));
  inst.x = sample_message(prior, 32, mrng);
  inst.y.resize(48);
  inst.op.forward(inst.x, inst.y);
  Rng nrng(derive_seed(9, kStreamNoise, 0));
  for (auto& v : inst.y) v += 0.7 * nrng.gaussian();
  inst.p.prior = prior;
  inst.p.base = bm;
  inst.p.mu = 32.0 / 48.0;
  inst.p.sigma2 = 0.49;
  AmpOptions opts;
  opts.stop = StopRule::fixed(5);
  const auto r = amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x);
  CHECK(r.uer == 0.0);
}

TEST_CASE("coupled decode bookkeeping: trace shapes, support, final bound") {
  const auto prior = SectionPrior::flat(4, 1.0);
  const auto bm = BaseMatrix::build(3, 7, 0.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 1.0));
  auto inst = make_instance(prior, bm, 189, 126, OperatorKind::StructuredDct,
                            21, 22, sigma2);
  AmpOptions opts;
  opts.stop = StopRule::fixed(9);
  const auto r = amp_decode_coupled(inst.op, inst.y, inst.p, opts, inst.x);
  CHECK(!r.diverged);
  CHECK(r.iters == 10);
  CHECK(r.mse_trace.size() == 11);
  CHECK(r.se_psi_bar.size() == 11);
  CHECK(r.uer_trace.size() == 10);
  CHECK(r.uer == r.uer_trace.back());
  CHECK(r.mse_trace[0] == doctest::Approx(prior.E).epsilon(1e-12));
  for (std::size_t t = 0; t + 1 < r.mse_trace.size(); ++t)
    CHECK(r.mse_trace[t + 1] <= r.mse_trace[t] + 0.05 * prior.E);
  const double amp = prior.amplitude();
  for (double v : r.xhat) CHECK((v == 0.0 || v == amp));
  CHECK(r.mse_uer_bound ==
        doctest::Approx(4.0 * r.se_psi_bar.back() / prior.E).epsilon(1e-12));
}

TEST_CASE("prescribed coefficients track the schedule at a well-margined point") {
  const auto prior = SectionPrior::flat(4, 1.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.9));
  AmpOptions opts;
  opts.stop = StopRule::se_converged(1e-4);
  opts.empirical_coeffs = false;
  double worst = 0.0, uer_sum = 0.0;
  double pe = 0.0;
  int sections = 0;
  for (const std::uint64_t seed : {1, 2, 3}) {
    auto inst = make_instance(prior, BaseMatrix::trivial(), 2048, 1024,
                              OperatorKind::DenseGaussian, seed, seed * 101,
                              sigma2);
    const auto r =
        amp_decode_coupled(inst.op, inst.y, inst.p, opts, inst.x);
    REQUIRE(!r.diverged);
    worst = std::max(worst, worst_schedule_gap(r, prior.E));
    uer_sum += r.uer * 1024.0;
    sections += 1024;
    // Hardening reads s^T whose effective noise is tau at psi^T.
    const double psi_T = r.se_psi_bar[static_cast<std::size_t>(r.iters) - 1];
    pe = error_prob(prior, EffectiveNoise(sigma2 + inst.p.mu * psi_T));
  }
  CHECK(worst <= 0.05);
  const double uer_hat = uer_sum / sections;
  const double gate = std::max(3.0 * std::sqrt(pe * (1.0 - pe) / sections),
                               3.0 / sections);
  CHECK(std::abs(uer_hat - pe) <= gate);
}

TEST_CASE("residual-estimated coefficients track the schedule as well") {
  const auto prior = SectionPrior::flat(4, 1.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.9));
  auto inst = make_instance(prior, BaseMatrix::trivial(), 2048, 1024,
                            OperatorKind::DenseGaussian, 8, 37, sigma2);
  AmpOptions opts;
  opts.stop = StopRule::fixed(12);
  const auto r = amp_decode_coupled(inst.op, inst.y, inst.p, opts, inst.x);
  REQUIRE(!r.diverged);
  CHECK(worst_schedule_gap(r, prior.E) <= 0.05);
}

TEST_CASE("error rate along the trajectory respects the mse-based bound") {
  const auto prior = SectionPrior::flat(4, 1.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.9));
  auto inst = make_instance(prior, BaseMatrix::trivial(), 2048, 1024,
                            OperatorKind::StructuredDct, 3, 29, sigma2);
  AmpOptions opts;
  opts.stop = StopRule::fixed(8);
  const auto r = amp_decode_coupled(inst.op, inst.y, inst.p, opts, inst.x);
  REQUIRE(!r.diverged);
  const double slack = 3.0 / std::sqrt(1024.0);
  for (std::size_t t = 0; t < r.uer_trace.size(); ++t)
    CHECK(r.uer_trace[t] <= 4.0 * r.se_psi_bar[t + 1] / prior.E + slack);
}

TEST_CASE("removing the residual correction breaks schedule tracking") {
  const auto prior = SectionPrior::flat(4, 1.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.9));
  auto inst = make_instance(prior, BaseMatrix::trivial(), 2048, 1024,
                            OperatorKind::StructuredDct, 4, 31, sigma2);
  AmpOptions opts;
  opts.stop = StopRule::fixed(12);
  opts.onsager = false;
  opts.empirical_coeffs = false;
  const auto r = amp_decode_coupled(inst.op, inst.y, inst.p, opts, inst.x);
  CHECK(worst_schedule_gap(r, prior.E) > 0.05);
}

TEST_CASE("stop rules resolve the documented horizons") {
  const auto prior = SectionPrior::flat(4, 1.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.9));
  auto inst = make_instance(prior, BaseMatrix::trivial(), 96, 64,
                            OperatorKind::DenseGaussian, 12, 41, sigma2);
  AmpOptions opts;

  opts.stop = StopRule::fixed(0);
  auto r = amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x);
  CHECK(r.iters == 1);
  CHECK(r.mse_trace.size() == 2);
  CHECK(r.uer_trace.size() == 1);

  opts.stop = StopRule::se_converged(1e9);
  r = amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x);
  CHECK(r.iters == 1);

  opts.stop = StopRule::se_converged(1e-5, 3);
  r = amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x);
  CHECK(r.iters == 4);

  // The analytic-horizon rule needs a flat prior and a feasible design.
  opts.stop = StopRule::se_bound();
  SEParams bad = inst.p;
  bad.prior = SectionPrior::binary_modulated(4, 1.0);
  CHECK_THROWS_AS(amp_decode_iid(inst.op, inst.y, bad, opts, inst.x),
                  std::invalid_argument);
  CHECK_THROWS_AS(amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x),
                  std::domain_error);
}

TEST_CASE("explosion guard aborts the trial and truncates the traces") {
  const auto prior = SectionPrior::flat(4, 1.0);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.9));
  auto inst = make_instance(prior, BaseMatrix::trivial(), 96, 64,
                            OperatorKind::DenseGaussian, 12, 41, sigma2);
  AmpOptions opts;
  opts.stop = StopRule::fixed(12);
  opts.explosion_ratio = 1e-9;
  const auto r = amp_decode_iid(inst.op, inst.y, inst.p, opts, inst.x);
  CHECK(r.diverged);
  CHECK(r.iters < 13);
  CHECK(r.mse_trace.size() == static_cast<std::size_t>(r.iters) + 1);
  CHECK(r.uer_trace.size() == static_cast<std::size_t>(r.iters));
}

TEST_CASE("repeat runs are bit-identical") {
  const auto prior = SectionPrior::binary_modulated(8, 1.0);
  const auto bm = BaseMatrix::build(2, 4, 0.1);
  const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, 0.9));
  auto inst = make_instance(prior, bm, 100, 80, OperatorKind::StructuredDct,
                            77, 53, sigma2);
  AmpOptions opts;
  opts.stop = StopRule::fixed(6);
  const auto a = amp_decode_coupled(inst.op, inst.y, inst.p, opts, inst.x);
  const auto b = amp_decode_coupled(inst.op, inst.y, inst.p, opts, inst.x);
  CHECK(bit_identical(a, b));
}

TEST_CASE("user_error_rate counts exact section mismatches") {
  const double a = 2.0;
  const std::vector<double> xhat = {a, 0.0, 0.0, a, a, 0.0};
  const std::vector<double> truth = {a, 0.0, a, 0.0, a, 0.0};
  CHECK(user_error_rate(xhat, truth, 3, 2) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(user_error_rate(xhat, truth, 4, 2), std::invalid_argument);
}
