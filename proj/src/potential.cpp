#include "gmac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gmac/quad.hpp"
#include "gmac/scalar_channel.hpp"

namespace gmac {

namespace {

void validate_point(const SectionPrior& prior, double mu, double sigma2,
                    double psi) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("mu must be positive and finite");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("sigma2 must be positive and finite");
  if (!(psi >= 0.0) || psi > prior.E * (1.0 + 1e-12))
    throw std::domain_error("psi must lie in [0, E]");
}

// Ascending uniform grid on [0, E] plus logarithmic refinement near 0
// (minimisers collapse toward 0 at high Eb/N0, where uniform spacing is too
// coarse to seed the polish step).
std::vector<double> make_psi_grid(double E, int grid_size) {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(grid_size) + 220);
  for (int i = 0; i <= grid_size; ++i)
    g.push_back(E * static_cast<double>(i) / grid_size);
  for (int j = 1; j <= 208; ++j) {  // 16 points per decade, 13 decades
    const double v = E * std::pow(10.0, -static_cast<double>(j) / 16.0);
    if (v < E * 1e-13) break;
    g.push_back(v);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

template <typename F>
std::pair<double, double> golden_section(F&& f, double a, double b,
                                         double xtol) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

double potential(const SectionPrior& prior, double mu, double sigma2,
                 double psi) {
  validate_point(prior, mu, sigma2, psi);
  const auto& table = ScalarChannelTable::get(prior);
  const double x = mu * psi / sigma2;
  const double tau = sigma2 + mu * psi;
  const double bracket = std::log1p(x) - mu * psi / tau;
  return table.mi_nats(prior.E / tau) + bracket / (2.0 * mu);
}

double potential_derivative(const SectionPrior& prior, double mu,
                            double sigma2, double psi) {
  validate_point(prior, mu, sigma2, psi);
  const auto& table = ScalarChannelTable::get(prior);
  const double tau = sigma2 + mu * psi;
  const double mmse = prior.E * table.mmse_ratio(prior.E / tau);
  return mu / (2.0 * tau * tau) * (psi - mmse);
}

MinimizerSet minimizer_set(const SectionPrior& prior, double mu, double sigma2,
                           int grid_size, double refine_tol) {
  if (grid_size < 1024)
    throw std::invalid_argument("grid_size must be at least 1024");
  if (!(refine_tol > 0.0))
    throw std::invalid_argument("refine_tol must be positive");
  validate_point(prior, mu, sigma2, 0.0);
  const double E = prior.E;
  const auto f = [&](double psi) { return potential(prior, mu, sigma2, psi); };
  // Same sign as dF/dpsi with the positive mu/(2 tau^2) factor dropped.
  const auto& table = ScalarChannelTable::get(prior);
  const auto g = [&](double psi) {
    return psi - E * table.mmse_ratio(E / (sigma2 + mu * psi));
  };
  const std::vector<double> grid = make_psi_grid(E, grid_size);
  const std::size_t m = grid.size();
  std::vector<double> val(m);
  for (std::size_t i = 0; i < m; ++i) val[i] = f(grid[i]);

  struct Cand {
    double psi, f;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < m; ++i) {
    const bool left_ok = i == 0 || val[i] <= val[i - 1];
    const bool right_ok = i + 1 == m || val[i] <= val[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double a = i == 0 ? grid[0] : grid[i - 1];
    const double b = i + 1 == m ? grid[m - 1] : grid[i + 1];
    if (a == b) {
      cands.push_back({grid[i], val[i]});
      continue;
    }
    auto [x, fx] = golden_section(f, a, b, 1e-13 * E);
    // Golden section localises x only to ~sqrt(eps); snap interior minima
    // onto the derivative zero so they coincide with stationary points.
    double pl = std::max(a, x - 1e-6 * E), pr = std::min(b, x + 1e-6 * E);
    if (pl < pr && g(pl) < 0.0 && g(pr) > 0.0) {
      for (int it = 0; it < 200 && (pr - pl) > 1e-16 * E; ++it) {
        const double mid = 0.5 * (pl + pr);
        (g(mid) <= 0.0 ? pl : pr) = mid;
      }
      x = 0.5 * (pl + pr);
      fx = f(x);
    }
    if (val[i] < fx) {
      x = grid[i];
      fx = val[i];
    }
    cands.push_back({x, fx});
  }
  double fmin = cands.front().f;
  for (const auto& c : cands) fmin = std::min(fmin, c.f);

  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.psi < b.psi; });
  MinimizerSet out;
  out.f_min = fmin;
  for (const auto& c : cands) {
    if (c.f > fmin + refine_tol) continue;
    if (!out.psi.empty() && std::fabs(c.psi - out.psi.back()) <= 1e-9 * E)
      continue;
    out.psi.push_back(c.psi);
  }
  return out;
}

double largest_stationary(const SectionPrior& prior, double mu,
                          double sigma2) {
  validate_point(prior, mu, sigma2, 0.0);
  const auto& table = ScalarChannelTable::get(prior);
  const double E = prior.E;
  // Same sign as dF/dpsi; the positive mu/(2 tau^2) factor is dropped.
  const auto g = [&](double psi) {
    return psi - E * table.mmse_ratio(E / (sigma2 + mu * psi));
  };
  const std::vector<double> grid = make_psi_grid(E, 4096);
  double hi = grid.back(), ghi = g(hi);
  for (std::size_t k = grid.size() - 1; k-- > 0;) {
    const double lo = grid[k], glo = g(lo);
    if (ghi == 0.0) return hi;
    if (glo <= 0.0 && ghi > 0.0) {
      double a = lo, b = hi;
      for (int it = 0; it < 200 && (b - a) > 1e-15 * E; ++it) {
        const double mid = 0.5 * (a + b);
        (g(mid) <= 0.0 ? a : b) = mid;
      }
      return 0.5 * (a + b);
    }
    hi = lo;
    ghi = glo;
  }
  return 0.0;
}

double global_min_tau(const SectionPrior& prior, double mu, double sigma2) {
  const MinimizerSet ms = minimizer_set(prior, mu, sigma2);
  return sigma2 + mu * ms.psi.back();
}

double coupled_bound_tau(const SectionPrior& prior, double mu, double sigma2,
                         int omega, int lambda, double eps) {
  if (omega < 1 || lambda < 1 || (omega > 1 && lambda < 2 * omega - 1))
    throw std::invalid_argument("invalid coupling parameters");
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
  const double vartheta = 1.0 + static_cast<double>(omega - 1) / lambda;
  const MinimizerSet ms = minimizer_set(prior, vartheta * mu, sigma2);
  return sigma2 + vartheta * mu * (ms.psi.back() + eps);
}

MinEbn0 min_ebn0(const SectionPrior& prior, Scheme scheme, double mu,
                 double target_uer, double tol_db) {
  if (!(target_uer > 0.0 && target_uer < 1.0))
    throw std::invalid_argument("target_uer must lie in (0, 1)");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(tol_db > 0.0)) throw std::invalid_argument("tol_db must be positive");
  constexpr double kLoDb = -10.0, kHiDb = 40.0;
  if (scheme == Scheme::Converse) {
    const double M = std::exp2(prior.payload_bits());
    const double v = converse_min_ebn0(mu, M, target_uer);
    const double db = v > 0.0 ? 10.0 * std::log10(v) : kLoDb;
    return {std::clamp(db, kLoDb, kHiDb), true};
  }
  const auto meets_target = [&](double db) {
    const double sigma2 = prior.sigma2_for_ebn0(std::pow(10.0, db / 10.0));
    const double tau =
        scheme == Scheme::IidAmp
            ? sigma2 + mu * largest_stationary(prior, mu, sigma2)
            : global_min_tau(prior, mu, sigma2);
    return scalar::error_prob_r(prior.kind, prior.B, prior.E / tau) <=
           target_uer;
  };
  if (!meets_target(kHiDb)) return {kHiDb, false};
  if (meets_target(kLoDb)) return {kLoDb, true};
  double lo = kLoDb, hi = kHiDb;
  while (hi - lo > tol_db) {
    const double mid = 0.5 * (lo + hi);
    (meets_target(mid) ? hi : lo) = mid;
  }
  return {0.5 * (lo + hi), true};
}

ConverseTerms converse_terms(double mu, double M, double eps) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(M >= 2.0)) throw std::invalid_argument("M must be >= 2");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie in (0, 1)");
  const double log2M = std::log2(M);
  const double d = norm_q_inv(1.0 / M) - norm_q_inv(1.0 - eps);
  ConverseTerms t;
  t.single_user = d * std::fabs(d) / (2.0 * log2M);
  const double exponent =
      2.0 * mu * (log2M - eps * std::log2(M - 1.0) - binary_entropy_bits(eps));
  t.capacity = std::expm1(exponent * std::numbers::ln2) / (2.0 * mu * log2M);
  return t;
}

double converse_min_ebn0(double mu, double M, double eps) {
  const ConverseTerms t = converse_terms(mu, M, eps);
  return std::max(t.single_user, t.capacity);
}

RegionCurve region_curve(const SectionPrior& prior, Scheme scheme,
                         const std::vector<double>& mu_grid,
                         double target_uer) {
  if (mu_grid.empty()) throw std::invalid_argument("mu grid is empty");
  RegionCurve curve;
  curve.scheme = scheme;
  curve.target_uer = target_uer;
  curve.payload_bits = prior.payload_bits();
  std::vector<double> grid = mu_grid;
  std::sort(grid.begin(), grid.end());
  for (double mu : grid) {
    const MinEbn0 p = min_ebn0(prior, scheme, mu, target_uer);
    curve.points.push_back({mu, p.ebn0_db, p.reachable});
  }
  return curve;
}

}  // namespace gmac
