#include "gmac/scalar_channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "gmac/quad.hpp"

// Evaluation strategy
// -------------------
// Every functional here is an expectation over one section observed through
// s = x + sqrt(tau) Z, and depends on (E, tau) only through r = E / tau.
// With the active entry separated out, the inactive entries contribute a sum
// S of B-1 i.i.d. terms, so for any v >= 0 the Laplace transform factorises:
//   E[exp(-v S)] = g(v)^(B-1),  g a one-dimensional Gaussian integral.
// Two identities then reduce each expectation to nested 1-D quadratures:
//   1 / D       = integral_0^inf exp(-v D) dv
//   ln D        = integral_0^inf (exp(-v) - exp(-v D)) / v dv   (Frullani)
// All outer integrals run over w = ln v on uniform trapezoid grids (the
// integrands are smooth and decay exponentially in w at both ends), and the
// inner Gaussian integrals use uniform trapezoid grids in z with a step that
// shrinks like 1/sqrt(r), matching the analyticity strip of exp(-exp(.)).
// Everything is kept in logs until a final exp, so no intermediate quantity
// overflows even for r in the thousands.

namespace gmac {
namespace {

constexpr double kZMax = 8.75;           // phi(z) < 3e-18 beyond
constexpr double kWHi = 3.81;            // exp(-exp(w)) < 1e-19 beyond
constexpr double kWLoMmse = -42.0;       // exp(w) < 6e-19 below
constexpr double kHw = 0.25;
constexpr double kHls = 0.03125;

// 1 - exp(-exp(le)), evaluated stably from the log argument.
inline double trans(double le) {
  if (le > 3.9) return 1.0;
  if (le < -45.0) return std::exp(le);
  return -std::expm1(-std::exp(le));
}

// ln cosh(x), stable for large |x|.
inline double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

struct ZGrid {
  std::vector<double> z, w;  // weights include phi(z) * h, normalised to 1
};

ZGrid make_zgrid(double sqrt_r) {
  const double h = 0.35 / std::max(1.0, sqrt_r);
  const int half = static_cast<int>(std::ceil(kZMax / h));
  ZGrid g;
  g.z.reserve(2 * half + 1);
  g.w.reserve(2 * half + 1);
  double total = 0.0;
  for (int i = -half; i <= half; ++i) {
    const double z = i * h;
    const double w = norm_pdf(z) * h;
    g.z.push_back(z);
    g.w.push_back(w);
    total += w;
  }
  for (double& w : g.w) w /= total;
  return g;
}

// Uniform table over ls with clamped 4-point cubic lookup.
struct Table {
  double lo = 0.0, h = kHls;
  std::vector<double> v;

  double operator()(double x) const {
    if (v.empty()) return 0.0;
    const double u = (x - lo) / h;
    if (u <= 0.0) return v.front();
    const double last = static_cast<double>(v.size() - 1);
    if (u >= last) return v.back();
    std::size_t i = static_cast<std::size_t>(u);
    const double f = u - static_cast<double>(i);
    if (i == 0 || i + 2 >= v.size()) {
      return v[i] + f * (v[i + 1] - v[i]);
    }
    const double m0 = 0.5 * (v[i + 1] - v[i - 1]);
    const double m1 = 0.5 * (v[i + 2] - v[i]);
    const double d = v[i + 1] - v[i];
    const double a = m0 + m1 - 2.0 * d;
    const double b = 3.0 * d - 2.0 * m0 - m1;
    return v[i] + f * (m0 + f * (b + f * a));
  }
};

// ----- Flat prior -----------------------------------------------------------
//
// With the active entry at position 1 and a = sqrt(r),
//   V = exp(-r - a Z1) * S,  S = sum_{j>=2} exp(a Z_j),
//   mmse/E = E[V / (1 + V)],  I = r + ln B - E ln(exp(r + a Z1) + S).
// Per-entry factor: gbar(ls) = 1 - E_z[exp(-exp(ls + a z))].

struct FlatTables {
  Table gbar;     // clamped to [0, 1]
  double sqrt_r;
};

FlatTables build_flat_tables(int B, double r, double ls_lo, double ls_hi) {
  FlatTables t;
  t.sqrt_r = std::sqrt(r);
  const ZGrid zg = make_zgrid(t.sqrt_r);
  t.gbar.lo = ls_lo;
  const std::size_t n = static_cast<std::size_t>(std::ceil((ls_hi - ls_lo) / kHls)) + 2;
  t.gbar.v.resize(n);
  (void)B;
  for (std::size_t k = 0; k < n; ++k) {
    const double ls = ls_lo + static_cast<double>(k) * kHls;
    if (ls + 0.5 * r < -42.0) {            // gbar <= exp(ls + r/2)
      t.gbar.v[k] = 0.0;
      continue;
    }
    if (ls - kZMax * t.sqrt_r > 3.9) {     // 1 - gbar <= exp(-exp(ls - zmax a))
      t.gbar.v[k] = 1.0;
      continue;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < zg.z.size(); ++i)
      acc += zg.w[i] * trans(ls + t.sqrt_r * zg.z[i]);
    t.gbar.v[k] = std::min(acc, 1.0);
  }
  return t;
}

struct NodeVals {
  double mmse_ratio;
  double mi_nats;
};

NodeVals flat_node(int B, double r) {
  if (B == 1) return {0.0, 0.0};
  const double sr = std::sqrt(r);
  const double lnB = std::log(static_cast<double>(B));
  const double w_lo_mi = -(1.5 * r + lnB + 60.0);
  const double lc_min = -r - kZMax * sr;
  const double lc_max = -r + kZMax * sr;
  const double ls_lo = std::min(w_lo_mi, lc_min + kWLoMmse) - 0.5;
  const double ls_hi = std::max(r + kWHi, lc_max + kWHi) + 0.5;
  const FlatTables t = build_flat_tables(B, r, ls_lo, ls_hi);
  const double Bm1 = static_cast<double>(B - 1);

  // H(ls) = 1 - (1 - gbar)^(B-1), the tail factor of E[exp(-v S)].
  auto H = [&](double ls) {
    const double g = std::clamp(t.gbar(ls), 0.0, 1.0);
    if (g >= 1.0) return 1.0;
    return -std::expm1(Bm1 * std::log1p(-g));
  };

  // mmse/E = E_z1[ integral_0^inf exp(-v) H(ln v + ln c(z1)) dv ],
  // c(z1) = exp(-r - a z1).
  const int nw = static_cast<int>(std::ceil((kWHi - kWLoMmse) / kHw)) + 1;
  std::vector<double> wgrid(nw), wweight(nw);
  double wtot = 0.0;
  for (int i = 0; i < nw; ++i) {
    const double w = kWLoMmse + i * kHw;
    const double u = std::exp(w);
    wgrid[i] = w;
    wweight[i] = std::exp(-u) * u * kHw;
    wtot += wweight[i];
  }
  for (double& w : wweight) w /= wtot;  // exactness of the H == 1 limit

  const double hz1 = 0.35 / std::max(1.0, sr);
  const int half1 = static_cast<int>(std::ceil(kZMax / hz1));
  double mmse_acc = 0.0;
  double z1tot = 0.0;
  std::vector<double> z1w(2 * half1 + 1);
  for (int i = -half1; i <= half1; ++i) {
    z1w[i + half1] = norm_pdf(i * hz1) * hz1;
    z1tot += z1w[i + half1];
  }
  for (int i = -half1; i <= half1; ++i) {
    const double lc = -r - sr * (i * hz1);
    double F = 0.0;
    for (int k = 0; k < nw; ++k) F += wweight[k] * H(wgrid[k] + lc);
    mmse_acc += (z1w[i + half1] / z1tot) * F;
  }
  const double mmse_ratio =
      std::clamp(mmse_acc, 0.0, 1.0 - 1.0 / static_cast<double>(B));

  // I = r + ln B - J,
  // J = integral (T1 - T2) dw,  T1 = exp(-exp(w)),
  // T2 = G1(w) g(w)^(B-1),  G1(w) = 1 - gbar(w + r).
  double J = 0.0;
  for (double w = w_lo_mi; w <= kWHi; w += kHw) {
    const double one_minus_t1 = trans(w);
    const double ga = std::clamp(t.gbar(w + r), 0.0, 1.0);
    const double gb = std::clamp(t.gbar(w), 0.0, 1.0);
    double one_minus_t2;
    if (ga >= 1.0 || gb >= 1.0) {
      one_minus_t2 = 1.0;
    } else {
      one_minus_t2 = -std::expm1(std::log1p(-ga) + Bm1 * std::log1p(-gb));
    }
    J += kHw * (one_minus_t2 - one_minus_t1);
  }
  const double mi = std::clamp(r + lnB - J, 0.0, lnB);
  return {mmse_ratio, mi};
}

// ----- Binary-modulated prior ------------------------------------------------
//
// Active entry u1 = r + a Z1 enters through cosh/sinh; inactive entries
// contribute T = sum_{j>=2} cosh(a Z_j).  Using cosh u - sinh u = exp(-u):
//   mmse/E = E[(exp(-u1) + T) / (cosh u1 + T)]        (both parts positive)
//   I = ln(2B) + r - ln 2 - E ln(cosh u1 + T).
// Per-entry factors: gcbar(lv) = 1 - E_z[exp(-v cosh(a z))] and
// gc1(lv) = E_z[cosh(a z) exp(-v cosh(a z))] (stored as a log).

NodeVals binary_node(int B, double r) {
  const double sr = std::sqrt(r);
  const double lnB = std::log(static_cast<double>(B));
  const double Bm1 = static_cast<double>(B - 1);
  const ZGrid zg = make_zgrid(sr);

  const double w_lo = -(1.5 * r + lnB + 60.0);
  const double w_hi = kWHi;

  Table gcbar, lgc1;
  gcbar.lo = lgc1.lo = w_lo - 0.5;
  const std::size_t n =
      static_cast<std::size_t>(std::ceil((w_hi + 1.0 - gcbar.lo) / kHls)) + 2;
  gcbar.v.resize(n);
  lgc1.v.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lv = gcbar.lo + static_cast<double>(k) * kHls;
    if (lv + 0.5 * r < -42.0) {
      gcbar.v[k] = 0.0;
      lgc1.v[k] = 0.5 * r;  // gc1 -> E[cosh(a z)] = exp(r/2)
      continue;
    }
    double acc_g = 0.0;
    double acc_c = 0.0;
    for (std::size_t i = 0; i < zg.z.size(); ++i) {
      const double lch = log_cosh(sr * zg.z[i]);
      acc_g += zg.w[i] * trans(lv + lch);
      const double expo = lch - std::exp(std::min(lv + lch, 700.0));
      if (expo > -745.0) acc_c += zg.w[i] * std::exp(expo);
    }
    gcbar.v[k] = std::min(acc_g, 1.0);
    lgc1.v[k] = acc_c > 0.0 ? std::log(acc_c) : -1e300;
  }

  const double hz1 = 0.35 / std::max(1.0, sr);
  const int half1 = static_cast<int>(std::ceil(kZMax / hz1));
  std::vector<double> z1w(2 * half1 + 1), u1(2 * half1 + 1), lch1(2 * half1 + 1);
  double z1tot = 0.0;
  for (int i = -half1; i <= half1; ++i) {
    const double z = i * hz1;
    z1w[i + half1] = norm_pdf(z) * hz1;
    z1tot += z1w[i + half1];
    u1[i + half1] = r + sr * z;
    lch1[i + half1] = log_cosh(u1[i + half1]);
  }
  for (double& w : z1w) w /= z1tot;

  double mmse_acc = 0.0;
  double J = 0.0;
  for (double w = w_lo; w <= w_hi; w += kHw) {
    // Inner z1 sums with the dv = exp(w) dw measure folded into the exponent.
    double inner_e = 0.0;   // E_z1[exp(-u1) exp(-v cosh u1)] * v
    double inner_0 = 0.0;   // E_z1[exp(-v cosh u1)] * v
    double gcu1 = 0.0;      // E_z1[1 - exp(-v cosh u1)]
    for (std::size_t i = 0; i < z1w.size(); ++i) {
      const double le = w + lch1[i];
      const double ve = std::exp(std::min(le, 700.0));
      gcu1 += z1w[i] * trans(le);
      const double e0 = w - ve;
      if (e0 > -745.0) {
        const double base = std::exp(e0);
        inner_0 += z1w[i] * base;
        const double e1 = e0 - u1[i];
        if (e1 > -745.0) inner_e += z1w[i] * std::exp(e1);
      }
    }
    const double gb = std::clamp(gcbar(w), 0.0, 1.0);
    const double lg_pow_m1 = gb >= 1.0 ? -1e300 : Bm1 * std::log1p(-gb);
    // mmse accumulators
    double contrib = inner_e * std::exp(std::max(lg_pow_m1, -745.0));
    if (B >= 2) {
      const double lg_pow_m2 =
          gb >= 1.0 ? -1e300 : (Bm1 - 1.0) * std::log1p(-gb);
      const double lq = lgc1(w) + lg_pow_m2;
      if (lq > -700.0) contrib += inner_0 * Bm1 * std::exp(lq);
    }
    mmse_acc += kHw * contrib;
    // Frullani integrand for E ln(cosh u1 + T)
    const double one_minus_t1 = trans(w);
    double one_minus_t2;
    if (gcu1 >= 1.0 || gb >= 1.0) {
      one_minus_t2 = 1.0;
    } else {
      one_minus_t2 = -std::expm1(std::log1p(-gcu1) + lg_pow_m1);
    }
    J += kHw * (one_minus_t2 - one_minus_t1);
  }
  const double mmse_ratio = std::clamp(mmse_acc, 0.0, 1.0);
  const double ent = lnB + M_LN2;  // ln(2B)
  const double mi = std::clamp(ent + r - M_LN2 - J, 0.0, ent);
  return {mmse_ratio, mi};
}

NodeVals eval_node(PriorKind kind, int B, double r) {
  return kind == PriorKind::Flat ? flat_node(B, r) : binary_node(B, r);
}

}  // namespace

namespace scalar {

double section_entropy_nats(PriorKind kind, int B) {
  const double lnB = std::log(static_cast<double>(B));
  return kind == PriorKind::Flat ? lnB : lnB + M_LN2;
}

double saturation_r(PriorKind kind, int B) {
  const double le = std::max(section_entropy_nats(kind, B), 1.0);
  return std::max(4.0 * (le + 34.0),
                  (std::sqrt(2.0 * le) + 10.0) * (std::sqrt(2.0 * le) + 10.0) + 25.0);
}

double mmse_ratio(PriorKind kind, int B, double r) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::domain_error("mmse_ratio: r must be positive and finite");
  if (kind == PriorKind::Flat && B == 1) return 0.0;
  if (r >= saturation_r(kind, B)) return 0.0;
  return eval_node(kind, B, r).mmse_ratio;
}

double mi_nats(PriorKind kind, int B, double r) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::domain_error("mi_nats: r must be positive and finite");
  if (kind == PriorKind::Flat && B == 1) return 0.0;
  if (r >= saturation_r(kind, B)) return section_entropy_nats(kind, B);
  return eval_node(kind, B, r).mi_nats;
}

double error_prob_r(PriorKind kind, int B, double r) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw std::domain_error("error_prob_r: r must be nonnegative and finite");
  const double a = std::sqrt(r);
  const double Bm1 = static_cast<double>(B - 1);
  if (kind == PriorKind::Flat) {
    if (B == 1) return 0.0;
    auto f = [&](double z) {
      return -std::expm1(Bm1 * log_norm_cdf(a + z));
    };
    return std::clamp(gauss_weighted_integral(f, -9.5, 9.5), 0.0, 1.0);
  }
  // Correct iff s1 > 0 and s1 > |s_j| for all inactive j.
  const double tail = norm_q(a);
  if (B == 1) return tail;
  auto f = [&](double z) {
    const double q2 = 2.0 * norm_q(a + z);
    if (q2 >= 1.0) return 1.0;
    return -std::expm1(Bm1 * std::log1p(-q2));
  };
  const double lo = std::max(-a, -9.5);
  return std::clamp(tail + gauss_weighted_integral(f, lo, 9.5), 0.0, 1.0);
}

}  // namespace scalar

// ----- Interpolation tables ---------------------------------------------------

namespace {

// Monotone cubic Hermite (Fritsch-Carlson) on a uniform grid.
struct Pchip {
  double lo = 0.0, h = 1.0;
  std::vector<double> y, m;

  void build(double lo_, double h_, std::vector<double> y_) {
    lo = lo_;
    h = h_;
    y = std::move(y_);
    const std::size_t n = y.size();
    m.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / h;
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        m[i] = 0.0;
      } else {
        m[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);  // harmonic mean
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (d[i] == 0.0) {
        m[i] = m[i + 1] = 0.0;
      }
    }
  }

  double operator()(double x) const {
    if (y.empty()) return 0.0;
    const double u = (x - lo) / h;
    if (u <= 0.0) return y.front();
    const double last = static_cast<double>(y.size() - 1);
    if (u >= last) return y.back();
    const std::size_t i = static_cast<std::size_t>(u);
    const double f = u - static_cast<double>(i);
    const double y0 = y[i], y1 = y[i + 1];
    const double m0 = m[i] * h, m1 = m[i + 1] * h;
    const double f2 = f * f, f3 = f2 * f;
    return (2.0 * f3 - 3.0 * f2 + 1.0) * y0 + (f3 - 2.0 * f2 + f) * m0 +
           (-2.0 * f3 + 3.0 * f2) * y1 + (f3 - f2) * m1;
  }
};

// Pool-adjacent-violators projection onto non-increasing sequences.
void isotonic_non_increasing(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> val(n);
  std::vector<std::size_t> len(n);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    val[blocks] = v[i];
    len[blocks] = 1;
    ++blocks;
    while (blocks > 1 && val[blocks - 2] < val[blocks - 1]) {
      const double merged =
          (val[blocks - 2] * static_cast<double>(len[blocks - 2]) +
           val[blocks - 1] * static_cast<double>(len[blocks - 1])) /
          static_cast<double>(len[blocks - 2] + len[blocks - 1]);
      len[blocks - 2] += len[blocks - 1];
      val[blocks - 2] = merged;
      --blocks;
    }
  }
  std::size_t pos = 0;
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t k = 0; k < len[b]; ++k) v[pos++] = val[b];
}

constexpr double kTableRMin = 1e-4;
constexpr int kNodesPerDecade = 64;
constexpr double kLogFloor = -745.0;  // stands in for ln(0)

}  // namespace

struct ScalarChannelTable::Impl {
  PriorKind kind;
  int B;
  double r_min, r_cap;
  double mmse_at_rmin;
  double entropy;
  Pchip lmmse;
  // Mutual information at the lmmse knots, accumulated by integrating the
  // interpolated mmse (I-MMSE identity dI/dr = mmse_ratio(r)/2).  Deriving
  // the MI from the same table that drives state evolution keeps the
  // potential's gradient numerically consistent with its values; the raw
  // quadrature in scalar::mi_nats stays available as the accuracy oracle.
  std::vector<double> mi_prefix;
  bool mmse_zero = false;  // Flat B = 1

  double mmse_at_w(double w) const {
    const double v = lmmse(w);
    return v <= kLogFloor ? 0.0 : std::exp(v);
  }
  // Integral of mmse_ratio(e^w) e^w / 2 dw over [a, b] within one cell.
  double cell_integral(double a, double b) const {
    const GaussLegendre& gl = gauss_legendre(8);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t k = 0; k < gl.x.size(); ++k) {
      const double w = mid + half * gl.x[k];
      acc += gl.w[k] * mmse_at_w(w) * std::exp(w);
    }
    return 0.5 * half * acc;
  }
};

ScalarChannelTable::ScalarChannelTable(PriorKind kind, int B) : impl_(new Impl) {
  impl_->kind = kind;
  impl_->B = B;
  impl_->entropy = scalar::section_entropy_nats(kind, B);
  impl_->r_min = kTableRMin;
  impl_->r_cap = scalar::saturation_r(kind, B);
  if (kind == PriorKind::Flat && B == 1) {
    impl_->mmse_zero = true;
    impl_->mmse_at_rmin = 0.0;
    return;
  }
  const double l_lo = std::log(impl_->r_min);
  const double l_hi = std::log(impl_->r_cap);
  const double h = M_LN10 / kNodesPerDecade;
  const std::size_t n = static_cast<std::size_t>(std::ceil((l_hi - l_lo) / h)) + 1;
  std::vector<double> lm(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::exp(l_lo + static_cast<double>(i) * h);
    const NodeVals nv = eval_node(kind, B, std::min(r, impl_->r_cap));
    lm[i] = nv.mmse_ratio > 0.0 ? std::log(nv.mmse_ratio) : kLogFloor;
  }
  isotonic_non_increasing(lm);
  impl_->lmmse.build(l_lo, h, std::move(lm));
  impl_->mmse_at_rmin = std::exp(impl_->lmmse.y.front());
  impl_->mi_prefix.resize(n);
  // Below r_min the mmse ratio is clamped constant, so I(r_min) is linear.
  impl_->mi_prefix[0] = 0.5 * impl_->mmse_at_rmin * impl_->r_min;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = l_lo + static_cast<double>(i) * h;
    impl_->mi_prefix[i + 1] = impl_->mi_prefix[i] + impl_->cell_integral(a, a + h);
  }
}

ScalarChannelTable::~ScalarChannelTable() = default;

double ScalarChannelTable::mmse_ratio(double r) const {
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::domain_error("ScalarChannelTable::mmse_ratio: bad r");
  if (impl_->mmse_zero) return 0.0;
  if (r >= impl_->r_cap) return 0.0;
  if (r <= impl_->r_min) return impl_->mmse_at_rmin;
  const double v = impl_->lmmse(std::log(r));
  return v <= kLogFloor ? 0.0 : std::exp(v);
}

double ScalarChannelTable::mi_nats(double r) const {
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::domain_error("ScalarChannelTable::mi_nats: bad r");
  if (impl_->mmse_zero) return 0.0;
  if (r <= impl_->r_min) return 0.5 * impl_->mmse_at_rmin * r;
  const double lo = impl_->lmmse.lo, h = impl_->lmmse.h;
  const std::size_t n = impl_->mi_prefix.size();
  const double w = std::log(std::min(r, impl_->r_cap));
  const double u = (w - lo) / h;
  if (u >= static_cast<double>(n - 1)) return impl_->mi_prefix.back();
  const std::size_t i =
      std::min(static_cast<std::size_t>(u), n - 2);
  const double a = lo + static_cast<double>(i) * h;
  return impl_->mi_prefix[i] + impl_->cell_integral(a, w);
}

const ScalarChannelTable& ScalarChannelTable::get(PriorKind kind, int B) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<ScalarChannelTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(static_cast<int>(kind), B);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::unique_ptr<ScalarChannelTable>(
                                new ScalarChannelTable(kind, B)))
             .first;
  }
  return *it->second;
}

const ScalarChannelTable& ScalarChannelTable::get(const SectionPrior& prior) {
  return get(prior.kind, prior.B);
}

}  // namespace gmac
