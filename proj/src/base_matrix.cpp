#include "gmac/base_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gmac {

BaseMatrix BaseMatrix::build(int omega, int lambda, double rho) {
  if (omega < 1) throw std::invalid_argument("coupling width omega must be >= 1");
  if (lambda < 1)
    throw std::invalid_argument("coupling length lambda must be >= 1");
  if (omega > 1 && lambda < 2 * omega - 1)
    throw std::invalid_argument(
        "coupling length lambda must be >= 2*omega-1 (got lambda=" +
        std::to_string(lambda) + ", omega=" + std::to_string(omega) + ")");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("off-band mass rho must lie in [0, 1)");
  if (rho > 0.0 && lambda < 2)
    throw std::invalid_argument("rho > 0 requires lambda >= 2");

  BaseMatrix bm;
  bm.omega = omega;
  bm.lambda = lambda;
  bm.rho = rho;
  bm.R = lambda + omega - 1;
  bm.C = lambda;
  bm.w.assign(static_cast<std::size_t>(bm.R) * bm.C, 0.0);
  const double band = (1.0 - rho) / omega;
  const double off = lambda > 1 ? rho / (lambda - 1) : 0.0;
  for (int r = 0; r < bm.R; ++r) {
    for (int c = 0; c < bm.C; ++c) {
      const bool in_band = c <= r && r <= c + omega - 1;
      bm.w[static_cast<std::size_t>(r) * bm.C + c] = in_band ? band : off;
    }
  }
  return bm;
}

BaseMatrix BaseMatrix::trivial() { return build(1, 1, 0.0); }

double BaseMatrix::coupling_ratio() const {
  return static_cast<double>(R) / static_cast<double>(C);
}

double BaseMatrix::mu_inner(double mu) const {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  return coupling_ratio() * mu;
}

BlockMaps BlockMaps::make(std::size_t n, std::size_t N, const BaseMatrix& bm) {
  if (n == 0 || N == 0)
    throw std::invalid_argument("block maps need positive dimensions");
  if (n % static_cast<std::size_t>(bm.R) != 0)
    throw std::invalid_argument("row count " + std::to_string(n) +
                                " not divisible by R=" + std::to_string(bm.R));
  if (N % static_cast<std::size_t>(bm.C) != 0)
    throw std::invalid_argument("column count " + std::to_string(N) +
                                " not divisible by C=" + std::to_string(bm.C));
  BlockMaps m;
  m.R = bm.R;
  m.C = bm.C;
  m.rows_per_block = n / static_cast<std::size_t>(bm.R);
  m.cols_per_block = N / static_cast<std::size_t>(bm.C);
  return m;
}

}  // namespace gmac
