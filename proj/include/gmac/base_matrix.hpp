#pragma once

#include <cstddef>
#include <vector>

namespace gmac {

// Band-diagonal coupling profile with parameters (omega, lambda, rho):
//   R = lambda + omega - 1 rows, C = lambda columns,
//   W[r][c] = (1 - rho) / omega     for c <= r <= c + omega - 1,
//           = rho / (lambda - 1)    otherwise,
// so every column sums to exactly 1.  (1, 1, 0) gives the 1x1 matrix [1],
// which reproduces the uncoupled system.
struct BaseMatrix {
  int omega = 1;
  int lambda = 1;
  double rho = 0.0;
  int R = 1;
  int C = 1;
  std::vector<double> w;  // row-major R x C

  static BaseMatrix build(int omega, int lambda, double rho);
  static BaseMatrix trivial();

  double at(int r, int c) const {
    return w[static_cast<std::size_t>(r) * static_cast<std::size_t>(C) + c];
  }
  bool is_trivial() const { return R == 1 && C == 1; }

  // R / C = 1 + (omega - 1) / lambda: the factor by which the inner system is
  // denser than the outer one (the rate loss of coupling).
  double coupling_ratio() const;
  double mu_inner(double mu) const;
};

// Contiguous equal-size block index maps for rows of [n] and columns of [N].
// Internally 0-based; reported output adds 1.
struct BlockMaps {
  int R = 1;
  int C = 1;
  std::size_t rows_per_block = 0;
  std::size_t cols_per_block = 0;

  int row_block(std::size_t i) const {
    return static_cast<int>(i / rows_per_block);
  }
  int col_block(std::size_t j) const {
    return static_cast<int>(j / cols_per_block);
  }

  // Requires R | n and C | N.
  static BlockMaps make(std::size_t n, std::size_t N, const BaseMatrix& bm);
};

}  // namespace gmac
