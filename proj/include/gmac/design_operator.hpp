#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmac/base_matrix.hpp"

namespace gmac {

enum class OperatorKind { DenseGaussian, StructuredDct };

// Random linear map A : R^N -> R^n (N = L * B) with block variance profile
//   Var(A_ij) = W[r(i)][c(j)] / (n / R),
// so every column has unit squared norm in expectation.
//
// DenseGaussian stores the matrix explicitly.  StructuredDct realises each
// column block as a sign-randomised orthonormal DCT with independently
// subsampled rows per (row block, column block) pair, scaled so the block
// second moments match the dense profile; forward and adjoint then cost
// O(C M log M) instead of O(n N).
//
// Immutable after construction; forward/adjoint are reentrant.
class DesignOperator {
 public:
  // Requires R | n and C | L.  Dense sampling refuses instances with
  // n * N > max_dense_elements.
  static DesignOperator sample(const BaseMatrix& base, std::size_t n,
                               std::size_t L, int B, OperatorKind kind,
                               std::uint64_t seed,
                               std::size_t max_dense_elements = std::size_t{1}
                                                                << 31);

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return N_; }
  std::size_t users() const { return L_; }
  int section_size() const { return B_; }
  OperatorKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  const BaseMatrix& base() const { return base_; }
  const BlockMaps& blocks() const { return maps_; }

  void forward(std::span<const double> x, std::span<double> y) const;
  // out = A^T q.
  void adjoint(std::span<const double> q, std::span<double> out) const;
  // out = (S (.) A)^T q where S_ij = s_block[r(i) * C + c(j)] is block
  // constant; evaluated per block, never materialising S entrywise.
  void adjoint_scaled(std::span<const double> q,
                      std::span<const double> s_block,
                      std::span<double> out) const;

  // Binary snapshot carrying kind, dimensions, base parameters and seed; load
  // rebuilds the operator deterministically by re-sampling.
  void save(const std::string& path) const;
  static DesignOperator load(const std::string& path);

 private:
  DesignOperator() = default;

  std::size_t n_ = 0, N_ = 0, L_ = 0;
  int B_ = 1;
  OperatorKind kind_ = OperatorKind::DenseGaussian;
  std::uint64_t seed_ = 0;
  BaseMatrix base_;
  BlockMaps maps_;

  // Dense storage: row-major n x N.
  std::vector<double> dense_;

  // DCT storage, per column block c: transform length M, column positions and
  // signs; per (r, c) block: sampled row positions (excluding the constant
  // row 0) and the scale alpha = sqrt(W_rc * M / rows_per_block).
  std::size_t M_ = 0;
  std::vector<std::vector<std::uint32_t>> col_pos_;   // [C][cols_per_block]
  std::vector<std::vector<double>> col_sign_;         // [C][cols_per_block]
  std::vector<std::vector<std::uint32_t>> row_pos_;   // [R*C][rows_per_block]
  std::vector<double> alpha_;                         // [R*C]
};

}  // namespace gmac
