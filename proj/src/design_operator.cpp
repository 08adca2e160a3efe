#include "gmac/design_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gmac/dct.hpp"
#include "gmac/rng.hpp"

namespace gmac {

namespace {

constexpr char kMagic[8] = {'G', 'M', 'A', 'C', 'O', 'P', '0', '1'};

// First k entries of a uniformly random permutation of {lo, ..., hi}.
std::vector<std::uint32_t> sample_without_replacement(std::uint32_t lo,
                                                      std::uint32_t hi,
                                                      std::size_t k, Rng& rng) {
  std::vector<std::uint32_t> pool(hi - lo + 1);
  std::iota(pool.begin(), pool.end(), lo);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("operator snapshot: truncated file");
  return v;
}

}  // namespace

DesignOperator DesignOperator::sample(const BaseMatrix& base, std::size_t n,
                                      std::size_t L, int B, OperatorKind kind,
                                      std::uint64_t seed,
                                      std::size_t max_dense_elements) {
  if (B < 1) throw std::invalid_argument("section size B must be >= 1");
  if (L % static_cast<std::size_t>(base.C) != 0)
    throw std::invalid_argument("user count " + std::to_string(L) +
                                " not divisible by C=" + std::to_string(base.C));
  const std::size_t N = L * static_cast<std::size_t>(B);
  DesignOperator op;
  op.n_ = n;
  op.N_ = N;
  op.L_ = L;
  op.B_ = B;
  op.kind_ = kind;
  op.seed_ = seed;
  op.base_ = base;
  op.maps_ = BlockMaps::make(n, N, base);
  const std::size_t mr = op.maps_.rows_per_block;
  const std::size_t mc = op.maps_.cols_per_block;
  const int R = base.R, C = base.C;

  if (kind == OperatorKind::DenseGaussian) {
    if (N != 0 && n > max_dense_elements / N)
      throw std::length_error(
          "dense operator would need " + std::to_string(n) + " x " +
          std::to_string(N) + " entries, above the budget of " +
          std::to_string(max_dense_elements) +
          " (raise max_dense_elements or use the DCT kind)");
    op.dense_.assign(n * N, 0.0);
    for (int r = 0; r < R; ++r) {
      for (int c = 0; c < C; ++c) {
        const double wrc = base.at(r, c);
        if (wrc == 0.0) continue;
        Rng rng(derive_seed(seed, kStreamDesign,
                            static_cast<std::uint64_t>(r) * C + c));
        const double sd = std::sqrt(wrc / static_cast<double>(mr));
        for (std::size_t i = 0; i < mr; ++i) {
          double* row = op.dense_.data() + (static_cast<std::size_t>(r) * mr + i) * N +
                        static_cast<std::size_t>(c) * mc;
          for (std::size_t j = 0; j < mc; ++j) row[j] = sd * rng.gaussian();
        }
      }
    }
    return op;
  }

  op.M_ = next_power_of_two(std::max(mr + 1, mc));
  op.col_pos_.resize(C);
  op.col_sign_.resize(C);
  op.row_pos_.resize(static_cast<std::size_t>(R) * C);
  op.alpha_.assign(static_cast<std::size_t>(R) * C, 0.0);
  const std::uint64_t col_stream_base = static_cast<std::uint64_t>(R) * C;
  for (int c = 0; c < C; ++c) {
    Rng rng(derive_seed(seed, kStreamDesign, col_stream_base + c));
    op.col_pos_[c] = sample_without_replacement(
        0, static_cast<std::uint32_t>(op.M_ - 1), mc, rng);
    op.col_sign_[c].resize(mc);
    for (std::size_t j = 0; j < mc; ++j)
      op.col_sign_[c][j] = (rng.next_u64() & 1u) ? -1.0 : 1.0;
  }
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      const double wrc = base.at(r, c);
      if (wrc == 0.0) continue;
      const std::size_t b = static_cast<std::size_t>(r) * C + c;
      Rng rng(derive_seed(seed, kStreamDesign, b));
      // Row 0 of the DCT is constant and carries 1/M of every column's
      // energy; excluding it makes the expected block column norm exactly
      // alpha^2 mr / M.
      op.row_pos_[b] = sample_without_replacement(
          1, static_cast<std::uint32_t>(op.M_ - 1), mr, rng);
      op.alpha_[b] = std::sqrt(wrc * static_cast<double>(op.M_) /
                               static_cast<double>(mr));
    }
  }
  return op;
}

void DesignOperator::forward(std::span<const double> x,
                             std::span<double> y) const {
  if (x.size() != N_ || y.size() != n_)
    throw std::invalid_argument("forward: shape mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  const std::size_t mr = maps_.rows_per_block;
  const std::size_t mc = maps_.cols_per_block;
  if (kind_ == OperatorKind::DenseGaussian) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = dense_.data() + i * N_;
      double acc = 0.0;
      for (std::size_t j = 0; j < N_; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
    return;
  }
  std::vector<double> padded(M_), u(M_);
  for (int c = 0; c < base_.C; ++c) {
    std::fill(padded.begin(), padded.end(), 0.0);
    const double* xc = x.data() + static_cast<std::size_t>(c) * mc;
    for (std::size_t j = 0; j < mc; ++j)
      padded[col_pos_[c][j]] = col_sign_[c][j] * xc[j];
    dct2(padded, u);
    for (int r = 0; r < base_.R; ++r) {
      const std::size_t b = static_cast<std::size_t>(r) * base_.C + c;
      const double a = alpha_[b];
      if (a == 0.0) continue;
      double* yr = y.data() + static_cast<std::size_t>(r) * mr;
      const auto& rows = row_pos_[b];
      for (std::size_t i = 0; i < mr; ++i) yr[i] += a * u[rows[i]];
    }
  }
}

void DesignOperator::adjoint(std::span<const double> q,
                             std::span<double> out) const {
  const std::vector<double> ones(
      static_cast<std::size_t>(base_.R) * base_.C, 1.0);
  adjoint_scaled(q, ones, out);
}

void DesignOperator::adjoint_scaled(std::span<const double> q,
                                    std::span<const double> s_block,
                                    std::span<double> out) const {
  if (q.size() != n_ || out.size() != N_)
    throw std::invalid_argument("adjoint_scaled: shape mismatch");
  if (s_block.size() != static_cast<std::size_t>(base_.R) * base_.C)
    throw std::invalid_argument("adjoint_scaled: scale matrix must be R x C");
  for (double s : s_block)
    if (!std::isfinite(s))
      throw std::invalid_argument("adjoint_scaled: non-finite scale entry");
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t mr = maps_.rows_per_block;
  const std::size_t mc = maps_.cols_per_block;
  if (kind_ == OperatorKind::DenseGaussian) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = dense_.data() + i * N_;
      const double* sb = s_block.data() + static_cast<std::size_t>(maps_.row_block(i)) * base_.C;
      const double qi = q[i];
      for (int c = 0; c < base_.C; ++c) {
        const double coef = sb[c] * qi;
        if (coef == 0.0) continue;
        double* oc = out.data() + static_cast<std::size_t>(c) * mc;
        const double* rc = row + static_cast<std::size_t>(c) * mc;
        for (std::size_t j = 0; j < mc; ++j) oc[j] += coef * rc[j];
      }
    }
    return;
  }
  std::vector<double> v(M_), u(M_);
  for (int c = 0; c < base_.C; ++c) {
    std::fill(v.begin(), v.end(), 0.0);
    for (int r = 0; r < base_.R; ++r) {
      const std::size_t b = static_cast<std::size_t>(r) * base_.C + c;
      const double as = alpha_[b] * s_block[b];
      if (alpha_[b] == 0.0 || as == 0.0) continue;
      const double* qr = q.data() + static_cast<std::size_t>(r) * mr;
      const auto& rows = row_pos_[b];
      for (std::size_t i = 0; i < mr; ++i) v[rows[i]] += as * qr[i];
    }
    dct3(v, u);
    double* oc = out.data() + static_cast<std::size_t>(c) * mc;
    for (std::size_t j = 0; j < mc; ++j)
      oc[j] = col_sign_[c][j] * u[col_pos_[c][j]];
  }
}

void DesignOperator::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic, sizeof(kMagic));
  put(os, static_cast<std::uint32_t>(kind_));
  put(os, static_cast<std::uint64_t>(n_));
  put(os, static_cast<std::uint64_t>(L_));
  put(os, static_cast<std::uint32_t>(B_));
  put(os, static_cast<std::uint32_t>(base_.omega));
  put(os, static_cast<std::uint32_t>(base_.lambda));
  put(os, base_.rho);
  put(os, seed_);
  if (!os) throw std::runtime_error("failed writing " + path);
}

DesignOperator DesignOperator::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error(path + " is not an operator snapshot");
  const auto kind = static_cast<OperatorKind>(take<std::uint32_t>(is));
  const auto n = static_cast<std::size_t>(take<std::uint64_t>(is));
  const auto L = static_cast<std::size_t>(take<std::uint64_t>(is));
  const int B = static_cast<int>(take<std::uint32_t>(is));
  const int omega = static_cast<int>(take<std::uint32_t>(is));
  const int lambda = static_cast<int>(take<std::uint32_t>(is));
  const double rho = take<double>(is);
  const std::uint64_t seed = take<std::uint64_t>(is);
  const BaseMatrix base = BaseMatrix::build(omega, lambda, rho);
  // Dense rebuilds may legitimately be large; the snapshot asserts the
  // operator existed once, so bypass the default budget.
  return sample(base, n, L, B, kind, seed,
                std::numeric_limits<std::size_t>::max());
}

}  // namespace gmac
