#include "gmac/dct.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace gmac {

namespace {

// Iterative radix-2 Cooley-Tukey; sign = -1 forward, +1 inverse (unscaled).
void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Even-odd reordering reduces the length-N DCT-II to one length-N complex
// FFT:  with v[k] = x[2k], v[N-1-k] = x[2k+1],
//   sum_n x[n] cos(pi (2n+1) j / (2N)) = Re(V[j] exp(-i pi j / (2N))).
void dct2(std::span<const double> in, std::span<double> out) {
  const std::size_t N = in.size();
  if (out.size() != N) throw std::invalid_argument("dct2: size mismatch");
  if (!is_power_of_two(N)) throw std::invalid_argument("dct2: length must be a power of two");
  if (N == 1) {
    out[0] = in[0];
    return;
  }
  std::vector<std::complex<double>> v(N);
  for (std::size_t k = 0; k < N / 2; ++k) {
    v[k] = in[2 * k];
    v[N - 1 - k] = in[2 * k + 1];
  }
  fft_pow2(v, -1);
  const double s0 = std::sqrt(1.0 / static_cast<double>(N));
  const double s = std::sqrt(2.0 / static_cast<double>(N));
  out[0] = s0 * v[0].real();
  for (std::size_t j = 1; j < N; ++j) {
    const double ang = -M_PI * static_cast<double>(j) / (2.0 * static_cast<double>(N));
    out[j] = s * (v[j].real() * std::cos(ang) - v[j].imag() * std::sin(ang));
  }
}

// Exact inverse of dct2: rebuild V from the cosine coefficients using the
// conjugate symmetry of the FFT of a real sequence, invert, undo the
// even-odd reordering.
void dct3(std::span<const double> in, std::span<double> out) {
  const std::size_t N = in.size();
  if (out.size() != N) throw std::invalid_argument("dct3: size mismatch");
  if (!is_power_of_two(N)) throw std::invalid_argument("dct3: length must be a power of two");
  if (N == 1) {
    out[0] = in[0];
    return;
  }
  const double inv_s0 = std::sqrt(static_cast<double>(N));
  const double inv_s = std::sqrt(static_cast<double>(N) / 2.0);
  std::vector<std::complex<double>> v(N);
  v[0] = std::complex<double>(inv_s0 * in[0], 0.0);
  for (std::size_t j = 1; j < N; ++j) {
    const double cj = inv_s * in[j];
    const double cnj = inv_s * in[N - j];
    const double ang = M_PI * static_cast<double>(j) / (2.0 * static_cast<double>(N));
    v[j] = std::complex<double>(std::cos(ang), std::sin(ang)) *
           std::complex<double>(cj, -cnj);
  }
  fft_pow2(v, +1);
  const double inv_n = 1.0 / static_cast<double>(N);
  for (std::size_t k = 0; k < N / 2; ++k) {
    out[2 * k] = v[k].real() * inv_n;
    out[2 * k + 1] = v[N - 1 - k].real() * inv_n;
  }
}

}  // namespace gmac
