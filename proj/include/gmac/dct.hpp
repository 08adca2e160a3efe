#pragma once

#include <span>

namespace gmac {

// Orthonormal type-II and type-III discrete cosine transforms for power-of-two
// lengths, via a radix-2 complex FFT.  dct3 is the exact inverse (and
// transpose) of dct2.  In-place operation (in.data() == out.data()) is
// allowed.
void dct2(std::span<const double> in, std::span<double> out);
void dct3(std::span<const double> in, std::span<double> out);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace gmac
