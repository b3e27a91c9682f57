#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace degenpred {

// Iterative radix-2 FFT for arbitrary real types (used with multiprecision
// floats). Forward uses exp(-2 pi i jk/N); the inverse is unnormalized.
// Complex must provide +, -, * and construction from (Real, Real).
template <class Complex, class Real>
void radix2_fft(std::vector<Complex>& a, bool inverse, const Real& pi) {
    using std::cos;
    using std::sin;
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("radix2_fft: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        std::vector<Complex> tw(half);
        for (std::size_t k = 0; k < half; ++k) {
            Real ang = 2 * pi * Real(k) / Real(len);
            if (!inverse) ang = -ang;
            tw[k] = Complex(cos(ang), sin(ang));
        }
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                Complex u = a[i + k];
                Complex v = a[i + k + half] * tw[k];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

}  // namespace degenpred
