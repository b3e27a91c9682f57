#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace degenpred {

// Complex value stored as (log|z|, arg z). log_mag = -inf encodes zero.
struct LogComplex {
    double log_mag = -std::numeric_limits<double>::infinity();
    double phase = 0.0;

    static LogComplex from(std::complex<double> z) {
        if (z == std::complex<double>(0.0, 0.0)) return {};
        return {std::log(std::abs(z)), std::arg(z)};
    }
    bool is_zero() const { return std::isinf(log_mag) && log_mag < 0; }
    double log10_abs() const { return log_mag / std::log(10.0); }

    LogComplex operator*(const LogComplex& o) const { return {log_mag + o.log_mag, phase + o.phase}; }
    LogComplex pow(int k) const {
        if (is_zero()) return k == 0 ? LogComplex{0.0, 0.0} : LogComplex{};
        return {k * log_mag, k * phase};
    }

    // Linear value; magnitudes above `clamp` are limited and reported via `overflow`.
    std::complex<double> to_complex(double clamp, bool* overflow = nullptr) const {
        if (is_zero()) {
            if (overflow) *overflow = false;
            return {0.0, 0.0};
        }
        const double lim = std::log(clamp);
        const bool over = log_mag > lim;
        if (overflow) *overflow = over;
        return std::polar(std::exp(over ? lim : log_mag), phase);
    }
};

}  // namespace degenpred
