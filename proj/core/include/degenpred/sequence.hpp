#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace degenpred {

using cplx = std::complex<double>;

// Closed integer interval [lo, hi]. Empty when hi < lo.
struct IndexRange {
    long lo = 0;
    long hi = -1;

    long size() const { return hi < lo ? 0 : hi - lo + 1; }
    bool empty() const { return hi < lo; }
    bool contains(long t) const { return t >= lo && t <= hi; }
};

// Finite window of a two-sided sequence; zero outside the window.
class Sequence {
public:
    Sequence() = default;
    Sequence(long offset, std::vector<cplx> samples);

    static Sequence zeros(IndexRange window);
    static Sequence impulse(long t, cplx value = 1.0);
    static Sequence from_real(long offset, const std::vector<double>& values);

    long offset() const { return offset_; }
    long first() const { return offset_; }
    long last() const { return offset_ + static_cast<long>(samples_.size()) - 1; }
    IndexRange window() const { return {first(), last()}; }
    std::size_t length() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }

    cplx at(long t) const;
    void set(long t, cplx v);  // t must lie in the window

    const std::vector<cplx>& samples() const { return samples_; }
    std::vector<cplx>& samples() { return samples_; }

    double l2_norm() const;
    double sup_norm() const;
    bool all_finite() const;

    // Values on `w`, zero-filled outside the stored window.
    Sequence restricted(IndexRange w) const;

private:
    long offset_ = 0;
    std::vector<cplx> samples_;
};

Sequence operator+(const Sequence& a, const Sequence& b);
Sequence operator-(const Sequence& a, const Sequence& b);
Sequence operator*(cplx s, const Sequence& a);

// max_t |a(t) - b(t)| over the union of both windows.
double max_abs_diff(const Sequence& a, const Sequence& b);

}  // namespace degenpred
