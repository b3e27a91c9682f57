#include "degenpred/sequence_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degenpred/errors.hpp"
#include "degenpred/spectral_core.hpp"

namespace degenpred {

namespace {

void require_m(int m) {
    if (m < 1) throw ConfigError("period m must be positive");
}

long floor_div(long a, long m) {
    long q = a / m;
    if ((a % m != 0) && ((a < 0) != (m < 0))) --q;
    return q;
}

long ceil_div(long a, long m) { return -floor_div(-a, m); }

}  // namespace

void PhaseIndex::validate() const {
    require_m(m);
    if (std::abs(d) > m - 1) throw ConfigError("braid phase d must satisfy |d| <= m-1");
}

long pmod(long a, long m) {
    const long r = a % m;
    return r < 0 ? r + m : r;
}

Sequence decimate(const Sequence& x, int m, long s) {
    require_m(m);
    Sequence y = x;
    for (long t = x.first(); t <= x.last() && !x.empty(); ++t)
        if (pmod(t + s, m) != 0) y.set(t, cplx{});
    return y;
}

Sequence subsequence(const Sequence& x, int m, long s) {
    require_m(m);
    if (x.empty()) return {};
    const long lo = ceil_div(x.first() + s, m);
    const long hi = floor_div(x.last() + s, m);
    if (hi < lo) return Sequence(lo, {});
    Sequence y = Sequence::zeros({lo, hi});
    for (long k = lo; k <= hi; ++k) y.set(k, x.at(k * m - s));
    return y;
}

Sequence supersequence(const Sequence& y, int m, long s) {
    require_m(m);
    if (y.empty()) return {};
    Sequence x = Sequence::zeros({y.first() * m - s, y.last() * m - s});
    for (long k = y.first(); k <= y.last(); ++k) x.set(k * m - s, y.at(k));
    return x;
}

Sequence modulate(const Sequence& x, double theta) {
    Sequence y = x;
    for (long t = x.first(); t <= x.last() && !x.empty(); ++t)
        y.set(t, x.at(t) * std::polar(1.0, std::remainder(theta * static_cast<double>(t), 2.0 * kPi)));
    return y;
}

Sequence shift(const Sequence& x, long s) { return Sequence(x.offset() - s, x.samples()); }

Sequence insert_map(const Sequence& x, int d) {
    if (d == 0 || x.empty()) return x;
    if (d > 0) {
        const IndexRange w{std::min(x.first(), 0L), std::max(x.last() + d, static_cast<long>(d))};
        Sequence y = Sequence::zeros(w);
        for (long k = w.lo; k <= w.hi; ++k) {
            if (k < 0) {
                y.set(k, x.at(k));
            } else if (k <= d) {
                y.set(k, x.at(0));
            } else {
                y.set(k, x.at(k - d));
            }
        }
        return y;
    }
    const IndexRange w{std::min(x.first() + d, static_cast<long>(d)), std::max(x.last(), 0L)};
    Sequence y = Sequence::zeros(w);
    for (long k = w.lo; k <= w.hi; ++k) {
        if (k > 0) {
            y.set(k, x.at(k));
        } else if (k >= d) {
            y.set(k, x.at(0));
        } else {
            y.set(k, x.at(k - d));
        }
    }
    return y;
}

int braid_phase(long k, int m) {
    require_m(m);
    if (k >= 0) return static_cast<int>(pmod(-k, m));
    return -static_cast<int>(pmod(k, m));
}

long braid_source_index(long k, int m) { return k + braid_phase(k, m); }

Sequence braid_assemble(const BraidMap& xi, int m, double tol) {
    require_m(m);
    auto it0 = xi.find(0);
    if (it0 == xi.end()) throw ConfigError("braid_assemble: phase 0 is required");
    if (m == 1) return it0->second;
    const cplx x0 = it0->second.at(0);
    for (const auto& [d, seq] : xi) {
        if (std::abs(d) > m - 1) throw ConfigError("braid_assemble: phase outside [-m+1, m-1]");
        if (d == 0 || seq.empty() || !seq.window().contains(0)) continue;
        if (std::abs(seq.at(0) - x0) > tol * std::max(1.0, std::abs(x0)))
            throw BraidConsistencyError("phase " + std::to_string(d) + " disagrees with phase 0 at k=0");
    }
    long lo = 0;
    long hi = 0;
    for (const auto& [d, seq] : xi) {
        if (seq.empty()) continue;
        lo = std::min(lo, seq.first() - d);
        hi = std::max(hi, seq.last() - d);
    }
    Sequence x = Sequence::zeros({lo, hi});
    for (long k = lo; k <= hi; ++k) {
        const int d = braid_phase(k, m);
        auto it = xi.find(d);
        if (it != xi.end()) x.set(k, it->second.at(k + d));
    }
    return x;
}

BraidMap braid_split(const Sequence& x, int m) {
    require_m(m);
    BraidMap out;
    if (m == 1) {
        out[0] = x;
        return out;
    }
    if (x.empty()) return out;
    std::map<int, IndexRange> win;
    for (long k = x.first(); k <= x.last(); ++k) {
        const int d = braid_phase(k, m);
        const long src = k + d;
        auto [it, fresh] = win.try_emplace(d, IndexRange{src, src});
        if (!fresh) {
            it->second.lo = std::min(it->second.lo, src);
            it->second.hi = std::max(it->second.hi, src);
        }
    }
    for (auto& [d, w] : win) {
        w.lo = std::min(w.lo, 0L);
        w.hi = std::max(w.hi, 0L);
        out[d] = Sequence::zeros(w);
    }
    for (long k = x.first(); k <= x.last(); ++k) {
        const int d = braid_phase(k, m);
        out[d].set(k + d, x.at(k));
    }
    // All phases agree with phase 0 at the shared index.
    for (auto& [d, seq] : out) seq.set(0, x.at(0));
    return out;
}

}  // namespace degenpred
