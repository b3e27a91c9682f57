#pragma once

#include <map>

#include "degenpred/sequence.hpp"

namespace degenpred {

struct PhaseIndex {
    int m = 1;
    long s = 0;
    int d = 0;

    void validate() const;
};

// Floor-mod that is nonnegative for positive m.
long pmod(long a, long m);

// y(t) = x(t) if (t+s)/m is an integer, else 0.
Sequence decimate(const Sequence& x, int m, long s);
// y(k) = x(k m - s).
Sequence subsequence(const Sequence& x, int m, long s);
// x(t) = y((t+s)/m) on the lattice, 0 elsewhere.
Sequence supersequence(const Sequence& y, int m, long s);
// y(t) = e^{i theta t} x(t).
Sequence modulate(const Sequence& x, double theta);
// y(t) = x(t + s).
Sequence shift(const Sequence& x, long s);
// Insertion map M_d: repeats x(0) |d| extra times, pushing one half-line outwards.
Sequence insert_map(const Sequence& x, int d);

using BraidMap = std::map<int, Sequence>;

// x(k) = xi_d(k+d) for k >= 0 with (k+d)/m integral, d in [0, m-1];
// x(k) = xi_{-d}(k-d) for k <= 0 with (k-d)/m integral.
BraidMap::mapped_type braid_assemble(const BraidMap& xi, int m, double tol = 1e-10);

// Phase owning index k in the assembly above.
int braid_phase(long k, int m);
// Lattice index read from the phase sequence for target k.
long braid_source_index(long k, int m);

// Samples of x grouped by owning phase, each at its source index.
BraidMap braid_split(const Sequence& x, int m);

}  // namespace degenpred
