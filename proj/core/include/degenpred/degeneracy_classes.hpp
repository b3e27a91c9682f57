#pragma once

#include <map>
#include <optional>
#include <vector>

#include "degenpred/predictor_kernels.hpp"
#include "degenpred/sequence.hpp"
#include "degenpred/sequence_ops.hpp"
#include "degenpred/spectral_core.hpp"

namespace degenpred {

using NuMap = std::map<int, int>;  // phase d -> nu_d

struct BraidedSpec {
    int m = 2;
    NuMap nu;
    double beta = kPi;
    WeightParams weights;
    double r = 1e6;
    double c_build = 0.01;

    void validate() const;  // includes the disjointness check
};

// Zeroes the trace on nodes inside the gaps and transforms back on the
// grid-capacity window [-N/2, N/2 - 1].
Sequence bandstop_project(const Sequence& x, const GapSpec& gap, const FrequencyGrid& grid);
// Same projection returning the trace; used when the full spectrum is needed.
SpectrumTrace bandstop_trace(const SpectrumTrace& x, const GapSpec& gap);

// nu_d = 2^d for d >= 0 and 2^{2m+d-1} for d < 0, d in [-m+1, m-1].
NuMap nu_scheme(int m);

// Root sets R_{m nu_d, beta} pairwise separated by more than 1e-9 (chordal).
bool disjointness_check(int m, const NuMap& nu, double beta);
// Smallest chordal distance between root points of different phases.
double min_cross_phase_distance(int m, const NuMap& nu, double beta);

struct PhaseCertificate {
    int d = 0;
    int n_total = 1;
    double membership = 0.0;
    double r = 0.0;
    bool passes = false;
    // max over nodes near a phase-d root of | |(a_d - 1) rho| - 1 |.
    double arho_deviation = 0.0;
};

struct BraidCertificate {
    std::vector<PhaseCertificate> phases;
    double distance_l2 = 0.0;
    double relative_distance = 0.0;
    double L_used = 1.0;
    double delta_prime = 0.0;
    bool all_pass() const;
};

struct BraidedResult {
    Sequence x_hat;
    BraidMap xi_hat;  // per-phase sequences xi_d
    BraidCertificate certificate;
};

// Approximates x by a member of the braided class. Throws ConfigError on
// overlapping root sets and ConstructionError if a phase exceeds r.
BraidedResult braided_approximant(const Sequence& x, const BraidedSpec& spec, const FrequencyGrid& grid,
                                  bool throw_on_failure = true);

// Smallest candidate nu for which supersequence(y, m, s) lies in X_{m nu, beta}.
std::optional<int> detect_degeneracy(const Sequence& y, int m, long s, const std::vector<int>& candidates,
                                     double beta, const WeightParams& weights, double r, const FrequencyGrid& grid);

}  // namespace degenpred
