#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "degenpred/log_complex.hpp"
#include "degenpred/sequence.hpp"
#include "degenpred/spectral_core.hpp"

namespace degenpred {

// Largest linear magnitude emitted before a node is flagged as overflowed.
inline constexpr double kLinearClamp = 1e300;

struct KernelSpec {
    int n = 2;          // horizon; n < 0 is the time-reversed predictor
    int m = 1;
    int nu = 1;         // period of the degeneracy is m * nu
    double gamma = 3.0;
    double rhat = 1.2;
    double beta = kPi;

    int period() const { return m * nu; }
    double alpha() const;  // 1 - gamma^{-rhat}
    void validate() const;
};

// Linear values with per-node overflow flags, plus the exact log-domain values.
struct TransferTrace {
    SpectrumTrace linear;
    std::vector<LogComplex> log_values;
    std::vector<std::uint8_t> overflow;

    bool any_overflow() const;
    // log10 of max_j |value_j| over nonzero nodes.
    double log10_sup() const;
};

// V(z) = 1 - exp(-gamma / (z + alpha)) at one point z = exp(i theta), log form.
LogComplex v_value(double theta, double gamma, double alpha);

// V(exp(i omega m nu)) on the grid.
TransferTrace v_trace(const KernelSpec& spec, const FrequencyGrid& grid);

// H_n(e^{i omega}) = e^{i n omega} V(e^{i omega m nu})^n; n < 0 evaluates the
// |n| transfer at -omega.
TransferTrace predictor_transfer(const KernelSpec& spec, const FrequencyGrid& grid);
LogComplex transfer_value(const KernelSpec& spec, double omega);

struct PredictKernel {
    KernelSpec spec;
    Sequence taps;
    double sup_norm = 0.0;
    double log10_sup_norm = 0.0;
};

// Inverse transform of the transfer over `support`. Without a support the
// whole grid capacity is used and trailing taps below 1e-12 * sup are trimmed.
// Throws OverflowError when the transfer does not fit in doubles.
PredictKernel predictor_kernel(const KernelSpec& spec, const FrequencyGrid& grid,
                               std::optional<IndexRange> support = std::nullopt);

// Lattice coefficients w(l) of W = V^n in powers of z^{-m nu}: h(l m nu - n) = w(l).
// Grid independent estimate of log10 sup_l |w(l)| from saddle-point contours.
struct NormEstimate {
    double log10_sup = 0.0;
    long peak_lattice_index = 0;  // l
    long peak_tap_index = 0;      // l m nu - n
};
NormEstimate kernel_norm_saddle(const KernelSpec& spec);
// log10 |w(l)| on the contour |u| = rho_l.
double log10_lattice_coefficient(const KernelSpec& spec, long l);

// Unit circle quadrature of w(l) in software floating point.
// `points` is the FFT size. Only available when built with multiprecision.
bool extended_precision_available();
NormEstimate kernel_norm_extended(const KernelSpec& spec, std::size_t points = std::size_t{1} << 15);

struct GapSpec {
    double delta = 0.5;
    int n_total = 4;
    double beta = kPi;

    void validate() const;
    // Chordal distance to some root point of R_{n_total, beta} is <= delta.
    bool in_gap(double omega) const;
};

// H_n on nodes outside the gaps, zero inside. Throws ConfigError if nothing is retained.
TransferTrace masked_transfer(const KernelSpec& spec, const GapSpec& gap, const FrequencyGrid& grid);

struct SparsityReport {
    double on_lattice_energy_fraction = 1.0;
    double max_off_lattice_ratio = 0.0;
    long first_nonzero_index = 0;
    bool all_zero = false;
};
SparsityReport sparsity_report(const PredictKernel& kern, double tol);

struct DistanceCurve {
    FrequencyGrid grid;
    std::vector<double> distance;
    std::vector<std::uint8_t> overflow;
};
// |H_n(e^{i omega}) - e^{i n omega}| per node.
DistanceCurve distance_curve(const KernelSpec& spec, const FrequencyGrid& grid);
DistanceCurve distance_curve(const TransferTrace& h, int n);

}  // namespace degenpred
