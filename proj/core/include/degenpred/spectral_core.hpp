#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "degenpred/sequence.hpp"

namespace degenpred {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultGridSize = std::size_t{1} << 14;

// Uniform grid on (-pi, pi] shifted by half a cell:
// omega_j = 2 pi (j - N/2) / N + pi / N.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::size_t n) : n_(n) {}

    std::size_t size() const { return n_; }
    double spacing() const { return 2.0 * kPi / static_cast<double>(n_); }
    double node(std::size_t j) const {
        const double n = static_cast<double>(n_);
        return 2.0 * kPi * (static_cast<double>(j) - n / 2.0) / n + kPi / n;
    }
    std::vector<double> nodes() const;

    bool operator==(const FrequencyGrid& o) const { return n_ == o.n_; }

private:
    std::size_t n_ = 0;
};

// Throws ConfigError unless N is a power of two and N >= 8.
FrequencyGrid make_grid(std::size_t n);

struct SpectrumTrace {
    FrequencyGrid grid;
    std::vector<cplx> values;
};

// X[j] = sum_k x(k) exp(-i omega_j k). Throws ResolutionError if the window
// is longer than the grid.
SpectrumTrace ztrace(const Sequence& x, const FrequencyGrid& grid);

// x(k) = (1/N) sum_j F[j] exp(i omega_j k) for k in `window`.
Sequence inv_ztrace(const SpectrumTrace& f, IndexRange window);

// Elementwise helpers.
SpectrumTrace operator*(const SpectrumTrace& a, const SpectrumTrace& b);
SpectrumTrace operator+(const SpectrumTrace& a, const SpectrumTrace& b);
SpectrumTrace operator-(const SpectrumTrace& a, const SpectrumTrace& b);

// Maps an angle into (-pi, pi].
double wrap_angle(double w);

// |e^{ia} - e^{ib}|, computed as 2|sin((a-b)/2)|.
double chordal_distance(double a, double b);

struct RootSet {
    int n = 1;
    double beta = kPi;
    std::vector<double> points;  // ascending in (-pi, pi]
};

// Solutions of exp(i n omega) = exp(i beta) in (-pi, pi].
RootSet root_set(int n, double beta);

struct WeightParams {
    double q = 2.0;
    double c = 1.0;
    double L = 1.0;

    void validate() const;
};

// log of (1/L) max(L, exp(c / |e^{i w} - e^{i wt}|^q)). Returns +inf when w == wt mod 2 pi.
double log_weight(double w, double wt, const WeightParams& p);
// exp(log_weight); +inf sentinel at the singular point or beyond double range.
double weight(double w, double wt, const WeightParams& p);

struct ClassSpec {
    int n_total = 1;
    double beta = kPi;
    WeightParams weights;
    double r = 1.0;

    void validate() const;
};

// max over root points of (2 pi / N) sum_j |X_j|^2 rho(omega_j, root)^2.
// Evaluated in the log domain; returns kInf when the sum diverges.
double membership_value(const SpectrumTrace& x, const ClassSpec& spec);
double membership_value(const Sequence& x, const ClassSpec& spec, const FrequencyGrid& grid);
bool check_membership(const Sequence& x, const ClassSpec& spec, const FrequencyGrid& grid);

// Log-domain sum of exp(terms); -inf for an empty or all -inf input.
double log_sum_exp(const std::vector<double>& terms);

}  // namespace degenpred
