#include "degenpred/spectral_core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "degenpred/errors.hpp"

namespace degenpred {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// In-place DFT with FFTW; the planner is not thread safe, execution is.
void dft(std::vector<cplx>& a, int sign) {
    auto* data = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(a.size()), data, data, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

long floor_mod(long a, long m) {
    const long r = a % m;
    return r < 0 ? r + m : r;
}

// exp(-i omega_0 k) = exp(i pi k (N-1)/N), reduced exactly in integers.
cplx base_phase(long k, std::size_t n) {
    const long nn = static_cast<long>(n);
    const long r = floor_mod(floor_mod(k, 2 * nn) * (nn - 1), 2 * nn);
    const double ang = kPi * static_cast<double>(r) / static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

void require_same_grid(const SpectrumTrace& a, const SpectrumTrace& b) {
    if (!(a.grid == b.grid) || a.values.size() != b.values.size())
        throw ConfigError("spectrum traces live on different grids");
}

}  // namespace

std::vector<double> FrequencyGrid::nodes() const {
    std::vector<double> w(n_);
    for (std::size_t j = 0; j < n_; ++j) w[j] = node(j);
    return w;
}

FrequencyGrid make_grid(std::size_t n) {
    if (n < 8 || (n & (n - 1)) != 0)
        throw ConfigError("grid size must be a power of two >= 8, got " + std::to_string(n));
    return FrequencyGrid(n);
}

SpectrumTrace ztrace(const Sequence& x, const FrequencyGrid& grid) {
    const std::size_t n = grid.size();
    if (x.length() > n)
        throw ResolutionError("window of length " + std::to_string(x.length()) + " exceeds grid size " +
                              std::to_string(n));
    std::vector<cplx> buf(n, cplx{});
    for (long k = x.first(); k <= x.last() && !x.empty(); ++k) {
        const cplx v = x.at(k);
        if (v == cplx{}) continue;
        buf[static_cast<std::size_t>(floor_mod(k, static_cast<long>(n)))] = v * base_phase(k, n);
    }
    dft(buf, FFTW_FORWARD);
    return {grid, std::move(buf)};
}

Sequence inv_ztrace(const SpectrumTrace& f, IndexRange window) {
    const std::size_t n = f.grid.size();
    if (f.values.size() != n) throw ConfigError("trace length does not match its grid");
    if (window.size() > static_cast<long>(n))
        throw ResolutionError("window of length " + std::to_string(window.size()) + " exceeds grid size " +
                              std::to_string(n));
    std::vector<cplx> buf = f.values;
    dft(buf, FFTW_BACKWARD);
    Sequence out = Sequence::zeros(window);
    const double scale = 1.0 / static_cast<double>(n);
    for (long k = window.lo; k <= window.hi; ++k) {
        const cplx v = buf[static_cast<std::size_t>(floor_mod(k, static_cast<long>(n)))];
        out.set(k, v * std::conj(base_phase(k, n)) * scale);
    }
    return out;
}

SpectrumTrace operator*(const SpectrumTrace& a, const SpectrumTrace& b) {
    require_same_grid(a, b);
    SpectrumTrace out = a;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] *= b.values[j];
    return out;
}

SpectrumTrace operator+(const SpectrumTrace& a, const SpectrumTrace& b) {
    require_same_grid(a, b);
    SpectrumTrace out = a;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] += b.values[j];
    return out;
}

SpectrumTrace operator-(const SpectrumTrace& a, const SpectrumTrace& b) {
    require_same_grid(a, b);
    SpectrumTrace out = a;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] -= b.values[j];
    return out;
}

double wrap_angle(double w) {
    double r = std::remainder(w, 2.0 * kPi);  // [-pi, pi]
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

double chordal_distance(double a, double b) {
    return 2.0 * std::abs(std::sin(0.5 * std::remainder(a - b, 2.0 * kPi)));
}

RootSet root_set(int n, double beta) {
    if (n < 1) throw ConfigError("root_set: n must be positive");
    if (!(beta > -kPi && beta <= kPi)) throw ConfigError("root_set: beta must lie in (-pi, pi]");
    RootSet rs{n, beta, {}};
    rs.points.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) rs.points.push_back(wrap_angle((beta + 2.0 * kPi * k) / n));
    std::sort(rs.points.begin(), rs.points.end());
    return rs;
}

void WeightParams::validate() const {
    if (!(q > 1.0)) throw ConfigError("weight exponent q must exceed 1");
    if (!(c > 0.0)) throw ConfigError("weight strength c must be positive");
    if (!(L >= 1.0)) throw ConfigError("weight floor L must be >= 1");
}

double log_weight(double w, double wt, const WeightParams& p) {
    const double d = chordal_distance(w, wt);
    if (d == 0.0) return kInf;
    const double expo = std::exp(std::log(p.c) - p.q * std::log(d));
    const double log_l = std::log(p.L);
    return std::max(log_l, expo) - log_l;
}

double weight(double w, double wt, const WeightParams& p) {
    const double lw = log_weight(w, wt, p);
    if (std::isinf(lw)) return kInf;
    return std::exp(lw);
}

void ClassSpec::validate() const {
    if (n_total < 1) throw ConfigError("class n_total must be positive");
    if (!(r > 0.0)) throw ConfigError("class bound r must be positive");
    weights.validate();
}

double log_sum_exp(const std::vector<double>& terms) {
    double mx = -kInf;
    for (double t : terms) mx = std::max(mx, t);
    if (std::isinf(mx)) return mx;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s);
}

double membership_value(const SpectrumTrace& x, const ClassSpec& spec) {
    spec.validate();
    const RootSet roots = root_set(spec.n_total, spec.beta);
    const std::size_t n = x.grid.size();
    double best = 0.0;
    std::vector<double> terms;
    terms.reserve(n);
    for (double root : roots.points) {
        terms.clear();
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::norm(x.values[j]);
            if (a == 0.0) continue;
            const double lw = log_weight(x.grid.node(j), root, spec.weights);
            if (std::isinf(lw)) return kInf;
            terms.push_back(std::log(a) + 2.0 * lw);
        }
        const double lse = log_sum_exp(terms);
        if (std::isinf(lse)) continue;
        const double v = std::exp(lse + std::log(x.grid.spacing()));
        best = std::max(best, v);
    }
    return best;
}

double membership_value(const Sequence& x, const ClassSpec& spec, const FrequencyGrid& grid) {
    return membership_value(ztrace(x, grid), spec);
}

bool check_membership(const Sequence& x, const ClassSpec& spec, const FrequencyGrid& grid) {
    return membership_value(x, spec, grid) <= spec.r;
}

}  // namespace degenpred
