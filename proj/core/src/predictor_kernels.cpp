#include "degenpred/predictor_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degenpred/errors.hpp"

namespace degenpred {

namespace {

constexpr double kLn10 = 2.302585092994045684;

// exp(w) - 1 for complex w without cancellation near zero.
cplx cexpm1(cplx w) {
    const double a = w.real();
    const double b = w.imag();
    const double s = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

// V(z) = 1 - exp(-gamma/(z + alpha)) at an arbitrary point off the pole.
LogComplex v_at(cplx z, double gamma, double alpha) {
    const cplx den = z + alpha;
    if (std::abs(den) < 1e-300) throw ResolutionError("V evaluated at its essential singularity");
    const cplx u = gamma / den;
    if (std::abs(u) < 0.5) return LogComplex::from(-cexpm1(-u));
    if (u.real() < -30.0) {
        // V = -e^{-u} (1 - e^{u}); e^{u} is negligible next to 1 but kept.
        const cplx tail = 1.0 - std::exp(u);
        return {-u.real() + std::log(std::abs(tail)), kPi - u.imag() + std::arg(tail)};
    }
    return LogComplex::from(1.0 - std::exp(-u));
}

LogComplex reduce(LogComplex z) {
    z.phase = std::remainder(z.phase, 2.0 * kPi);
    return z;
}

int abs_horizon(const KernelSpec& s) { return s.n < 0 ? -s.n : s.n; }

// Lattice coefficient on |u| = rho, returned as log10|w|. The integrand peaks
// at u = -rho; when it is negligible (80 nepers down) outside a short arc
// around that point, only the arc is summed, at the density of P nodes on the
// full circle.
double contour_log10(const KernelSpec& spec, long l, double rho, std::size_t points) {
    const int nh = abs_horizon(spec);
    const double alpha = spec.alpha();
    const double log_rho = std::log(rho);
    const double dl = static_cast<double>(l);
    auto sample = [&](double phi) {
        const LogComplex v = v_at(std::polar(rho, phi), spec.gamma, alpha).pow(nh);
        return LogComplex{v.log_mag + dl * log_rho, v.phase + std::remainder(dl * phi, 2.0 * kPi)};
    };
    constexpr double kDrop = 80.0;

    double lo = -kPi;
    double width = 2.0 * kPi;
    const double peak = sample(kPi).log_mag;
    double w = 1e-7;
    while (w < 0.5 * kPi && sample(kPi - w).log_mag > peak - kDrop) w *= 2.0;
    if (w < 0.5 * kPi) {
        bool isolated = true;
        for (int j = 0; j < 512 && isolated; ++j) {
            const double phi = -kPi + 2.0 * kPi * (j + 0.5) / 512.0;
            if (std::abs(phi) < kPi - w) isolated = sample(phi).log_mag <= peak - kDrop;
        }
        if (isolated) {
            lo = kPi - w;
            width = 2.0 * w;
        }
    }
    const auto m = std::max<std::size_t>(
        1024, static_cast<std::size_t>(std::ceil(static_cast<double>(points) * width / (2.0 * kPi))));
    const double step = width / static_cast<double>(m);

    std::vector<LogComplex> vals(m);
    double mx = -kInf;
    for (std::size_t j = 0; j < m; ++j) {
        vals[j] = sample(lo + (static_cast<double>(j) + 0.5) * step);
        mx = std::max(mx, vals[j].log_mag);
    }
    if (std::isinf(mx)) return -kInf;
    cplx sum{};
    for (const LogComplex& v : vals) sum += std::polar(std::exp(v.log_mag - mx), v.phase);
    const double a = std::abs(sum) * step / (2.0 * kPi);
    if (a == 0.0) return -kInf;
    return (std::log(a) + mx) / kLn10;
}

double saddle_radius(const KernelSpec& spec, long l) {
    const double alpha = spec.alpha();
    const double a = std::max(static_cast<double>(l - 1), 0.5);
    const double b = 2.0 * alpha * a + abs_horizon(spec) * spec.gamma;
    return (b + std::sqrt(b * b - 4.0 * a * a * alpha * alpha)) / (2.0 * a);
}

std::size_t contour_points(const KernelSpec& spec, long l, double rho) {
    const double need = std::max({4096.0, 4.0 * static_cast<double>(l + 1), 64.0 * rho / (rho - spec.alpha())});
    std::size_t p = 1;
    while (static_cast<double>(p) < need) p <<= 1;
    return p;
}

}  // namespace

double KernelSpec::alpha() const { return 1.0 - std::pow(gamma, -rhat); }

void KernelSpec::validate() const {
    if (n == 0) throw ConfigError("prediction horizon n must be nonzero");
    if (m < 1 || nu < 1) throw ConfigError("m and nu must be positive");
    if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
    if (!(rhat > 0.0)) throw ConfigError("rhat must be positive");
    if (!(beta > -kPi && beta <= kPi)) throw ConfigError("beta must lie in (-pi, pi]");
    const double a = alpha();
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha(gamma) = 1 - gamma^-rhat must lie in (0, 1); need gamma > 1");
}

bool TransferTrace::any_overflow() const {
    return std::any_of(overflow.begin(), overflow.end(), [](std::uint8_t f) { return f != 0; });
}

double TransferTrace::log10_sup() const {
    double mx = -kInf;
    for (const auto& v : log_values) mx = std::max(mx, v.log_mag);
    return mx / kLn10;
}

LogComplex v_value(double theta, double gamma, double alpha) {
    return v_at(std::polar(1.0, theta), gamma, alpha);
}

LogComplex transfer_value(const KernelSpec& spec, double omega) {
    const int nh = abs_horizon(spec);
    const double w = spec.n < 0 ? -omega : omega;
    const double theta = wrap_angle(w * spec.period());
    LogComplex v = v_value(theta, spec.gamma, spec.alpha()).pow(nh);
    v.phase += std::remainder(nh * w, 2.0 * kPi);
    return reduce(v);
}

namespace {

TransferTrace finish(const FrequencyGrid& grid, std::vector<LogComplex> logs) {
    TransferTrace out;
    out.linear.grid = grid;
    out.linear.values.resize(grid.size());
    out.overflow.assign(grid.size(), 0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        bool over = false;
        out.linear.values[j] = logs[j].to_complex(kLinearClamp, &over);
        out.overflow[j] = over ? 1 : 0;
    }
    out.log_values = std::move(logs);
    return out;
}

}  // namespace

TransferTrace v_trace(const KernelSpec& spec, const FrequencyGrid& grid) {
    spec.validate();
    std::vector<LogComplex> logs(grid.size());
    const double alpha = spec.alpha();
    for (std::size_t j = 0; j < grid.size(); ++j)
        logs[j] = reduce(v_value(wrap_angle(grid.node(j) * spec.period()), spec.gamma, alpha));
    return finish(grid, std::move(logs));
}

TransferTrace predictor_transfer(const KernelSpec& spec, const FrequencyGrid& grid) {
    spec.validate();
    std::vector<LogComplex> logs(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) logs[j] = transfer_value(spec, grid.node(j));
    return finish(grid, std::move(logs));
}

PredictKernel predictor_kernel(const KernelSpec& spec, const FrequencyGrid& grid, std::optional<IndexRange> support) {
    spec.validate();
    const TransferTrace h = predictor_transfer(spec, grid);
    if (h.any_overflow()) {
        const NormEstimate est = kernel_norm_saddle(spec);
        throw OverflowError("kernel transfer exceeds double range (log10 sup|H| = " + std::to_string(h.log10_sup()) +
                                ", log10 kernel norm ~ " + std::to_string(est.log10_sup) + ")",
                            est.log10_sup);
    }
    const long n = static_cast<long>(grid.size());
    const long p = spec.period();
    const bool trim = !support.has_value();
    IndexRange win = support.value_or(spec.n > 0 ? IndexRange{-p, n - p - 1} : IndexRange{-(n - p - 1), p});
    PredictKernel k{spec, inv_ztrace(h.linear, win), 0.0, 0.0};
    k.sup_norm = k.taps.sup_norm();
    if (trim && k.sup_norm > 0.0) {
        const double cut = 1e-12 * k.sup_norm;
        long lo = win.lo;
        long hi = win.hi;
        if (spec.n > 0) {
            while (hi > 0 && std::abs(k.taps.at(hi)) < cut) --hi;
        } else {
            while (lo < 0 && std::abs(k.taps.at(lo)) < cut) ++lo;
        }
        k.taps = k.taps.restricted({lo, hi});
    }
    k.log10_sup_norm = k.sup_norm > 0.0 ? std::log10(k.sup_norm) : -kInf;
    return k;
}

namespace {

// Without `converge` the node count is the heuristic one, which resolves the
// saddle to well below 1e-6 decades; the final value is refined by doubling.
double lattice_log10(const KernelSpec& spec, long l, bool converge) {
    if (l < abs_horizon(spec)) return -kInf;
    const double rho = saddle_radius(spec, l);
    std::size_t pts = contour_points(spec, l, rho);
    double prev = contour_log10(spec, l, rho, pts);
    if (!converge) return prev;
    for (int it = 0; it < 4; ++it) {
        pts <<= 1;
        const double cur = contour_log10(spec, l, rho, pts);
        if (std::abs(cur - prev) < 1e-9 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace

double log10_lattice_coefficient(const KernelSpec& spec, long l) {
    spec.validate();
    return lattice_log10(spec, l, true);
}

NormEstimate kernel_norm_saddle(const KernelSpec& spec) {
    spec.validate();
    const long l0 = abs_horizon(spec);
    auto f = [&](long l) { return lattice_log10(spec, l, false); };

    // Geometric scan until the coefficients have clearly passed their peak.
    std::vector<long> ls;
    std::vector<double> fs;
    std::size_t bi = 0;
    for (long l = l0;; l = std::max(l + 1, static_cast<long>(std::ceil(l * 1.25)))) {
        ls.push_back(l);
        fs.push_back(f(l));
        const std::size_t i = fs.size() - 1;
        if (fs[i] > fs[bi]) bi = i;
        if ((i >= bi + 3 && fs[i] < fs[bi] - 3.0) || l > 20000000) break;
    }
    long lo = bi > 0 ? ls[bi - 1] : ls[bi];
    long hi = bi + 1 < ls.size() ? ls[bi + 1] : ls[bi];

    // Golden-section on integers, then a scan of the final bracket.
    const double g = 0.6180339887498949;
    long a = hi - static_cast<long>(std::llround(g * (hi - lo)));
    long b = lo + static_cast<long>(std::llround(g * (hi - lo)));
    double fa = f(a);
    double fb = f(b);
    while (hi - lo > 12) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + static_cast<long>(std::llround(g * (hi - lo)));
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - static_cast<long>(std::llround(g * (hi - lo)));
            fa = f(a);
        }
        if (a >= b) {
            a = lo + (hi - lo) / 3;
            b = hi - (hi - lo) / 3;
            fa = f(a);
            fb = f(b);
        }
    }
    NormEstimate est{fs[bi], ls[bi], 0};
    for (long l = lo; l <= hi; ++l) {
        const double v = f(l);
        if (v > est.log10_sup) est = {v, l, 0};
    }
    est.log10_sup = lattice_log10(spec, est.peak_lattice_index, true);
    est.peak_tap_index = est.peak_lattice_index * spec.period() - abs_horizon(spec);
    if (spec.n < 0) est.peak_tap_index = -est.peak_tap_index;
    return est;
}

void GapSpec::validate() const {
    if (!(delta > 0.0 && delta < 2.0)) throw ConfigError("gap delta must lie in (0, 2)");
    if (n_total < 1) throw ConfigError("gap n_total must be positive");
}

bool GapSpec::in_gap(double omega) const {
    const RootSet rs = root_set(n_total, beta);
    return std::any_of(rs.points.begin(), rs.points.end(),
                       [&](double r) { return chordal_distance(omega, r) <= delta; });
}

TransferTrace masked_transfer(const KernelSpec& spec, const GapSpec& gap, const FrequencyGrid& grid) {
    gap.validate();
    TransferTrace h = predictor_transfer(spec, grid);
    const RootSet rs = root_set(gap.n_total, gap.beta);
    std::size_t kept = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double w = grid.node(j);
        const bool inside = std::any_of(rs.points.begin(), rs.points.end(),
                                        [&](double r) { return chordal_distance(w, r) <= gap.delta; });
        if (inside) {
            h.linear.values[j] = cplx{};
            h.log_values[j] = LogComplex{};
            h.overflow[j] = 0;
        } else {
            ++kept;
        }
    }
    if (kept == 0) throw ConfigError("gap covers the whole circle; nothing retained");
    return h;
}

SparsityReport sparsity_report(const PredictKernel& kern, double tol) {
    SparsityReport rep;
    const int nh = abs_horizon(kern.spec);
    const long p = kern.spec.period();
    const double sup = kern.taps.sup_norm();
    if (sup == 0.0 || kern.taps.empty()) {
        rep.all_zero = true;
        return rep;
    }
    auto on_lattice = [&](long k) {
        const long kk = kern.spec.n > 0 ? k : -k;
        return (kk + nh) % p == 0 && (kk + nh) / p >= nh;
    };
    double on = 0.0;
    double total = 0.0;
    bool found = false;
    for (long k = kern.taps.first(); k <= kern.taps.last(); ++k) {
        const double a = std::abs(kern.taps.at(k));
        total += a * a;
        if (on_lattice(k)) {
            on += a * a;
            if (a > tol * sup) {
                const bool closer = !found || std::abs(k) < std::abs(rep.first_nonzero_index);
                if (closer) rep.first_nonzero_index = k;
                found = true;
            }
        } else {
            rep.max_off_lattice_ratio = std::max(rep.max_off_lattice_ratio, a / sup);
        }
    }
    rep.on_lattice_energy_fraction = on / total;
    return rep;
}

DistanceCurve distance_curve(const TransferTrace& h, int n) {
    const FrequencyGrid& grid = h.linear.grid;
    DistanceCurve c{grid, std::vector<double>(grid.size()), std::vector<std::uint8_t>(grid.size(), 0)};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (h.overflow[j]) {
            c.distance[j] = kLinearClamp;
            c.overflow[j] = 1;
            continue;
        }
        const double w = grid.node(j);
        c.distance[j] = std::abs(h.linear.values[j] - std::polar(1.0, std::remainder(n * w, 2.0 * kPi)));
    }
    return c;
}

DistanceCurve distance_curve(const KernelSpec& spec, const FrequencyGrid& grid) {
    return distance_curve(predictor_transfer(spec, grid), spec.n);
}

}  // namespace degenpred
