#include "degenpred/degeneracy_classes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degenpred/errors.hpp"

namespace degenpred {

namespace {

IndexRange capacity_window(const FrequencyGrid& grid) {
    const long h = static_cast<long>(grid.size()) / 2;
    return {-h, h - 1};
}

std::vector<double> all_roots(int m, const NuMap& nu, double beta) {
    std::vector<double> pts;
    for (const auto& [d, v] : nu) {
        const RootSet rs = root_set(m * v, beta);
        pts.insert(pts.end(), rs.points.begin(), rs.points.end());
    }
    return pts;
}

}  // namespace

void BraidedSpec::validate() const {
    if (m < 1) throw ConfigError("braid period m must be positive");
    for (int d = -m + 1; d <= m - 1; ++d)
        if (!nu.count(d)) throw ConfigError("nu map lacks phase " + std::to_string(d));
    for (const auto& [d, v] : nu)
        if (std::abs(d) > m - 1 || v < 1) throw ConfigError("invalid nu entry for phase " + std::to_string(d));
    weights.validate();
    if (!(r > 0.0)) throw ConfigError("class bound r must be positive");
    if (!(c_build > 0.0)) throw ConfigError("c_build must be positive");
    if (!disjointness_check(m, nu, beta)) throw ConfigError("root sets of the braid phases intersect");
}

SpectrumTrace bandstop_trace(const SpectrumTrace& x, const GapSpec& gap) {
    gap.validate();
    SpectrumTrace out = x;
    std::size_t kept = 0;
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        if (gap.in_gap(out.grid.node(j))) {
            out.values[j] = cplx{};
        } else {
            ++kept;
        }
    }
    if (kept == 0) throw ConfigError("gap covers the whole circle");
    return out;
}

Sequence bandstop_project(const Sequence& x, const GapSpec& gap, const FrequencyGrid& grid) {
    return inv_ztrace(bandstop_trace(ztrace(x, grid), gap), capacity_window(grid));
}

NuMap nu_scheme(int m) {
    if (m < 1) throw ConfigError("nu_scheme: m must be positive");
    NuMap nu;
    for (int d = -m + 1; d <= m - 1; ++d) {
        const int e = d >= 0 ? d : 2 * m + d - 1;
        nu[d] = 1 << e;
    }
    return nu;
}

double min_cross_phase_distance(int m, const NuMap& nu, double beta) {
    double best = kInf;
    for (auto a = nu.begin(); a != nu.end(); ++a) {
        const RootSet ra = root_set(m * a->second, beta);
        for (auto b = std::next(a); b != nu.end(); ++b) {
            const RootSet rb = root_set(m * b->second, beta);
            for (double x : ra.points)
                for (double y : rb.points) best = std::min(best, chordal_distance(x, y));
        }
    }
    return best;
}

bool disjointness_check(int m, const NuMap& nu, double beta) {
    if (nu.size() <= 1) return true;
    return min_cross_phase_distance(m, nu, beta) > 1e-9;
}

bool BraidCertificate::all_pass() const {
    return std::all_of(phases.begin(), phases.end(), [](const PhaseCertificate& p) { return p.passes; });
}

BraidedResult braided_approximant(const Sequence& x, const BraidedSpec& spec, const FrequencyGrid& grid,
                                  bool throw_on_failure) {
    spec.validate();
    const std::size_t n = grid.size();
    const std::vector<double> pts = all_roots(spec.m, spec.nu, spec.beta);
    double min_gap = kInf;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) min_gap = std::min(min_gap, chordal_distance(pts[i], pts[j]));
    const double delta_p = std::isinf(min_gap) ? 1.0 : 0.5 * min_gap;

    // rho = 1 beyond chordal distance delta' of every root point.
    WeightParams w = spec.weights;
    w.c = spec.c_build;
    w.L = std::max(spec.weights.L, std::exp(spec.c_build / std::pow(delta_p, w.q)));
    w.validate();

    std::map<int, SpectrumTrace> X;
    std::map<int, RootSet> roots;
    std::map<int, std::vector<double>> log_p;  // log prod_k rho_{d,k}^{-1}
    std::vector<double> log_a(n, 0.0);
    for (const auto& [d, v] : spec.nu) {
        X[d] = ztrace(insert_map(x, d), grid);
        roots[d] = root_set(spec.m * v, spec.beta);
        auto& lp = log_p[d];
        lp.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (double r : roots[d].points) s -= log_weight(grid.node(j), r, w);
            lp[j] = s;
            log_a[j] += s;
        }
    }
    auto a_coef = [&](int d, std::size_t j) { return -std::expm1(log_p[d][j]); };

    const SpectrumTrace& X0 = X[0];
    SpectrumTrace Xh0 = X0;
    for (std::size_t j = 0; j < n; ++j) {
        cplx v = X0.values[j] * std::exp(log_a[j]);
        for (const auto& [p, tr] : X)
            if (p != 0) v += (X0.values[j] - tr.values[j]) * a_coef(p, j);
        Xh0.values[j] = v;
    }

    BraidedResult res;
    const IndexRange cap = capacity_window(grid);
    std::map<int, SpectrumTrace> Xh;
    for (const auto& [d, tr] : X) {
        Xh[d] = d == 0 ? Xh0 : tr + Xh0 - X0;
        res.xi_hat[d] = inv_ztrace(Xh[d], cap);
    }
    res.x_hat = braid_assemble(res.xi_hat, spec.m, 1e-8);

    BraidCertificate& cert = res.certificate;
    cert.L_used = w.L;
    cert.delta_prime = delta_p;
    cert.distance_l2 = (x - res.x_hat).l2_norm();
    const double xn = x.l2_norm();
    cert.relative_distance = xn > 0.0 ? cert.distance_l2 / xn : 0.0;

    // Membership of each phase, with the peak factor cancelled analytically
    // against the products that contain it.
    for (const auto& [d, v] : spec.nu) {
        PhaseCertificate pc{d, spec.m * v, 0.0, spec.r, false, 0.0};
        double worst = 0.0;
        for (double r : roots[d].points) {
            std::vector<double> terms;
            terms.reserve(n);
            bool diverged = false;
            for (std::size_t j = 0; j < n && !diverged; ++j) {
                const double lw = log_weight(grid.node(j), r, w);
                if (std::isinf(lw)) {
                    diverged = Xh[d].values[j] != cplx{};
                    continue;
                }
                cplx s;
                if (lw == 0.0) {
                    s = Xh[d].values[j];
                } else {
                    s = X0.values[j] * std::exp(log_a[j] + lw);
                    if (d != 0) s -= (X0.values[j] - X[d].values[j]) * std::exp(log_p[d][j] + lw);
                    for (const auto& [p, tr] : X) {
                        if (p == 0 || p == d) continue;
                        const double ap = a_coef(p, j);
                        if (ap != 0.0) s += (X0.values[j] - tr.values[j]) * ap * std::exp(lw);
                    }
                    pc.arho_deviation = std::max(pc.arho_deviation, std::abs(std::exp(log_p[d][j] + lw) - 1.0));
                }
                const double a2 = std::norm(s);
                if (a2 > 0.0) terms.push_back(std::log(a2));
            }
            if (diverged) {
                worst = kInf;
                break;
            }
            const double lse = log_sum_exp(terms);
            if (!std::isinf(lse)) worst = std::max(worst, std::exp(lse + std::log(grid.spacing())));
        }
        pc.membership = worst;
        pc.passes = worst <= spec.r;
        cert.phases.push_back(pc);
        if (!pc.passes && throw_on_failure)
            throw ConstructionError("phase " + std::to_string(d) + " membership " + std::to_string(worst) +
                                        " exceeds r = " + std::to_string(spec.r),
                                    d);
    }
    return res;
}

std::optional<int> detect_degeneracy(const Sequence& y, int m, long s, const std::vector<int>& candidates, double beta,
                                     const WeightParams& weights, double r, const FrequencyGrid& grid) {
    std::vector<int> c = candidates;
    std::sort(c.begin(), c.end());
    const Sequence sup = supersequence(y, m, s);
    if (sup.empty()) return c.empty() ? std::nullopt : std::optional<int>(c.front());
    const SpectrumTrace tr = ztrace(sup, grid);
    for (int nu : c) {
        if (nu < 1) continue;
        const ClassSpec spec{m * nu, beta, weights, r};
        if (membership_value(tr, spec) <= r) return nu;
    }
    return std::nullopt;
}

}  // namespace degenpred
