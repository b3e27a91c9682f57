#include "degenpred/prediction_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "degenpred/errors.hpp"
#include "degenpred/sequence_ops.hpp"

namespace degenpred {

namespace {

long floor_div(long a, long m) {
    long q = a / m;
    if (a % m != 0 && (a < 0) != (m < 0)) --q;
    return q;
}

double theta_for(const KernelSpec& k) { return (k.beta - kPi) / k.period(); }

cplx convolve_at(const Sequence& taps, const Sequence& x, long t) {
    cplx acc{};
    if (taps.empty() || x.empty()) return acc;
    // s = t - k must lie in the window of x.
    const long klo = std::max(taps.first(), t - x.last());
    const long khi = std::min(taps.last(), t - x.first());
    for (long k = klo; k <= khi; ++k) acc += taps.at(k) * x.at(t - k);
    return acc;
}

double log10_kappa(const KernelSpec& spec, const FrequencyGrid& grid) {
    return predictor_transfer(spec, grid).log10_sup();
}

}  // namespace

PredictionTask PredictionTask::make(const KernelSpec& k, IndexRange observed, IndexRange targets) {
    PredictionTask t;
    t.kernel = k;
    t.theta = theta_for(k);
    t.observed = observed;
    t.targets = targets;
    return t;
}

void PredictionTask::validate() const {
    kernel.validate();
    if (std::abs(theta - theta_for(kernel)) > 1e-12) throw ConfigError("theta inconsistent with (beta - pi)/(m nu)");
    if (mode == PredictMode::masked_spectral && !gap) throw ConfigError("masked prediction needs a gap");
}

Sequence modulated_taps(const PredictKernel& base, double theta) {
    if (theta == 0.0) return base.taps;
    Sequence out = base.taps;
    const int n = base.spec.n;
    for (long k = out.first(); k <= out.last() && !out.empty(); ++k)
        out.set(k, out.at(k) * std::polar(1.0, std::remainder(theta * static_cast<double>(k + n), 2.0 * kPi)));
    return out;
}

Sequence predict(const Sequence& x, const PredictionTask& task, const PredictKernel& kernel) {
    task.validate();
    const Sequence obs = x.restricted(task.observed);
    const Sequence taps = modulated_taps(kernel, task.theta);
    Sequence out = Sequence::zeros(task.targets);
    for (long t = task.targets.lo; t <= task.targets.hi; ++t) out.set(t, convolve_at(taps, obs, t));
    return out;
}

Sequence predict(const Sequence& x, const PredictionTask& task, const FrequencyGrid& grid) {
    task.validate();
    if (task.mode == PredictMode::kernel) {
        KernelSpec base = task.kernel;
        base.beta = kPi;
        return predict(x, task, predictor_kernel(base, grid));
    }
    // Masked transfer, shifted to the roots of the given beta: e^{i n theta} H(w - theta).
    const GapSpec& gap = *task.gap;
    gap.validate();
    SpectrumTrace h{grid, std::vector<cplx>(grid.size())};
    const cplx ph = std::polar(1.0, std::remainder(task.theta * task.kernel.n, 2.0 * kPi));
    double worst = -kInf;
    std::size_t kept = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double w = grid.node(j);
        if (gap.in_gap(w)) continue;
        ++kept;
        const LogComplex v = transfer_value(task.kernel, w - task.theta);
        bool over = false;
        h.values[j] = ph * v.to_complex(kLinearClamp, &over);
        if (over) worst = std::max(worst, v.log10_abs());
    }
    if (kept == 0) throw ConfigError("gap covers the whole circle");
    if (!std::isinf(worst)) throw OverflowError("masked transfer exceeds double range", worst);
    const SpectrumTrace X = ztrace(x.restricted(task.observed), grid);
    return inv_ztrace(h * X, task.targets);
}

ErrorBudget make_budget(double sigma_noise, double sigma_trunc, double log10_k) {
    ErrorBudget b;
    b.sigma_noise = sigma_noise;
    b.sigma_trunc = sigma_trunc;
    b.log10_kappa = log10_k;
    b.kappa = log10_k > 300.0 ? kInf : std::pow(10.0, log10_k);
    b.noise_bound = sigma_noise * (b.kappa + 1.0);
    b.trunc_bound = sigma_trunc * (b.kappa + 1.0);
    b.bound = (sigma_noise + sigma_trunc) * (b.kappa + 1.0);
    return b;
}

void RobustTask::validate() const {
    if (M < 0 || N <= M) throw ConfigError("robust task needs N > M >= 0");
    if (s < 0) throw ConfigError("excluded core s must be nonnegative");
    if (noise_radius < 0.0) throw ConfigError("noise radius must be nonnegative");
    if (lattice < 1) throw ConfigError("lattice step must be positive");
}

RobustResult predict_robust(const Sequence& observations, const RobustTask& task, const KernelSpec& kernel,
                            const FrequencyGrid& grid) {
    task.validate();
    kernel.validate();
    if (kernel.n < 0) throw ConfigError("predict_robust expects a causal horizon");
    const long cut = std::max(task.M, task.s);
    Sequence obs = Sequence::zeros({-task.N, task.N});
    double tail = 0.0;
    for (long k = -task.N; k <= task.N; ++k) {
        if (std::abs(k) <= cut || pmod(k, task.lattice) != 0) continue;
        const cplx v = observations.at(k);
        obs.set(k, v);
        if (2 * std::abs(k) > task.N) tail += std::norm(v);
    }
    KernelSpec base = kernel;
    base.beta = kPi;
    const PredictKernel pk = predictor_kernel(base, grid);
    const Sequence taps = modulated_taps(pk, theta_for(kernel));
    RobustResult res;
    res.estimates = Sequence::zeros({-task.M, task.M});
    for (long t = -task.M; t <= task.M; ++t) res.estimates.set(t, convolve_at(taps, obs, t - kernel.n));
    res.budget = make_budget(task.noise_radius, std::sqrt(tail), log10_kappa(base, grid));
    return res;
}

Sequence predict_subsequence(const Sequence& y, int m, long s, int steps, const KernelSpec& kernel,
                             IndexRange targets, const FrequencyGrid& grid) {
    if (steps < 1) throw ConfigError("steps must be positive");
    KernelSpec ks = kernel;
    ks.m = m;
    ks.n = steps * m;
    Sequence out = Sequence::zeros(targets);
    if (y.empty()) return out;
    const Sequence emb = supersequence(y, m, s);
    PredictionTask task = PredictionTask::make(ks, emb.window(), {targets.lo * m - s, targets.hi * m - s});
    const Sequence est = predict(emb, task, grid);
    for (long k = targets.lo; k <= targets.hi; ++k) out.set(k, est.at(k * m - s));
    return out;
}

Sequence predict_compound(const Sequence& y, const std::map<int, PhaseSpec>& phases, int m, double gamma,
                          double rhat, IndexRange targets, const FrequencyGrid& grid) {
    if (m < 1) throw ConfigError("period m must be positive");
    for (int d = 0; d < m; ++d)
        if (!phases.count(d)) throw ConfigError("phase spec missing for d=" + std::to_string(d));
    Sequence out = Sequence::zeros(targets);
    for (int d = 0; d < m; ++d) {
        const PhaseSpec& ps = phases.at(d);
        const Sequence sub = subsequence(y, m, d);
        if (sub.empty()) continue;
        // Targets t = k m - d inside the window, predicted from index k-1.
        const long klo = -floor_div(-(targets.lo + d), m);
        const long khi = floor_div(targets.hi + d, m);
        if (klo > khi) continue;
        const KernelSpec ks{m, m, ps.nu, gamma, rhat, ps.beta};
        const Sequence est = predict_subsequence(sub, m, d, 1, ks, {klo - 1, khi - 1}, grid);
        for (long k = klo; k <= khi; ++k) out.set(k * m - d, est.at(k - 1));
    }
    return out;
}

namespace {

struct CachedKernel {
    Sequence taps;
    double log10_kappa = 0.0;
};

RecoveryResult recover_impl(const Sequence& samples, const BraidedSpec& spec, const RecoveryParams& p,
                            const FrequencyGrid& grid) {
    spec.validate();
    if (p.M < 0 || p.s < 0) throw ConfigError("recovery needs M >= 0 and s >= 0");
    if (p.N > 0 && p.N <= std::max(p.M, p.s)) throw ConfigError("truncation radius must exceed M and s");
    const int m = spec.m;
    const long limit = p.N > 0 ? p.N : std::max(std::abs(samples.first()), std::abs(samples.last()));

    // History on the lattice for each direction, as seen by the causal predictor.
    auto history = [&](bool reversed) {
        std::vector<long> ks;
        for (long k = -limit; k <= -p.s - 1; ++k)
            if (pmod(k, m) == 0) ks.push_back(k);
        Sequence h = ks.empty() ? Sequence() : Sequence::zeros({ks.front(), ks.back()});
        double tail = 0.0;
        for (long k : ks) {
            const cplx v = samples.at(reversed ? -k : k);
            h.set(k, v);
            if (2 * std::abs(k) > limit) tail += std::norm(v);
        }
        return std::make_pair(h, std::sqrt(tail));
    };
    const auto [hist_fwd, tail_fwd] = history(false);
    const auto [hist_rev, tail_rev] = history(true);

    std::map<std::tuple<int, int>, CachedKernel> cache;
    RecoveryResult res;
    res.estimates = Sequence::zeros({-p.M, p.M});
    for (long t = -p.M; t <= p.M; ++t) {
        RecoveryTarget tg;
        tg.t = t;
        tg.phase = braid_phase(t, m);
        if (pmod(t, m) == 0 && std::abs(t) > p.s && std::abs(t) <= limit) {
            tg.observed = true;
            tg.estimate = samples.at(t);
            res.estimates.set(t, tg.estimate);
            res.targets.push_back(tg);
            continue;
        }
        const int d = tg.phase;
        const bool rev = d < 0 || (d == 0 && t < 0);
        const Sequence& hist = rev ? hist_rev : hist_fwd;
        const double tail = rev ? tail_rev : tail_fwd;
        const long tau = rev ? -(t + d) : t + d;
        const long period = static_cast<long>(m) * spec.nu.at(d);
        if (hist.empty()) throw SpanError("no lattice history outside the excluded core", p.s + m);
        const long kmax = hist.last();
        const long n = std::max(1L, (tau - kmax + period - 1) / period);
        if (tau - n * period < hist.first())
            throw SpanError("history too short for target " + std::to_string(t), n * period - tau);
        tg.horizon = static_cast<int>(n);
        const double beta = rev ? wrap_angle(-spec.beta) : spec.beta;
        auto key = std::make_tuple(d, static_cast<int>(n));
        auto it = cache.find(key);
        if (it == cache.end()) {
            const KernelSpec base{static_cast<int>(n), m, spec.nu.at(d), p.gamma, p.rhat, kPi};
            KernelSpec withbeta = base;
            withbeta.beta = beta;
            const PredictKernel pk = predictor_kernel(base, grid);
            it = cache.emplace(key, CachedKernel{modulated_taps(pk, theta_for(withbeta)), log10_kappa(base, grid)})
                     .first;
        }
        tg.estimate = convolve_at(it->second.taps, hist, tau - n);
        tg.budget = make_budget(p.noise_radius, tail, it->second.log10_kappa);
        res.estimates.set(t, tg.estimate);
        res.targets.push_back(tg);
    }
    return res;
}

}  // namespace

RecoveryResult recover_from_subsequence(const Sequence& samples, const BraidedSpec& spec,
                                        const RecoveryParams& params, const FrequencyGrid& grid) {
    RecoveryParams p = params;
    p.N = 0;
    p.noise_radius = 0.0;
    return recover_impl(samples, spec, p, grid);
}

RecoveryResult recover_robust(const Sequence& samples, const BraidedSpec& spec, const RecoveryParams& params,
                              const FrequencyGrid& grid) {
    if (params.noise_radius < 0.0) throw ConfigError("noise radius must be nonnegative");
    return recover_impl(samples, spec, params, grid);
}

}  // namespace degenpred
