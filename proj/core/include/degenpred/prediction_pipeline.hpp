#pragma once

#include <map>
#include <optional>
#include <vector>

#include "degenpred/degeneracy_classes.hpp"
#include "degenpred/predictor_kernels.hpp"
#include "degenpred/sequence.hpp"
#include "degenpred/spectral_core.hpp"

namespace degenpred {

enum class PredictMode {
    kernel,          // causal convolution with the truncated kernel
    masked_spectral  // inverse transform of the masked transfer times the trace
};

// Estimates x(t + n) for t in `targets` from samples on `observed`.
struct PredictionTask {
    KernelSpec kernel;
    double theta = 0.0;  // (beta - pi) / (m nu)
    IndexRange observed;
    IndexRange targets;
    PredictMode mode = PredictMode::kernel;
    std::optional<GapSpec> gap;  // required for masked_spectral

    static PredictionTask make(const KernelSpec& k, IndexRange observed, IndexRange targets);
    void validate() const;
};

// Taps h(k) e^{i theta (k + n)}: the predictor for roots of exp(i m nu w) = exp(i beta).
Sequence modulated_taps(const PredictKernel& base, double theta);

Sequence predict(const Sequence& x, const PredictionTask& task, const FrequencyGrid& grid);
// Kernel mode with a precomputed beta = pi kernel.
Sequence predict(const Sequence& x, const PredictionTask& task, const PredictKernel& kernel);

struct ErrorBudget {
    double sigma_noise = 0.0;
    double sigma_trunc = 0.0;
    double kappa = 0.0;          // sup |H_n| (linear; inf when beyond doubles)
    double log10_kappa = 0.0;
    double noise_bound = 0.0;    // sigma_noise (kappa + 1)
    double trunc_bound = 0.0;    // sigma_trunc (kappa + 1)
    double bound = 0.0;          // (sigma_noise + sigma_trunc)(kappa + 1)
};

struct RobustTask {
    long M = 8;
    long N = 64;
    long s = 0;
    double noise_radius = 0.0;
    int lattice = 1;  // observations restricted to multiples of `lattice`

    void validate() const;
};

struct RobustResult {
    Sequence estimates;  // indices [-M, M]
    ErrorBudget budget;
};

ErrorBudget make_budget(double sigma_noise, double sigma_trunc, double log10_kappa);

// Estimates x(t) for |t| <= M from observed samples with M < |k| <= N that
// lie on the lattice outside (-s, s), using the causal horizon-n kernel.
// Targets without enough history keep the zero-filled convolution.
RobustResult predict_robust(const Sequence& observations, const RobustTask& task, const KernelSpec& kernel,
                            const FrequencyGrid& grid);

// Predicts y(k + steps) for k in `targets` (subsequence indices) by embedding
// with supersequence(y, m, s) and applying the m nu kernel with horizon steps*m.
Sequence predict_subsequence(const Sequence& y, int m, long s, int steps, const KernelSpec& kernel,
                             IndexRange targets, const FrequencyGrid& grid);

struct PhaseSpec {
    int nu = 1;
    double beta = kPi;
};

// Predicts y one period ahead per phase: estimate at index t uses phase d
// with (t + d)/m integral and its own (nu_d, beta_d) kernel.
Sequence predict_compound(const Sequence& y, const std::map<int, PhaseSpec>& phases, int m, double gamma,
                          double rhat, IndexRange targets, const FrequencyGrid& grid);

struct RecoveryTarget {
    long t = 0;
    int phase = 0;
    bool observed = false;
    int horizon = 0;
    cplx estimate;
    ErrorBudget budget;
};

struct RecoveryResult {
    Sequence estimates;  // [-M, M]
    std::vector<RecoveryTarget> targets;
};

struct RecoveryParams {
    double gamma = 3.0;
    double rhat = 1.2;
    long M = 8;
    long s = 2;
    long N = 0;              // truncation radius; 0 keeps all samples
    double noise_radius = 0.0;
};

// Recovers x(t), |t| <= M, from samples x(k m) with |k m| > s (zero elsewhere).
RecoveryResult recover_from_subsequence(const Sequence& samples, const BraidedSpec& spec,
                                        const RecoveryParams& params, const FrequencyGrid& grid);
// Same with truncation to |k| <= N and a noise ball of the given radius.
RecoveryResult recover_robust(const Sequence& samples, const BraidedSpec& spec, const RecoveryParams& params,
                              const FrequencyGrid& grid);

}  // namespace degenpred
