#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "degenpred/prediction_pipeline.hpp"
#include "degenpred/sequence.hpp"
#include "degenpred/spectral_core.hpp"

namespace degenpred {

enum class PathProcess { ar1, white };
enum class ObservationWindow { full, past };
enum class Precision { double_, extended };

struct ExperimentConfig {
    long T = 250;
    int n = 2;
    int m_nu = 4;
    double beta = kPi;
    double delta = 0.5;
    double rhat = 1.2;
    std::vector<double> gammas{3.0, 10.0, 20.0};
    std::size_t grid = kDefaultGridSize;
    std::uint64_t seed = 1;
    int seeds = 1;
    int lattice = 2;  // step of the observation lattice in the past window
    PathProcess process = PathProcess::ar1;
    ObservationWindow window = ObservationWindow::full;
    Precision precision = Precision::double_;
    std::filesystem::path out_dir = "out";

    void validate() const;
    // Stable textual form and its FNV-1a hash (hex), stamped into CSV headers.
    std::string canonical() const;
    std::string hash() const;
};

// Length 2T+1 real path on [-T, T]. AR(1) with coefficient 0.5 and unit
// innovations after a burn-in, or white noise.
Sequence gen_gaussian_path(long T, std::uint64_t seed, PathProcess process = PathProcess::ar1);

// The experiment's test signal: inverse transform of the gap-free part of the
// path's trace, on the grid-capacity window.
struct ExperimentSignal {
    Sequence path;
    SpectrumTrace trace;  // masked trace of the path
    Sequence x;           // [-N/2, N/2 - 1]
};
ExperimentSignal make_signal(const ExperimentConfig& cfg, std::uint64_t seed);

struct ErrorRecord {
    double gamma = 0.0;
    double E = 0.0;        // (xhat(0) - x(2)) / rms, observation window per config
    double abs_E = 0.0;
    double E_past = 0.0;   // past-lattice window estimate
    double sup_norm_log10 = 0.0;
    double runtime_ms = 0.0;
    std::uint64_t seed = 0;
    bool flagged = false;
    std::string flag;
};

struct GammaTableRow {
    double gamma = 0.0;
    double median_E = 0.0;
    double median_abs_E = 0.0;
    double median_abs_E_past = 0.0;
    double sup_norm_log10 = 0.0;
    int flagged = 0;
};

struct GammaTable {
    std::vector<ErrorRecord> records;
    std::vector<GammaTableRow> rows;
};

ErrorRecord run_single(const ExperimentConfig& cfg, const ExperimentSignal& sig, double gamma);
GammaTable run_gamma_table(const ExperimentConfig& cfg);
// Per-seed records and the median table; returns the written paths.
std::vector<std::filesystem::path> write_gamma_table(const ExperimentConfig& cfg, const GammaTable& table);

// Throws OverflowError after writing the curves when a kernel exceeds double
// range and the config asks for double precision.
std::vector<std::filesystem::path> emit_curves(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> emit_paths(const ExperimentConfig& cfg);

struct RecoveryDemoConfig {
    int m = 2;
    long M = 8;
    long s = 2;
    long length = 64;
    std::vector<double> c_build{0.1, 0.01, 0.001};
    double r = 1e6;
};
std::filesystem::path run_recovery_demo(const ExperimentConfig& cfg, const RecoveryDemoConfig& rc);

// IO. Every CSV starts with a "# config=<hash>" line when a hash is given.
void write_sequence_csv(const std::filesystem::path& p, const Sequence& x, const std::string& hash = {});
Sequence read_sequence_csv(const std::filesystem::path& p);
void write_trace_csv(const std::filesystem::path& p, const SpectrumTrace& f, const std::string& hash = {});
void write_kernel_csv(const std::filesystem::path& p, const Sequence& taps, const std::string& hash = {});
void write_distance_csv(const std::filesystem::path& p, const DistanceCurve& c, const std::string& hash = {});
// Writes `content` to a temporary file and renames it into place.
void write_atomic(const std::filesystem::path& p, const std::string& content);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};
std::string render_svg(const std::string& title, const std::vector<SvgSeries>& series, bool log_y);

double median(std::vector<double> v);

}  // namespace degenpred
