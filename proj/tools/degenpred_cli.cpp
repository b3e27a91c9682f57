// degenpred: command line front end for the experiment harness.
//
//   degenpred gamma-table --gamma 3,10,20 --seeds 11 --out out
//   degenpred curves --gamma 3 --out out
//   degenpred paths --seed 7
//   degenpred recovery --gamma 3,10,20
//   degenpred selftest

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "degenpred/degeneracy_classes.hpp"
#include "degenpred/errors.hpp"
#include "degenpred/experiments.hpp"
#include "degenpred/predictor_kernels.hpp"
#include "degenpred/sequence_ops.hpp"
#include "degenpred/spectral_core.hpp"

namespace dp = degenpred;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitOverflow = 3;

struct Options {
    std::vector<double> gammas{3.0, 10.0, 20.0};
    long T = 250;
    double delta = 0.5;
    double rhat = 1.2;
    int n = 2;
    int mnu = 4;
    std::size_t grid = dp::kDefaultGridSize;
    std::uint64_t seed = 1;
    int seeds = 11;
    int lattice = 2;
    std::string precision = "double";
    std::string process = "ar1";
    std::string window = "full";
    std::string out = "out";
};

void add_common(CLI::App* app, Options& o) {
    app->add_option("--gamma", o.gammas, "gamma ladder")->delimiter(',');
    app->add_option("--T", o.T, "observation half-length");
    app->add_option("--delta", o.delta, "chordal gap half-width");
    app->add_option("--rhat", o.rhat, "exponent in alpha(gamma)");
    app->add_option("--n", o.n, "prediction horizon");
    app->add_option("--mnu", o.mnu, "degeneracy period m*nu");
    app->add_option("--grid", o.grid, "frequency grid size (power of two)");
    app->add_option("--seed", o.seed, "first seed");
    app->add_option("--seeds", o.seeds, "number of seeds for medians");
    app->add_option("--lattice", o.lattice, "step of the past observation lattice");
    app->add_option("--precision", o.precision, "double|extended")->check(CLI::IsMember({"double", "extended"}));
    app->add_option("--process", o.process, "ar1|white")->check(CLI::IsMember({"ar1", "white"}));
    app->add_option("--window", o.window, "full|past")->check(CLI::IsMember({"full", "past"}));
    app->add_option("--out", o.out, "output directory");
}

dp::ExperimentConfig to_config(const Options& o) {
    dp::ExperimentConfig c;
    c.T = o.T;
    c.n = o.n;
    c.m_nu = o.mnu;
    c.delta = o.delta;
    c.rhat = o.rhat;
    c.gammas = o.gammas;
    c.grid = o.grid;
    c.seed = o.seed;
    c.seeds = o.seeds;
    c.lattice = o.lattice;
    c.precision = o.precision == "extended" ? dp::Precision::extended : dp::Precision::double_;
    c.process = o.process == "white" ? dp::PathProcess::white : dp::PathProcess::ar1;
    c.window = o.window == "past" ? dp::ObservationWindow::past : dp::ObservationWindow::full;
    c.out_dir = o.out;
    c.validate();
    return c;
}

void list(const std::vector<std::filesystem::path>& ps) {
    for (const auto& p : ps) std::cout << "wrote " << p.string() << '\n';
}

int cmd_gamma_table(const dp::ExperimentConfig& cfg) {
    const dp::GammaTable t = dp::run_gamma_table(cfg);
    list(dp::write_gamma_table(cfg, t));
    std::printf("%8s %12s %12s %12s %14s\n", "gamma", "median E", "median |E|", "|E| past", "log10 |h|inf");
    bool overflow = false;
    for (const auto& r : t.rows) {
        std::printf("%8g %12.5g %12.5g %12.5g %14.4f\n", r.gamma, r.median_E, r.median_abs_E, r.median_abs_E_past,
                    r.sup_norm_log10);
        if (r.flagged) overflow = true;
    }
    double ms = 0.0;
    for (const auto& r : t.records) ms += r.runtime_ms;
    std::printf("prediction time %.1f ms over %zu runs\n", ms, t.records.size());
    if (overflow && cfg.precision == dp::Precision::double_) {
        std::cerr << "some rows overflowed double precision; rerun with --precision extended\n";
        return kExitOverflow;
    }
    return 0;
}

int cmd_selftest(std::size_t n) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, double value) {
        std::printf("[%s] %-40s %.3g\n", ok ? "PASS" : "FAIL", name.c_str(), value);
        if (!ok) ++failures;
    };
    const dp::FrequencyGrid grid = dp::make_grid(n);
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> nd;
    std::vector<dp::cplx> v(32);
    for (auto& e : v) e = {nd(rng), nd(rng)};
    const dp::Sequence x(-10, v);
    const dp::SpectrumTrace X = dp::ztrace(x, grid);
    const double rt = dp::max_abs_diff(dp::inv_ztrace(X, x.window()), x);
    check("ztrace round trip", rt <= 1e-10, rt);
    double e1 = 0.0;
    for (const auto& c : X.values) e1 += std::norm(c);
    e1 /= static_cast<double>(n);
    const double e0 = x.l2_norm() * x.l2_norm();
    check("Parseval", std::abs(e1 - e0) <= 1e-9 * e0, std::abs(e1 - e0) / e0);
    double rs = 0.0;
    for (double w : dp::root_set(4, dp::kPi).points)
        rs = std::max(rs, std::abs(std::polar(1.0, 4 * w) - std::polar(1.0, dp::kPi)));
    check("root set residual", rs <= 1e-12, rs);
    const dp::KernelSpec ks{2, 1, 4, 3.0, 1.2, dp::kPi};
    const dp::PredictKernel k = dp::predictor_kernel(ks, grid);
    const dp::SparsityReport sr = dp::sparsity_report(k, 1e-8);
    check("kernel first tap index 6", sr.first_nonzero_index == 6, static_cast<double>(sr.first_nonzero_index));
    check("kernel lattice energy", sr.on_lattice_energy_fraction >= 1 - 1e-8, 1 - sr.on_lattice_energy_fraction);
    check("nu scheme disjoint (m=2)", dp::disjointness_check(2, dp::nu_scheme(2), dp::kPi), 0.0);
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral degeneracy predictors: experiments and checks"};
    app.require_subcommand(1);
    Options o;
    auto* curves = app.add_subcommand("curves", "distance curves |H - e^{inw}| and kernels (CSV + SVG)");
    auto* table = app.add_subcommand("gamma-table", "relative error E across the gamma ladder");
    auto* paths = app.add_subcommand("paths", "the Gaussian path and its gap-free part");
    auto* recovery = app.add_subcommand("recovery", "braided approximant and recovery from a subsequence");
    auto* selftest = app.add_subcommand("selftest", "quick numerical sanity checks");
    for (auto* s : {curves, table, paths, recovery, selftest}) add_common(s, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*selftest) return cmd_selftest(o.grid);
        const dp::ExperimentConfig cfg = to_config(o);
        if (*table) return cmd_gamma_table(cfg);
        if (*curves) list(dp::emit_curves(cfg));
        if (*paths) list(dp::emit_paths(cfg));
        if (*recovery) list({dp::run_recovery_demo(cfg, dp::RecoveryDemoConfig{})});
        return 0;
    } catch (const dp::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const dp::OverflowError& e) {
        std::cerr << "overflow: " << e.what() << " (log10 norm " << e.log10_norm() << ")\n";
        return kExitOverflow;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
