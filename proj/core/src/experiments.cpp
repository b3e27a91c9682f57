#include "degenpred/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "degenpred/degeneracy_classes.hpp"
#include "degenpred/errors.hpp"
#include "degenpred/predictor_kernels.hpp"
#include "degenpred/sequence_ops.hpp"

namespace degenpred {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

IndexRange capacity(std::size_t n) {
    const long h = static_cast<long>(n) / 2;
    return {-h, h - 1};
}

std::string header(const std::string& hash) { return hash.empty() ? std::string() : "# config=" + hash + "\n"; }

const char* process_name(PathProcess p) { return p == PathProcess::ar1 ? "ar1" : "white"; }
const char* window_name(ObservationWindow w) { return w == ObservationWindow::full ? "full" : "past"; }
const char* precision_name(Precision p) { return p == Precision::double_ ? "double" : "extended"; }

double kernel_log10_norm(const ExperimentConfig& cfg, double gamma) {
    const KernelSpec ks{cfg.n, 1, cfg.m_nu, gamma, cfg.rhat, kPi};
    if (cfg.precision == Precision::extended) return kernel_norm_extended(ks).log10_sup;
    return kernel_norm_saddle(ks).log10_sup;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (T < 8) throw ConfigError("T must be at least 8");
    if (n == 0) throw ConfigError("horizon n must be nonzero");
    if (m_nu < 1) throw ConfigError("m_nu must be positive");
    if (!(beta > -kPi && beta <= kPi)) throw ConfigError("beta must lie in (-pi, pi]");
    if (!(delta > 0.0 && delta < 2.0)) throw ConfigError("delta must lie in (0, 2)");
    if (!(rhat > 0.0)) throw ConfigError("rhat must be positive");
    if (gammas.empty()) throw ConfigError("gamma list is empty");
    for (double g : gammas)
        if (!(g > 1.0)) throw ConfigError("every gamma must exceed 1");
    make_grid(grid);
    if (static_cast<long>(grid) < 2 * T + 1) throw ConfigError("grid must hold the 2T+1 path samples");
    if (seeds < 1) throw ConfigError("seeds must be positive");
    if (lattice < 1) throw ConfigError("lattice must be positive");
    if (precision == Precision::extended && !extended_precision_available())
        throw ConfigError("extended precision requested but not built in");
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "T=" << T << ";n=" << n << ";mnu=" << m_nu << ";beta=" << num(beta) << ";delta=" << num(delta)
       << ";rhat=" << num(rhat) << ";gammas=";
    for (std::size_t i = 0; i < gammas.size(); ++i) os << (i ? "," : "") << num(gammas[i]);
    os << ";grid=" << grid << ";seed=" << seed << ";seeds=" << seeds << ";lattice=" << lattice
       << ";process=" << process_name(process) << ";window=" << window_name(window)
       << ";precision=" << precision_name(precision);
    return os.str();
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Sequence gen_gaussian_path(long T, std::uint64_t seed, PathProcess process) {
    if (T < 8) throw ConfigError("T must be at least 8");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const long len = 2 * T + 1;
    std::vector<double> v(static_cast<std::size_t>(len));
    if (process == PathProcess::white) {
        for (auto& x : v) x = normal(rng);
    } else {
        double g = 0.0;
        for (int i = 0; i < 200; ++i) g = 0.5 * g + normal(rng);
        for (auto& x : v) {
            g = 0.5 * g + normal(rng);
            x = g;
        }
    }
    return Sequence::from_real(-T, v);
}

ExperimentSignal make_signal(const ExperimentConfig& cfg, std::uint64_t seed) {
    const FrequencyGrid grid = make_grid(cfg.grid);
    ExperimentSignal s;
    s.path = gen_gaussian_path(cfg.T, seed, cfg.process);
    const GapSpec gap{cfg.delta, cfg.m_nu, cfg.beta};
    s.trace = bandstop_trace(ztrace(s.path, grid), gap);
    s.x = inv_ztrace(s.trace, capacity(cfg.grid));
    return s;
}

ErrorRecord run_single(const ExperimentConfig& cfg, const ExperimentSignal& sig, double gamma) {
    const auto start = std::chrono::steady_clock::now();
    const FrequencyGrid grid = make_grid(cfg.grid);
    ErrorRecord rec;
    rec.gamma = gamma;

    double ss = 0.0;
    for (long t = -cfg.T; t <= 0; ++t) ss += std::norm(sig.x.at(t));
    const double rms = std::sqrt(ss / static_cast<double>(cfg.T + 1));
    const cplx truth = sig.x.at(cfg.n);

    const KernelSpec ks{cfg.n, 1, cfg.m_nu, gamma, cfg.rhat, cfg.beta};
    PredictionTask task = PredictionTask::make(ks, capacity(cfg.grid), {0, 0});
    task.mode = PredictMode::masked_spectral;
    task.gap = GapSpec{cfg.delta, cfg.m_nu, cfg.beta};

    PredictionTask past = task;
    past.observed = {-cfg.T, 0};
    const Sequence x_past = decimate(sig.x, cfg.lattice, 0);

    if (!(rms > 0.0)) {
        rec.flagged = true;
        rec.flag = "zero-rms";
        rec.E = rec.abs_E = rec.E_past = std::nan("");
    } else {
        try {
            const Sequence full_est = predict(sig.x, task, grid);
            const Sequence past_est = predict(x_past, past, grid);
            const cplx e_full = (full_est.at(0) - truth) / rms;
            const cplx e_past = (past_est.at(0) - truth) / rms;
            const double e_win = cfg.window == ObservationWindow::full ? e_full.real() : e_past.real();
            rec.E = e_win;
            rec.abs_E = std::abs(e_win);
            rec.E_past = e_past.real();
        } catch (const OverflowError& e) {
            rec.flagged = true;
            rec.flag = "overflow";
            rec.E = rec.abs_E = rec.E_past = std::nan("");
        }
    }
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

double median(std::vector<double> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

GammaTable run_gamma_table(const ExperimentConfig& cfg) {
    cfg.validate();
    GammaTable tab;
    std::map<double, double> norms;
    for (double g : cfg.gammas) {
        try {
            norms[g] = kernel_log10_norm(cfg, g);
        } catch (const std::exception&) {
            norms[g] = std::nan("");
        }
    }
    for (int i = 0; i < cfg.seeds; ++i) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        const ExperimentSignal sig = make_signal(cfg, seed);
        for (double g : cfg.gammas) {
            ErrorRecord r = run_single(cfg, sig, g);
            r.seed = seed;
            r.sup_norm_log10 = norms[g];
            tab.records.push_back(r);
        }
    }
    for (double g : cfg.gammas) {
        std::vector<double> e, ae, ap;
        GammaTableRow row;
        row.gamma = g;
        row.sup_norm_log10 = norms[g];
        for (const auto& r : tab.records) {
            if (r.gamma != g) continue;
            if (r.flagged) ++row.flagged;
            e.push_back(r.E);
            ae.push_back(r.abs_E);
            ap.push_back(std::abs(r.E_past));
        }
        row.median_E = median(e);
        row.median_abs_E = median(ae);
        row.median_abs_E_past = median(ap);
        tab.rows.push_back(row);
    }
    return tab;
}

std::vector<std::filesystem::path> write_gamma_table(const ExperimentConfig& cfg, const GammaTable& table) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string h = cfg.hash();
    std::ostringstream t;
    t << header(h) << "gamma,median_E,median_abs_E,median_abs_E_past,log10_sup_norm,flagged\n";
    for (const auto& r : table.rows)
        t << num(r.gamma) << ',' << num(r.median_E) << ',' << num(r.median_abs_E) << ','
          << num(r.median_abs_E_past) << ',' << num(r.sup_norm_log10) << ',' << r.flagged << '\n';
    std::ostringstream d;
    d << header(h) << "gamma,seed,E,abs_E,E_past,log10_sup_norm,flag\n";
    for (const auto& r : table.records)
        d << num(r.gamma) << ',' << r.seed << ',' << num(r.E) << ',' << num(r.abs_E) << ',' << num(r.E_past) << ','
          << num(r.sup_norm_log10) << ',' << (r.flagged ? r.flag : "") << '\n';
    const auto p1 = cfg.out_dir / "gamma_table.csv";
    const auto p2 = cfg.out_dir / "gamma_records.csv";
    write_atomic(p1, t.str());
    write_atomic(p2, d.str());
    return {p1, p2};
}

std::vector<std::filesystem::path> emit_curves(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const FrequencyGrid grid = make_grid(cfg.grid);
    const std::string h = cfg.hash();
    const GapSpec gap{cfg.delta, cfg.m_nu, cfg.beta};
    std::vector<std::filesystem::path> out;
    std::vector<SvgSeries> full_series, interior_series;
    double worst_overflow = -kInf;
    for (double g : cfg.gammas) {
        const KernelSpec ks{cfg.n, 1, cfg.m_nu, g, cfg.rhat, kPi};
        const std::string tag = "gamma" + short_num(g);
        const DistanceCurve full = distance_curve(ks, grid);
        const DistanceCurve masked = distance_curve(masked_transfer(ks, gap, grid), cfg.n);
        // The masked curve measures |~H - e^{i n w}| only where ~H is retained.
        DistanceCurve masked_view = masked;
        SvgSeries fs{"gamma=" + short_num(g), {}, {}};
        SvgSeries is{"gamma=" + short_num(g), {}, {}};
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double w = grid.node(j);
            if (gap.in_gap(w)) {
                masked_view.distance[j] = 0.0;
            } else {
                is.x.push_back(w);
                is.y.push_back(masked.distance[j]);
            }
            fs.x.push_back(w);
            fs.y.push_back(full.distance[j]);
        }
        full_series.push_back(std::move(fs));
        interior_series.push_back(std::move(is));
        const auto p1 = cfg.out_dir / ("distance_" + tag + ".csv");
        const auto p2 = cfg.out_dir / ("masked_distance_" + tag + ".csv");
        write_distance_csv(p1, full, h);
        write_distance_csv(p2, masked_view, h);
        out.push_back(p1);
        out.push_back(p2);
        try {
            const PredictKernel k = predictor_kernel(ks, grid);
            const auto p3 = cfg.out_dir / ("kernel_" + tag + ".csv");
            write_kernel_csv(p3, k.taps, h);
            out.push_back(p3);
        } catch (const OverflowError& e) {
            worst_overflow = std::max(worst_overflow, e.log10_norm());
        }
    }
    const auto s1 = cfg.out_dir / "distance_full.svg";
    const auto s2 = cfg.out_dir / "distance_interior.svg";
    write_atomic(s1, render_svg("|H_n - e^{i n w}| on (-pi, pi]", full_series, true));
    write_atomic(s2, render_svg("|~H_n - e^{i n w}| outside the gaps", interior_series, true));
    out.push_back(s1);
    out.push_back(s2);
    if (!std::isinf(worst_overflow) && cfg.precision == Precision::double_)
        throw OverflowError("kernel taps exceed double range; curves written, kernel CSV skipped", worst_overflow);
    return out;
}

std::vector<std::filesystem::path> emit_paths(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const std::string h = cfg.hash();
    const ExperimentSignal sig = make_signal(cfg, cfg.seed);
    const Sequence x = sig.x.restricted({-cfg.T, cfg.T});
    const auto p1 = cfg.out_dir / "path_g.csv";
    const auto p2 = cfg.out_dir / "path_x.csv";
    write_sequence_csv(p1, sig.path, h);
    write_sequence_csv(p2, x, h);
    SvgSeries gs{"g", {}, {}}, xs{"x", {}, {}};
    for (long t = -cfg.T; t <= cfg.T; ++t) {
        gs.x.push_back(static_cast<double>(t));
        gs.y.push_back(sig.path.at(t).real());
        xs.x.push_back(static_cast<double>(t));
        xs.y.push_back(x.at(t).real());
    }
    const auto p3 = cfg.out_dir / "paths.svg";
    write_atomic(p3, render_svg("path g and its gap-free part x", {gs, xs}, false));
    return {p1, p2, p3};
}

std::filesystem::path run_recovery_demo(const ExperimentConfig& cfg, const RecoveryDemoConfig& rc) {
    using nlohmann::json;
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const FrequencyGrid grid = make_grid(cfg.grid);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(rc.length));
    for (auto& e : v) e = normal(rng);
    const Sequence x = Sequence::from_real(-rc.length / 2, v);

    json rep;
    rep["config"] = cfg.canonical();
    rep["config_hash"] = cfg.hash();
    rep["m"] = rc.m;
    rep["M"] = rc.M;
    rep["s"] = rc.s;

    BraidedSpec spec;
    spec.m = rc.m;
    spec.nu = nu_scheme(rc.m);
    spec.beta = cfg.beta;
    spec.r = rc.r;
    std::optional<BraidedResult> member;
    for (double c : rc.c_build) {
        spec.c_build = c;
        BraidedResult br = braided_approximant(x, spec, grid, false);
        json row;
        row["c_build"] = c;
        row["distance"] = br.certificate.distance_l2;
        row["relative_distance"] = br.certificate.relative_distance;
        row["L"] = br.certificate.L_used;
        for (const auto& p : br.certificate.phases)
            row["phases"].push_back({{"d", p.d},
                                     {"n_total", p.n_total},
                                     {"membership", p.membership},
                                     {"r", p.r},
                                     {"passes", p.passes},
                                     {"arho_deviation", p.arho_deviation}});
        rep["density"].push_back(row);
        member = std::move(br);
    }

    if (member) {
        const Sequence& xm = member->x_hat;
        Sequence samples = decimate(xm, rc.m, 0);
        for (long t = -rc.s; t <= rc.s; ++t)
            if (samples.window().contains(t)) samples.set(t, cplx{});
        for (double g : cfg.gammas) {
            json row;
            row["gamma"] = g;
            try {
                const RecoveryParams rp{g, cfg.rhat, rc.M, rc.s, 0, 0.0};
                const RecoveryResult rr = recover_from_subsequence(samples, spec, rp, grid);
                double worst = 0.0;
                for (const auto& tg : rr.targets) {
                    const cplx truth = xm.at(tg.t);
                    worst = std::max(worst, std::abs(tg.estimate - truth));
                    row["targets"].push_back({{"t", tg.t},
                                              {"phase", tg.phase},
                                              {"observed", tg.observed},
                                              {"horizon", tg.horizon},
                                              {"estimate", tg.estimate.real()},
                                              {"truth", truth.real()},
                                              {"sigma", tg.budget.sigma_noise + tg.budget.sigma_trunc},
                                              {"log10_kappa", tg.budget.log10_kappa},
                                              {"bound", tg.budget.bound}});
                }
                row["max_error"] = worst;
                row["sup_norm"] = xm.restricted({-rc.M, rc.M}).sup_norm();
            } catch (const OverflowError& e) {
                row["error"] = e.what();
                row["log10_norm"] = e.log10_norm();
            } catch (const std::exception& e) {
                row["error"] = e.what();
            }
            rep["recovery"].push_back(row);
        }
    }
    const auto p = cfg.out_dir / "recovery.json";
    write_atomic(p, rep.dump(2) + "\n");
    return p;
}

void write_atomic(const std::filesystem::path& p, const std::string& content) {
    const auto tmp = p.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp);
        f << content;
    }
    std::filesystem::rename(tmp, p);
}

void write_sequence_csv(const std::filesystem::path& p, const Sequence& x, const std::string& hash) {
    std::ostringstream os;
    os << header(hash) << "t,re,im\n";
    for (long t = x.first(); t <= x.last() && !x.empty(); ++t)
        os << t << ',' << num(x.at(t).real()) << ',' << num(x.at(t).imag()) << '\n';
    write_atomic(p, os.str());
}

Sequence read_sequence_csv(const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f) throw ConfigError("cannot open " + p.string());
    std::string line;
    std::vector<std::pair<long, cplx>> rows;
    bool seen_header = false;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            if (line.rfind("t,re,im", 0) != 0) throw ConfigError("expected header t,re,im in " + p.string());
            seen_header = true;
            continue;
        }
        long t = 0;
        double re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf", &t, &re, &im) != 3)
            throw ConfigError("malformed row in " + p.string() + ": " + line);
        rows.emplace_back(t, cplx{re, im});
    }
    if (rows.empty()) return {};
    long lo = rows.front().first, hi = lo;
    for (const auto& r : rows) {
        lo = std::min(lo, r.first);
        hi = std::max(hi, r.first);
    }
    Sequence x = Sequence::zeros({lo, hi});
    for (const auto& r : rows) x.set(r.first, r.second);
    return x;
}

void write_trace_csv(const std::filesystem::path& p, const SpectrumTrace& f, const std::string& hash) {
    std::ostringstream os;
    os << header(hash) << "omega,re,im\n";
    for (std::size_t j = 0; j < f.values.size(); ++j)
        os << num(f.grid.node(j)) << ',' << num(f.values[j].real()) << ',' << num(f.values[j].imag()) << '\n';
    write_atomic(p, os.str());
}

void write_kernel_csv(const std::filesystem::path& p, const Sequence& taps, const std::string& hash) {
    std::ostringstream os;
    os << header(hash) << "k,re,im\n";
    for (long k = taps.first(); k <= taps.last() && !taps.empty(); ++k)
        os << k << ',' << num(taps.at(k).real()) << ',' << num(taps.at(k).imag()) << '\n';
    write_atomic(p, os.str());
}

void write_distance_csv(const std::filesystem::path& p, const DistanceCurve& c, const std::string& hash) {
    std::ostringstream os;
    os << header(hash) << "omega,distance,overflow_flag\n";
    for (std::size_t j = 0; j < c.distance.size(); ++j)
        os << num(c.grid.node(j)) << ',' << num(c.distance[j]) << ',' << static_cast<int>(c.overflow[j]) << '\n';
    write_atomic(p, os.str());
}

std::string render_svg(const std::string& title, const std::vector<SvgSeries>& series, bool log_y) {
    const double W = 900, H = 420, ml = 70, mr = 20, mt = 40, mb = 40;
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto& s : series) {
        for (double x : s.x) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
        for (double y : s.y) {
            if (log_y && !(y > 0.0)) continue;
            ymin = std::min(ymin, ty(y));
            ymax = std::max(ymax, ty(y));
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    if (std::isinf(ymin)) ymin = 0.0, ymax = 1.0;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title
       << (log_y ? " (log10 scale)" : "") << "</text>\n"
       << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
       << "\" fill=\"none\" stroke=\"black\"/>\n"
       << "<text x=\"4\" y=\"" << mt + 10 << "\" font-size=\"11\">" << short_num(ymax) << "</text>\n"
       << "<text x=\"4\" y=\"" << H - mb << "\" font-size=\"11\">" << short_num(ymin) << "</text>\n"
       << "<text x=\"" << ml << "\" y=\"" << H - 12 << "\" font-size=\"11\">" << short_num(xmin) << "</text>\n"
       << "<text x=\"" << W - mr - 60 << "\" y=\"" << H - 12 << "\" font-size=\"11\">" << short_num(xmax)
       << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* col = colors[i % 5];
        os << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << col << "\" points=\"";
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            if (log_y && !(s.y[j] > 0.0)) continue;
            const double px = ml + (s.x[j] - xmin) / (xmax - xmin) * (W - ml - mr);
            const double py = H - mb - (ty(s.y[j]) - ymin) / (ymax - ymin) * (H - mt - mb);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
            os << buf;
        }
        os << "\"/>\n<text x=\"" << W - mr - 150 << "\" y=\"" << mt + 16 + 14 * i << "\" font-size=\"12\" fill=\""
           << col << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace degenpred
