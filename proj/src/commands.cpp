#include "tpi/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tpi/events.hpp"
#include "tpi/patterns.hpp"
#include "tpi/speckle.hpp"

namespace tpi {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const std::string& out_dir, const std::string& name) {
    fs::create_directories(out_dir);
    const std::string path = out_dir + "/" + name;
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open output file: " + path);
    return os;
}

void write_pattern_csv(std::ofstream& os, const RunConfig& cfg,
                       const std::vector<double>& grid,
                       double (*eval)(const Geometry&, double)) {
    echo_config(os, cfg);
    os << "u,value\n";
    char buf[64];
    for (double u : grid) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", u,
                      eval(cfg.geometry, u));
        os << buf;
    }
}

void warn_if_high_rate(const RunConfig& cfg) {
    const double product =
        std::max(cfg.detector1.mean_rate, cfg.detector2.mean_rate) * cfg.tau_c;
    if (product > 0.1)
        std::fprintf(stderr,
                     "warning: mean_rate * tau_c = %.3g exceeds the low-rate "
                     "regime\n",
                     product);
}

}  // namespace

BunchingFit fit_bunching(const std::vector<std::pair<double, double>>& g2_curve) {
    BunchingFit out;
    if (g2_curve.empty())
        return out;

    double range = 0.0;
    for (const auto& [tau, _] : g2_curve)
        range = std::max(range, std::abs(tau));
    if (!(range > 0.0))
        return out;

    // fold tau -> |tau| and rebin coarsely
    const std::size_t n_bins = 100;
    const double bw = range / static_cast<double>(n_bins) * (1.0 + 1e-12);
    std::vector<double> sum(n_bins, 0.0);
    std::vector<std::size_t> cnt(n_bins, 0);
    for (const auto& [tau, g2] : g2_curve) {
        const auto b = static_cast<std::size_t>(std::abs(tau) / bw);
        if (b < n_bins) {
            sum[b] += g2;
            cnt[b] += 1;
        }
    }
    std::vector<double> excess(n_bins, 0.0);
    for (std::size_t b = 0; b < n_bins; ++b)
        if (cnt[b] > 0)
            excess[b] = sum[b] / static_cast<double>(cnt[b]) - 1.0;

    double peak = 0.0;
    for (std::size_t b = 0; b < std::min<std::size_t>(3, n_bins); ++b)
        peak = std::max(peak, excess[b]);
    if (peak < 0.2) {
        out.g2_zero = 1.0 + excess[0];
        return out;  // no bunching peak
    }

    // weighted regression of ln(excess) on the bin centre
    double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
    std::size_t used = 0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (cnt[b] == 0 || excess[b] <= 0.1 * peak)
            continue;
        const double t = (static_cast<double>(b) + 0.5) * bw;
        const double y = std::log(excess[b]);
        const double w = excess[b] * excess[b];
        sw += w;
        st += w * t;
        sy += w * y;
        stt += w * t * t;
        sty += w * t * y;
        ++used;
    }
    const double det = sw * stt - st * st;
    if (used < 3 || std::abs(det) < 1e-300) {
        out.g2_zero = 1.0 + peak;
        return out;
    }
    const double slope = (sw * sty - st * sy) / det;
    const double intercept = (stt * sy - st * sty) / det;
    if (slope >= 0.0) {
        out.g2_zero = 1.0 + peak;
        return out;
    }
    out.g2_zero = 1.0 + std::exp(intercept);
    out.tau_c_ns = -2.0 / slope;
    out.peak_found = true;
    return out;
}

AnalyticOutput cmd_analytic(const RunConfig& cfg, const std::string& out_dir) {
    cfg.geometry.validate();
    const std::vector<double> grid = cfg.scan_positions();

    AnalyticOutput out;
    out.thermal_csv = out_dir + "/thermal_pattern.csv";
    out.spdc_csv = out_dir + "/spdc_pattern.csv";
    out.first_order_csv = out_dir + "/first_order_pattern.csv";

    auto thermal = open_output(out_dir, "thermal_pattern.csv");
    write_pattern_csv(thermal, cfg, grid, [](const Geometry& g, double u) {
        return g2_finite_thermal(g, {u, 0.0});
    });
    auto spdc = open_output(out_dir, "spdc_pattern.csv");
    write_pattern_csv(spdc, cfg, grid, [](const Geometry& g, double u) {
        return g2_finite_spdc(g, {u, 0.0});
    });
    auto first = open_output(out_dir, "first_order_pattern.csv");
    write_pattern_csv(first, cfg, grid, [](const Geometry& g, double u) {
        return first_order_pattern(g, u);
    });
    return out;
}

SpeckleOutput cmd_speckle(const RunConfig& cfg, const std::string& out_dir) {
    if (cfg.source_kind != SourceKind::thermal)
        throw std::invalid_argument("speckle: source kind must be thermal");
    ScanConfig sc = cfg.scan_config();
    sc.engine = Engine::speckle_mc;

    SpeckleOutput out;
    out.result = run_scan(cfg.geometry, cfg.source_model(), sc);

    out.csv = out_dir + "/speckle.csv";
    auto os = open_output(out_dir, "speckle.csv");
    echo_config(os, cfg);
    os << "x1,x2,value,std_error\n";
    char buf[128];
    for (std::size_t i = 0; i < out.result.x1.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n",
                      out.result.x1[i], out.result.x2[i],
                      out.result.coincidence[i], out.result.coincidence_err[i]);
        os << buf;
    }
    return out;
}

HbtOutput cmd_hbt(const RunConfig& cfg, const std::string& out_dir) {
    cfg.geometry.validate();
    CounterRng rng(cfg.seed, 0);

    EventStream ev1, ev2;
    if (cfg.source_kind == SourceKind::spdc) {
        const DetectorPair pos{cfg.hbt_x1, cfg.hbt_x2};
        std::tie(ev1, ev2) = sample_spdc_pairs(
            cfg.geometry, SpdcModel{cfg.phase_difference}, cfg.pair_rate,
            cfg.hbt_duration_s, pos, rng);
    } else if (cfg.source_kind == SourceKind::laser) {
        // constant intensity: plain homogeneous Poisson streams
        IntensitySeries flat;
        flat.dt = 1e-6;
        flat.samples.assign(
            static_cast<std::size_t>(cfg.hbt_duration_s / flat.dt), 1.0);
        ev1 = sample_thermal_events(flat, DetectorId::D1, cfg.detector1, rng);
        ev2 = sample_thermal_events(flat, DetectorId::D2, cfg.detector2, rng);
    } else {
        warn_if_high_rate(cfg);
        ThermalSourceConfig src;
        src.subsources_per_slit = cfg.subsources_per_slit;
        src.tau_c = cfg.tau_c;
        src.mean_intensity = cfg.mean_intensity;
        src.seed = cfg.seed;
        const std::vector<double> subs = discretize_source(cfg.geometry, src);
        const std::vector<double> xs{cfg.hbt_x1, cfg.hbt_x2};
        const auto series = speckle_time_series_multi(
            src, subs, xs, cfg.hbt_duration_s,
            cfg.time_step_over_tau_c * cfg.tau_c, cfg.geometry, rng);
        ev1 = sample_thermal_events(series[0], DetectorId::D1, cfg.detector1, rng);
        ev2 = sample_thermal_events(series[1], DetectorId::D2, cfg.detector2, rng);
    }

    const CoincidenceHistogram hist = build_histogram(ev1, ev2, cfg.histogram);
    const auto g2_curve = g2_tau(hist, ev1, ev2);

    HbtOutput out;
    out.bunching = fit_bunching(g2_curve);
    out.windowed = count_windowed(ev1, ev2, cfg.histogram);
    const double t_ns = ev1.duration_ns;
    out.rate_d1 = static_cast<double>(ev1.timestamps_ns.size()) / (t_ns * 1e-9);
    out.rate_d2 = static_cast<double>(ev2.timestamps_ns.size()) / (t_ns * 1e-9);
    out.accidental_expectation = static_cast<double>(ev1.timestamps_ns.size()) *
                                 static_cast<double>(ev2.timestamps_ns.size()) /
                                 t_ns * cfg.histogram.window_ns;

    out.histogram_csv = out_dir + "/histogram.csv";
    auto hs = open_output(out_dir, "histogram.csv");
    echo_config(hs, cfg);
    write_histogram_csv(hs, hist, cfg.histogram);

    out.summary_txt = out_dir + "/hbt_summary.txt";
    auto ss = open_output(out_dir, "hbt_summary.txt");
    echo_config(ss, cfg);
    char buf[96];
    auto kv = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.12g\n", key, v);
        ss << buf;
    };
    kv("g2_zero", out.bunching.g2_zero);
    kv("tau_c_fit_ns", out.bunching.tau_c_ns);
    kv("coincidences", static_cast<double>(out.windowed.coincidences));
    kv("accidentals", static_cast<double>(out.windowed.accidentals));
    kv("net", out.windowed.net);
    kv("accidental_expectation", out.accidental_expectation);
    kv("rate_d1", out.rate_d1);
    kv("rate_d2", out.rate_d2);
    return out;
}

namespace {

// Visibility of the central fringe from a dense closed-form evaluation;
// covers the envelope peak and the first minima on both sides.
double analytic_visibility(const Geometry& g, SourceKind kind) {
    const double fringe = g.wavelength * g.distance / g.slit_separation;
    const std::size_t n = 2'000'001;
    std::vector<std::pair<double, double>> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u =
            -0.7 * fringe + 1.4 * fringe * static_cast<double>(i) /
                                static_cast<double>(n - 1);
        const double v = kind == SourceKind::thermal
                             ? g2_finite_thermal(g, {u, 0.0})
                             : g2_finite_spdc(g, {u, 0.0});
        samples.emplace_back(u, v);
    }
    return visibility(samples);
}

}  // namespace

ScanOutput cmd_scan(const RunConfig& cfg, const std::string& out_dir) {
    if (cfg.source_kind == SourceKind::laser)
        throw std::invalid_argument("scan: laser source has no pattern to scan");
    if (cfg.engine == Engine::event_mc &&
        cfg.source_kind == SourceKind::thermal)
        warn_if_high_rate(cfg);

    ScanOutput out;
    out.result = run_scan(cfg.geometry, cfg.source_model(), cfg.scan_config());
    out.fit = fit_pattern(out.result, cfg.source_kind, cfg.geometry);

    if (cfg.engine == Engine::analytic) {
        out.visibility = analytic_visibility(cfg.geometry, cfg.source_kind);
    } else if (out.fit.converged) {
        // fitted model: peak B + A, central minimum B
        out.visibility =
            out.fit.amplitude / (2.0 * out.fit.background + out.fit.amplitude);
    }
    if (out.fit.converged)
        out.resolution = resolution_report(out.fit, cfg.geometry);

    out.scan_csv = out_dir + "/scan.csv";
    auto cs = open_output(out_dir, "scan.csv");
    echo_config(cs, cfg);
    write_scan_csv(cs, out.result);

    out.fit_txt = out_dir + "/fit.txt";
    auto fsm = open_output(out_dir, "fit.txt");
    echo_config(fsm, cfg);
    write_fit_result(fsm, out.fit);

    out.report_txt = out_dir + "/report.txt";
    auto rs = open_output(out_dir, "report.txt");
    echo_config(rs, cfg);
    char buf[96];
    auto kv = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.12g\n", key, v);
        rs << buf;
    };
    kv("visibility", out.visibility);
    kv("second_order_period", out.resolution.second_order_period);
    kv("first_order_period", out.resolution.first_order_period);
    kv("period_ratio", out.resolution.ratio);
    return out;
}

}  // namespace tpi
