#include "tpi/scan.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "tpi/events.hpp"

namespace tpi {

namespace {

DetectorPair pair_at(ScanMode mode, double p) {
    switch (mode) {
        case ScanMode::antisymmetric:
            return {p, -p};
        case ScanMode::fix_d2_scan_d1:
        case ScanMode::difference_grid:
        default:
            return {p, 0.0};
    }
}

uint64_t point_seed(uint64_t base, std::size_t idx) {
    return base ^ detail::mix64(idx + 0x5eedULL);
}

void run_event_thermal_point(const Geometry& g, const ThermalSource& src,
                             const ScanConfig& scan, std::size_t idx,
                             const DetectorPair& pos, ScanResult& out) {
    ThermalSourceConfig config;
    config.subsources_per_slit = src.subsources_per_slit;
    config.tau_c = src.tau_c;
    config.seed = scan.seed;

    const double dt = scan.time_step_over_tau_c * src.tau_c;
    const double duration = scan.seconds_per_point;
    CounterRng rng(scan.seed, idx);

    const std::vector<double> subs = discretize_source(g, config);
    const std::array<double, 2> xs{pos.x1, pos.x2};
    const auto series = speckle_time_series_multi(config, subs, xs, duration,
                                                  dt, g, rng);
    const EventStream ev1 =
        sample_thermal_events(series[0], DetectorId::D1, scan.detector1, rng);
    const EventStream ev2 =
        sample_thermal_events(series[1], DetectorId::D2, scan.detector2, rng);

    const WindowedCounts counts = count_windowed(ev1, ev2, scan.histogram);
    const double t_ns = ev1.duration_ns;
    const double r1 = static_cast<double>(ev1.timestamps_ns.size()) / t_ns;
    const double r2 = static_cast<double>(ev2.timestamps_ns.size()) / t_ns;
    const double norm = r1 * r2 * t_ns * scan.histogram.window_ns;

    out.coincidence.push_back(1.0 + counts.net / norm);
    out.coincidence_err.push_back(
        std::sqrt(static_cast<double>(counts.coincidences + counts.accidentals)) /
        norm);
    out.singles_d1.push_back(static_cast<double>(ev1.timestamps_ns.size()) /
                             duration);
    out.singles_d2.push_back(static_cast<double>(ev2.timestamps_ns.size()) /
                             duration);
}

void run_event_spdc_point(const Geometry& g, const SpdcSource& src,
                          const ScanConfig& scan, std::size_t idx,
                          const DetectorPair& pos, ScanResult& out) {
    CounterRng rng(scan.seed, idx);
    const auto [ev1, ev2] = sample_spdc_pairs(g, src.model, src.pair_rate,
                                              scan.seconds_per_point, pos, rng);
    const double n = static_cast<double>(ev1.timestamps_ns.size());
    const double expected_pairs = src.pair_rate * scan.seconds_per_point;
    out.coincidence.push_back(n / expected_pairs);
    out.coincidence_err.push_back(std::sqrt(std::max(n, 1.0)) / expected_pairs);
    out.singles_d1.push_back(n / scan.seconds_per_point);
    out.singles_d2.push_back(n / scan.seconds_per_point);
}

}  // namespace

ScanResult run_scan(const Geometry& g, const SourceModel& source,
                    const ScanConfig& scan) {
    g.validate();
    scan.validate();
    const bool thermal = std::holds_alternative<ThermalSource>(source);
    if (scan.engine == Engine::speckle_mc && !thermal)
        throw std::invalid_argument("run_scan: speckle_mc requires a thermal source");

    ScanResult out;
    for (std::size_t idx = 0; idx < scan.positions.size(); ++idx) {
        const DetectorPair pos = pair_at(scan.mode, scan.positions[idx]);
        out.x1.push_back(pos.x1);
        out.x2.push_back(pos.x2);

        switch (scan.engine) {
            case Engine::analytic: {
                const double v = thermal ? g2_finite_thermal(g, pos)
                                         : g2_finite_spdc(g, pos);
                out.coincidence.push_back(v);
                out.coincidence_err.push_back(0.0);
                out.singles_d1.push_back(1.0);
                out.singles_d2.push_back(1.0);
                break;
            }
            case Engine::speckle_mc: {
                const auto& src = std::get<ThermalSource>(source);
                ThermalSourceConfig config;
                config.subsources_per_slit = src.subsources_per_slit;
                config.tau_c = src.tau_c;
                config.seed = point_seed(scan.seed, idx);
                const SpatialEstimate est = estimate_g2_spatial_full(
                    g, config, pos, scan.n_realizations);
                out.coincidence.push_back(est.g2.value);
                out.coincidence_err.push_back(est.g2.std_error);
                out.singles_d1.push_back(est.mean_intensity_1);
                out.singles_d2.push_back(est.mean_intensity_2);
                break;
            }
            case Engine::event_mc: {
                if (thermal)
                    run_event_thermal_point(g, std::get<ThermalSource>(source),
                                            scan, idx, pos, out);
                else
                    run_event_spdc_point(g, std::get<SpdcSource>(source), scan,
                                         idx, pos, out);
                break;
            }
        }
    }
    return out;
}

namespace {

double dsinc(double u) {
    if (std::abs(u) < 1e-6)
        return -u / 3.0;
    return (std::cos(u) - std::sin(u) / u) / u;
}

// solve a small symmetric system in place; returns false when singular
template <int N>
bool solve(std::array<std::array<double, N>, N>& m, std::array<double, N>& b) {
    for (int col = 0; col < N; ++col) {
        int pivot = col;
        for (int r = col + 1; r < N; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col]))
                pivot = r;
        if (std::abs(m[pivot][col]) < 1e-300)
            return false;
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = 0; r < N; ++r) {
            if (r == col)
                continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < N; ++c)
                m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int i = 0; i < N; ++i)
        b[i] /= m[i][i];
    return true;
}

struct FitData {
    std::vector<double> u, y, wgt;
    double lambda_z = 0.0;
};

double shape(const FitData& d, double u, double a, double dd) {
    const double scale = std::numbers::pi * u / d.lambda_z;
    const double s = sinc(scale * a);
    const double c = std::cos(scale * dd);
    return s * s * c * c;
}

// weighted linear LS for (amplitude, background) at fixed (a, d)
bool linear_ab(const FitData& d, double a, double dd, double& amp, double& bg,
               double& sse) {
    double sff = 0, sf1 = 0, s11 = 0, sfy = 0, s1y = 0;
    for (std::size_t i = 0; i < d.u.size(); ++i) {
        const double f = shape(d, d.u[i], a, dd);
        const double w = d.wgt[i];
        sff += w * f * f;
        sf1 += w * f;
        s11 += w;
        sfy += w * f * d.y[i];
        s1y += w * d.y[i];
    }
    const double det = sff * s11 - sf1 * sf1;
    if (std::abs(det) < 1e-300)
        return false;
    amp = (sfy * s11 - s1y * sf1) / det;
    bg = (sff * s1y - sf1 * sfy) / det;
    sse = 0;
    for (std::size_t i = 0; i < d.u.size(); ++i) {
        const double r = d.y[i] - bg - amp * shape(d, d.u[i], a, dd);
        sse += d.wgt[i] * r * r;
    }
    return true;
}

double weighted_sse(const FitData& d, double amp, double bg, double a,
                    double dd) {
    double sse = 0;
    for (std::size_t i = 0; i < d.u.size(); ++i) {
        const double r = d.y[i] - bg - amp * shape(d, d.u[i], a, dd);
        sse += d.wgt[i] * r * r;
    }
    return sse;
}

}  // namespace

FitResult fit_pattern(const ScanResult& result, SourceKind kind,
                      const Geometry& init) {
    init.validate();
    if (kind == SourceKind::laser)
        throw std::invalid_argument("fit_pattern: laser has no second-order pattern");
    if (result.x1.size() < 8)
        throw std::invalid_argument("fit_pattern: need at least 8 points");

    FitData data;
    data.lambda_z = init.wavelength * init.distance;
    for (std::size_t i = 0; i < result.x1.size(); ++i) {
        data.u.push_back(kind == SourceKind::thermal
                             ? result.x1[i] - result.x2[i]
                             : result.x1[i] + result.x2[i]);
        data.y.push_back(result.coincidence[i]);
        const double err = result.coincidence_err[i];
        data.wgt.push_back(err > 0.0 ? 1.0 / (err * err) : 1.0);
    }

    // coarse grid over (a, d), +/-30% around the initial geometry
    constexpr int kGrid = 31;
    double best_a = init.slit_width, best_d = init.slit_separation;
    double best_amp = 0, best_bg = 0, best_sse = 1e300;
    for (int ia = 0; ia < kGrid; ++ia) {
        const double a = init.slit_width * (0.7 + 0.6 * ia / (kGrid - 1));
        for (int id = 0; id < kGrid; ++id) {
            const double dd =
                init.slit_separation * (0.7 + 0.6 * id / (kGrid - 1));
            double amp, bg, sse;
            if (linear_ab(data, a, dd, amp, bg, sse) && sse < best_sse) {
                best_sse = sse;
                best_a = a;
                best_d = dd;
                best_amp = amp;
                best_bg = bg;
            }
        }
    }

    FitResult fit;
    fit.amplitude = best_amp;
    fit.background = best_bg;
    fit.a_fit = best_a;
    fit.d_fit = best_d;

    double y_scale = 0;
    for (double y : data.y)
        y_scale = std::max(y_scale, std::abs(y));
    if (std::abs(best_amp) < 1e-9 * std::max(y_scale, 1.0)) {
        fit.converged = false;  // flat data: no fringe to fit
        fit.residual_rms = std::sqrt(best_sse / static_cast<double>(data.u.size()));
        return fit;
    }

    // Gauss-Newton refinement on (amplitude, background, a, d)
    std::array<double, 4> theta{best_amp, best_bg, best_a, best_d};
    double sse = best_sse;
    const double pi = std::numbers::pi;
    for (int iter = 0; iter < 200; ++iter) {
        std::array<std::array<double, 4>, 4> jtj{};
        std::array<double, 4> jtr{};
        for (std::size_t i = 0; i < data.u.size(); ++i) {
            const double u = data.u[i];
            const double scale = pi * u / data.lambda_z;
            const double va = scale * theta[2];
            const double vd = scale * theta[3];
            const double s = sinc(va);
            const double c = std::cos(vd);
            const double f = s * s * c * c;
            const std::array<double, 4> jac{
                f, 1.0, theta[0] * 2.0 * s * dsinc(va) * scale * c * c,
                theta[0] * s * s * 2.0 * c * (-std::sin(vd)) * scale};
            const double r = data.y[i] - theta[1] - theta[0] * f;
            const double w = data.wgt[i];
            for (int p = 0; p < 4; ++p) {
                jtr[p] += w * jac[p] * r;
                for (int q = 0; q < 4; ++q)
                    jtj[p][q] += w * jac[p] * jac[q];
            }
        }
        std::array<double, 4> step = jtr;
        if (!solve<4>(jtj, step))
            break;

        // backtracking if the full step overshoots
        double scale_step = 1.0;
        std::array<double, 4> trial = theta;
        double trial_sse = sse;
        bool improved = false;
        for (int bt = 0; bt < 25; ++bt) {
            for (int p = 0; p < 4; ++p)
                trial[p] = theta[p] + scale_step * step[p];
            trial_sse = weighted_sse(data, trial[0], trial[1], trial[2], trial[3]);
            if (trial_sse <= sse) {
                improved = true;
                break;
            }
            scale_step *= 0.5;
        }
        if (!improved)
            break;

        double rel = 0;
        for (int p = 0; p < 4; ++p)
            rel = std::max(rel, std::abs(scale_step * step[p]) /
                                    std::max(std::abs(theta[p]), 1e-30));
        theta = trial;
        sse = trial_sse;
        if (rel < 1e-10) {
            fit.converged = true;
            break;
        }
    }

    fit.amplitude = theta[0];
    fit.background = theta[1];
    fit.a_fit = std::abs(theta[2]);  // pattern is even in both parameters
    fit.d_fit = std::abs(theta[3]);
    double plain_sse = 0;
    for (std::size_t i = 0; i < data.u.size(); ++i) {
        const double r = data.y[i] - theta[1] -
                         theta[0] * shape(data, data.u[i], theta[2], theta[3]);
        plain_sse += r * r;
    }
    fit.residual_rms = std::sqrt(plain_sse / static_cast<double>(data.u.size()));
    if (!(fit.a_fit > 0.0) || !(fit.d_fit > 0.0))
        fit.converged = false;
    return fit;
}

ResolutionReport resolution_report(const FitResult& fit, const Geometry& g) {
    if (!fit.converged)
        throw std::invalid_argument("resolution_report: fit did not converge");
    ResolutionReport rep;
    rep.second_order_period = g.wavelength * g.distance / (2.0 * fit.d_fit);
    rep.first_order_period = g.wavelength * g.distance / g.slit_separation;
    rep.ratio = rep.second_order_period / rep.first_order_period;
    return rep;
}

void write_scan_csv(std::ostream& os, const ScanResult& result) {
    os << "x1,x2,coincidence,coincidence_err,singles1,singles2\n";
    char buf[256];
    for (std::size_t i = 0; i < result.x1.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      result.x1[i], result.x2[i], result.coincidence[i],
                      result.coincidence_err[i], result.singles_d1[i],
                      result.singles_d2[i]);
        os << buf;
    }
}

void write_fit_result(std::ostream& os, const FitResult& fit) {
    char buf[96];
    auto kv = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.12g\n", key, v);
        os << buf;
    };
    kv("amplitude", fit.amplitude);
    kv("background", fit.background);
    kv("a_fit", fit.a_fit);
    kv("d_fit", fit.d_fit);
    kv("residual_rms", fit.residual_rms);
    os << "converged = " << (fit.converged ? "true" : "false") << "\n";
}

}  // namespace tpi
