#include "tpi/speckle.hpp"

#include <cmath>

#include "tpi/kernels.hpp"

namespace tpi {

std::vector<double> discretize_source(const Geometry& g,
                                      const ThermalSourceConfig& config) {
    g.validate();
    config.validate();
    const int n = config.subsources_per_slit;
    std::vector<double> xs;
    xs.reserve(2 * static_cast<std::size_t>(n));
    for (Slit s : {Slit::A, Slit::B}) {
        const double lo = slit_center(g, s) - 0.5 * g.slit_width;
        const double h = g.slit_width / n;
        for (int i = 0; i < n; ++i)
            xs.push_back(lo + (i + 0.5) * h);
    }
    return xs;
}

std::vector<std::complex<double>> draw_realization(
    std::span<const double> subsource_positions,
    const ThermalSourceConfig& config, CounterRng& rng) {
    config.validate();
    const std::size_t n = subsource_positions.size();
    const double sigma = std::sqrt(config.mean_intensity / (2.0 * static_cast<double>(n)));
    std::vector<std::complex<double>> amps(n);
    for (std::size_t i = 0; i < n; ++i) {
        double re, im;
        rng.normal_pair(re, im);
        amps[i] = {sigma * re, sigma * im};
    }
    return amps;
}

std::complex<double> propagate(std::span<const std::complex<double>> realization,
                               std::span<const double> subsource_positions,
                               double detector_x, const Geometry& g) {
    const double k_over_z = g.wavenumber() / g.distance;
    std::complex<double> field{0.0, 0.0};
    for (std::size_t s = 0; s < realization.size(); ++s)
        field += realization[s] *
                 std::polar(1.0, k_over_z * subsource_positions[s] * detector_x);
    return field;
}

namespace {

// SoA phasor table e^{i k x_s x_d / z} for one detector position
struct PhasorTable {
    std::vector<double> re, im;

    PhasorTable(std::span<const double> xs, double detector_x, const Geometry& g) {
        const double k_over_z = g.wavenumber() / g.distance;
        re.resize(xs.size());
        im.resize(xs.size());
        for (std::size_t s = 0; s < xs.size(); ++s) {
            const double phi = k_over_z * xs[s] * detector_x;
            re[s] = std::cos(phi);
            im[s] = std::sin(phi);
        }
    }
};

}  // namespace

SpatialEstimate estimate_g2_spatial_full(const Geometry& g,
                                         const ThermalSourceConfig& config,
                                         const DetectorPair& pair,
                                         std::size_t n_realizations) {
    g.validate();
    config.validate();
    if (n_realizations < 100)
        throw std::invalid_argument("estimate_g2_spatial: need >= 100 realizations");

    const std::vector<double> xs = discretize_source(g, config);
    const std::size_t n_sub = xs.size();
    const double sigma =
        std::sqrt(config.mean_intensity / (2.0 * static_cast<double>(n_sub)));
    const PhasorTable ph1(xs, pair.x1, g);
    const PhasorTable ph2(xs, pair.x2, g);

    const std::size_t n_batches = n_realizations >= 2000 ? 20 : 10;
    std::vector<double> batch_i1(n_batches, 0.0), batch_i2(n_batches, 0.0),
        batch_i12(n_batches, 0.0);
    std::vector<std::size_t> batch_n(n_batches, 0);

    std::vector<double> amp_re(n_sub), amp_im(n_sub);
    for (std::size_t r = 0; r < n_realizations; ++r) {
        CounterRng rng(config.seed, r);  // per-realization stream
        for (std::size_t s = 0; s < n_sub; ++s) {
            double gre, gim;
            rng.normal_pair(gre, gim);
            amp_re[s] = sigma * gre;
            amp_im[s] = sigma * gim;
        }
        const std::complex<double> e1 = kernels::complex_dot(
            amp_re.data(), amp_im.data(), ph1.re.data(), ph1.im.data(), n_sub);
        const std::complex<double> e2 = kernels::complex_dot(
            amp_re.data(), amp_im.data(), ph2.re.data(), ph2.im.data(), n_sub);
        const double i1 = std::norm(e1);
        const double i2 = std::norm(e2);
        const std::size_t b = r * n_batches / n_realizations;
        batch_i1[b] += i1;
        batch_i2[b] += i2;
        batch_i12[b] += i1 * i2;
        batch_n[b] += 1;
    }

    double sum_i1 = 0.0, sum_i2 = 0.0, sum_i12 = 0.0;
    for (std::size_t b = 0; b < n_batches; ++b) {
        sum_i1 += batch_i1[b];
        sum_i2 += batch_i2[b];
        sum_i12 += batch_i12[b];
    }
    const double n = static_cast<double>(n_realizations);
    const double mean_i1 = sum_i1 / n;
    const double mean_i2 = sum_i2 / n;
    const double g2 = (sum_i12 / n) / (mean_i1 * mean_i2);

    // batch-means error: spread of per-batch normalized estimates
    double mean_b = 0.0;
    std::vector<double> g2_b(n_batches);
    for (std::size_t b = 0; b < n_batches; ++b) {
        const double nb = static_cast<double>(batch_n[b]);
        g2_b[b] = (batch_i12[b] / nb) /
                  ((batch_i1[b] / nb) * (batch_i2[b] / nb));
        mean_b += g2_b[b];
    }
    mean_b /= static_cast<double>(n_batches);
    double var_b = 0.0;
    for (double v : g2_b)
        var_b += (v - mean_b) * (v - mean_b);
    var_b /= static_cast<double>(n_batches - 1);
    const double std_error = std::sqrt(var_b / static_cast<double>(n_batches));

    SpatialEstimate out;
    out.g2 = {g2, std_error, n_realizations};
    out.mean_intensity_1 = mean_i1;
    out.mean_intensity_2 = mean_i2;
    return out;
}

CorrelationEstimate estimate_g2_spatial(const Geometry& g,
                                        const ThermalSourceConfig& config,
                                        const DetectorPair& pair,
                                        std::size_t n_realizations) {
    return estimate_g2_spatial_full(g, config, pair, n_realizations).g2;
}

std::vector<IntensitySeries> speckle_time_series_multi(
    const ThermalSourceConfig& config,
    std::span<const double> subsource_positions,
    std::span<const double> detector_xs, double duration, double dt,
    const Geometry& g, CounterRng& rng) {
    config.validate();
    if (!(dt > 0.0) || dt >= config.tau_c / 10.0)
        throw std::invalid_argument("time series: dt must satisfy dt < tau_c/10");
    if (duration <= 10.0 * config.tau_c)
        throw std::invalid_argument("time series: duration must exceed 10 tau_c");

    const std::size_t n_sub = subsource_positions.size();
    const double sigma =
        std::sqrt(config.mean_intensity / (2.0 * static_cast<double>(n_sub)));
    const double eps = 2.0 * dt / config.tau_c;
    const double keep = std::sqrt(1.0 - eps);
    const double mix = std::sqrt(eps) * sigma;

    std::vector<PhasorTable> tables;
    tables.reserve(detector_xs.size());
    for (double x : detector_xs)
        tables.emplace_back(subsource_positions, x, g);

    const std::size_t n_steps = static_cast<std::size_t>(duration / dt);
    std::vector<IntensitySeries> out(detector_xs.size());
    for (auto& series : out) {
        series.t0 = 0.0;
        series.dt = dt;
        series.samples.resize(n_steps);
    }

    // start at the stationary distribution
    std::vector<double> amp_re(n_sub), amp_im(n_sub);
    for (std::size_t s = 0; s < n_sub; ++s) {
        double gre, gim;
        rng.normal_pair(gre, gim);
        amp_re[s] = sigma * gre;
        amp_im[s] = sigma * gim;
    }

    std::vector<double> fresh_re(n_sub), fresh_im(n_sub);
    for (std::size_t t = 0; t < n_steps; ++t) {
        for (std::size_t d = 0; d < tables.size(); ++d) {
            const std::complex<double> field = kernels::complex_dot(
                amp_re.data(), amp_im.data(), tables[d].re.data(),
                tables[d].im.data(), n_sub);
            out[d].samples[t] = std::norm(field);
        }
        for (std::size_t s = 0; s < n_sub; ++s)
            rng.normal_pair(fresh_re[s], fresh_im[s]);
        kernels::axpby(keep, amp_re.data(), amp_im.data(), mix, fresh_re.data(),
                       fresh_im.data(), n_sub);
    }
    return out;
}

IntensitySeries speckle_time_series(const ThermalSourceConfig& config,
                                    std::span<const double> subsource_positions,
                                    double detector_x, double duration,
                                    double dt, const Geometry& g,
                                    CounterRng& rng) {
    const double xs[1] = {detector_x};
    auto series = speckle_time_series_multi(config, subsource_positions, xs,
                                            duration, dt, g, rng);
    return std::move(series.front());
}

}  // namespace tpi
