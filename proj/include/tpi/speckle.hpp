#pragma once
// Monte Carlo model of the pseudo-thermal source: each slit is discretized
// into independent circular complex Gaussian sub-sources.  The spatial
// intensity correlation of the resulting speckle field reproduces the
// finite-slit thermal pattern from field statistics alone, with no
// two-photon formalism involved.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "tpi/geometry.hpp"
#include "tpi/rng.hpp"

namespace tpi {

struct ThermalSourceConfig {
    int subsources_per_slit = 16;
    double tau_c = 200e-9;       // field coherence time, seconds
    double mean_intensity = 1.0; // total mean source intensity, arbitrary units
    uint64_t seed = 1;

    void validate() const {
        if (subsources_per_slit < 1)
            throw std::invalid_argument("source: subsources_per_slit must be >= 1");
        if (!(tau_c > 0.0))
            throw std::invalid_argument("source: tau_c must be > 0");
        if (!(mean_intensity > 0.0))
            throw std::invalid_argument("source: mean_intensity must be > 0");
    }
};

// field realizations at sampled detector positions, row-major
// (realization x position)
struct SpeckleEnsemble {
    std::vector<double> detector_positions;
    std::vector<std::complex<double>> realizations;
    std::size_t n_realizations = 0;
    uint64_t seed = 0;

    std::complex<double> at(std::size_t realization, std::size_t position) const {
        return realizations[realization * detector_positions.size() + position];
    }
};

struct CorrelationEstimate {
    double value = 0.0;      // normalized <I1 I2> / (<I1><I2>)
    double std_error = 0.0;  // batch-means standard error
    std::size_t n_realizations = 0;
};

// intensity samples on a uniform time grid
struct IntensitySeries {
    double t0 = 0.0;
    double dt = 0.0;  // seconds
    std::vector<double> samples;

    double duration() const { return dt * static_cast<double>(samples.size()); }
    double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

// Sub-source positions: subsources_per_slit midpoints across each slit
// aperture, 2 * subsources_per_slit total, slit A first.
std::vector<double> discretize_source(const Geometry& g,
                                      const ThermalSourceConfig& config);

// One field realization: each sub-source amplitude is an independent circular
// complex Gaussian with per-quadrature variance mean_intensity / (2 N_total).
std::vector<std::complex<double>> draw_realization(
    std::span<const double> subsource_positions,
    const ThermalSourceConfig& config, CounterRng& rng);

// Field at the detector: sum of sub-source amplitudes with the Fraunhofer
// linear phase k x_s x_d / z, uniform amplitude weighting.
std::complex<double> propagate(std::span<const std::complex<double>> realization,
                               std::span<const double> subsource_positions,
                               double detector_x, const Geometry& g);

// Normalized spatial intensity correlation from n independent realizations.
// Realization i is seeded as (seed, i), so the result does not depend on
// evaluation order.  Requires n_realizations >= 100.
CorrelationEstimate estimate_g2_spatial(const Geometry& g,
                                        const ThermalSourceConfig& config,
                                        const DetectorPair& pair,
                                        std::size_t n_realizations);

// As above, also reporting the mean intensities seen by the two detectors
// (the normalized singles levels).
struct SpatialEstimate {
    CorrelationEstimate g2;
    double mean_intensity_1 = 0.0;
    double mean_intensity_2 = 0.0;
};
SpatialEstimate estimate_g2_spatial_full(const Geometry& g,
                                         const ThermalSourceConfig& config,
                                         const DetectorPair& pair,
                                         std::size_t n_realizations);

// Detector intensity versus time under AR(1) sub-source evolution
//   E(t+dt) = E(t) sqrt(1-eps) + sqrt(eps) G,  eps = 2 dt / tau_c
// which gives the exponential field autocorrelation g1(tau) = e^{-tau/tau_c}.
// Requires dt < tau_c / 10 and duration > 10 tau_c.
IntensitySeries speckle_time_series(const ThermalSourceConfig& config,
                                    std::span<const double> subsource_positions,
                                    double detector_x, double duration,
                                    double dt, const Geometry& g,
                                    CounterRng& rng);

// Same sub-source evolution projected onto several detector positions at
// once; all series share one source realization.
std::vector<IntensitySeries> speckle_time_series_multi(
    const ThermalSourceConfig& config,
    std::span<const double> subsource_positions,
    std::span<const double> detector_xs, double duration, double dt,
    const Geometry& g, CounterRng& rng);

}  // namespace tpi
