#pragma once
// Detector-scan orchestration: evaluates coincidence patterns with the
// analytic, speckle Monte Carlo, or event Monte Carlo engine, fits the
// closed-form pattern to scan data, and reports the resolution-doubling
// ratio against the first-order pattern.

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "tpi/coincidence.hpp"
#include "tpi/geometry.hpp"
#include "tpi/patterns.hpp"
#include "tpi/speckle.hpp"

namespace tpi {

struct ThermalSource {
    ThermalMixture mixture;
    int subsources_per_slit = 16;
    double tau_c = 200e-9;  // seconds
};

struct SpdcSource {
    SpdcModel model;
    double pair_rate = 25000.0;  // pairs per second (event engine)
};

using SourceModel = std::variant<ThermalSource, SpdcSource>;

enum class ScanMode { fix_d2_scan_d1, antisymmetric, difference_grid };
enum class Engine { analytic, speckle_mc, event_mc };

struct ScanConfig {
    ScanMode mode = ScanMode::difference_grid;
    Engine engine = Engine::analytic;
    std::vector<double> positions;      // scan coordinate per point
    std::size_t n_realizations = 100000;  // speckle_mc budget per point
    double seconds_per_point = 0.1;     // event_mc simulated time per point
    double time_step_over_tau_c = 0.05; // event_mc intensity grid resolution
    uint64_t seed = 1;
    DetectorConfig detector1, detector2;
    HistogramConfig histogram;

    void validate() const {
        if (positions.size() < 5)
            throw std::invalid_argument("scan: need at least 5 positions");
        if (n_realizations == 0 || !(seconds_per_point > 0.0))
            throw std::invalid_argument("scan: per-point budget must be > 0");
    }
};

struct ScanResult {
    std::vector<double> x1, x2;
    std::vector<double> coincidence;      // normalized rate per point
    std::vector<double> coincidence_err;  // 0 for the analytic engine
    std::vector<double> singles_d1, singles_d2;
};

struct FitResult {
    double amplitude = 0.0;
    double background = 0.0;
    double a_fit = 0.0;  // slit width, m
    double d_fit = 0.0;  // slit separation, m
    double residual_rms = 0.0;
    bool converged = false;
};

struct ResolutionReport {
    double second_order_period = 0.0;  // fringe period in x1 under x2 = -x1
    double first_order_period = 0.0;   // lambda z / d
    double ratio = 0.0;
};

ScanResult run_scan(const Geometry& g, const SourceModel& source,
                    const ScanConfig& scan);

// Weighted least squares of background + amplitude sinc^2 cos^2 in the
// pattern variable (x1 - x2 thermal, x1 + x2 SPDC): coarse grid over (a, d)
// around the initial geometry, then Gauss-Newton refinement.
FitResult fit_pattern(const ScanResult& result, SourceKind kind,
                      const Geometry& init);

ResolutionReport resolution_report(const FitResult& fit, const Geometry& g);

// CSV: x1,x2,coincidence,coincidence_err,singles1,singles2
void write_scan_csv(std::ostream& os, const ScanResult& result);
// key-value text block
void write_fit_result(std::ostream& os, const FitResult& fit);

}  // namespace tpi
