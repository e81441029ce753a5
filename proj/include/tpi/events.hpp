#pragma once
// Timestamped detection events.  Thermal streams come from inhomogeneous
// Poisson thinning of a speckle intensity series; SPDC streams are
// simultaneous pair events accepted with the pattern probability.
// Timestamps are in nanoseconds.

#include <iosfwd>
#include <utility>
#include <vector>

#include "tpi/geometry.hpp"
#include "tpi/patterns.hpp"
#include "tpi/rng.hpp"
#include "tpi/speckle.hpp"

namespace tpi {

enum class DetectorId { D1, D2 };

struct EventStream {
    DetectorId detector = DetectorId::D1;
    std::vector<double> timestamps_ns;  // strictly increasing
    double duration_ns = 0.0;

    void validate() const;
};

struct DetectorConfig {
    double mean_rate = 45000.0;  // events per second
    double dead_time_ns = 0.0;
    double efficiency = 1.0;

    void validate() const {
        if (!(mean_rate > 0.0))
            throw std::invalid_argument("detector: mean_rate must be > 0");
        if (dead_time_ns < 0.0)
            throw std::invalid_argument("detector: dead_time must be >= 0");
        if (!(efficiency > 0.0) || efficiency > 1.0)
            throw std::invalid_argument("detector: efficiency must be in (0,1]");
    }
};

// Inhomogeneous Poisson thinning: candidates at rate
// mean_rate * max(I)/<I>, accepted with probability I(t)/max(I), then
// efficiency thinning, then dead-time pruning.
EventStream sample_thermal_events(const IntensitySeries& intensity,
                                  DetectorId detector,
                                  const DetectorConfig& config, CounterRng& rng);

// Pair emissions are homogeneous Poisson at pair_rate (pairs/s); each pair
// lands simultaneously on both detectors with acceptance probability
// g2_finite_spdc at the configured positions.
std::pair<EventStream, EventStream> sample_spdc_pairs(
    const Geometry& g, const SpdcModel& model, double pair_rate,
    double duration_s, const DetectorPair& positions, CounterRng& rng);

// Plain-text tag format: "# detector=<id> duration_ns=<T>" header, then one
// ascending timestamp (ns) per line.
void write_event_stream(std::ostream& os, const EventStream& stream);
EventStream read_event_stream(std::istream& is);

}  // namespace tpi
