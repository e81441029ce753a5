#pragma once
// Time-tag analysis: cross-correlation histogram, windowed coincidence
// counting with shifted-window accidental estimation, and the normalized
// g2(tau) estimator.

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "tpi/events.hpp"

namespace tpi {

struct HistogramConfig {
    double channel_width_ns = 0.3;
    double range_ns = 600.0;            // half-width of the tau axis
    double window_ns = 600.0;           // total coincidence window width
    double accidental_shift_ns = 4000.0;

    void validate() const {
        if (!(channel_width_ns > 0.0))
            throw std::invalid_argument("histogram: channel_width must be > 0");
        if (!(window_ns > 0.0))
            throw std::invalid_argument("histogram: window must be > 0");
        if (!(range_ns > 0.0))
            throw std::invalid_argument("histogram: range must be > 0");
        if (accidental_shift_ns <= window_ns + range_ns)
            throw std::invalid_argument(
                "histogram: accidental_shift must exceed window + range");
    }
};

// channels are half-open intervals [c - w/2, c + w/2) centred on integer
// multiples of the channel width; tau = t1 - t2, signed
struct CoincidenceHistogram {
    std::vector<double> centers_ns;
    std::vector<std::uint64_t> counts;
    std::uint64_t total_pairs_considered = 0;
};

// Multi-stop histogram of all event pairs with |t1 - t2| <= range, built by
// a two-index sweep over the sorted streams.
CoincidenceHistogram build_histogram(const EventStream& s1,
                                     const EventStream& s2,
                                     const HistogramConfig& config);

struct WindowedCounts {
    std::uint64_t coincidences = 0;  // |t1 - t2| <= window/2
    std::uint64_t accidentals = 0;   // |t1 - t2 - shift| <= window/2
    double net = 0.0;
};
WindowedCounts count_windowed(const EventStream& s1, const EventStream& s2,
                              const HistogramConfig& config);

// g2(tau) = counts(tau) / (R1 R2 T w) with rates measured from the streams
std::vector<std::pair<double, double>> g2_tau(const CoincidenceHistogram& hist,
                                              const EventStream& s1,
                                              const EventStream& s2);

// CSV: "# config ..." header then tau_ns,counts rows
void write_histogram_csv(std::ostream& os, const CoincidenceHistogram& hist,
                         const HistogramConfig& config);

}  // namespace tpi
