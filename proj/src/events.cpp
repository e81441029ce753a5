#include "tpi/events.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace tpi {

void EventStream::validate() const {
    double prev = -1.0;
    for (double t : timestamps_ns) {
        if (!(t > prev))
            throw std::invalid_argument("event stream: timestamps must be strictly increasing");
        if (t < 0.0 || t > duration_ns)
            throw std::invalid_argument("event stream: timestamp outside [0, duration]");
        prev = t;
    }
}

EventStream sample_thermal_events(const IntensitySeries& intensity,
                                  DetectorId detector,
                                  const DetectorConfig& config, CounterRng& rng) {
    config.validate();
    if (intensity.samples.size() < 2 || !(intensity.dt > 0.0))
        throw std::invalid_argument("sample_thermal_events: degenerate intensity series");

    double max_i = 0.0, sum_i = 0.0;
    for (double v : intensity.samples) {
        max_i = std::max(max_i, v);
        sum_i += v;
    }
    const double mean_i = sum_i / static_cast<double>(intensity.samples.size());
    if (!(max_i > 0.0) || !(mean_i > 0.0))
        throw std::invalid_argument("sample_thermal_events: intensity series is all zero");

    const double duration_s = intensity.duration();
    const double lambda_max = config.mean_rate * max_i / mean_i;  // per second

    EventStream out;
    out.detector = detector;
    out.duration_ns = duration_s * 1e9;

    std::vector<double> accepted;
    double t = intensity.t0;
    while (true) {
        t += rng.exponential() / lambda_max;
        if (t >= intensity.t0 + duration_s)
            break;
        const auto idx = static_cast<std::size_t>((t - intensity.t0) / intensity.dt);
        const double i_t = intensity.samples[std::min(idx, intensity.samples.size() - 1)];
        if (rng.uniform() * max_i >= i_t)
            continue;
        if (config.efficiency < 1.0 && rng.uniform() >= config.efficiency)
            continue;
        accepted.push_back((t - intensity.t0) * 1e9);
    }

    if (config.dead_time_ns > 0.0) {
        double last = -1e300;
        for (double ts : accepted) {
            if (ts - last >= config.dead_time_ns) {
                out.timestamps_ns.push_back(ts);
                last = ts;
            }
        }
    } else {
        out.timestamps_ns = std::move(accepted);
    }
    out.validate();
    return out;
}

std::pair<EventStream, EventStream> sample_spdc_pairs(
    const Geometry& g, const SpdcModel& model, double pair_rate,
    double duration_s, const DetectorPair& positions, CounterRng& rng) {
    g.validate();
    if (!(pair_rate > 0.0) || !(duration_s > 0.0))
        throw std::invalid_argument("sample_spdc_pairs: pair_rate and duration must be > 0");
    (void)model;  // phase enters through the pattern only for nonzero offsets
    const double accept = g2_finite_spdc(g, positions);

    EventStream s1, s2;
    s1.detector = DetectorId::D1;
    s2.detector = DetectorId::D2;
    s1.duration_ns = s2.duration_ns = duration_s * 1e9;

    double t = 0.0;
    while (true) {
        t += rng.exponential() / pair_rate;
        if (t >= duration_s)
            break;
        if (accept < 1.0 && rng.uniform() >= accept)
            continue;
        const double ts = t * 1e9;
        s1.timestamps_ns.push_back(ts);
        s2.timestamps_ns.push_back(ts);
    }
    s1.validate();
    s2.validate();
    return {std::move(s1), std::move(s2)};
}

namespace {
const char* detector_name(DetectorId id) {
    return id == DetectorId::D1 ? "D1" : "D2";
}
}  // namespace

void write_event_stream(std::ostream& os, const EventStream& stream) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", stream.duration_ns);
    os << "# detector=" << detector_name(stream.detector) << " duration_ns="
       << buf << "\n";
    for (double t : stream.timestamps_ns) {
        std::snprintf(buf, sizeof buf, "%.17g", t);
        os << buf << "\n";
    }
}

EventStream read_event_stream(std::istream& is) {
    EventStream out;
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("event stream: empty input");
    char det[8] = {0};
    double duration = 0.0;
    if (std::sscanf(line.c_str(), "# detector=%7s duration_ns=%lf", det,
                    &duration) != 2)
        throw std::invalid_argument("event stream: malformed header: " + line);
    out.detector = std::string(det) == "D2" ? DetectorId::D2 : DetectorId::D1;
    out.duration_ns = duration;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        out.timestamps_ns.push_back(std::stod(line));
    }
    out.validate();
    return out;
}

}  // namespace tpi
