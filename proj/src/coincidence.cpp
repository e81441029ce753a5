#include "tpi/coincidence.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace tpi {

namespace {

// visit every pair with t1 - t2 in [lo, hi] via a two-index sweep
template <typename Visitor>
void sweep_pairs(const std::vector<double>& t1, const std::vector<double>& t2,
                 double lo, double hi, Visitor&& visit) {
    std::size_t j_lo = 0;
    for (double a : t1) {
        while (j_lo < t2.size() && a - t2[j_lo] > hi)
            ++j_lo;
        for (std::size_t j = j_lo; j < t2.size(); ++j) {
            const double tau = a - t2[j];
            if (tau < lo)
                break;  // t2 ascending, tau only decreases
            visit(tau);
        }
    }
}

}  // namespace

CoincidenceHistogram build_histogram(const EventStream& s1,
                                     const EventStream& s2,
                                     const HistogramConfig& config) {
    config.validate();
    s1.validate();
    s2.validate();
    if (s1.duration_ns != s2.duration_ns)
        throw std::invalid_argument("build_histogram: stream durations differ");

    const double w = config.channel_width_ns;
    const double range = config.range_ns;
    const auto n_half = static_cast<std::int64_t>(std::floor(range / w + 0.5));

    CoincidenceHistogram hist;
    hist.counts.assign(static_cast<std::size_t>(2 * n_half + 1), 0);
    hist.centers_ns.resize(hist.counts.size());
    for (std::int64_t i = -n_half; i <= n_half; ++i)
        hist.centers_ns[static_cast<std::size_t>(i + n_half)] =
            static_cast<double>(i) * w;

    sweep_pairs(s1.timestamps_ns, s2.timestamps_ns, -range, range,
                [&](double tau) {
                    const auto idx =
                        static_cast<std::int64_t>(std::floor(tau / w + 0.5));
                    hist.counts[static_cast<std::size_t>(idx + n_half)] += 1;
                    hist.total_pairs_considered += 1;
                });
    return hist;
}

WindowedCounts count_windowed(const EventStream& s1, const EventStream& s2,
                              const HistogramConfig& config) {
    config.validate();
    s1.validate();
    s2.validate();
    const double half = 0.5 * config.window_ns;
    const double shift = config.accidental_shift_ns;

    WindowedCounts out;
    sweep_pairs(s1.timestamps_ns, s2.timestamps_ns, -half, half,
                [&](double) { out.coincidences += 1; });
    sweep_pairs(s1.timestamps_ns, s2.timestamps_ns, shift - half, shift + half,
                [&](double) { out.accidentals += 1; });
    out.net = static_cast<double>(out.coincidences) -
              static_cast<double>(out.accidentals);
    return out;
}

std::vector<std::pair<double, double>> g2_tau(const CoincidenceHistogram& hist,
                                              const EventStream& s1,
                                              const EventStream& s2) {
    if (s1.timestamps_ns.empty() || s2.timestamps_ns.empty())
        throw std::invalid_argument("g2_tau: zero-rate stream");
    const double duration = s1.duration_ns;
    const double r1 = static_cast<double>(s1.timestamps_ns.size()) / duration;
    const double r2 = static_cast<double>(s2.timestamps_ns.size()) / duration;
    const double w = hist.centers_ns.size() > 1
                         ? hist.centers_ns[1] - hist.centers_ns[0]
                         : 1.0;
    const double norm = r1 * r2 * duration * w;

    std::vector<std::pair<double, double>> out;
    out.reserve(hist.centers_ns.size());
    for (std::size_t i = 0; i < hist.centers_ns.size(); ++i)
        out.emplace_back(hist.centers_ns[i],
                         static_cast<double>(hist.counts[i]) / norm);
    return out;
}

void write_histogram_csv(std::ostream& os, const CoincidenceHistogram& hist,
                         const HistogramConfig& config) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "# config channel_width_ns=%.17g range_ns=%.17g "
                  "window_ns=%.17g accidental_shift_ns=%.17g\n",
                  config.channel_width_ns, config.range_ns, config.window_ns,
                  config.accidental_shift_ns);
    os << buf;
    os << "tau_ns,counts\n";
    for (std::size_t i = 0; i < hist.centers_ns.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%llu\n", hist.centers_ns[i],
                      static_cast<unsigned long long>(hist.counts[i]));
        os << buf;
    }
}

}  // namespace tpi
