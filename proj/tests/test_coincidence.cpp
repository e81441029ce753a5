// Coincidence histogramming: flat background for independent streams, the
// delay spike, thermal bunching, windowed counts, and exact agreement with a
// brute-force all-pairs count.

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "tpi/coincidence.hpp"
#include "tpi/rng.hpp"
#include "tpi/speckle.hpp"

using namespace tpi;

namespace {

const Geometry kBench{0.043e-3, 0.135e-3, 1.0, 632.8e-9};

EventStream poisson_stream(DetectorId id, double rate_per_s, double duration_s,
                           uint64_t seed) {
    CounterRng rng(seed);
    EventStream s;
    s.detector = id;
    s.duration_ns = duration_s * 1e9;
    const double mean_gap_ns = 1e9 / rate_per_s;
    double t = 0.0;
    while (true) {
        t += rng.exponential() * mean_gap_ns;
        if (t >= s.duration_ns)
            break;
        s.timestamps_ns.push_back(t);
    }
    return s;
}

// all-pairs reference for the histogram
std::vector<std::uint64_t> brute_force_counts(const EventStream& s1,
                                              const EventStream& s2,
                                              const HistogramConfig& config) {
    const double w = config.channel_width_ns;
    const auto n_half =
        static_cast<std::int64_t>(std::floor(config.range_ns / w + 0.5));
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(2 * n_half + 1),
                                      0);
    for (double a : s1.timestamps_ns)
        for (double b : s2.timestamps_ns) {
            const double tau = a - b;
            if (tau < -config.range_ns || tau > config.range_ns)
                continue;
            const auto idx = static_cast<std::int64_t>(std::floor(tau / w + 0.5));
            if (idx >= -n_half && idx <= n_half)
                counts[static_cast<std::size_t>(idx + n_half)] += 1;
        }
    return counts;
}

}  // namespace

TEST_CASE("histogram config validation") {
    HistogramConfig config;
    CHECK_NOTHROW(config.validate());
    config.channel_width_ns = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = {};
    config.accidental_shift_ns = 100.0;  // must clear window + range
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("histogram geometry: centers and channel count") {
    HistogramConfig config;
    config.channel_width_ns = 0.3;
    config.range_ns = 600.0;
    EventStream s1, s2;
    s1.duration_ns = s2.duration_ns = 1e6;
    const auto hist = build_histogram(s1, s2, config);
    REQUIRE(hist.counts.size() == 4001);
    CHECK(hist.centers_ns.front() == doctest::Approx(-600.0));
    CHECK(hist.centers_ns.back() == doctest::Approx(600.0));
    CHECK(hist.centers_ns[2000] == doctest::Approx(0.0));
}

TEST_CASE("independent Poisson streams give flat channels") {
    const auto s1 = poisson_stream(DetectorId::D1, 100000.0, 5.0, 21);
    const auto s2 = poisson_stream(DetectorId::D2, 100000.0, 5.0, 22);
    HistogramConfig config;
    config.channel_width_ns = 10.0;
    config.range_ns = 500.0;
    config.accidental_shift_ns = 4000.0;
    const auto hist = build_histogram(s1, s2, config);

    const double r1 = static_cast<double>(s1.timestamps_ns.size()) / 5e9;
    const double r2 = static_cast<double>(s2.timestamps_ns.size()) / 5e9;
    const double expected = r1 * r2 * 5e9 * config.channel_width_ns;
    REQUIRE(expected > 100.0);
    for (std::size_t i = 1; i + 1 < hist.counts.size(); ++i)
        CHECK(std::abs(static_cast<double>(hist.counts[i]) - expected) <
              5.0 * std::sqrt(expected));
}

TEST_CASE("a rigid delay shows up as a single spike channel") {
    auto s1 = poisson_stream(DetectorId::D1, 50000.0, 1.0, 23);
    EventStream s2 = s1;
    s2.detector = DetectorId::D2;
    const double delay = 50.0;  // ns; D2 fires later, so tau = t1 - t2 = -50
    for (double& t : s2.timestamps_ns)
        t += delay;
    s2.duration_ns += delay;
    s1.duration_ns = s2.duration_ns;

    HistogramConfig config;
    config.channel_width_ns = 10.0;
    config.range_ns = 100.0;
    config.accidental_shift_ns = 4000.0;
    const auto hist = build_histogram(s1, s2, config);
    // channel index for tau = -50 ns
    const std::size_t spike = 10 - 5;
    CHECK(hist.counts[spike] >= s1.timestamps_ns.size());
    // neighbours only hold accidentals, far fewer than the spike
    CHECK(hist.counts[spike - 2] < hist.counts[spike] / 10);
    CHECK(hist.counts[spike + 2] < hist.counts[spike] / 10);
}

TEST_CASE("correlated thermal streams bunch at zero delay") {
    ThermalSourceConfig source;
    source.subsources_per_slit = 1;
    source.tau_c = 1e-6;
    const auto xs = discretize_source(kBench, source);
    CounterRng rng(24);
    const double positions[2] = {0.0, 0.0};
    const auto series = speckle_time_series_multi(
        source, xs, positions, 0.5, source.tau_c / 20.0, kBench, rng);

    DetectorConfig det;
    det.mean_rate = 400000.0;
    const auto s1 = sample_thermal_events(series[0], DetectorId::D1, det, rng);
    const auto s2 = sample_thermal_events(series[1], DetectorId::D2, det, rng);

    HistogramConfig config;
    config.channel_width_ns = 100.0;
    config.range_ns = 10000.0;
    config.accidental_shift_ns = 30000.0;
    config.window_ns = 10000.0;
    const auto hist = build_histogram(s1, s2, config);
    const auto curve = g2_tau(hist, s1, s2);

    // g2 near zero delay approaches 2, far wings approach 1
    const std::size_t mid = curve.size() / 2;
    CHECK(curve[mid].first == doctest::Approx(0.0));
    CHECK(curve[mid].second == doctest::Approx(2.0).epsilon(0.08));
    double wing = 0.0;
    for (std::size_t i = 0; i < 20; ++i)
        wing += curve[i].second + curve[curve.size() - 1 - i].second;
    wing /= 40.0;
    CHECK(wing == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("count_windowed nets out accidentals") {
    SUBCASE("independent streams net to zero") {
        const auto s1 = poisson_stream(DetectorId::D1, 80000.0, 2.0, 25);
        const auto s2 = poisson_stream(DetectorId::D2, 80000.0, 2.0, 26);
        HistogramConfig config;  // 600 ns window, 4000 ns shift
        const auto counts = count_windowed(s1, s2, config);
        CHECK(counts.coincidences > 1000);
        const double sigma = std::sqrt(static_cast<double>(counts.coincidences) +
                                       static_cast<double>(counts.accidentals));
        CHECK(std::abs(counts.net) < 4.0 * sigma);
    }
    SUBCASE("identical streams net well above zero") {
        const auto s1 = poisson_stream(DetectorId::D1, 50000.0, 1.0, 27);
        EventStream s2 = s1;
        s2.detector = DetectorId::D2;
        HistogramConfig config;
        const auto counts = count_windowed(s1, s2, config);
        CHECK(counts.net > 0.9 * static_cast<double>(s1.timestamps_ns.size()));
    }
}

TEST_CASE("histogram totals match the coincidence window") {
    const auto s1 = poisson_stream(DetectorId::D1, 60000.0, 1.0, 28);
    const auto s2 = poisson_stream(DetectorId::D2, 60000.0, 1.0, 29);
    HistogramConfig config;
    config.channel_width_ns = 0.3;
    config.range_ns = 300.0;
    config.window_ns = 600.0;  // window = 2 * range: same pair set up to
    config.accidental_shift_ns = 4000.0;
    const auto hist = build_histogram(s1, s2, config);
    const auto counts = count_windowed(s1, s2, config);
    std::uint64_t total = 0;
    for (auto c : hist.counts)
        total += c;
    // edge channels extend range by half a channel beyond the window
    CHECK(total >= counts.coincidences);
    CHECK(total - counts.coincidences <= 4);
    CHECK(hist.total_pairs_considered == total);
}

TEST_CASE("sweep matches brute force exactly") {
    const auto s1 = poisson_stream(DetectorId::D1, 900.0, 1.0, 30);
    const auto s2 = poisson_stream(DetectorId::D2, 900.0, 1.0, 31);
    HistogramConfig config;
    config.channel_width_ns = 25.0;
    config.range_ns = 2000.0;
    config.window_ns = 2000.0;
    config.accidental_shift_ns = 10000.0;
    const auto hist = build_histogram(s1, s2, config);
    const auto brute = brute_force_counts(s1, s2, config);
    REQUIRE(hist.counts.size() == brute.size());
    for (std::size_t i = 0; i < brute.size(); ++i)
        CHECK(hist.counts[i] == brute[i]);
}

TEST_CASE("histogram is reflection symmetric under stream swap") {
    const auto s1 = poisson_stream(DetectorId::D1, 40000.0, 0.5, 32);
    const auto s2 = poisson_stream(DetectorId::D2, 40000.0, 0.5, 33);
    HistogramConfig config;
    config.channel_width_ns = 5.0;
    config.range_ns = 250.0;
    config.accidental_shift_ns = 4000.0;
    const auto fwd = build_histogram(s1, s2, config);
    const auto rev = build_histogram(s2, s1, config);
    const std::size_t n = fwd.counts.size();
    for (std::size_t i = 0; i < n; ++i)
        CHECK(fwd.counts[i] == rev.counts[n - 1 - i]);
}

TEST_CASE("mismatched durations are rejected") {
    EventStream s1, s2;
    s1.duration_ns = 1e6;
    s2.duration_ns = 2e6;
    CHECK_THROWS_AS(build_histogram(s1, s2, HistogramConfig{}),
                    std::invalid_argument);
}

TEST_CASE("g2_tau rejects empty streams") {
    CoincidenceHistogram hist;
    EventStream s1, s2;
    s1.duration_ns = s2.duration_ns = 1e6;
    CHECK_THROWS_AS(g2_tau(hist, s1, s2), std::invalid_argument);
}

TEST_CASE("histogram csv layout") {
    EventStream s1, s2;
    s1.duration_ns = s2.duration_ns = 1e6;
    s1.timestamps_ns = {100.0};
    s2.timestamps_ns = {100.2};
    HistogramConfig config;
    config.channel_width_ns = 1.0;
    config.range_ns = 2.0;
    config.window_ns = 4.0;
    config.accidental_shift_ns = 100.0;
    const auto hist = build_histogram(s1, s2, config);
    std::stringstream ss;
    write_histogram_csv(ss, hist, config);
    std::string line;
    std::getline(ss, line);
    CHECK(line.substr(0, 8) == "# config");
    std::getline(ss, line);
    CHECK(line == "tau_ns,counts");
    std::getline(ss, line);
    CHECK(line == "-2,0");
    std::getline(ss, line);
    CHECK(line == "-1,0");
    std::getline(ss, line);
    CHECK(line == "0,1");  // tau = -0.2 rounds to the central channel
}
