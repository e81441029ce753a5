// Event sampling: Poisson statistics of the thinned thermal streams,
// super-Poissonian bunching, SPDC pair acceptance against the pattern, and
// the stream text format.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "tpi/events.hpp"
#include "tpi/speckle.hpp"

using namespace tpi;

namespace {

const Geometry kBench{0.043e-3, 0.135e-3, 1.0, 632.8e-9};

IntensitySeries flat_series(double level, double dt, std::size_t n) {
    IntensitySeries s;
    s.dt = dt;
    s.samples.assign(n, level);
    return s;
}

// two-sided Kolmogorov-Smirnov p-value, asymptotic form
double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * lambda * lambda * k * k);
        p += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-12)
            break;
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TEST_CASE("constant intensity gives Poisson counts at the nominal rate") {
    const auto series = flat_series(2.5, 1e-6, 100000);  // 0.1 s
    DetectorConfig config;
    config.mean_rate = 200000.0;
    CounterRng rng(11);
    const auto stream =
        sample_thermal_events(series, DetectorId::D1, config, rng);
    CHECK(stream.detector == DetectorId::D1);
    CHECK(stream.duration_ns == doctest::Approx(1e8));
    const double expected = config.mean_rate * 0.1;
    const double n = static_cast<double>(stream.timestamps_ns.size());
    CHECK(std::abs(n - expected) < 3.0 * std::sqrt(expected));
}

TEST_CASE("constant intensity gives exponential inter-arrivals (KS)") {
    const auto series = flat_series(1.0, 1e-6, 100000);
    DetectorConfig config;
    config.mean_rate = 150000.0;
    CounterRng rng(12);
    const auto stream =
        sample_thermal_events(series, DetectorId::D1, config, rng);
    std::vector<double> gaps;
    for (std::size_t i = 1; i < stream.timestamps_ns.size(); ++i)
        gaps.push_back(stream.timestamps_ns[i] - stream.timestamps_ns[i - 1]);
    REQUIRE(gaps.size() > 10000);
    std::sort(gaps.begin(), gaps.end());
    const double mean_gap_ns = 1e9 / config.mean_rate;
    double d = 0.0;
    const double n = static_cast<double>(gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const double cdf = 1.0 - std::exp(-gaps[i] / mean_gap_ns);
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
    }
    CHECK(ks_pvalue(d, gaps.size()) > 0.01);
}

TEST_CASE("no events fall where the intensity vanishes") {
    IntensitySeries series = flat_series(1.0, 1e-6, 20000);
    for (std::size_t i = 0; i < 10000; ++i)
        series.samples[i] = 0.0;  // dark first half
    DetectorConfig config;
    config.mean_rate = 500000.0;
    CounterRng rng(13);
    const auto stream =
        sample_thermal_events(series, DetectorId::D2, config, rng);
    REQUIRE(stream.timestamps_ns.size() > 100);
    for (double t : stream.timestamps_ns)
        CHECK(t >= 1e7);  // all in the bright half
}

TEST_CASE("speckle-driven events are super-Poissonian") {
    ThermalSourceConfig source;
    source.subsources_per_slit = 2;
    source.tau_c = 1e-6;
    const auto xs = discretize_source(kBench, source);
    CounterRng rng(14);
    const auto intensity = speckle_time_series(source, xs, 0.0, 2e-3,
                                               source.tau_c / 20.0, kBench, rng);
    DetectorConfig config;
    config.mean_rate = 5e6;
    const auto stream =
        sample_thermal_events(intensity, DetectorId::D1, config, rng);

    // counts in tau_c-sized bins: thermal light gives variance > mean
    const double bin_ns = source.tau_c * 1e9;
    std::vector<double> counts(2000, 0.0);
    for (double t : stream.timestamps_ns)
        counts[std::min<std::size_t>(static_cast<std::size_t>(t / bin_ns),
                                     counts.size() - 1)] += 1.0;
    double mean = 0.0;
    for (double c : counts)
        mean += c;
    mean /= static_cast<double>(counts.size());
    double var = 0.0;
    for (double c : counts)
        var += (c - mean) * (c - mean);
    var /= static_cast<double>(counts.size() - 1);
    CHECK(mean > 2.0);
    CHECK(var / mean > 1.5);
}

TEST_CASE("efficiency thins the stream proportionally") {
    const auto series = flat_series(1.0, 1e-6, 100000);
    DetectorConfig full;
    full.mean_rate = 300000.0;
    DetectorConfig half = full;
    half.efficiency = 0.5;
    CounterRng rng_a(15), rng_b(15);
    const auto s_full = sample_thermal_events(series, DetectorId::D1, full, rng_a);
    const auto s_half = sample_thermal_events(series, DetectorId::D1, half, rng_b);
    const double ratio = static_cast<double>(s_half.timestamps_ns.size()) /
                         static_cast<double>(s_full.timestamps_ns.size());
    CHECK(ratio == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("dead time enforces a minimum gap") {
    const auto series = flat_series(1.0, 1e-6, 10000);
    DetectorConfig config;
    config.mean_rate = 2e6;
    config.dead_time_ns = 800.0;
    CounterRng rng(16);
    const auto stream =
        sample_thermal_events(series, DetectorId::D1, config, rng);
    REQUIRE(stream.timestamps_ns.size() > 1000);
    for (std::size_t i = 1; i < stream.timestamps_ns.size(); ++i)
        CHECK(stream.timestamps_ns[i] - stream.timestamps_ns[i - 1] >= 800.0);

    DetectorConfig live = config;
    live.dead_time_ns = 0.0;
    CounterRng rng2(16);
    const auto free_running =
        sample_thermal_events(series, DetectorId::D1, live, rng2);
    CHECK(free_running.timestamps_ns.size() > stream.timestamps_ns.size());
}

TEST_CASE("degenerate intensity series are rejected") {
    DetectorConfig config;
    CounterRng rng(17);
    CHECK_THROWS_AS(sample_thermal_events(flat_series(1.0, 1e-6, 1),
                                          DetectorId::D1, config, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_thermal_events(flat_series(0.0, 1e-6, 100),
                                          DetectorId::D1, config, rng),
                    std::invalid_argument);
}

TEST_CASE("spdc pairs land simultaneously at the pattern maximum rate") {
    CounterRng rng(18);
    const double duration = 2.0;
    const auto [s1, s2] =
        sample_spdc_pairs(kBench, {}, 20000.0, duration, {0.0, 0.0}, rng);
    REQUIRE(s1.timestamps_ns.size() == s2.timestamps_ns.size());
    for (std::size_t i = 0; i < s1.timestamps_ns.size(); ++i)
        CHECK(s1.timestamps_ns[i] == s2.timestamps_ns[i]);
    // x1 + x2 = 0 sits at the pattern maximum, acceptance 1
    const double expected = 20000.0 * duration;
    CHECK(std::abs(static_cast<double>(s1.timestamps_ns.size()) - expected) <
          3.0 * std::sqrt(expected));
}

TEST_CASE("spdc acceptance follows the two-photon pattern") {
    const double fringe =
        kBench.wavelength * kBench.distance / kBench.slit_separation;
    const DetectorPair p{0.15 * fringe, 0.0};
    const double accept = g2_finite_spdc(kBench, p);
    REQUIRE(accept > 0.05);
    REQUIRE(accept < 0.95);
    CounterRng rng(19);
    const auto [s1, s2] = sample_spdc_pairs(kBench, {}, 50000.0, 2.0, p, rng);
    const double expected = 50000.0 * 2.0 * accept;
    CHECK(std::abs(static_cast<double>(s1.timestamps_ns.size()) - expected) <
          3.0 * std::sqrt(expected));
}

TEST_CASE("spdc pattern zero yields no pairs") {
    const double fringe =
        kBench.wavelength * kBench.distance / kBench.slit_separation;
    CounterRng rng(20);
    const auto [s1, s2] =
        sample_spdc_pairs(kBench, {}, 50000.0, 0.5, {0.5 * fringe, 0.0}, rng);
    CHECK(s1.timestamps_ns.empty());
    CHECK(s2.timestamps_ns.empty());
}

TEST_CASE("stream validation rejects disorder and range violations") {
    EventStream s;
    s.duration_ns = 100.0;
    s.timestamps_ns = {1.0, 2.0, 2.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.timestamps_ns = {1.0, 2.0, 150.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.timestamps_ns = {1.0, 2.0, 99.0};
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("event stream text round-trip is exact") {
    EventStream s;
    s.detector = DetectorId::D2;
    s.duration_ns = 1234567.890123;
    s.timestamps_ns = {0.125, 17.5, 1000.0000001, 999999.75};
    std::stringstream ss;
    write_event_stream(ss, s);
    const auto back = read_event_stream(ss);
    CHECK(back.detector == DetectorId::D2);
    CHECK(back.duration_ns == s.duration_ns);
    REQUIRE(back.timestamps_ns.size() == s.timestamps_ns.size());
    for (std::size_t i = 0; i < s.timestamps_ns.size(); ++i)
        CHECK(back.timestamps_ns[i] == s.timestamps_ns[i]);
}

TEST_CASE("malformed stream headers are rejected") {
    std::stringstream ss("detector D1\n1.0\n");
    CHECK_THROWS_AS(read_event_stream(ss), std::invalid_argument);
    std::stringstream empty("");
    CHECK_THROWS_AS(read_event_stream(empty), std::invalid_argument);
}
