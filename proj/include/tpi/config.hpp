#pragma once
// Structured plain-text run configuration.  The file is INI-style with
// sections mirroring the domain types; CLI dotted keys
// (e.g. --geometry.d 0.135e-3) override file values.  Every output file
// embeds the resolved configuration, so (config, seed) determines all
// output bytes.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "tpi/coincidence.hpp"
#include "tpi/geometry.hpp"
#include "tpi/scan.hpp"

namespace tpi {

using KeyValues = std::map<std::string, std::string>;

struct RunConfig {
    Geometry geometry;

    SourceKind source_kind = SourceKind::thermal;
    ThermalMixture mixture;
    int subsources_per_slit = 16;
    double tau_c = 200e-9;          // seconds
    double mean_intensity = 1.0;
    double phase_difference = 0.0;  // SPDC phi_A - phi_B
    double pair_rate = 25000.0;     // SPDC pairs per second

    DetectorConfig detector1{45000.0, 0.0, 1.0};
    DetectorConfig detector2{25000.0, 0.0, 1.0};
    HistogramConfig histogram;

    ScanMode scan_mode = ScanMode::difference_grid;
    Engine engine = Engine::analytic;
    double scan_min = -10e-3;
    double scan_max = 10e-3;
    int scan_points = 41;
    std::size_t n_realizations = 100000;
    double seconds_per_point = 0.1;
    double time_step_over_tau_c = 0.05;

    double hbt_duration_s = 0.1;
    double hbt_x1 = 0.0;
    double hbt_x2 = 0.0;

    uint64_t seed = 1;

    SourceModel source_model() const;
    ScanConfig scan_config() const;
    std::vector<double> scan_positions() const;
};

// "section.key = value" map from an INI-style file; '#' starts a comment
KeyValues parse_config_file(const std::string& path);

// build a RunConfig from defaults plus the given keys; unknown keys or
// malformed values raise std::invalid_argument
RunConfig config_from_keys(const KeyValues& kv);

// resolved configuration as "# section.key = value" comment lines
void echo_config(std::ostream& os, const RunConfig& cfg);

}  // namespace tpi
