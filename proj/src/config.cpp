#include "tpi/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace tpi {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": " + v);
    }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const uint64_t x = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + key + ": " + v);
    }
}

}  // namespace

KeyValues parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw std::invalid_argument("config: cannot open " + path);
    KeyValues kv;
    std::string line, section;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: malformed line: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("config: key outside section: " + key);
        kv[section + "." + key] = val;
    }
    return kv;
}

RunConfig config_from_keys(const KeyValues& kv) {
    RunConfig cfg;

    // handler per dotted key; short aliases follow the usual symbols
    std::map<std::string, std::function<void(const std::string&, const std::string&)>> set;
    auto dbl = [&](double& field) {
        return [&field](const std::string& k, const std::string& v) {
            field = parse_double(k, v);
        };
    };
    set["geometry.slit_width"] = set["geometry.a"] = dbl(cfg.geometry.slit_width);
    set["geometry.slit_separation"] = set["geometry.d"] =
        dbl(cfg.geometry.slit_separation);
    set["geometry.distance"] = set["geometry.z"] = dbl(cfg.geometry.distance);
    set["geometry.wavelength"] = set["geometry.lambda"] =
        dbl(cfg.geometry.wavelength);

    set["source.kind"] = [&cfg](const std::string& k, const std::string& v) {
        if (v == "thermal")
            cfg.source_kind = SourceKind::thermal;
        else if (v == "spdc")
            cfg.source_kind = SourceKind::spdc;
        else if (v == "laser")
            cfg.source_kind = SourceKind::laser;
        else
            throw std::invalid_argument("config: bad value for " + k + ": " + v);
    };
    set["source.p_alpha"] = dbl(cfg.mixture.p_alpha);
    set["source.p_beta"] = dbl(cfg.mixture.p_beta);
    set["source.p_gamma"] = dbl(cfg.mixture.p_gamma);
    set["source.subsources_per_slit"] = [&cfg](const std::string& k,
                                               const std::string& v) {
        cfg.subsources_per_slit = static_cast<int>(parse_u64(k, v));
    };
    set["source.tau_c_ns"] = [&cfg](const std::string& k, const std::string& v) {
        cfg.tau_c = parse_double(k, v) * 1e-9;
    };
    set["source.mean_intensity"] = dbl(cfg.mean_intensity);
    set["source.phase_difference"] = dbl(cfg.phase_difference);
    set["source.pair_rate"] = dbl(cfg.pair_rate);

    set["detectors.rate_d1"] = dbl(cfg.detector1.mean_rate);
    set["detectors.rate_d2"] = dbl(cfg.detector2.mean_rate);
    set["detectors.dead_time_ns"] = [&cfg](const std::string& k,
                                           const std::string& v) {
        cfg.detector1.dead_time_ns = cfg.detector2.dead_time_ns =
            parse_double(k, v);
    };
    set["detectors.efficiency"] = [&cfg](const std::string& k,
                                         const std::string& v) {
        cfg.detector1.efficiency = cfg.detector2.efficiency = parse_double(k, v);
    };

    set["histogram.channel_width_ns"] = dbl(cfg.histogram.channel_width_ns);
    set["histogram.range_ns"] = dbl(cfg.histogram.range_ns);
    set["histogram.window_ns"] = dbl(cfg.histogram.window_ns);
    set["histogram.accidental_shift_ns"] = dbl(cfg.histogram.accidental_shift_ns);

    set["scan.mode"] = [&cfg](const std::string& k, const std::string& v) {
        if (v == "fix_D2_scan_D1" || v == "fix_d2_scan_d1")
            cfg.scan_mode = ScanMode::fix_d2_scan_d1;
        else if (v == "antisymmetric")
            cfg.scan_mode = ScanMode::antisymmetric;
        else if (v == "difference_grid")
            cfg.scan_mode = ScanMode::difference_grid;
        else
            throw std::invalid_argument("config: bad value for " + k + ": " + v);
    };
    set["scan.engine"] = [&cfg](const std::string& k, const std::string& v) {
        if (v == "analytic")
            cfg.engine = Engine::analytic;
        else if (v == "speckle_mc")
            cfg.engine = Engine::speckle_mc;
        else if (v == "event_mc")
            cfg.engine = Engine::event_mc;
        else
            throw std::invalid_argument("config: bad value for " + k + ": " + v);
    };
    set["scan.min"] = dbl(cfg.scan_min);
    set["scan.max"] = dbl(cfg.scan_max);
    set["scan.points"] = [&cfg](const std::string& k, const std::string& v) {
        cfg.scan_points = static_cast<int>(parse_u64(k, v));
    };
    set["scan.n_realizations"] = [&cfg](const std::string& k,
                                        const std::string& v) {
        cfg.n_realizations = parse_u64(k, v);
    };
    set["scan.seconds_per_point"] = dbl(cfg.seconds_per_point);
    set["scan.time_step_over_tau_c"] = dbl(cfg.time_step_over_tau_c);

    set["hbt.duration_s"] = dbl(cfg.hbt_duration_s);
    set["hbt.x1"] = dbl(cfg.hbt_x1);
    set["hbt.x2"] = dbl(cfg.hbt_x2);

    set["run.seed"] = [&cfg](const std::string& k, const std::string& v) {
        cfg.seed = parse_u64(k, v);
    };

    for (const auto& [key, value] : kv) {
        const auto it = set.find(key);
        if (it == set.end())
            throw std::invalid_argument("config: unknown key: " + key);
        it->second(key, value);
    }
    cfg.geometry.validate();
    return cfg;
}

SourceModel RunConfig::source_model() const {
    if (source_kind == SourceKind::spdc)
        return SpdcSource{SpdcModel{phase_difference}, pair_rate};
    ThermalSource src;
    src.mixture = mixture;
    src.subsources_per_slit = subsources_per_slit;
    src.tau_c = tau_c;
    return src;
}

std::vector<double> RunConfig::scan_positions() const {
    if (scan_points < 2)
        throw std::invalid_argument("config: scan.points must be >= 2");
    std::vector<double> xs(static_cast<std::size_t>(scan_points));
    for (int i = 0; i < scan_points; ++i)
        xs[static_cast<std::size_t>(i)] =
            scan_min + (scan_max - scan_min) * i / (scan_points - 1);
    return xs;
}

ScanConfig RunConfig::scan_config() const {
    ScanConfig sc;
    sc.mode = scan_mode;
    sc.engine = engine;
    sc.positions = scan_positions();
    sc.n_realizations = n_realizations;
    sc.seconds_per_point = seconds_per_point;
    sc.time_step_over_tau_c = time_step_over_tau_c;
    sc.seed = seed;
    sc.detector1 = detector1;
    sc.detector2 = detector2;
    sc.histogram = histogram;
    return sc;
}

void echo_config(std::ostream& os, const RunConfig& cfg) {
    char buf[160];
    auto num = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "# %s = %.12g\n", key, v);
        os << buf;
    };
    auto str = [&](const char* key, const char* v) {
        os << "# " << key << " = " << v << "\n";
    };
    num("geometry.slit_width", cfg.geometry.slit_width);
    num("geometry.slit_separation", cfg.geometry.slit_separation);
    num("geometry.distance", cfg.geometry.distance);
    num("geometry.wavelength", cfg.geometry.wavelength);
    str("source.kind", cfg.source_kind == SourceKind::thermal  ? "thermal"
                       : cfg.source_kind == SourceKind::spdc ? "spdc"
                                                             : "laser");
    num("source.p_alpha", cfg.mixture.p_alpha);
    num("source.p_beta", cfg.mixture.p_beta);
    num("source.p_gamma", cfg.mixture.p_gamma);
    num("source.subsources_per_slit", cfg.subsources_per_slit);
    num("source.tau_c_ns", cfg.tau_c * 1e9);
    num("source.mean_intensity", cfg.mean_intensity);
    num("source.phase_difference", cfg.phase_difference);
    num("source.pair_rate", cfg.pair_rate);
    num("detectors.rate_d1", cfg.detector1.mean_rate);
    num("detectors.rate_d2", cfg.detector2.mean_rate);
    num("detectors.dead_time_ns", cfg.detector1.dead_time_ns);
    num("detectors.efficiency", cfg.detector1.efficiency);
    num("histogram.channel_width_ns", cfg.histogram.channel_width_ns);
    num("histogram.range_ns", cfg.histogram.range_ns);
    num("histogram.window_ns", cfg.histogram.window_ns);
    num("histogram.accidental_shift_ns", cfg.histogram.accidental_shift_ns);
    str("scan.mode", cfg.scan_mode == ScanMode::fix_d2_scan_d1 ? "fix_D2_scan_D1"
                     : cfg.scan_mode == ScanMode::antisymmetric
                         ? "antisymmetric"
                         : "difference_grid");
    str("scan.engine", cfg.engine == Engine::analytic    ? "analytic"
                       : cfg.engine == Engine::speckle_mc ? "speckle_mc"
                                                          : "event_mc");
    num("scan.min", cfg.scan_min);
    num("scan.max", cfg.scan_max);
    num("scan.points", cfg.scan_points);
    num("scan.n_realizations", static_cast<double>(cfg.n_realizations));
    num("scan.seconds_per_point", cfg.seconds_per_point);
    num("scan.time_step_over_tau_c", cfg.time_step_over_tau_c);
    num("hbt.duration_s", cfg.hbt_duration_s);
    num("hbt.x1", cfg.hbt_x1);
    num("hbt.x2", cfg.hbt_x2);
    std::snprintf(buf, sizeof buf, "# run.seed = %llu\n",
                  static_cast<unsigned long long>(cfg.seed));
    os << buf;
}

}  // namespace tpi
