#pragma once
// The CLI subcommands as library functions, so the pipelines are directly
// testable.  Each command writes its datasets under out_dir and returns the
// headline numbers.

#include <string>
#include <vector>

#include "tpi/config.hpp"

namespace tpi {

// Exponential-bunching fit to a g2(tau) curve: g2 = 1 + A e^{-2|tau|/tau_c}.
struct BunchingFit {
    double g2_zero = 1.0;    // 1 + A
    double tau_c_ns = 0.0;   // 0 when no peak was found
    bool peak_found = false;
};
BunchingFit fit_bunching(const std::vector<std::pair<double, double>>& g2_curve);

struct AnalyticOutput {
    std::string thermal_csv, spdc_csv, first_order_csv;
};
// thermal, SPDC and first-order pattern CSVs over the configured grid
AnalyticOutput cmd_analytic(const RunConfig& cfg, const std::string& out_dir);

struct SpeckleOutput {
    std::string csv;
    ScanResult result;
};
// Monte Carlo speckle correlation estimates with std_error column
SpeckleOutput cmd_speckle(const RunConfig& cfg, const std::string& out_dir);

struct HbtOutput {
    std::string histogram_csv, summary_txt;
    BunchingFit bunching;
    WindowedCounts windowed;
    double accidental_expectation = 0.0;
    double rate_d1 = 0.0, rate_d2 = 0.0;  // events per second
};
// event-stream generation, coincidence histogram and windowed counts
HbtOutput cmd_hbt(const RunConfig& cfg, const std::string& out_dir);

struct ScanOutput {
    std::string scan_csv, fit_txt, report_txt;
    ScanResult result;
    FitResult fit;
    ResolutionReport resolution;
    double visibility = 0.0;
};
// full scan pipeline: run_scan, fit_pattern, visibility, resolution report
ScanOutput cmd_scan(const RunConfig& cfg, const std::string& out_dir);

}  // namespace tpi
