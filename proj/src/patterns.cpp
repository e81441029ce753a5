#include "tpi/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tpi {

double sinc(double u) {
    if (std::abs(u) < 1e-8)
        return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

double path_length(double slit_center_x, double detector_x, const Geometry& g) {
    const double dx = detector_x - slit_center_x;
    return std::sqrt(g.distance * g.distance + dx * dx);
}

namespace {

// r_A - r_B at one detector, computed without large-term cancellation:
// (r_A^2 - r_B^2) / (r_A + r_B)
double slit_path_difference(double detector_x, const Geometry& g) {
    const double cA = slit_center(g, Slit::A);
    const double cB = slit_center(g, Slit::B);
    const double rA = path_length(cA, detector_x, g);
    const double rB = path_length(cB, detector_x, g);
    const double num = (2.0 * detector_x - cA - cB) * (cB - cA);
    return num / (rA + rB);
}

}  // namespace

std::complex<double> two_photon_phase(const Geometry& g, const DetectorPair& p,
                                      Slit path1, Slit path2) {
    const double r1 = path_length(slit_center(g, path1), p.x1, g);
    const double r2 = path_length(slit_center(g, path2), p.x2, g);
    return std::polar(1.0, g.wavenumber() * (r1 + r2));
}

double g2_point_thermal(const Geometry& g, const DetectorPair& p,
                        const ThermalMixture& m) {
    g.validate();
    m.validate();
    // (1/2)|e^{ik(rA1+rB2)} + e^{ik(rB1+rA2)}|^2 = 1 + cos(k[(rA1-rB1)-(rA2-rB2)])
    const double delta =
        g.wavenumber() *
        (slit_path_difference(p.x1, g) - slit_path_difference(p.x2, g));
    return m.p_alpha + m.p_beta + m.p_gamma * (1.0 + std::cos(delta));
}

double g2_point_spdc(const Geometry& g, const DetectorPair& p,
                     const SpdcModel& model) {
    g.validate();
    // |e^{ik(rA1+rA2)} + e^{i(k(rB1+rB2)+dphi)}|^2
    const double delta =
        g.wavenumber() *
            (slit_path_difference(p.x1, g) + slit_path_difference(p.x2, g)) -
        model.phase_difference;
    return 2.0 + 2.0 * std::cos(delta);
}

double g2_finite_thermal(const Geometry& g, const DetectorPair& p) {
    const double u = p.x1 - p.x2;
    const double scale = std::numbers::pi * u / (g.wavelength * g.distance);
    const double env = sinc(scale * g.slit_width);
    const double fringe = std::cos(scale * g.slit_separation);
    return 1.0 + env * env * fringe * fringe;
}

double g2_finite_spdc(const Geometry& g, const DetectorPair& p) {
    const double v = p.x1 + p.x2;
    const double scale = std::numbers::pi * v / (g.wavelength * g.distance);
    const double env = sinc(scale * g.slit_width);
    const double fringe = std::cos(scale * g.slit_separation);
    return env * env * fringe * fringe;
}

double first_order_pattern(const Geometry& g, double x) {
    const double scale = std::numbers::pi * x / (g.wavelength * g.distance);
    const double env = sinc(scale * g.slit_width);
    const double fringe = std::cos(scale * g.slit_separation);
    return env * env * fringe * fringe;
}

double g2_finite_by_quadrature(const Geometry& g, const DetectorPair& p,
                               SourceKind kind, int nodes) {
    g.validate();
    if (nodes < 2)
        throw std::invalid_argument("quadrature: nodes must be >= 2");
    if (kind == SourceKind::laser)
        throw std::invalid_argument("quadrature: laser has no two-photon pattern");

    // midpoint nodes across both slit apertures
    std::vector<double> xs;
    xs.reserve(2 * static_cast<std::size_t>(nodes));
    for (Slit s : {Slit::A, Slit::B}) {
        const double lo = slit_center(g, s) - 0.5 * g.slit_width;
        const double h = g.slit_width / nodes;
        for (int i = 0; i < nodes; ++i)
            xs.push_back(lo + (i + 0.5) * h);
    }
    const std::size_t n = xs.size();

    // Fraunhofer linear phases k x_s x_j / z at each detector
    const double k_over_z = g.wavenumber() / g.distance;
    std::vector<double> phi1(n), phi2(n);
    for (std::size_t s = 0; s < n; ++s) {
        phi1[s] = k_over_z * xs[s] * p.x1;
        phi2[s] = k_over_z * xs[s] * p.x2;
    }

    if (kind == SourceKind::spdc) {
        // pair emitted from a single source point: coherent sum over nodes
        std::complex<double> amp{0.0, 0.0};
        for (std::size_t s = 0; s < n; ++s)
            amp += std::polar(1.0, phi1[s] + phi2[s]);
        const double raw = std::norm(amp);
        const double raw0 = static_cast<double>(n) * static_cast<double>(n);
        return raw / raw0;  // closed form is 1 at x1 + x2 = 0
    }

    // thermal: photons from independent source points s, s'; the symmetrized
    // amplitude gives (1/2)|e^{i(phi1_s+phi2_s')} + e^{i(phi1_s'+phi2_s)}|^2
    double raw = 0.0;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t)
            raw += 1.0 + std::cos(phi1[s] + phi2[t] - phi1[t] - phi2[s]);
    const double raw0 = 2.0 * static_cast<double>(n) * static_cast<double>(n);
    return 2.0 * raw / raw0;  // closed form is 2 at x1 - x2 = 0
}

double visibility(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 3)
        throw std::invalid_argument("visibility: need at least 3 samples");

    std::size_t peak = 0;
    double vmax = samples[0].second, vmin_all = samples[0].second;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double v = samples[i].second;
        if (v > vmax) { vmax = v; peak = i; }
        vmin_all = std::min(vmin_all, v);
    }
    if (vmax - vmin_all <= 1e-14 * std::max(std::abs(vmax), 1.0))
        return 0.0;  // flat data: no fringe

    bool found = false;
    double vmin = vmax;
    // first local minimum to the right of the peak
    for (std::size_t i = peak + 1; i + 1 < samples.size(); ++i) {
        if (samples[i].second <= samples[i + 1].second) {
            if (samples[i].second < vmax) {
                vmin = std::min(vmin, samples[i].second);
                found = true;
            }
            break;
        }
    }
    // and to the left
    for (std::size_t i = peak; i-- > 1;) {
        if (samples[i].second <= samples[i - 1].second) {
            if (samples[i].second < vmax) {
                vmin = std::min(vmin, samples[i].second);
                found = true;
            }
            break;
        }
    }
    if (!found)
        throw std::invalid_argument(
            "visibility: samples do not bracket an interior minimum");
    return (vmax - vmin) / (vmax + vmin);
}

}  // namespace tpi
