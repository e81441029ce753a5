#pragma once
// Double-slit geometry and source parameter types.  All lengths in metres,
// angles in radians.  Slit A sits at +d/2, slit B at -d/2; detector
// coordinates are measured from the symmetry axis.

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tpi {

struct Geometry {
    double slit_width = 0.043e-3;       // a
    double slit_separation = 0.135e-3;  // d, centre to centre
    double distance = 1.0;              // z, slits to detector plane
    double wavelength = 632.8e-9;       // He-Ne line

    double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

    // Fraunhofer validity: z >= 10 d^2 / lambda
    bool far_field() const {
        return distance >= 10.0 * slit_separation * slit_separation / wavelength;
    }

    void validate() const {
        if (!(slit_width > 0.0))
            throw std::invalid_argument("geometry: slit_width must be > 0");
        if (!(slit_separation > slit_width))
            throw std::invalid_argument("geometry: slit_separation must exceed slit_width");
        if (!(distance > 0.0))
            throw std::invalid_argument("geometry: distance must be > 0");
        if (!(wavelength > 0.0))
            throw std::invalid_argument("geometry: wavelength must be > 0");
    }
};

struct DetectorPair {
    double x1 = 0.0;  // horizontal displacement of D1
    double x2 = 0.0;  // horizontal displacement of D2
};

// Mixture weights of the three two-photon alternatives: both photons from
// slit A, both from B, or one from each (the interfering alternative).
struct ThermalMixture {
    double p_alpha = 1.0 / 3.0;
    double p_beta = 1.0 / 3.0;
    double p_gamma = 1.0 / 3.0;

    void validate() const {
        auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!in01(p_alpha) || !in01(p_beta) || !in01(p_gamma))
            throw std::invalid_argument("mixture: weights must lie in [0,1]");
        if (std::abs(p_alpha + p_beta + p_gamma - 1.0) > 1e-12)
            throw std::invalid_argument("mixture: weights must sum to 1");
    }
};

struct SpdcModel {
    double phase_difference = 0.0;  // phi_A - phi_B, constant across the pump
};

enum class Slit { A, B };

inline double slit_center(const Geometry& g, Slit s) {
    return s == Slit::A ? 0.5 * g.slit_separation : -0.5 * g.slit_separation;
}

}  // namespace tpi
