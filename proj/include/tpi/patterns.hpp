#pragma once
// Closed-form and exact-path evaluation of first- and second-order
// interference-diffraction patterns for thermal and SPDC illumination.
//
// Three independent routes to the same patterns exist on purpose: the
// closed forms are primary, while the exact-path point formulas and the
// aperture quadrature serve as cross-checking oracles.

#include <complex>
#include <span>
#include <utility>

#include "tpi/geometry.hpp"

namespace tpi {

enum class SourceKind { thermal, spdc, laser };

// sin(u)/u with the removable singularity sinc(0) = 1
double sinc(double u);

// Euclidean distance from a slit centre to a detector position
double path_length(double slit_center_x, double detector_x, const Geometry& g);

// Unit-modulus amplitude e^{i k (r_{path1,1} + r_{path2,2})} for the
// two-photon path (path1 -> D1, path2 -> D2), exact path lengths
std::complex<double> two_photon_phase(const Geometry& g, const DetectorPair& p,
                                      Slit path1, Slit path2);

// Point-slit G2, exact paths.  Thermal: mixture-weighted sum of the three
// alternatives; the gamma term carries the interference.
double g2_point_thermal(const Geometry& g, const DetectorPair& p,
                        const ThermalMixture& m);

// Point-slit G2 for the SPDC pair state, exact paths; range [0, 4]
double g2_point_spdc(const Geometry& g, const DetectorPair& p,
                     const SpdcModel& model);

// Far-field finite-slit thermal pattern, a function of x1 - x2; range [1, 2]
double g2_finite_thermal(const Geometry& g, const DetectorPair& p);

// Far-field finite-slit SPDC pattern, a function of x1 + x2; range [0, 1]
double g2_finite_spdc(const Geometry& g, const DetectorPair& p);

// Classical coherent double-slit pattern, the resolution comparison baseline
double first_order_pattern(const Geometry& g, double x);

// Independent numerical route: midpoint integration of two-photon amplitude
// products over both slit apertures (Fraunhofer phase), normalized to the
// zero-path-difference value of the corresponding closed form.
// nodes = midpoint nodes per slit, must be >= 2.  laser is not a valid kind.
double g2_finite_by_quadrature(const Geometry& g, const DetectorPair& p,
                               SourceKind kind, int nodes);

// (max - min)/(max + min) over the central fringe: the envelope maximum and
// its first adjacent bracketed minimum.  Constant samples give 0.  Throws
// std::invalid_argument when fewer than 3 samples or no interior minimum is
// bracketed.
double visibility(std::span<const std::pair<double, double>> samples);

}  // namespace tpi
