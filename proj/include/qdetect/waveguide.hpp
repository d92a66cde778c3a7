#pragma once

#include <variant>

namespace qdetect {

// Two superconducting plates of width W with two stacked dielectric slabs.
struct ParallelPlateTwoDielectric {
    double W = 0.0;  // m
    double D1 = 0.0; // m
    double D2 = 0.0; // m
    double eps1_rel = 1.0;
    double eps2_rel = 1.0;
};

// Coplanar waveguide: centre strip w, gaps s, vacuum above, substrate h1
// (eps1) on top of which sits an interface layer h2 (eps2) under the metal.
// h1 may be +inf (substrate fills the lower half plane) and h2 may be 0
// (no interface layer).
struct CPW {
    double w = 0.0;  // m
    double s = 0.0;  // m
    double h1 = 0.0; // m
    double h2 = 0.0; // m
    double eps1_rel = 1.0;
    double eps2_rel = 1.0;
};

using WaveguideGeometry = std::variant<ParallelPlateTwoDielectric, CPW>;

struct WaveguideParams {
    double c_line = 0.0;   // static C', F/m
    double l_line = 0.0;   // L', H/m
    double v = 0.0;        // phase velocity, m/s
    double eps_eff = 0.0;  // (c0/v)^2
    double c_eff = 0.0;    // 1/(L' v^2), F/m
    double z = 0.0;        // v L', Ohm
    double z_static = 0.0; // sqrt(L'/C'), Ohm
};

// How the region moduli k_i enter the complete elliptic integrals.
// Modulus: 2K(k)/K(k'). Parameter: k_i is used as m = k^2, i.e.
// 2K(sqrt k)/K(sqrt k'); this is the reading that reproduces the reference
// CPW values (see the acceptance test) and is the default.
enum class EllipticArgument { Parameter, Modulus };

WaveguideParams parallel_plate_params(const ParallelPlateTwoDielectric& geom);
WaveguideParams cpw_params(const CPW& geom, EllipticArgument arg = EllipticArgument::Parameter);
WaveguideParams waveguide_params(const WaveguideGeometry& geom, EllipticArgument arg = EllipticArgument::Parameter);

// Vacuum-region capacitance eps0 * 2K/K' for the modulus
// tanh(pi w / 2H) / tanh(pi (w + 2s) / 2H); H = +inf gives w/(w+2s).
double cpw_region_capacitance(double w, double s, double H, EllipticArgument arg = EllipticArgument::Parameter);

// Reference CPW (s = 6.6 um, w = 10 um, h1 = 500 um, h2 = 550 nm,
// eps1 = 11.6, eps2 = 3.78) and its two simplified variants.
namespace cpw_models {
CPW full();
CPW equal_dielectrics(); // interface layer with eps2 = eps1
CPW half_planes();       // vacuum above, eps1 filling the lower half plane
} // namespace cpw_models

} // namespace qdetect
