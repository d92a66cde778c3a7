#pragma once

#include <complex>
#include <vector>

namespace qdetect {

// Line section of length L closed by two identical series gap capacitors C.
struct ResonatorGeometry {
    double length_L = 0.0;            // m
    double gap_capacitance_C = 0.0;   // F
    double line_capacitance_Cp = 0.0; // F/m
    double velocity_c = 0.0;          // m/s

    // C / (C' L), the dimensionless coupling that sets the damping.
    double coupling_ratio() const { return gap_capacitance_C / (line_capacitance_Cp * length_L); }
};

struct CavityMode {
    int n = 0;
    double omega_n = 0.0; // rad/s
    double gamma_n = 0.0; // full width, rad/s
    double q_factor = 0.0; // omega_n / gamma_n
};

struct SParams {
    std::complex<double> s21;
    std::complex<double> s11;
};

// First-order small-C expressions for mode n: bare frequency n pi c/L,
// its shift, the width, and the closed-form quality factor C'L/(2 w0 Z C^2)
// with Z = 1/(c C').
struct ModeAsymptotics {
    double omega_0 = 0.0;
    double shift = 0.0;
    double gamma = 0.0;
    double q_closed_form = 0.0;
};

// Exact poles of the two-gap resonator, n = 1..n_max, from the Lambert W
// roots of its transmission denominator.
std::vector<CavityMode> resonances(const ResonatorGeometry& geom, int n_max);

ModeAsymptotics small_c_asymptotics(const ResonatorGeometry& geom, int n);

// Transmission and reflection of the empty resonator at angular frequency
// omega (omega != 0; negative omega returns the conjugate pair).
SParams bare_s_params(const ResonatorGeometry& geom, double omega);

// Denominator (1 - 2i w C/cC')^2 - exp(2i L w / c), complex w allowed.
std::complex<double> bare_denominator(const ResonatorGeometry& geom, std::complex<double> omega);

// Geometry with a given C/(C'L) ratio: L, C' and c fixed, C adjusted.
ResonatorGeometry with_coupling_ratio(ResonatorGeometry geom, double ratio);

} // namespace qdetect
