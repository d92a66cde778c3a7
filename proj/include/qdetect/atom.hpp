#pragma once

#include <complex>

namespace qdetect {

// Single driven qubit in an open line.
struct AtomParams {
    double delta_omega = 0.0;     // drive minus qubit frequency, rad/s
    double gamma1 = 0.0;          // radiative decay, rad/s
    double gamma_phi = 0.0;       // pure dephasing, rad/s
    std::complex<double> rabi{};  // Omega_+; Omega_- is its conjugate

    double gamma_prime() const { return 0.5 * gamma1 + gamma_phi; }
};

struct AtomSteadyState {
    double sigma_z = 0.0;
    std::complex<double> sigma_minus{};
    std::complex<double> sigma_plus{};
};

struct AtomSParams {
    std::complex<double> s11;
    std::complex<double> s21;
};

AtomSteadyState atom_steady_state(const AtomParams& p);
AtomSParams atom_s_params(const AtomParams& p);

// Radiative rate implied by a drive of Rabi frequency |Omega| at input power
// P: Gamma_1 = |Omega|^2 hbar omega_1 / (2 P). Informational only.
double radiative_rate_from_power(double rabi_abs, double omega_1, double power_w);

} // namespace qdetect
