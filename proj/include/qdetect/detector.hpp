#pragma once

#include "qdetect/cavity.hpp"
#include "qdetect/waveguide.hpp"

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qdetect {

using cplx = std::complex<double>;

// Circuit-level description a qubit was derived from.
struct QubitPhysical {
    double e_j = 0.0; // Josephson energy, J
    double c_j = 0.0; // F
    double f_j = 0.0; // coupling fraction
    double l_j = 0.0; // position along the resonator, m
};

// Rates are angular (rad/s).
struct QubitParams {
    double omega_q = 0.0;
    double chi = 0.0;
    double gamma = 0.0;
    double gamma_phi = 0.0;
    std::optional<QubitPhysical> physical;

    double gamma_prime() const { return 0.5 * gamma + gamma_phi; }
};

struct CavityParams {
    double omega_c = 0.0;
    double gamma_c = 0.0;
    double omega_c_star = 0.0; // omega_c - sum of chi over the qubits
};

struct SystemParams {
    double omega_c = 0.0;
    double gamma_c = 0.0;
    std::vector<QubitParams> qubits;

    // Always recomputed from the current qubit list.
    CavityParams cavity() const;
};

// Signal intensity is given either as a forward flux J (photons/s) or as the
// cavity population on resonance, nbar = 2J/gamma_c. Exactly one must be set.
struct Vacuum {};
struct Coherent {
    std::optional<double> flux;
    std::optional<double> nbar;
};
struct Incoherent {
    std::optional<double> flux;
    std::optional<double> nbar;
};
// nbar = tau_c J. tau_c = 0 is the vanishing-coherence-time limit and then
// needs nbar directly.
struct Thermal {
    std::optional<double> flux;
    std::optional<double> nbar;
    double tau_c = 0.0;
};

struct SignalState {
    std::variant<Vacuum, Coherent, Incoherent, Thermal> kind;
    std::optional<double> signal_omega; // defaults to omega_c*

    double omega(const CavityParams& cav) const { return signal_omega.value_or(cav.omega_c_star); }
    std::string name() const;
};

struct PhotonNumber {
    double nbar = 0.0;
    double flux = 0.0;         // J, photons/s
    std::optional<cplx> beta;  // coherent only; real positive on resonance
};

struct DerivedQubit {
    QubitParams qubit;
    double kappa = 0.0;
    double g = 0.0;
    double omega_c = 0.0;
    bool dispersive = true; // |omega_j - omega_c| >= 10 g
    std::vector<std::string> warnings;
};

// Qubit frequency, coupling, Stark shift and radiative rate from circuit
// values. omega_c defaults to the exact fundamental of the resonator.
DerivedQubit derive_qubit(const QubitPhysical& phys, const WaveguideParams& line, const ResonatorGeometry& cav,
                          std::optional<double> omega_c = std::nullopt);

PhotonNumber cavity_photon_number(const SignalState& sig, const CavityParams& cav);

// Responses are g<sigma^->'/(Omega_p/2), i.e. normalized by the probe.

cplx qubit_response_vacuum(double omega_p, const QubitParams& q);

cplx qubit_response_coherent(double omega_p, const QubitParams& q, const CavityParams& cav, cplx beta,
                             double signal_omega);

// Same quantity through the closed 1F1 form; used as a cross-check.
cplx qubit_response_coherent_hyp(double omega_p, const QubitParams& q, const CavityParams& cav, cplx beta,
                                 double signal_omega);

cplx qubit_response_incoherent(double omega_p, const QubitParams& q, const CavityParams& cav, double nbar,
                               double signal_omega);

// nbar = tau_c J. The effective population seen by the probe is
// nbar / (1 + i tau_c (omega_p - omega)); tau_c = 0 gives nbar_p = nbar.
cplx qubit_response_thermal(double omega_p, const QubitParams& q, const CavityParams& cav, double nbar,
                            double tau_c, double signal_omega);

// Dispatch on the signal kind.
cplx qubit_response(double omega_p, const QubitParams& q, const CavityParams& cav, const SignalState& sig);

struct S21Parts {
    cplx total;
    cplx cavity;
    std::vector<cplx> qubit; // one entry per qubit
};

S21Parts s21_probe_parts(double omega_p, const SystemParams& sys, const SignalState& sig);
cplx s21_probe(double omega_p, const SystemParams& sys, const SignalState& sig);

cplx s21_signal(double omega, const SystemParams& sys);

// Photon-number distribution and extra width per comb line (well-resolved
// limit). Truncated once the cumulative weight reaches 1 - 1e-10.
struct CombLine {
    int n = 0;
    double weight = 0.0;
    double width = 0.0; // cavity-induced half width, rad/s
};
std::vector<CombLine> comb_lines(const SignalState& sig, const CavityParams& cav);

cplx comb_spectrum(double omega_p, const SystemParams& sys, const SignalState& sig);

struct Spectrum {
    std::vector<double> omega_p;
    std::vector<cplx> s21;
    std::vector<cplx> cavity;              // empty unless components were requested
    std::vector<std::vector<cplx>> qubit;  // [qubit][point]
    SystemParams system;
    SignalState signal;
};

std::vector<double> figure_of_merit(const Spectrum& with_signal, const Spectrum& vacuum);

// ||S21(delta)| - |S21(0)|| / |S21(0)| on the grid, for each signal detuning
// delta = omega - omega_c*. The flux is held at its resonant value.
std::vector<std::vector<double>> detuning_error(const SystemParams& sys, const SignalState& sig,
                                                const std::vector<double>& detunings,
                                                const std::vector<double>& omega_p);

// Regime checks that do not stop a computation (comb validity, thermal
// coherence time, transmon ratio).
std::vector<std::string> validity_warnings(const SystemParams& sys, const SignalState& sig);

} // namespace qdetect
