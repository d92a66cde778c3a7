#pragma once

#include "qdetect/app/config.hpp"
#include "qdetect/app/presets.hpp"
#include "qdetect/app/sweep.hpp"
#include "qdetect/detector.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace qdetect::app {

// Command-line overrides; they win over the config file, which wins over
// the preset.
struct Overrides {
    std::optional<std::string> preset;
    std::optional<std::string> state;
    std::optional<double> nbar;
    std::optional<double> flux;      // photons/s
    std::optional<double> tau_c;     // s
    std::optional<double> detuning;  // rad/s, signal omega - omega_c*
};

// Resolution helpers, exposed for tests and the Python module. Qubits built
// from circuit values append their regime warnings to `warnings`.
WaveguideParams resolve_line(const Config& cfg, const std::optional<std::string>& model_override = std::nullopt);
ResonatorGeometry resolve_resonator(const Config& cfg, const WaveguideParams& line);
SystemParams resolve_system(const Config& cfg, const FigurePreset* preset,
                            std::vector<std::string>* warnings = nullptr);
SignalState make_signal(const std::string& state, std::optional<double> nbar, std::optional<double> flux,
                        double tau_c, std::optional<double> signal_omega);
SignalState resolve_signal(const Config& cfg, const FigurePreset* preset, const Overrides& ov,
                           const CavityParams& cav);
Grid resolve_grid(const Config& cfg, const SystemParams& sys);

// Max relative deviation of the qubit response from the truncated-Fock
// oracle at the given probe frequencies (vacuum/coherent, one qubit).
struct OracleCheck {
    double max_deviation = 0.0;
    double max_truncation = 0.0; // n_fock vs 2 n_fock
    double max_residual = 0.0;
    int points = 0;
};
OracleCheck oracle_check(const SystemParams& sys, const SignalState& sig, const std::vector<double>& omega_p,
                         int n_fock, int threads);

// Exit codes: 0 ok, 2 configuration, 3 numerical, 4 I/O.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qdetect::app
