#pragma once

#include "qdetect/detector.hpp"

#include <string>
#include <vector>

namespace qdetect::app {

// Named reference parameter sets. The qubit linewidth
// Gamma + 2 Gamma_phi = 2 pi 250 kHz is split as Gamma = 2 pi 250 kHz,
// Gamma_phi = 0; only Gamma/2 + Gamma_phi enters the responses.
struct FigurePreset {
    std::string id;
    std::string description;
    SystemParams system;
    double nbar = 1.0;
    std::vector<std::string> states;  // signal states the figure shows
    std::vector<double> tau_c;        // thermal coherence times, s (empty: tau_c = 0)
    std::vector<double> detunings;    // signal detunings omega - omega_c*, rad/s (relative-error figure)
};

const std::vector<FigurePreset>& figure_presets();
// Throws ConfigError for an unknown id.
const FigurePreset& find_preset(const std::string& id);

} // namespace qdetect::app
