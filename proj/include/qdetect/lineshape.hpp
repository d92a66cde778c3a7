#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qdetect {

// f(w) ~ residue / (w - pole) + background + slope (w - w_mid) near one
// line, w_mid the window centre. -Im(pole) is the half width.
struct LorentzFit {
    std::complex<double> pole;
    std::complex<double> residue;
    std::complex<double> background;
    std::complex<double> slope;
    double rms_residual = 0.0; // relative to max |f| in the window
};

// Linear least squares (the model multiplied through by w - p) over
// samples [first, last). Needs at least 5 points.
LorentzFit fit_lorentzian(const std::vector<double>& omega, const std::vector<std::complex<double>>& f,
                          std::size_t first, std::size_t last);

// Indices of strict interior local maxima, sorted by decreasing value.
std::vector<std::size_t> local_maxima(const std::vector<double>& y);

} // namespace qdetect
