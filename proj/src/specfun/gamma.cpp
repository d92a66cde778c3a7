#include "qdetect/specfun.hpp"

#include "qdetect/error.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace qdetect::specfun {

namespace {

// Lanczos g = 7, n = 9.
constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

} // namespace

cplx log_gamma(cplx z)
{
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw DomainError("log_gamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
        const cplx s = std::sin(std::numbers::pi * z);
        return std::log(std::numbers::pi) - std::log(s) - log_gamma(1.0 - z);
    }
    const cplx zm = z - 1.0;
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i)
        x += kLanczos[i] / (zm + static_cast<double>(i));
    const cplx t = zm + kG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (zm + 0.5) * std::log(t) - t + std::log(x);
}

} // namespace qdetect::specfun
