#pragma once

#include <numbers>

// SI values (CODATA 2018, exact where the SI defines them).
namespace qdetect::si {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double c0 = 299792458.0;
inline constexpr double mu0 = 1.25663706212e-6;
// Tied to mu0 and c0 so the vacuum limits hold to rounding.
inline constexpr double eps0 = 1.0 / (mu0 * c0 * c0);
inline constexpr double e_charge = 1.602176634e-19;
inline constexpr double hbar = 1.054571817e-34;

} // namespace qdetect::si
