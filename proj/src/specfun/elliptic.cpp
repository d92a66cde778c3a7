#include "qdetect/specfun.hpp"

#include "qdetect/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdetect::specfun {

namespace {

// Carlson's symmetric integral R_F(x, y, z) by duplication, followed by the
// fifth-order Taylor correction. Arguments non-negative, at most one zero.
double carlson_rf(double x, double y, double z)
{
    const double a0 = (x + y + z) / 3.0;
    double a = a0;
    // (3 r)^{-1/6} with r = 1e-16 gives full double accuracy.
    double q = std::pow(3.0e-16, -1.0 / 6.0) * std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    double pow4 = 1.0;
    double xm = x, ym = y, zm = z;
    for (int it = 0; it < 100 && q >= std::abs(a); ++it) {
        const double sx = std::sqrt(xm), sy = std::sqrt(ym), sz = std::sqrt(zm);
        const double lam = sx * sy + sx * sz + sy * sz;
        xm = 0.25 * (xm + lam);
        ym = 0.25 * (ym + lam);
        zm = 0.25 * (zm + lam);
        a = 0.25 * (a + lam);
        q *= 0.25;
        pow4 *= 0.25;
    }
    const double X = (a0 - x) * pow4 / a;
    const double Y = (a0 - y) * pow4 / a;
    const double Z = -X - Y;
    const double e2 = X * Y - Z * Z;
    const double e3 = X * Y * Z;
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

constexpr double kAsymptoticKp2 = 1e-12;

} // namespace

double elliptic_k(double k)
{
    if (!(k >= 0.0 && k < 1.0))
        throw DomainError("elliptic_k: modulus must lie in [0, 1), got " + std::to_string(k));
    return carlson_rf(0.0, (1.0 - k) * (1.0 + k), 1.0);
}

double elliptic_k_from_complement(double kp)
{
    if (!(kp > 0.0 && kp <= 1.0))
        throw DomainError("elliptic_k_from_complement: k' must lie in (0, 1], got " + std::to_string(kp));
    return elliptic_k_from_log_complement(std::log(kp));
}

double elliptic_k_from_log_complement(double log_kp)
{
    if (!(log_kp <= 0.0))
        throw DomainError("elliptic_k_from_log_complement: log k' must be <= 0");
    if (2.0 * log_kp < std::log(kAsymptoticKp2)) {
        // K ~ L + (k'^2/4)(L - 1), L = log(4/k').
        const double L = std::log(4.0) - log_kp;
        const double kp2 = std::exp(2.0 * log_kp);
        return L + 0.25 * kp2 * (L - 1.0);
    }
    const double kp = std::exp(log_kp);
    return carlson_rf(0.0, kp * kp, 1.0);
}

} // namespace qdetect::specfun
