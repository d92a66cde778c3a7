#include "qdetect/specfun.hpp"

#include "qdetect/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qdetect::specfun {

namespace {

using lcplx = std::complex<long double>;

constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr int kMaxTerms = 10000;

// E_n(z) = (-z)^{n-1}/(n-1)! (psi(n) - log z) - sum_{k != n-1} (-z)^k / ((k-n+1) k!)
lcplx series(int n, cplx z)
{
    const lcplx lz(z);
    long double psi = -kEulerGamma;
    for (int m = 1; m < n; ++m)
        psi += 1.0L / m;

    lcplx sum = 0.0L;
    lcplx pow_over_fact = 1.0L; // (-z)^k / k!
    lcplx special = 0.0L;
    int small_run = 0;
    for (int k = 0; k < kMaxTerms; ++k) {
        if (k > 0)
            pow_over_fact *= -lz / static_cast<long double>(k);
        if (k == n - 1) {
            special = pow_over_fact * (psi - std::log(lz));
            continue;
        }
        const lcplx term = pow_over_fact / static_cast<long double>(k - n + 1);
        sum -= term;
        if (k > n && std::abs(term) < 1e-18L * std::abs(sum + special))
            ++small_run;
        else
            small_run = 0;
        if (small_run >= 2)
            return sum + special;
    }
    throw ConvergenceError("expint_en: power series not converged after " + std::to_string(kMaxTerms) + " terms");
}

// e^z E_n(z) by the modified Lentz continued fraction.
cplx continued_fraction(int n, cplx z)
{
    const double tiny = 1e-300;
    cplx b = z + double(n);
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < kMaxTerms; ++i) {
        const double an = -double(i) * double(n - 1 + i);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            return h;
    }
    throw ConvergenceError("expint_en: continued fraction not converged after " + std::to_string(kMaxTerms)
                           + " terms at |z|=" + std::to_string(std::abs(z)));
}

bool use_series(cplx z)
{
    const double r = std::abs(z);
    if (r <= 1.0)
        return true;
    // Near the negative axis the continued fraction slows down while the
    // series only loses about exp(|z| - |Re z|) to cancellation.
    return z.real() < 0.0 && r <= 40.0 && r + z.real() < 10.0;
}

void check_domain(int n, cplx z)
{
    if (n < 0)
        throw DomainError("expint_en: order must be non-negative");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("expint_en: non-finite argument");
    if (z.imag() == 0.0 && z.real() < 0.0)
        throw DomainError("expint_en: z on the negative real axis (principal-branch cut of log z)");
    if (z == 0.0 && n <= 1)
        throw DomainError("expint_en: E_" + std::to_string(n) + "(0) is infinite");
}

} // namespace

cplx expint_en(int n, cplx z)
{
    check_domain(n, z);
    if (z == 0.0)
        return 1.0 / double(n - 1);
    if (n == 0)
        return std::exp(-z) / z;
    if (use_series(z))
        return cplx(series(n, z));
    return std::exp(-z) * continued_fraction(n, z);
}

cplx expint_en_scaled(int n, cplx z)
{
    check_domain(n, z);
    if (z == 0.0)
        return 1.0 / double(n - 1);
    if (n == 0)
        return 1.0 / z;
    if (use_series(z))
        return cplx(std::exp(lcplx(z)) * series(n, z));
    return continued_fraction(n, z);
}

} // namespace qdetect::specfun
