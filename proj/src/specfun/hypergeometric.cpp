#include "qdetect/specfun.hpp"

#include "qdetect/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qdetect::specfun {

namespace {

using lcplx = std::complex<long double>;

constexpr int kMaxTerms = 10000;
constexpr double kTermTol = 1e-15;
// Below this Re z the Kummer transform replaces the alternating series.
constexpr double kKummerSwitch = -12.0;

bool is_nonpositive_integer(cplx x)
{
    return x.imag() == 0.0 && x.real() <= 0.0 && x.real() == std::floor(x.real());
}

// Minimal complex arithmetic on __float128 for the cancellation fallback.
struct qcplx {
    __float128 re, im;
};

qcplx operator+(qcplx x, qcplx y) { return {x.re + y.re, x.im + y.im}; }
qcplx operator*(qcplx x, qcplx y) { return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re}; }
qcplx operator/(qcplx x, qcplx y)
{
    const __float128 d = y.re * y.re + y.im * y.im;
    return {(x.re * y.re + x.im * y.im) / d, (x.im * y.re - x.re * y.im) / d};
}
__float128 abs2(qcplx x) { return x.re * x.re + x.im * x.im; }

template <class C>
C from_cplx(cplx z);
template <>
lcplx from_cplx<lcplx>(cplx z) { return lcplx(z); }
template <>
qcplx from_cplx<qcplx>(cplx z) { return {z.real(), z.imag()}; }

long double magnitude(lcplx z) { return std::abs(z); }
long double magnitude(qcplx z) { return std::sqrt(static_cast<long double>(abs2(z))); }
cplx to_cplx(lcplx z) { return cplx(z); }
cplx to_cplx(qcplx z) { return {static_cast<double>(z.re), static_cast<double>(z.im)}; }

// Plain power series; also reports the largest term seen, which measures the
// cancellation the working precision has to absorb.
template <class C>
cplx hyp1f1_series_t(cplx a, cplx b, cplx z, long double& max_term)
{
    const C ca = from_cplx<C>(a), cb = from_cplx<C>(b), cz = from_cplx<C>(z);
    C sum = from_cplx<C>(1.0), term = from_cplx<C>(1.0);
    max_term = 1.0L;
    int small_run = 0;
    for (int k = 0; k < kMaxTerms; ++k) {
        const C kk = from_cplx<C>(double(k));
        const C k1 = from_cplx<C>(double(k + 1));
        term = term * (ca + kk) / (cb + kk) * cz / k1;
        sum = sum + term;
        const long double mt = magnitude(term);
        if (mt == 0.0L)
            return to_cplx(sum);
        max_term = std::max(max_term, mt);
        if (mt < kTermTol * magnitude(sum) && k > std::abs(z))
            ++small_run;
        else
            small_run = 0;
        if (small_run >= 2)
            return to_cplx(sum);
    }
    throw ConvergenceError("hyp1f1: series not converged after " + std::to_string(kMaxTerms)
                           + " terms (|z|=" + std::to_string(std::abs(z)) + ")");
}

cplx hyp1f1_series(cplx a, cplx b, cplx z)
{
    long double max_term = 0.0L;
    const cplx v = hyp1f1_series_t<lcplx>(a, b, z, max_term);
    // Long double leaves ~1e-19 * max_term / |sum| of relative error.
    if (max_term * 1e-19L > 1e-16L * std::abs(v))
        return hyp1f1_series_t<qcplx>(a, b, z, max_term);
    return v;
}

// U(-m, b, z) as a finite sum.
cplx kummer_u_polynomial(int m, cplx b, cplx z)
{
    // (-1)^m sum_s C(m,s) (b+s)_{m-s} (-z)^s
    lcplx sum = 0.0L;
    const lcplx lb(b), lz(z);
    long double binom = 1.0L;
    lcplx zpow = 1.0L;
    for (int s = 0; s <= m; ++s) {
        lcplx poch = 1.0L;
        for (int j = 0; j < m - s; ++j)
            poch *= lb + static_cast<long double>(s + j);
        sum += binom * poch * zpow;
        zpow *= -lz;
        binom = binom * static_cast<long double>(m - s) / static_cast<long double>(s + 1);
    }
    return cplx((m % 2 == 0 ? 1.0L : -1.0L) * sum);
}

// Asymptotic expansion z^{-a} sum (a)_k (a-b+1)_k / k! (-z)^{-k}; returns
// false when the smallest term does not reach the tolerance.
bool kummer_u_asymptotic(cplx a, cplx b, cplx z, cplx& out)
{
    const cplx c = a - b + 1.0;
    cplx sum = 1.0, term = 1.0;
    double prev = 1.0;
    for (int k = 0; k < 200; ++k) {
        term *= (a + double(k)) * (c + double(k)) / (double(k + 1)) / (-z);
        const double mag = std::abs(term);
        if (mag > prev && k > 2)
            return false;
        sum += term;
        if (mag < 1e-16 * std::abs(sum)) {
            out = std::exp(-a * std::log(z)) * sum;
            return true;
        }
        prev = mag;
    }
    return false;
}

// z^{-a}/Gamma(a) int_0^inf e^{-s} s^{a-1} (1+s/z)^{b-a-1} ds for Re a >= 1/2,
// trapezoid in t with s = exp(pi/2 sinh t).
cplx kummer_u_quadrature(cplx a, cplx b, cplx z)
{
    const cplx p = b - a - 1.0;
    const double half_pi = 0.5 * std::numbers::pi;
    auto f = [&](double t) -> cplx {
        const double log_s = half_pi * std::sinh(t);
        if (log_s > 7.0)
            return 0.0; // e^{-s} with s > 1000
        const double s = std::exp(log_s);
        const cplx e = -s + a * log_s + p * std::log(1.0 + s / z);
        if (e.real() < -745.0)
            return 0.0;
        return std::exp(e) * half_pi * std::cosh(t);
    };
    const double t_lo = -7.0, t_hi = 4.0;
    double h = 0.5;
    cplx sum = 0.0;
    for (double t = t_lo; t <= t_hi + 1e-12; t += h)
        sum += f(t);
    cplx prev = sum * h;
    for (int level = 1; level <= 10; ++level) {
        // Add the midpoints of the previous grid.
        cplx mid = 0.0;
        const int n = static_cast<int>(std::lround((t_hi - t_lo) / h));
        for (int i = 0; i < n; ++i)
            mid += f(t_lo + (i + 0.5) * h);
        sum += mid;
        h *= 0.5;
        const cplx cur = sum * h;
        if (level >= 3 && std::abs(cur - prev) <= 1e-14 * std::abs(cur))
            return std::exp(-a * std::log(z) - log_gamma(a)) * cur;
        prev = cur;
    }
    throw ConvergenceError("kummer_u: quadrature did not converge (a=" + std::to_string(a.real()) + ")");
}

} // namespace

cplx hyp1f1(cplx a, cplx b, cplx z)
{
    if (is_nonpositive_integer(b))
        throw DomainError("hyp1f1: b is a non-positive integer");
    if (z == 0.0)
        return 1.0;
    if (z.real() < kKummerSwitch)
        return std::exp(z) * hyp1f1_series(b - a, b, -z);
    return hyp1f1_series(a, b, z);
}

cplx kummer_u(cplx a, cplx b, cplx z)
{
    if (z == 0.0)
        throw DomainError("kummer_u: z = 0");
    if (z.imag() == 0.0 && z.real() < 0.0)
        throw DomainError("kummer_u: z on the negative real axis (principal-branch cut)");
    if (is_nonpositive_integer(a))
        return kummer_u_polynomial(static_cast<int>(-a.real()), b, z);

    cplx out;
    if (std::abs(z) > 20.0 && kummer_u_asymptotic(a, b, z, out))
        return out;

    if (a.real() >= 0.5)
        return kummer_u_quadrature(a, b, z);

    // Shift a up, then recur down with
    // U(a-1) = -(b - 2a - z) U(a) - a (a - b + 1) U(a+1).
    const int m = static_cast<int>(std::ceil(0.5 - a.real()));
    cplx a_cur = a + double(m);
    cplx u1 = kummer_u_quadrature(a_cur + 1.0, b, z);
    cplx u0 = kummer_u_quadrature(a_cur, b, z);
    for (int i = 0; i < m; ++i) {
        const cplx um = -(b - 2.0 * a_cur - z) * u0 - a_cur * (a_cur - b + 1.0) * u1;
        u1 = u0;
        u0 = um;
        a_cur -= 1.0;
    }
    return u0;
}

} // namespace qdetect::specfun
