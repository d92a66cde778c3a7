#include "qdetect/cavity.hpp"

#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"
#include "qdetect/specfun.hpp"

#include <cmath>
#include <string>

namespace qdetect {

namespace {

using cplx = std::complex<double>;

void validate(const ResonatorGeometry& g)
{
    if (!(g.length_L > 0 && g.gap_capacitance_C > 0 && g.line_capacitance_Cp > 0 && g.velocity_c > 0))
        throw ParameterError("resonator: L, C, C' and c must all be positive");
}

// Above this lambda = C'L/2C the root is tracked through its offset from
// lambda, since W - lambda = O(1) while W itself grows without bound.
constexpr double kOffsetThreshold = 20.0;

cplx log1p_c(cplx u)
{
    if (std::abs(u) < 1e-4)
        return u * (1.0 - u * (0.5 - u * (1.0 / 3.0 - 0.25 * u)));
    return std::log(1.0 + u);
}

// delta = W - lambda for W e^W = lambda e^lambda e^{i pi n}:
// delta + log(1 + delta/lambda) = i pi n, Newton from delta = i pi n.
cplx lambert_offset(double lambda, int n)
{
    const cplx target(0.0, si::pi * n);
    cplx d = target;
    for (int it = 0; it < 60; ++it) {
        const cplx f = d + log1p_c(d / lambda) - target;
        const cplx step = f / (1.0 + 1.0 / (lambda + d));
        d -= step;
        if (std::abs(step) <= 1e-16 * std::abs(d))
            return d;
    }
    const double resid = std::abs(d + log1p_c(d / lambda) - target);
    if (!(resid <= 1e-13 * std::abs(target)))
        throw ConvergenceError("resonances: pole offset did not converge for n = " + std::to_string(n));
    return d;
}

} // namespace

std::vector<CavityMode> resonances(const ResonatorGeometry& g, int n_max)
{
    validate(g);
    if (n_max < 1)
        throw ParameterError("resonances: n_max must be >= 1");
    const double lambda = g.line_capacitance_Cp * g.length_L / (2.0 * g.gap_capacitance_C);
    const double c_over_l = g.velocity_c / g.length_L;

    std::vector<CavityMode> modes;
    modes.reserve(n_max);
    for (int n = 1; n <= n_max; ++n) {
        // The n-th root sits on branch floor(n/2) of W(lambda (-1)^n e^lambda);
        // i (c/L)(lambda - W) = omega + i gamma/2 and the pole is its conjugate.
        cplx lambda_minus_w;
        if (lambda < kOffsetThreshold) {
            const int branch = n / 2;
            const double sign = n % 2 == 1 ? -1.0 : 1.0;
            lambda_minus_w = lambda - specfun::lambert_w(branch, sign * lambda * std::exp(lambda));
        } else {
            lambda_minus_w = -lambert_offset(lambda, n);
        }
        const cplx p = cplx(0.0, 1.0) * c_over_l * lambda_minus_w;
        CavityMode m;
        m.n = n;
        m.omega_n = p.real();
        m.gamma_n = 2.0 * p.imag();
        m.q_factor = m.omega_n / m.gamma_n;
        if (!(m.gamma_n > 0.0))
            throw ConvergenceError("resonances: mode " + std::to_string(n) + " has non-positive width");
        modes.push_back(m);
    }
    return modes;
}

ModeAsymptotics small_c_asymptotics(const ResonatorGeometry& g, int n)
{
    validate(g);
    const double eps = g.coupling_ratio();
    ModeAsymptotics a;
    a.omega_0 = n * si::pi * g.velocity_c / g.length_L;
    a.shift = -2.0 * eps * a.omega_0;
    const double x = g.gap_capacitance_C * a.omega_0 / (g.velocity_c * g.line_capacitance_Cp);
    a.gamma = 4.0 * g.velocity_c / g.length_L * x * x;
    const double z = 1.0 / (g.velocity_c * g.line_capacitance_Cp);
    a.q_closed_form = g.line_capacitance_Cp * g.length_L
                      / (2.0 * a.omega_0 * z * g.gap_capacitance_C * g.gap_capacitance_C);
    return a;
}

cplx bare_denominator(const ResonatorGeometry& g, cplx omega)
{
    const cplx x = 2.0 * omega * g.gap_capacitance_C / (g.velocity_c * g.line_capacitance_Cp);
    const cplx one_minus = 1.0 - cplx(0.0, 1.0) * x;
    return one_minus * one_minus - std::exp(cplx(0.0, 2.0) * g.length_L * omega / g.velocity_c);
}

SParams bare_s_params(const ResonatorGeometry& g, double omega)
{
    validate(g);
    if (omega == 0.0)
        throw DomainError("bare_s_params: omega = 0 is a removable 0/0 point; S21(0) = 0");
    const double x = 2.0 * omega * g.gap_capacitance_C / (g.velocity_c * g.line_capacitance_Cp);
    const double theta = g.length_L * omega / g.velocity_c;
    const cplx d = bare_denominator(g, omega);
    SParams s;
    s.s21 = -x * x / d;
    s.s11 = cplx(0.0, 2.0) * (x * std::cos(theta) + std::sin(theta)) / d;
    return s;
}

ResonatorGeometry with_coupling_ratio(ResonatorGeometry g, double ratio)
{
    if (!(ratio > 0.0))
        throw ParameterError("with_coupling_ratio: ratio must be positive");
    g.gap_capacitance_C = ratio * g.line_capacitance_Cp * g.length_L;
    return g;
}

} // namespace qdetect
