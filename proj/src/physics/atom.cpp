#include "qdetect/atom.hpp"

#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"

#include <cmath>

namespace qdetect {

namespace {

void validate(const AtomParams& p)
{
    if (!(p.gamma1 > 0.0) || !(p.gamma_phi >= 0.0))
        throw ParameterError("atom: gamma1 must be > 0 and gamma_phi >= 0");
    if (!std::isfinite(p.delta_omega) || !std::isfinite(std::abs(p.rabi)))
        throw ParameterError("atom: non-finite detuning or Rabi frequency");
}

} // namespace

AtomSteadyState atom_steady_state(const AtomParams& p)
{
    validate(p);
    using cplx = std::complex<double>;
    const double gp = p.gamma_prime();
    const double d = p.delta_omega;
    const double rabi2 = std::norm(p.rabi);
    const double lor = d * d + gp * gp;
    const double den = lor * p.gamma1 + rabi2 * gp;

    AtomSteadyState s;
    s.sigma_z = -lor * p.gamma1 / den;
    const cplx omega_plus = p.rabi;
    const cplx omega_minus = std::conj(p.rabi);
    s.sigma_plus = -0.5 * cplx(d, gp) * p.gamma1 * omega_plus / den;
    s.sigma_minus = -0.5 * cplx(d, -gp) * p.gamma1 * omega_minus / den;
    return s;
}

AtomSParams atom_s_params(const AtomParams& p)
{
    validate(p);
    using cplx = std::complex<double>;
    const double gp = p.gamma_prime();
    const double r = p.delta_omega / gp;
    const double den = 1.0 + r * r + std::norm(p.rabi) / (p.gamma1 * gp);
    AtomSParams s;
    s.s11 = -(p.gamma1 / (2.0 * gp)) * cplx(1.0, r) / den;
    s.s21 = 1.0 + s.s11;
    return s;
}

double radiative_rate_from_power(double rabi_abs, double omega_1, double power_w)
{
    if (!(power_w > 0.0))
        throw ParameterError("radiative_rate_from_power: power must be positive");
    return rabi_abs * rabi_abs * si::hbar * omega_1 / (2.0 * power_w);
}

} // namespace qdetect
