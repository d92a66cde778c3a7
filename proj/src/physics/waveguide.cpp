#include "qdetect/waveguide.hpp"

#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"
#include "qdetect/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qdetect {

namespace {

// log cosh x for x >= 0 without overflow.
double log_cosh(double x)
{
    return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}

double log_tanh(double x)
{
    return std::log1p(-std::exp(-2.0 * x)) - std::log1p(std::exp(-2.0 * x));
}

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ParameterError(what);
}

WaveguideParams finish(double c_line, double l_line, double eps_eff)
{
    require(std::isfinite(eps_eff) && eps_eff >= 1.0 - 1e-12,
            "waveguide: effective permittivity " + std::to_string(eps_eff) + " below vacuum");
    WaveguideParams p;
    p.c_line = c_line;
    p.l_line = l_line;
    p.eps_eff = eps_eff;
    p.v = si::c0 / std::sqrt(eps_eff);
    p.c_eff = 1.0 / (l_line * p.v * p.v);
    p.z = p.v * l_line;
    p.z_static = std::sqrt(l_line / c_line);
    return p;
}

} // namespace

WaveguideParams parallel_plate_params(const ParallelPlateTwoDielectric& g)
{
    require(g.W > 0 && g.D1 > 0 && g.D2 > 0, "parallel plate: lengths must be positive");
    require(g.eps1_rel >= 1.0 && g.eps2_rel >= 1.0, "parallel plate: relative permittivities must be >= 1");
    const double e1 = si::eps0 * g.eps1_rel;
    const double e2 = si::eps0 * g.eps2_rel;
    const double d_over_e = g.D1 / e1 + g.D2 / e2;
    const double v2 = (g.D1 / (e1 * e1) + g.D2 / (e2 * e2)) / (si::mu0 * d_over_e);
    const double c_line = g.W / d_over_e;
    const double l_line = si::mu0 * e2 * d_over_e / g.W;
    return finish(c_line, l_line, si::c0 * si::c0 / v2);
}

double cpw_region_capacitance(double w, double s, double H, EllipticArgument arg)
{
    require(w > 0 && s > 0 && H > 0, "cpw: region with non-positive dimension");
    // log k and log(1 - k); all in log form so thin layers (k -> 1) stay exact.
    double log_k, log_1mk;
    if (std::isinf(H)) {
        log_k = std::log(w / (w + 2.0 * s));
        log_1mk = std::log(2.0 * s / (w + 2.0 * s));
    } else {
        const double a = si::pi * w / (2.0 * H);
        const double b = si::pi * (w + 2.0 * s) / (2.0 * H);
        log_k = log_tanh(a) - log_tanh(b);
        // 1 - tanh a / tanh b = sinh(b - a) / (cosh a cosh b tanh b)
        const double d = b - a;
        const double log_sinh_d = d + std::log1p(-std::exp(-2.0 * d)) - std::log(2.0);
        log_1mk = log_sinh_d - log_cosh(a) - log_cosh(b) - log_tanh(b);
    }
    const double k = std::exp(log_k);
    require(k > 0.0 && std::isfinite(log_1mk) && log_1mk < 0.0 && log_k <= 0.0, "cpw: degenerate conformal map (k outside (0,1))");
    const double log_kp = 0.5 * (log_1mk + std::log1p(k)); // k' = sqrt((1-k)(1+k))
    const double kp = std::exp(log_kp);

    double ratio;
    if (arg == EllipticArgument::Modulus) {
        // K(k) / K(k'); the complement of k' is k.
        ratio = specfun::elliptic_k_from_log_complement(log_kp) / specfun::elliptic_k_from_log_complement(log_k);
    } else {
        // K(sqrt k) / K(sqrt k'); complements sqrt(1-k) and sqrt(1-k'),
        // 1 - k' = k^2/(1 + k').
        const double num = specfun::elliptic_k_from_log_complement(0.5 * log_1mk);
        const double den = specfun::elliptic_k_from_log_complement(0.5 * (2.0 * log_k - std::log1p(kp)));
        ratio = num / den;
    }
    return si::eps0 * 2.0 * ratio;
}

WaveguideParams cpw_params(const CPW& g, EllipticArgument arg)
{
    require(g.w > 0 && g.s > 0, "cpw: strip and gap widths must be positive");
    require(g.h1 > 0 && g.h2 >= 0, "cpw: h1 must be positive (may be infinite), h2 non-negative");
    require(std::isfinite(g.h2), "cpw: h2 must be finite");
    require(g.eps1_rel >= 1.0 && g.eps2_rel >= 1.0, "cpw: relative permittivities must be >= 1");

    const double inf = std::numeric_limits<double>::infinity();
    const bool has_layer2 = g.h2 > 0.0;
    const double c0 = cpw_region_capacitance(g.w, g.s, inf, arg);
    const double c1 = cpw_region_capacitance(g.w, g.s, g.h1 + g.h2, arg);
    // A missing interface layer is an infinitely thin region: 1/C'_2 -> 0.
    const double inv_c2 = has_layer2 ? 1.0 / cpw_region_capacitance(g.w, g.s, g.h2, arg) : 0.0;

    const double r1 = 1.0 / g.eps1_rel;
    const double r2 = has_layer2 ? 1.0 / g.eps2_rel : r1;
    const double eps2_rel = has_layer2 ? g.eps2_rel : g.eps1_rel;

    const double c_d = 1.0 / (1.0 / c0 + (r1 - 1.0) / c1 + (r2 - r1) * inv_c2);
    const double c_line = c0 + c_d;

    const double bracket = (1.0 - c0 / c1) * (r1 - 1.0) * ((r1 - 1.0) / c1 + 2.0 * (r2 - r1) * inv_c2)
                           + (1.0 - c0 * inv_c2) * inv_c2 * (r1 - r2) * (r1 - r2);
    const double inv_eps = 2.0 * c0 / c_line + bracket * c_d * c_d / c_line;
    const double l_line = si::mu0 / (c0 / si::eps0 + c_d / (si::eps0 * eps2_rel));
    return finish(c_line, l_line, 1.0 / inv_eps);
}

WaveguideParams waveguide_params(const WaveguideGeometry& geom, EllipticArgument arg)
{
    if (const auto* pp = std::get_if<ParallelPlateTwoDielectric>(&geom))
        return parallel_plate_params(*pp);
    return cpw_params(std::get<CPW>(geom), arg);
}

namespace cpw_models {

CPW full()
{
    return CPW{10e-6, 6.6e-6, 500e-6, 550e-9, 11.6, 3.78};
}

CPW equal_dielectrics()
{
    CPW g = full();
    g.eps2_rel = g.eps1_rel;
    return g;
}

CPW half_planes()
{
    CPW g = full();
    g.h1 = std::numeric_limits<double>::infinity();
    g.h2 = 0.0;
    g.eps2_rel = g.eps1_rel;
    return g;
}

} // namespace cpw_models

} // namespace qdetect
