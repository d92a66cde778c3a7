#include "doctest.h"

#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"
#include "qdetect/specfun.hpp"
#include "qdetect/waveguide.hpp"
#include "support/gen.hpp"

#include <cmath>
#include <limits>

using namespace qdetect;
using qdetect::testing::rel_err;

TEST_SUITE("waveguide") {

TEST_CASE("parallel plate vacuum limit")
{
    const ParallelPlateTwoDielectric g{2e-3, 1e-4, 3e-4, 1.0, 1.0};
    const auto p = parallel_plate_params(g);
    CHECK(rel_err(p.v, si::c0) < 1e-12);
    CHECK(rel_err(p.c_line, si::eps0 * g.W / (g.D1 + g.D2)) < 1e-14);
    CHECK(rel_err(p.z, p.z_static) < 1e-10);
}

TEST_CASE("parallel plate single dielectric consistency")
{
    const ParallelPlateTwoDielectric g{1e-3, 2e-4, 5e-4, 4.2, 4.2};
    const auto p = parallel_plate_params(g);
    CHECK(rel_err(1.0 / std::sqrt(p.l_line * p.c_line), p.v) < 1e-12);
    CHECK(rel_err(p.v, 1.0 / std::sqrt(si::mu0 * si::eps0 * 4.2)) < 1e-12);
}

TEST_CASE("parallel plate eps1 = 2 eps0, eps2 = eps0, D1 = D2")
{
    // (D/(4 e0^2) + D/e0^2) / (mu0 (D/(2 e0) + D/e0)) = (5/6) c0^2
    const auto p = parallel_plate_params({1e-3, 1e-4, 1e-4, 2.0, 1.0});
    CHECK(rel_err(p.v, si::c0 * std::sqrt(5.0 / 6.0)) < 1e-13);
}

TEST_CASE("cpw vacuum reduction")
{
    for (auto arg : {EllipticArgument::Parameter, EllipticArgument::Modulus}) {
        CPW g = cpw_models::full();
        g.eps1_rel = g.eps2_rel = 1.0;
        const auto p = cpw_params(g, arg);
        CHECK(rel_err(p.v, si::c0) < 1e-10);
        CHECK(rel_err(p.z, p.z_static) < 1e-10);
    }
}

TEST_CASE("effective capacitance identity")
{
    for (const auto& g : {cpw_models::full(), cpw_models::equal_dielectrics(), cpw_models::half_planes()}) {
        const auto p = cpw_params(g);
        CHECK(std::abs(p.c_eff * p.l_line * p.v * p.v - 1.0) < 1e-15);
    }
}

TEST_CASE("increasing eps1 lowers v")
{
    CPW g = cpw_models::full();
    double prev = si::c0 * 2.0;
    for (double e1 = 1.0; e1 <= 20.0; e1 += 0.5) {
        g.eps1_rel = e1;
        const double v = cpw_params(g).v;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("full model and eps2 = eps1 rows")
{
    const auto full = cpw_params(cpw_models::full());
    CHECK(rel_err(full.c_line, 1.44e-10) < 0.01);
    CHECK(rel_err(full.v / si::c0, 0.434) < 0.01);
    CHECK(rel_err(full.eps_eff, 5.30) < 0.01);
    CHECK(rel_err(full.l_line, 2.36e-7) < 0.01);
    CHECK(rel_err(full.c_eff, 2.49e-10) < 0.01);
    CHECK(rel_err(full.z, 30.8) < 0.01);
    CHECK(rel_err(full.z_static, 40.5) < 0.01);

    const auto eq = cpw_params(cpw_models::equal_dielectrics());
    CHECK(rel_err(eq.c_line, 1.54e-10) < 0.01);
    CHECK(rel_err(eq.v / si::c0, 0.409) < 0.01);
    CHECK(rel_err(eq.z, 55.6) < 0.01);
    CHECK(rel_err(eq.z_static, 54.3) < 0.01);
}

TEST_CASE("half-plane model: electrostatic columns")
{
    const auto hp = cpw_params(cpw_models::half_planes());
    CHECK(rel_err(hp.c_line, 1.55e-10) < 0.01);
    CHECK(rel_err(hp.v / si::c0, 0.398) < 0.01);
    CHECK(rel_err(hp.eps_eff, 6.3) < 0.01);
    // Exact for this geometry: eps_eff = (1 + eps1)/2.
    CHECK(rel_err(hp.eps_eff, 0.5 * (1.0 + 11.6)) < 1e-12);
}

TEST_CASE("modulus convention is a uniform rescaling of the region ratios")
{
    // Both conventions agree in the vacuum limit for every H and differ in
    // the capacitance scale otherwise.
    const double cp = cpw_region_capacitance(10e-6, 6.6e-6, std::numeric_limits<double>::infinity(),
                                             EllipticArgument::Parameter);
    const double cm = cpw_region_capacitance(10e-6, 6.6e-6, std::numeric_limits<double>::infinity(),
                                             EllipticArgument::Modulus);
    const double k = 10.0 / 23.2;
    CHECK(rel_err(cm, si::eps0 * 2.0 * specfun::elliptic_k(k) / specfun::elliptic_k(std::sqrt(1 - k * k))) < 1e-13);
    CHECK(rel_err(cp, si::eps0 * 2.0 * specfun::elliptic_k(std::sqrt(k)) / specfun::elliptic_k(std::sqrt(std::sqrt(1 - k * k)))) < 1e-13);
}

TEST_CASE("thin layer does not underflow")
{
    const double c = cpw_region_capacitance(10e-6, 6.6e-6, 1e-9);
    CHECK(std::isfinite(c));
    CHECK(c > cpw_region_capacitance(10e-6, 6.6e-6, 550e-9));
}

TEST_CASE("invalid geometry")
{
    CHECK_THROWS_AS(cpw_params({0.0, 1e-6, 1e-4, 1e-7, 2.0, 2.0}), ParameterError);
    CHECK_THROWS_AS(cpw_params({1e-6, 1e-6, 1e-4, 1e-7, 0.5, 2.0}), ParameterError);
    CHECK_THROWS_AS(parallel_plate_params({1e-3, -1e-4, 1e-4, 2.0, 1.0}), ParameterError);
}

} // waveguide
