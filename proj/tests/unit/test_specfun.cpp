#include "doctest.h"

#include "qdetect/error.hpp"
#include "qdetect/specfun.hpp"
#include "support/gen.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace qdetect;
using namespace qdetect::specfun;
using qdetect::testing::Gen;
using qdetect::testing::rel_err;

namespace {

// K = pi / (2 AGM(1, k')), k' given directly.
double agm_k_complement(double kp)
{
    double a = 1.0, b = kp;
    for (int i = 0; i < 60 && std::abs(a - b) > 1e-17 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (2.0 * a);
}

double agm_k(double k) { return agm_k_complement(std::sqrt(1.0 - k * k)); }

} // namespace

TEST_SUITE("lambert_w") {

TEST_CASE("trivial values")
{
    CHECK(lambert_w(0, 0.0) == cplx(0.0));
    CHECK(std::abs(lambert_w(0, std::numbers::e) - 1.0) < 1e-15);
    CHECK(lambert_w(-1, -1.0 / std::numbers::e) == cplx(-1.0));
    CHECK(lambert_w(0, -1.0 / std::numbers::e) == cplx(-1.0));
}

TEST_CASE("real branches agree with boost")
{
    for (double x : {-0.36, -0.3, -0.1, -1e-3, 1e-8, 0.5, 1.0, 10.0, 1e3, 1e100}) {
        const cplx w = lambert_w(0, x);
        CHECK(std::abs(w.imag()) == 0.0);
        CHECK(rel_err(w.real(), boost::math::lambert_w0(x)) < 1e-14);
    }
    for (double x : {-0.36, -0.3, -0.1, -1e-3, -1e-30}) {
        const cplx w = lambert_w(-1, x);
        CHECK(std::abs(w.imag()) == 0.0);
        CHECK(rel_err(w.real(), boost::math::lambert_wm1(x)) < 1e-14);
    }
}

TEST_CASE("complex branches against high-precision values")
{
    struct Ref {
        int k;
        cplx z, w;
    };
    const std::vector<Ref> refs = {
        {2, {1, 2}, {-1.68691387793753965566726847350305057255, 11.96263143532281326195187645904475579018}},
        {-3, {-4, -1}, {-1.587050823121172905386986675280464084812, -20.09656589586839310098610160351061742469}},
        {0, {-2, 0}, {0.1728160028399999757457591457804563629766, 1.673686413740842677188801777967081003933}},
        {1, {-0.3, -0.1}, {-1.811778100952293098324151201853586977831, 0.6815559593451728090528032786058424367988}},
        {-1, {-0.3, 0.1}, {-1.811778100952293098324151201853586977831, -0.6815559593451728090528032786058424367988}},
        {0, {1000, 1000}, {5.535896519267195268837774997109010533028, 0.6657180720800407811329830788971161946239}},
        {5, {1e-5, 0}, {-15.00898617386848669651990973354903278587, 29.37273436209999755495587000997771154646}},
    };
    for (const auto& r : refs)
        CHECK(rel_err(lambert_w(r.k, r.z), r.w) < 1e-13);
}

TEST_CASE("residual property on random arguments and branches")
{
    Gen g(11);
    for (int i = 0; i < 2000; ++i) {
        const int k = g.integer(-4, 4);
        const double r = g.log_uniform(1e-6, 1e6);
        const cplx z = std::polar(r, g.uniform(-std::numbers::pi, std::numbers::pi));
        const cplx w = lambert_w(k, z);
        CHECK(std::abs(w * std::exp(w) - z) <= 1e-12 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("log-argument form matches direct form and reaches huge arguments")
{
    for (int k : {0, 1, 2}) {
        for (double lam : {1.0, 50.0, 500.0}) {
            const cplx lz(std::log(lam) + lam, std::numbers::pi);
            const cplx direct = lambert_w(k, -lam * std::exp(lam));
            CHECK(rel_err(lambert_w_log(k, lz), direct) < 1e-13);
        }
    }
    // W_k(lambda e^lambda e^{i pi n}) = lambda + i pi n (1 - 1/lambda) + O(1/lambda^2)
    const double lam = 5e8;
    const cplx w = lambert_w_log(1, cplx(std::log(lam) + lam, std::numbers::pi));
    CHECK(std::abs(w.real() - lam) < 1e-6);
    CHECK(std::abs(w.imag() - 3.0 * std::numbers::pi) < 1e-7);
}

TEST_CASE("W_k(0) for k != 0 is a domain error")
{
    CHECK_THROWS_AS(lambert_w(1, 0.0), DomainError);
}

} // lambert_w

TEST_SUITE("elliptic_k") {

TEST_CASE("K(0) = pi/2 and quadrature at 1/sqrt(2)")
{
    CHECK(elliptic_k(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    const double k = 1.0 / std::sqrt(2.0);
    auto f = [k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); };
    const double quad = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2, 15, 1e-15);
    CHECK(std::abs(elliptic_k(k) - quad) < 1e-12);
}

TEST_CASE("AGM cross-check on the 0.1 grid and monotonicity")
{
    double prev = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double k = i == 10 ? 0.99 : 0.1 * i;
        const double v = elliptic_k(k);
        CHECK(rel_err(v, agm_k(k)) < 1e-13);
        CHECK(rel_err(v, std::comp_ellint_1(k)) < 1e-13);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("complementary-modulus route")
{
    for (double kp : {0.9, 0.5, 1e-3, 1e-5, 1e-7})
        CHECK(rel_err(elliptic_k_from_complement(kp), agm_k_complement(kp)) < 1e-13);
    // Asymptotic regime: k rounds to 1 in double.
    const double kp = 1e-9;
    CHECK(rel_err(elliptic_k_from_complement(kp), std::log(4.0 / kp)) < 1e-15);
    CHECK(rel_err(elliptic_k_from_log_complement(-800.0), std::log(4.0) + 800.0) < 1e-15);
}

TEST_CASE("k >= 1 is a domain error")
{
    CHECK_THROWS_AS(elliptic_k(1.0), DomainError);
    CHECK_THROWS_AS(elliptic_k(1.5), DomainError);
}

} // elliptic_k

TEST_SUITE("hyp1f1") {

TEST_CASE("trivial identities")
{
    CHECK(hyp1f1({0.3, 0.1}, {1.2, 0.0}, 0.0) == cplx(1.0));
    const cplx z(0.3, 0.4);
    CHECK(rel_err(hyp1f1(1.0, 2.0, z), (std::exp(z) - 1.0) / z) < 1e-14);
}

TEST_CASE("generic point against the 200-term exact-rational series")
{
    const cplx ref(0.002922795051123909137909579775896783176172, -0.1670465044247954498603530975615856065803);
    CHECK(rel_err(hyp1f1({-0.5, 0.2}, {0.7, -0.1}, {1.1, 0.3}), ref) < 1e-13);
}

TEST_CASE("real arguments agree with boost")
{
    for (double a : {-2.5, -0.3, 0.7, 3.0})
        for (double b : {0.5, 1.5, 4.2})
            for (double z : {-8.0, -1.0, 0.5, 6.0})
                CHECK(rel_err(hyp1f1(a, b, z).real(), boost::math::hypergeometric_1F1(a, b, z)) < 1e-11);
}

TEST_CASE("Kummer transformation on 100 random complex points, |z| <= 10")
{
    Gen g(23);
    for (int i = 0; i < 100; ++i) {
        const cplx a = g.box(-3, 3, -2, 2);
        const cplx b = g.box(0.2, 4, -2, 2);
        const cplx z = g.disk(10.0);
        const cplx lhs = hyp1f1(a, b, z);
        const cplx rhs = std::exp(z) * hyp1f1(b - a, b, -z);
        CHECK(rel_err(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("large negative real part uses the transformed series")
{
    // 1F1(1; 2; z) = (e^z - 1)/z also for z = -40.
    const cplx z(-40.0, 3.0);
    CHECK(rel_err(hyp1f1(1.0, 2.0, z), (std::exp(z) - 1.0) / z) < 1e-13);
}

TEST_CASE("b a non-positive integer is a domain error")
{
    CHECK_THROWS_AS(hyp1f1(0.5, -2.0, 1.0), DomainError);
}

} // hyp1f1

TEST_SUITE("kummer_u") {

TEST_CASE("U(1,1,1) = e E1(1), E1 by quadrature")
{
    boost::math::quadrature::exp_sinh<double> integrator;
    const double e1 = integrator.integrate([](double t) { return std::exp(-t) / t; }, 1.0,
                                           std::numeric_limits<double>::infinity());
    CHECK(rel_err(kummer_u(1.0, 1.0, 1.0), std::numbers::e * e1) < 1e-12);
}

TEST_CASE("leading asymptotic order along the positive reals")
{
    const cplx a(0.8, 0.3), b(1.9, -0.2);
    double prev = 1.0;
    for (double z : {50.0, 100.0}) {
        const double dev = std::abs(std::abs(kummer_u(a, b, z) * std::pow(cplx(z), a)) - 1.0);
        CHECK(dev < 0.05);
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("high-precision reference values")
{
    struct Ref {
        cplx a, b, z, u;
    };
    const std::vector<Ref> refs = {
        {{0.3, 0.2}, {1.7, -0.4}, {2.5, 1}, {0.7892165322216779615517564337700319232331, -0.30871008185055392952765366322993404775}},
        {{-1.3, 0.5}, {0.4, 0}, {1.2, -0.7}, {0.4499105939808582346387007289450916733045, 0.1933942258044988317878760152065879388018}},
        {{2.5, 0}, {0.5, 0}, {30, 0}, {0.00016164772063240975642919720622827345469, 0.0}},
        {{1.5, 2}, {3, -1}, {0.1, 0.05}, {-60.0836655784266701131477951626339918632, 216.6827410737868729989730333118875487596}},
        {{0.7, 0}, {1.2, 0}, {-3, 0.5}, {-0.2186567980265556758803261265831565506561, -0.4805546186779382762903717478817011768672}},
        {{-2.6, 0}, {1.1, 0}, {4, 0}, {-6.581203551167475193677222218891249616556, 0.0}},
    };
    for (const auto& r : refs)
        CHECK(rel_err(kummer_u(r.a, r.b, r.z), r.u) < 1e-11);
}

TEST_CASE("polynomial case a = -m")
{
    // U(-2, b, z) = z^2 - 2(b+1) z + b(b+1)
    const cplx b(0.4, 0.1), z(1.3, -0.6);
    CHECK(rel_err(kummer_u(-2.0, b, z), z * z - 2.0 * (b + 1.0) * z + b * (b + 1.0)) < 1e-14);
}

TEST_CASE("e^y E_n(y) = y^{n-1} U(n, n, y) for n = 1..6 on a complex grid")
{
    CHECK(rel_err(std::exp(0.8) * expint_en(2, 0.8), std::pow(0.8, 1) * kummer_u(2.0, 2.0, 0.8)) < 1e-10);
    for (int n = 1; n <= 6; ++n)
        for (double re : {0.05, 0.4, 1.5, 5.0, 25.0})
            for (double im : {-20.0, -2.0, 0.0, 0.7, 8.0}) {
                const cplx y(re, im);
                const cplx lhs = expint_en_scaled(n, y);
                const cplx rhs = std::pow(y, n - 1) * kummer_u(double(n), double(n), y);
                CHECK_MESSAGE(rel_err(lhs, rhs) < 1e-10, "n=" << n << " y=" << y);
            }
}

TEST_CASE("cut and origin are domain errors")
{
    CHECK_THROWS_AS(kummer_u(0.5, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(kummer_u(0.5, 1.0, -2.0), DomainError);
}

} // kummer_u

TEST_SUITE("expint_en") {

TEST_CASE("trivial values")
{
    CHECK(expint_en(4, 0.0) == cplx(1.0 / 3.0));
    const cplx z(0.5, 0.5);
    const int n = 2;
    CHECK(rel_err(expint_en(n + 1, z), (std::exp(-z) - z * expint_en(n, z)) / double(n)) < 1e-14);
    const double x = 1e-4;
    CHECK(std::abs(expint_en(1, x).real() + std::numbers::egamma + std::log(x)) < 1e-3);
}

TEST_CASE("real arguments agree with boost")
{
    for (int n : {1, 2, 3, 7})
        for (double x : {1e-3, 0.3, 1.0, 2.5, 10.0, 60.0})
            CHECK(rel_err(expint_en(n, x).real(), boost::math::expint(n, x)) < 1e-13);
}

TEST_CASE("complex reference values on both sides of the axis")
{
    struct Ref {
        int n;
        cplx z, e;
    };
    const std::vector<Ref> refs = {
        {1, {0.5, 0.5}, {0.25786645713798380333940326938473775414, -0.3966904354558152137638961517135369896674}},
        {3, {2, 3}, {-0.02149184653270081660698845956824695523999, 0.01077169558207378419203997852613820224835}},
        {2, {-3, 0.5}, {-10.45948709295580760504625262136715055532, -4.550078692634492926613225110720141334879}},
        {1, {-5, 0.001}, {-40.18526348275118142052803525876189996147, -3.111910025133309393277787212273771236421}},
        {4, {30, 40}, {-1.781489814802827248498715925781524196917e-15, 4.811141239913164046152723106840723467181e-17}},
        {1, {-20, 25}, {-7622723.286154635167904478749282965945998, -13433531.26758697858769949326324206299612}},
        {2, {0.02, -0.01}, {0.9107489802436064014680622336820349351725, 0.03315849012681619305674784064081712645519}},
        {6, {-8, -6}, {0.02044553513329237447412335266244830471268, 421.7917072990630430760958271209837431881}},
        {1, {-30, 2}, {129725611638.2008729796867924829627466677, 344474444798.5025709558998114303160016884}},
    };
    for (const auto& r : refs)
        CHECK_MESSAGE(rel_err(expint_en(r.n, r.z), r.e) < 1e-12, "n=" << r.n << " z=" << r.z);
}

TEST_CASE("scaled form matches on moderate arguments and survives large ones")
{
    for (cplx z : {cplx(0.5, 0.5), cplx(3, -2), cplx(-2, 4)})
        CHECK(rel_err(expint_en_scaled(3, z), std::exp(z) * expint_en(3, z)) < 1e-13);
    // e^z E_1(z) ~ 1/z for large z.
    const cplx big(1e4, 3e3);
    CHECK(rel_err(expint_en_scaled(1, big), 1.0 / big) < 1e-4);
}

TEST_CASE("negative real axis is a domain error naming the cut")
{
    CHECK_THROWS_WITH_AS(expint_en(1, -2.0), doctest::Contains("cut"), DomainError);
    CHECK_THROWS_AS(expint_en(1, 0.0), DomainError);
    CHECK_THROWS_AS(expint_en(0, 0.0), DomainError);
}

} // expint_en

TEST_SUITE("laguerre") {

TEST_CASE("trivial values")
{
    for (int n = 0; n < 8; ++n)
        CHECK(laguerre(n, 0.0) == cplx(1.0));
    CHECK(laguerre(1, cplx(0.3, 0.2)) == cplx(0.7, -0.2));
}

TEST_CASE("L_5(2.5) against the exact rational expansion")
{
    // L_5(x) = (-x^5 + 25x^4 - 200x^3 + 600x^2 - 600x + 120)/120 ; x = 5/2
    const double exact = (-97.65625 + 976.5625 - 3125.0 + 3750.0 - 1500.0 + 120.0) / 120.0;
    CHECK(std::abs(laguerre(5, 2.5).real() - exact) < 1e-14);
}

TEST_CASE("three-term recurrence holds to rounding")
{
    Gen g(5);
    for (int i = 0; i < 50; ++i) {
        const cplx x = g.disk(5.0);
        for (int n = 1; n < 20; ++n) {
            const cplx lhs = double(n + 1) * laguerre(n + 1, x);
            const cplx rhs = (2.0 * n + 1.0 - x) * laguerre(n, x) - double(n) * laguerre(n - 1, x);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
        }
    }
}

} // laguerre
