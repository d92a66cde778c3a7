// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failures.
#include "qdetect/atom.hpp"
#include "qdetect/cavity.hpp"
#include "qdetect/constants.hpp"
#include "qdetect/detector.hpp"
#include "qdetect/lineshape.hpp"
#include "qdetect/oracle.hpp"
#include "qdetect/specfun.hpp"
#include "qdetect/waveguide.hpp"
#include "support/gen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

using namespace qdetect;
using qdetect::testing::Gen;
using qdetect::testing::rel_err;

namespace {

constexpr double GHz = si::two_pi * 1e9, MHz = si::two_pi * 1e6, kHz = si::two_pi * 1e3;

struct Outcome {
    bool pass = false;
    std::string detail;
};

SystemParams reference_system(double chi, double gamma_c)
{
    SystemParams s;
    s.omega_c = 9 * GHz;
    s.gamma_c = gamma_c;
    s.qubits.push_back({10 * GHz, chi, 250 * kHz, 0.0, std::nullopt});
    return s;
}

SignalState signal(const std::string& kind, double nbar)
{
    if (kind == "coherent")
        return {Coherent{std::nullopt, nbar}, std::nullopt};
    if (kind == "incoherent")
        return {Incoherent{std::nullopt, nbar}, std::nullopt};
    return {Thermal{std::nullopt, nbar, 0.0}, std::nullopt};
}

Outcome cpw_reference()
{
    const auto t0 = std::chrono::steady_clock::now();
    struct Row {
        const char* name;
        CPW geom;
        double want[7]; // C', v/c, eps_eff, L', C_eff, Z, Z_st
    };
    const Row rows[] = {
        {"2 half planes", cpw_models::half_planes(), {1.55e-10, 0.398, 6.3, 8.32e-7, 0.84e-10, 99.4, 73}},
        {"eps2=eps1", cpw_models::equal_dielectrics(), {1.54e-10, 0.409, 5.99, 4.54e-7, 1.47e-10, 55.6, 54.3}},
        {"full model", cpw_models::full(), {1.44e-10, 0.434, 5.30, 2.36e-7, 2.49e-10, 30.8, 40.5}},
    };
    const char* cols[] = {"C'", "v/c", "eps_eff", "L'", "C_eff", "Z", "Z_st"};
    std::string misses;
    double worst_ok = 0.0;
    for (const auto& r : rows) {
        const auto p = cpw_params(r.geom);
        const double got[] = {p.c_line, p.v / si::c0, p.eps_eff, p.l_line, p.c_eff, p.z, p.z_static};
        for (int k = 0; k < 7; ++k) {
            const double e = std::abs(got[k] - r.want[k]) / r.want[k];
            if (e > 0.01)
                misses += fmt::format(" {}:{} {:.1f}%", r.name, cols[k], 100 * e);
            else
                worst_ok = std::max(worst_ok, e);
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.pass = misses.empty() && secs < 1.0;
    o.detail = fmt::format("21 cells, worst passing cell {:.2f}%, {:.3f} s", 100 * worst_ok, secs);
    if (!misses.empty())
        o.detail += "; outside 1%:" + misses;
    return o;
}

ResonatorGeometry resonator(double ratio)
{
    return with_coupling_ratio({6.666e-3, 1.0, 1.6e-10, 1.2e8}, ratio);
}

Outcome cavity_unitarity()
{
    double worst = 0.0;
    for (double r : {0.005, 0.04, 20.0}) {
        const auto g = resonator(r);
        // Span the first three resonances; at ratio 20 the fundamental is
        // overdamped, so the bare positions n pi c/L set the span instead.
        const double top = 1.2 * std::max(resonances(g, 3).back().omega_n, 3.0 * si::pi * g.velocity_c / g.length_L);
        for (int i = 1; i <= 1000; ++i) {
            const auto s = bare_s_params(g, top * i / 1000.0);
            worst = std::max(worst, std::abs(std::norm(s.s21) + std::norm(s.s11) - 1.0));
        }
    }
    return {worst < 1e-12, fmt::format("max ||S21|^2+|S11|^2-1| = {:.2e} over 3 x 1000 points", worst)};
}

Outcome cavity_asymptotics()
{
    double worst_shift = 0.0, worst_width = 0.0;
    std::string where;
    for (double r : {0.001, 0.0025, 0.005, 0.01}) {
        const auto g = resonator(r);
        const auto modes = resonances(g, 4);
        for (int n = 1; n <= 4; ++n) {
            const auto a = small_c_asymptotics(g, n);
            const auto& m = modes[n - 1];
            const double es = std::abs(a.shift - (m.omega_n - a.omega_0)) / std::abs(m.omega_n - a.omega_0);
            const double ew = std::abs(a.gamma - m.gamma_n) / m.gamma_n;
            if (ew > worst_width)
                where = fmt::format("ratio {} n={}", r, n);
            worst_shift = std::max(worst_shift, es);
            worst_width = std::max(worst_width, ew);
        }
    }
    return {worst_shift < 0.05 && worst_width < 0.05,
            fmt::format("ratios 0.001..0.01, n=1..4: worst shift {:.2f}%, worst width {:.2f}% ({})", 100 * worst_shift,
                        100 * worst_width, where)};
}

struct Peak {
    double position;
    double weight;
    double width;
};

// Peaks of |S21| on a fine grid; each is fitted on the qubit response
// recovered from S21 (cavity background removed, cavity filter divided out)
// over +-4 nominal half widths.
std::vector<Peak> comb_peaks(const SystemParams& sys, const SignalState& sig, int count)
{
    const auto cav = sys.cavity();
    const auto& q = sys.qubits[0];
    std::vector<double> w, mag;
    for (double f = q.omega_q - 10 * MHz; f <= q.omega_q + 80 * MHz; f += 20 * kHz) {
        w.push_back(f);
        mag.push_back(std::abs(s21_probe(f, sys, sig)));
    }
    auto idx = local_maxima(mag);
    if (static_cast<int>(idx.size()) < count)
        return {};
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    const auto lines = comb_lines(sig, cav);
    std::vector<Peak> out;
    for (int n = 0; n < count; ++n) {
        const double centre = w[idx[n]];
        const double half = lines.at(n).width + q.gamma_prime();
        std::vector<double> x;
        std::vector<cplx> r;
        for (int i = -60; i <= 60; ++i) {
            const double wp = centre + half * i / 15.0;
            const auto parts = s21_probe_parts(wp, sys, sig);
            const cplx filter = cplx(0, -1) * sys.gamma_c / (2.0 * cplx(wp - cav.omega_c, 0.5 * sys.gamma_c));
            x.push_back(wp);
            r.push_back((parts.total - parts.cavity) / filter);
        }
        const auto fit = fit_lorentzian(x, r, 0, x.size());
        out.push_back({fit.pole.real(), std::abs(fit.residue) / q.chi, -fit.pole.imag()});
    }
    return out;
}

Outcome resolved_comb()
{
    const auto sys = reference_system(10 * MHz, 100 * kHz);
    const auto& q = sys.qubits[0];
    const double nb = 1.0;
    std::string detail;
    bool ok = true;

    double worst_spacing = 0.0, worst_coh = 0.0, worst_inc = 0.0, worst_th = 0.0;
    for (const char* kind : {"coherent", "incoherent", "thermal"}) {
        const auto peaks = comb_peaks(sys, signal(kind, nb), 4);
        if (peaks.size() != 4) {
            ok = false;
            detail += fmt::format(" {}: fewer than 4 peaks;", kind);
            continue;
        }
        for (int n = 0; n < 4; ++n) {
            if (n > 0)
                worst_spacing = std::max(worst_spacing,
                                         std::abs(peaks[n].position - peaks[n - 1].position - 20 * MHz) / (20 * MHz));
            const std::string k = kind;
            if (k == "coherent")
                worst_coh = std::max(worst_coh, rel_err(peaks[n].weight, std::exp(-nb) / std::tgamma(n + 1.0)));
            else if (k == "incoherent")
                worst_inc = std::max(worst_inc, rel_err(peaks[n].weight, std::pow(0.5, n + 1)));
            else
                worst_th = std::max(worst_th,
                                    rel_err(peaks[n].width, ((2 * nb + 1) * n + nb) * sys.gamma_c + q.gamma_prime()));
        }
    }
    ok = ok && worst_spacing < 0.005 && worst_coh < 0.05 && worst_inc < 0.05 && worst_th < 0.05;
    detail = fmt::format("spacing dev {:.3f}%, Poisson weights {:.2f}%, geometric weights {:.2f}%, thermal widths "
                         "{:.2f}%",
                         100 * worst_spacing, 100 * worst_coh, 100 * worst_inc, 100 * worst_th) +
             detail;
    return {ok, detail};
}

Outcome low_q()
{
    const auto sys = reference_system(100 * kHz, 500 * MHz);
    const auto& q = sys.qubits[0];
    const double half = 50.0 * std::max(q.chi, q.gamma_prime());
    double worst = 0.0;
    for (int i = 0; i < 2001; ++i) {
        const double wp = q.omega_q - half + 2.0 * half * i / 2000.0;
        worst = std::max(worst, rel_err(s21_probe(wp, sys, signal("thermal", 1.0)),
                                        s21_probe(wp, sys, signal("coherent", 1.0))));
    }
    return {worst < 1e-3, fmt::format("max |S21th - S21coh|/|S21coh| = {:.2e} (2001 points, tau_c -> 0)", worst)};
}

Outcome dual_path()
{
    Gen gen(20240601);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        // Around the resolved-comb regimes: chi 1-10 MHz, gamma_c 0.1-1 MHz.
        auto sys = reference_system(gen.log_uniform(1 * MHz, 10 * MHz), gen.log_uniform(100 * kHz, 1 * MHz));
        sys.qubits[0].gamma_phi = gen.uniform(0.0, 100 * kHz);
        const auto cav = sys.cavity();
        const auto& q = sys.qubits[0];
        const cplx beta = std::polar(std::sqrt(gen.uniform(0.05, 3.0)), gen.uniform(-M_PI, M_PI));
        const double om = cav.omega_c_star + gen.uniform(-1.0, 1.0) * sys.gamma_c;
        const double wp = q.omega_q + 2.0 * q.chi * gen.uniform(-2.0, 8.0);
        worst = std::max(worst, rel_err(qubit_response_coherent_hyp(wp, q, cav, beta, om),
                                        qubit_response_coherent(wp, q, cav, beta, om)));
    }
    return {worst < 1e-10, fmt::format("500 random points, max relative difference {:.2e}", worst)};
}

Outcome oracle_equivalence()
{
    const auto sys = reference_system(10 * MHz, 100 * kHz);
    const auto cav = sys.cavity();
    const auto& q = sys.qubits[0];
    const oracle::FockOperatorSpace sp(40, true), sp2(80, true);
    double worst = 0.0, trunc = 0.0, resid = 0.0;
    for (double nb : {0.0, 1.0, 2.0}) {
        const cplx beta = std::sqrt(nb);
        const auto m = oracle::build_lindblad_model(sp, sys, beta, cav.omega_c_star);
        const auto m2 = oracle::build_lindblad_model(sp2, sys, beta, cav.omega_c_star);
        for (int i = 0; i < 200; ++i) {
            const double wp = q.omega_q + 2.0 * q.chi * (-1.0 + 7.0 * i / 199.0);
            const auto r = oracle::steady_response(m, sp, wp);
            const auto r2 = oracle::steady_response(m2, sp2, wp);
            worst = std::max(worst, rel_err(r.sigma_minus, qubit_response_coherent(wp, q, cav, beta, cav.omega_c_star)));
            trunc = std::max(trunc, rel_err(r2.sigma_minus, r.sigma_minus));
            resid = std::max(resid, r.residual);
        }
    }
    return {worst < 1e-6 && trunc < 1e-9,
            fmt::format("3 x 200 points: max deviation {:.2e}, n_fock 40->80 change {:.2e}, residual {:.1e}", worst,
                        trunc, resid)};
}

Outcome artificial_atom()
{
    Gen gen(7);
    bool identity = true;
    for (int i = 0; i < 1000; ++i) {
        AtomParams p;
        p.gamma1 = gen.log_uniform(1e3, 1e9);
        p.gamma_phi = gen.uniform(0.0, 1.0) < 0.3 ? 0.0 : gen.log_uniform(1e2, 1e9);
        p.delta_omega = gen.uniform(-50.0, 50.0) * p.gamma1;
        p.rabi = gen.disk(10.0 * p.gamma1);
        const auto s = atom_s_params(p);
        identity = identity && s.s21 == 1.0 + s.s11;
    }
    double worst_u = 0.0;
    for (int i = -500; i <= 500; ++i) {
        AtomParams p;
        p.gamma1 = 2.0 * MHz;
        p.delta_omega = 0.1 * i * p.gamma1;
        const auto s = atom_s_params(p);
        worst_u = std::max(worst_u, std::abs(std::norm(s.s11) + std::norm(s.s21) - 1.0));
    }
    AtomParams res;
    res.gamma1 = 2.0 * MHz;
    const double ext = std::abs(atom_s_params(res).s21);
    return {identity && worst_u < 1e-12 && ext == 0.0,
            fmt::format("S21 == 1+S11 on 1000 draws: {}; unitarity defect {:.1e}; |S21(0)| = {:.1e}",
                        identity ? "yes" : "no", worst_u, ext)};
}

double agm(double a, double b)
{
    for (int i = 0; i < 100 && std::abs(a - b) > 1e-17 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return a;
}

Outcome special_functions()
{
    using namespace specfun;
    Gen gen(99);
    double kummer_en = 0.0;
    for (int n = 1; n <= 6; ++n)
        for (double re : {0.1, 0.5, 1.0, 2.5, 6.0})
            for (double im : {-4.0, -1.0, 0.0, 0.7, 3.0}) {
                const cplx y(re, im);
                const cplx lhs = std::exp(y) * expint_en(n, y);
                const cplx rhs = std::pow(y, n - 1) * kummer_u(double(n), double(n), y);
                kummer_en = std::max(kummer_en, rel_err(rhs, lhs));
            }
    double transform = 0.0;
    for (int i = 0; i < 100; ++i) {
        const cplx a = gen.box(-3, 3, -2, 2), b = gen.box(0.2, 4, -2, 2), z = gen.disk(10.0);
        transform = std::max(transform, rel_err(std::exp(z) * hyp1f1(b - a, b, -z), hyp1f1(a, b, z)));
    }
    double lambert = 0.0;
    for (int i = 0; i < 300; ++i) {
        const cplx z = gen.disk(1.0) * std::pow(10.0, gen.uniform(-3, 3));
        for (int k = -2; k <= 2; ++k) {
            const cplx w = lambert_w(k, z);
            lambert = std::max(lambert, std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z)));
        }
    }
    double ell = 0.0;
    for (int i = 0; i <= 99; ++i) {
        const double k = 0.01 * i;
        const double want = M_PI / (2.0 * agm(1.0, std::sqrt(1.0 - k * k)));
        ell = std::max(ell, std::abs(elliptic_k(k) - want) / want);
    }
    const bool ok = kummer_en < 1e-10 && transform < 1e-10 && lambert <= 1e-12 && ell < 1e-13;
    return {ok, fmt::format("e^y E_n = y^(n-1) U: {:.1e}; Kummer transform: {:.1e}; Lambert residual: {:.1e}; "
                            "K vs AGM: {:.1e}",
                            kummer_en, transform, lambert, ell)};
}

Outcome vacuum_coincidence()
{
    const auto sys = reference_system(10 * MHz, 100 * kHz);
    const auto cav = sys.cavity();
    const auto& q = sys.qubits[0];
    const double nb = 1e-6;
    double worst = 0.0;
    for (int i = -100; i <= 100; ++i) {
        const double wp = q.omega_q + 0.05 * i * MHz;
        const cplx c = qubit_response(wp, q, cav, signal("coherent", nb));
        const cplx in = qubit_response(wp, q, cav, signal("incoherent", nb));
        const cplx th = qubit_response(wp, q, cav, signal("thermal", nb));
        worst = std::max({worst, rel_err(in, c), rel_err(th, c), rel_err(th, in)});
    }
    return {worst < 1e-4, fmt::format("nbar = 1e-6, 201 points: max pairwise difference {:.2e}", worst)};
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"CPW reference values", cpw_reference},
        {"cavity unitarity", cavity_unitarity},
        {"cavity asymptotics", cavity_asymptotics},
        {"resolved comb", resolved_comb},
        {"low-Q indistinguishability", low_q},
        {"dual-path identity", dual_path},
        {"oracle equivalence", oracle_equivalence},
        {"artificial atom", artificial_atom},
        {"special-function identities", special_functions},
        {"vacuum coincidence", vacuum_coincidence},
    };
    int failures = 0, id = 0;
    for (const auto& [name, run] : criteria) {
        ++id;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        fmt::print("{} {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", id, name, o.detail);
        std::fflush(stdout);
    }
    return failures;
}
