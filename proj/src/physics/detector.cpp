#include "qdetect/detector.hpp"

#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"
#include "qdetect/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qdetect {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr int kSeriesCap = 5000;

// Stops once three consecutive terms are each below 1e-12 of the running sum.
class Series {
public:
    bool add(cplx t)
    {
        acc_ += t;
        quiet_ = std::abs(t) < 1e-12 * std::abs(acc_) ? quiet_ + 1 : 0;
        return quiet_ >= 3;
    }
    cplx value() const { return acc_; }

private:
    cplx acc_{};
    int quiet_ = 0;
};

std::string describe(const char* what, double nbar, double extra_value, const char* extra_name)
{
    std::ostringstream os;
    os << what << ": series did not converge in " << kSeriesCap << " terms (nbar = " << nbar << ", " << extra_name
       << " = " << extra_value << ")";
    return os.str();
}

void check_qubit(const QubitParams& q)
{
    if (!(q.chi != 0.0 && std::isfinite(q.chi)))
        throw ParameterError("qubit: chi must be finite and non-zero");
    if (!(q.gamma >= 0.0 && q.gamma_phi >= 0.0))
        throw ParameterError("qubit: gamma and gamma_phi must be non-negative");
}

void check_cavity(const CavityParams& c)
{
    if (!(c.gamma_c > 0.0))
        throw ParameterError("cavity: gamma_c must be positive");
}

// e^x E_{n+1}(x) continued m times around the origin (m = +-1 adds
// -2 pi i m (-x)^n / n! e^x).
cplx scaled_en_sheet(int n, cplx x, int m)
{
    cplx v = specfun::expint_en_scaled(n + 1, x);
    if (m != 0) {
        const cplx log_poly = n == 0 ? cplx(0.0) : double(n) * std::log(-x);
        v += -2.0 * si::pi * I * double(m) * std::exp(x + log_poly - std::lgamma(n + 1.0));
    }
    return v;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Flux and on-resonance population from the (flux | nbar) pair.
double resonant_flux(const std::optional<double>& flux, const std::optional<double>& nbar, double gamma_c,
                     const char* who)
{
    if (flux.has_value() == nbar.has_value())
        throw ParameterError(std::string(who) + ": give exactly one of flux and nbar");
    const double j = flux ? *flux : 0.5 * *nbar * gamma_c;
    if (!(j >= 0.0 && std::isfinite(j)))
        throw ParameterError(std::string(who) + ": flux / nbar must be finite and non-negative");
    return j;
}

} // namespace

CavityParams SystemParams::cavity() const
{
    CavityParams c{omega_c, gamma_c, omega_c};
    for (const auto& q : qubits)
        c.omega_c_star -= q.chi;
    return c;
}

std::string SignalState::name() const
{
    return std::visit(overloaded{[](const Vacuum&) { return "vacuum"; }, [](const Coherent&) { return "coherent"; },
                                 [](const Incoherent&) { return "incoherent"; },
                                 [](const Thermal&) { return "thermal"; }},
                      kind);
}

DerivedQubit derive_qubit(const QubitPhysical& p, const WaveguideParams& line, const ResonatorGeometry& cav,
                          std::optional<double> omega_c)
{
    if (!(p.e_j > 0 && p.c_j > 0 && p.f_j >= 0))
        throw ParameterError("derive_qubit: E_J and C_j must be positive, f_j non-negative");
    if (!(line.v > 0 && line.c_line > 0))
        throw ParameterError("derive_qubit: waveguide velocity and C' must be positive");
    const double e = si::e_charge, hb = si::hbar;
    DerivedQubit d;
    const double omega_j = std::sqrt(4.0 * e * e * p.e_j / p.c_j) / hb - e * e / (2.0 * hb * p.c_j);
    if (!(omega_j > 0.0))
        throw ParameterError("derive_qubit: charging energy exceeds the Josephson term");
    d.omega_c = omega_c ? *omega_c : resonances(cav, 1).front().omega_n;
    if (omega_j == d.omega_c)
        throw DomainError("derive_qubit: omega_j = omega_c, the dispersive shift diverges");
    d.kappa = 2.0 * e / hb * p.f_j * std::sqrt(p.e_j * omega_j / (2.0 * line.v * line.c_line));
    d.g = d.kappa * std::cos(si::pi * p.l_j / cav.length_L) / std::sqrt(si::pi);
    d.qubit.omega_q = omega_j;
    d.qubit.chi = d.g * d.g / (omega_j - d.omega_c);
    d.qubit.gamma = d.kappa * d.kappa / omega_j;
    d.qubit.physical = p;
    d.dispersive = std::abs(omega_j - d.omega_c) >= 10.0 * std::abs(d.g);

    const double e_c = e * e / (2.0 * p.c_j);
    if (e_c / p.e_j > 0.1)
        d.warnings.push_back("E_C/E_J = " + std::to_string(e_c / p.e_j) + " is outside the transmon regime");
    if (!d.dispersive)
        d.warnings.push_back("|omega_j - omega_c| < 10 g: dispersive approximation not valid");
    return d;
}

PhotonNumber cavity_photon_number(const SignalState& sig, const CavityParams& cav)
{
    check_cavity(cav);
    const double g2 = 0.5 * cav.gamma_c;
    const double delta = sig.omega(cav) - cav.omega_c_star;
    auto lorentz = [&](double j) { return g2 * j / (delta * delta + g2 * g2); };

    return std::visit(
        overloaded{
            [](const Vacuum&) { return PhotonNumber{0.0, 0.0, std::nullopt}; },
            [&](const Coherent& c) {
                const double j = resonant_flux(c.flux, c.nbar, cav.gamma_c, "coherent");
                const double n0 = j / g2;
                // Amplitude of (gamma_c/2)/(gamma_c/2 - i delta): real at zero detuning.
                const cplx beta = std::sqrt(n0) * g2 / cplx(g2, -delta);
                return PhotonNumber{lorentz(j), j, beta};
            },
            [&](const Incoherent& c) {
                const double j = resonant_flux(c.flux, c.nbar, cav.gamma_c, "incoherent");
                return PhotonNumber{lorentz(j), j, std::nullopt};
            },
            [&](const Thermal& t) {
                if (!(t.tau_c >= 0.0 && std::isfinite(t.tau_c)))
                    throw ParameterError("thermal: tau_c must be non-negative");
                if (t.flux.has_value() == t.nbar.has_value())
                    throw ParameterError("thermal: give exactly one of flux and nbar");
                if (t.tau_c == 0.0) {
                    if (!t.nbar)
                        throw ParameterError("thermal: tau_c = 0 needs nbar instead of a flux");
                    if (!(*t.nbar >= 0.0))
                        throw ParameterError("thermal: nbar must be non-negative");
                    return PhotonNumber{*t.nbar, 0.0, std::nullopt};
                }
                const double j = t.flux ? *t.flux : *t.nbar / t.tau_c;
                if (!(j >= 0.0 && std::isfinite(j)))
                    throw ParameterError("thermal: flux / nbar must be finite and non-negative");
                return PhotonNumber{t.tau_c * j, j, std::nullopt};
            }},
        sig.kind);
}

cplx qubit_response_vacuum(double omega_p, const QubitParams& q)
{
    check_qubit(q);
    return q.chi / cplx(omega_p - q.omega_q, q.gamma_prime());
}

cplx qubit_response_coherent(double omega_p, const QubitParams& q, const CavityParams& cav, cplx beta,
                             double signal_omega)
{
    check_qubit(q);
    check_cavity(cav);
    const double nb = std::norm(beta);
    const double chi = q.chi;
    const cplx w(cav.omega_c_star + 2.0 * chi - signal_omega, -0.5 * cav.gamma_c);
    const cplx w0(omega_p - q.omega_q - 2.0 * chi * nb, q.gamma_prime());
    if (nb == 0.0)
        return chi / w0;
    const cplx b2_over_w = 4.0 * chi * chi * nb / w;
    const cplx big_w = b2_over_w / w;
    const cplx log_w = std::log(big_w);
    const double abs_w = std::abs(big_w);

    // chi e^{-W} sum W^n/n! / (w0 + |b|^2/w - n w); weights in log form so a
    // large |W| does not overflow.
    Series s;
    for (int n = 0; n < kSeriesCap; ++n) {
        const cplx weight = std::exp(double(n) * log_w - std::lgamma(n + 1.0) - big_w);
        if (s.add(weight / (w0 + b2_over_w - double(n) * w)) && n > abs_w)
            return chi * s.value();
    }
    throw ConvergenceError(describe("coherent response", nb, abs_w, "|W|"));
}

cplx qubit_response_coherent_hyp(double omega_p, const QubitParams& q, const CavityParams& cav, cplx beta,
                                 double signal_omega)
{
    check_qubit(q);
    check_cavity(cav);
    const double nb = std::norm(beta);
    const double chi = q.chi;
    const cplx w(cav.omega_c_star + 2.0 * chi - signal_omega, -0.5 * cav.gamma_c);
    const cplx w0(omega_p - q.omega_q - 2.0 * chi * nb, q.gamma_prime());
    const cplx z = 4.0 * chi * chi * nb / (w * w);
    const cplx d = w0 + z * w;
    const cplx a = -d / w;
    return chi * std::exp(-z) / d * specfun::hyp1f1(a, a + 1.0, z);
}

cplx qubit_response_incoherent(double omega_p, const QubitParams& q, const CavityParams& cav, double nbar,
                               double signal_omega)
{
    check_qubit(q);
    check_cavity(cav);
    if (!(nbar >= 0.0))
        throw ParameterError("incoherent: nbar must be non-negative");
    if (nbar == 0.0)
        return qubit_response_vacuum(omega_p, q);
    const double chi = q.chi;
    const cplx w(cav.omega_c_star + 2.0 * chi - signal_omega, -0.5 * cav.gamma_c);
    const cplx q4 = 4.0 * chi * chi / (w * w);
    const cplx c = 1.0 / nbar + q4;
    const cplx b = -(2.0 * chi - 4.0 * chi * chi / w);
    const cplx ratio = q4 / c;
    const cplx a0(omega_p - q.omega_q, q.gamma_prime());

    // Gaussian P-average of the coherent sum term by term:
    // int e^{-c u} u^n / (A_n + B u) du -> e^{x} E_{n+1}(x) / (B c^n), x = c A_n / B.
    // x is followed continuously from arg c = 0; it changes sheet when
    // arg(A_n/B) + arg c leaves (-pi, pi].
    Series s;
    cplx power = 1.0;
    for (int n = 0; n < kSeriesCap; ++n) {
        const cplx a_n = a0 - double(n) * w;
        const cplx sn = a_n / b;
        const double phi = std::arg(sn) + std::arg(c);
        const int m = phi > si::pi ? 1 : (phi < -si::pi ? -1 : 0);
        const cplx term = power * scaled_en_sheet(n, c * sn, m) / (nbar * b);
        if (s.add(term))
            return chi * s.value();
        power *= ratio;
    }
    throw ConvergenceError(describe("incoherent response", nbar, std::abs(ratio), "|q/c|"));
}

cplx qubit_response_thermal(double omega_p, const QubitParams& q, const CavityParams& cav, double nbar,
                            double tau_c, double signal_omega)
{
    check_qubit(q);
    check_cavity(cav);
    if (!(nbar >= 0.0 && tau_c >= 0.0))
        throw ParameterError("thermal: nbar and tau_c must be non-negative");
    const double chi = q.chi;
    const double gc = cav.gamma_c;
    const cplx nbp = nbar / (1.0 + I * tau_c * (omega_p - signal_omega));

    cplx s = std::sqrt(gc * gc / 4.0 + gc * (2.0 * nbp + 1.0) * I * chi - chi * chi);
    if (s.real() < 0.0)
        s = -s;
    const cplx v = 1.0 + (I * chi - 0.5 * gc - s) / (gc * (1.0 + nbp));
    const cplx x = gc * (v - nbar / (1.0 + nbar)) * (1.0 + nbp);
    const cplx up = 0.5 * gc + s - I * chi;
    const cplx r = (0.5 * gc - s - I * chi) / up * (x / (x + 2.0 * s));

    // Laguerre-mode sum over the poles omega_j - i Gamma' - i(2n+1)S - chi + i gamma_c/2.
    // The (1+nbar_p)/(1+nbar) factor restores the source normalization.
    Series sum;
    cplx f = 1.0 / (up * (x + 2.0 * s));
    for (int n = 0; n < kSeriesCap; ++n) {
        const cplx pole = q.omega_q - I * q.gamma_prime() - I * (2.0 * n + 1.0) * s - chi + 0.5 * I * gc;
        if (sum.add(2.0 * s * gc / (omega_p - pole) * f))
            return chi * (1.0 + nbp) / (1.0 + nbar) * sum.value();
        f *= r;
    }
    throw ConvergenceError(describe("thermal response", nbar, std::abs(r), "|ratio|"));
}

cplx qubit_response(double omega_p, const QubitParams& q, const CavityParams& cav, const SignalState& sig)
{
    const double om = sig.omega(cav);
    return std::visit(overloaded{
                          [&](const Vacuum&) { return qubit_response_vacuum(omega_p, q); },
                          [&](const Coherent&) {
                              const auto pn = cavity_photon_number(sig, cav);
                              return qubit_response_coherent(omega_p, q, cav, *pn.beta, om);
                          },
                          [&](const Incoherent&) {
                              const auto pn = cavity_photon_number(sig, cav);
                              return qubit_response_incoherent(omega_p, q, cav, pn.nbar, om);
                          },
                          [&](const Thermal& t) {
                              const auto pn = cavity_photon_number(sig, cav);
                              return qubit_response_thermal(omega_p, q, cav, pn.nbar, t.tau_c, om);
                          }},
                      sig.kind);
}

S21Parts s21_probe_parts(double omega_p, const SystemParams& sys, const SignalState& sig)
{
    const CavityParams cav = sys.cavity();
    check_cavity(cav);
    const double g2 = 0.5 * cav.gamma_c;
    S21Parts out;
    out.cavity = -I * g2 / cplx(omega_p - cav.omega_c_star, g2) - I * g2 / cplx(omega_p + cav.omega_c_star, g2);
    out.total = out.cavity;
    out.qubit.reserve(sys.qubits.size());
    const cplx filt_p = -I * cav.gamma_c / cplx(omega_p - cav.omega_c, g2);
    const cplx filt_m = I * cav.gamma_c / cplx(omega_p + cav.omega_c, g2);
    for (const auto& q : sys.qubits) {
        // Counter-rotating partner from the response at -omega_p.
        const cplx r = qubit_response(omega_p, q, cav, sig);
        const cplx r_minus = -std::conj(qubit_response(-omega_p, q, cav, sig));
        const cplx t = 0.5 * (filt_p * r + filt_m * r_minus);
        out.qubit.push_back(t);
        out.total += t;
    }
    return out;
}

cplx s21_probe(double omega_p, const SystemParams& sys, const SignalState& sig)
{
    return s21_probe_parts(omega_p, sys, sig).total;
}

cplx s21_signal(double omega, const SystemParams& sys)
{
    const CavityParams cav = sys.cavity();
    check_cavity(cav);
    const double g2 = 0.5 * cav.gamma_c;
    return -I * g2 / cplx(omega - cav.omega_c_star, g2) - I * g2 / cplx(omega + cav.omega_c_star, g2);
}

std::vector<CombLine> comb_lines(const SignalState& sig, const CavityParams& cav)
{
    const double nb = cavity_photon_number(sig, cav).nbar;
    const double gc = cav.gamma_c;
    std::vector<CombLine> lines;
    if (std::holds_alternative<Vacuum>(sig.kind) || nb == 0.0) {
        lines.push_back({0, 1.0, 0.0});
        return lines;
    }
    const bool poisson = std::holds_alternative<Coherent>(sig.kind);
    const bool thermal = std::holds_alternative<Thermal>(sig.kind);
    double cum = 0.0;
    for (int n = 0; n < kSeriesCap && cum < 1.0 - 1e-10; ++n) {
        const double p = poisson ? std::exp(n * std::log(nb) - nb - std::lgamma(n + 1.0))
                                 : std::exp(n * std::log(nb) - (n + 1) * std::log1p(nb));
        double width;
        if (poisson)
            width = 0.5 * (n + nb) * gc;
        else if (thermal)
            width = ((2.0 * nb + 1.0) * n + nb) * gc;
        else
            width = 0.5 * n * gc;
        lines.push_back({n, p, width});
        cum += p;
    }
    return lines;
}

cplx comb_spectrum(double omega_p, const SystemParams& sys, const SignalState& sig)
{
    const CavityParams cav = sys.cavity();
    check_cavity(cav);
    const double gc = cav.gamma_c;
    cplx s = -I * gc / (2.0 * (omega_p - cav.omega_c));
    const auto lines = comb_lines(sig, cav);
    for (const auto& q : sys.qubits) {
        check_qubit(q);
        const cplx amp = -I * gc * q.chi / (2.0 * (q.omega_q - cav.omega_c));
        for (const auto& l : lines) {
            const cplx pole(q.omega_q + 2.0 * q.chi * l.n, -(l.width + q.gamma_prime()));
            s += l.weight * amp / (omega_p - pole);
        }
    }
    return s;
}

std::vector<double> figure_of_merit(const Spectrum& with_signal, const Spectrum& vacuum)
{
    if (with_signal.omega_p != vacuum.omega_p || with_signal.s21.size() != vacuum.s21.size())
        throw ParameterError("figure_of_merit: spectra are on different grids");
    std::vector<double> r(with_signal.s21.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = std::abs(with_signal.s21[i]) / std::abs(vacuum.s21[i]);
    return r;
}

std::vector<std::vector<double>> detuning_error(const SystemParams& sys, const SignalState& sig,
                                                const std::vector<double>& detunings,
                                                const std::vector<double>& omega_p)
{
    const CavityParams cav = sys.cavity();
    SignalState base = sig;
    base.signal_omega = cav.omega_c_star;
    std::vector<double> ref(omega_p.size());
    for (std::size_t i = 0; i < omega_p.size(); ++i)
        ref[i] = std::abs(s21_probe(omega_p[i], sys, base));

    std::vector<std::vector<double>> out;
    out.reserve(detunings.size());
    for (double d : detunings) {
        SignalState shifted = sig;
        shifted.signal_omega = cav.omega_c_star + d;
        std::vector<double> e(omega_p.size());
        for (std::size_t i = 0; i < omega_p.size(); ++i)
            e[i] = d == 0.0 ? 0.0 : std::abs(std::abs(s21_probe(omega_p[i], sys, shifted)) - ref[i]) / ref[i];
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<std::string> validity_warnings(const SystemParams& sys, const SignalState& sig)
{
    std::vector<std::string> w;
    const CavityParams cav = sys.cavity();
    for (std::size_t j = 0; j < sys.qubits.size(); ++j) {
        const auto& q = sys.qubits[j];
        if (cav.gamma_c > 0.1 * std::abs(q.chi))
            w.push_back("qubit " + std::to_string(j) + ": gamma_c is not small against chi, comb lines overlap");
    }
    if (const auto* t = std::get_if<Thermal>(&sig.kind)) {
        if (cav.gamma_c * t->tau_c > 0.1)
            w.push_back("thermal: gamma_c tau_c = " + std::to_string(cav.gamma_c * t->tau_c)
                        + " > 0.1, outside the short-coherence regime");
    }
    return w;
}

} // namespace qdetect
