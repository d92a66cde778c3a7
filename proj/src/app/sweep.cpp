#include "qdetect/app/sweep.hpp"

#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"

#include <cmath>
#include <limits>

namespace qdetect::app {

std::vector<double> Grid::hz() const
{
    if (points < 2)
        throw ConfigError("grid needs at least 2 points");
    if (!(stop_hz > start_hz))
        throw ConfigError("grid stop must exceed start");
    std::vector<double> f(points);
    const double step = (stop_hz - start_hz) / (points - 1);
    for (int i = 0; i < points; ++i)
        f[i] = start_hz + step * i;
    f.back() = stop_hz;
    return f;
}

std::vector<double> Grid::omega() const
{
    auto f = hz();
    for (auto& x : f)
        x *= si::two_pi;
    return f;
}

Grid default_grid(const SystemParams& sys)
{
    Grid g;
    g.points = 2001;
    if (sys.qubits.empty()) {
        g.start_hz = (sys.omega_c - 50.0 * sys.gamma_c) / si::two_pi;
        g.stop_hz = (sys.omega_c + 50.0 * sys.gamma_c) / si::two_pi;
        return g;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& q : sys.qubits) {
        const double half = 50.0 * std::max(std::abs(q.chi), q.gamma_prime());
        lo = std::min(lo, q.omega_q - half);
        hi = std::max(hi, q.omega_q + half);
    }
    g.start_hz = lo / si::two_pi;
    g.stop_hz = hi / si::two_pi;
    return g;
}

int default_threads()
{
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

Spectrum compute_spectrum(const SystemParams& sys, const SignalState& sig, const std::vector<double>& omega_p,
                          bool components, int threads)
{
    auto parts = ordered_map(
        omega_p.size(), [&](std::size_t i) { return s21_probe_parts(omega_p[i], sys, sig); }, threads);
    Spectrum sp;
    sp.omega_p = omega_p;
    sp.system = sys;
    sp.signal = sig;
    sp.s21.reserve(parts.size());
    for (const auto& p : parts)
        sp.s21.push_back(p.total);
    if (components) {
        sp.qubit.assign(sys.qubits.size(), {});
        for (const auto& p : parts) {
            sp.cavity.push_back(p.cavity);
            for (std::size_t j = 0; j < p.qubit.size(); ++j)
                sp.qubit[j].push_back(p.qubit[j]);
        }
    }
    return sp;
}

Spectrum compute_comb_spectrum(const SystemParams& sys, const SignalState& sig, const std::vector<double>& omega_p,
                               int threads)
{
    Spectrum sp;
    sp.omega_p = omega_p;
    sp.system = sys;
    sp.signal = sig;
    sp.s21 = ordered_map(
        omega_p.size(), [&](std::size_t i) { return comb_spectrum(omega_p[i], sys, sig); }, threads);
    return sp;
}

} // namespace qdetect::app
