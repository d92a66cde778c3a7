#pragma once

#include "qdetect/detector.hpp"

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qdetect::app {

// Evenly spaced probe grid in Hz, both ends included.
struct Grid {
    double start_hz = 0.0;
    double stop_hz = 0.0;
    int points = 0;

    std::vector<double> hz() const;
    std::vector<double> omega() const; // 2 pi * hz()
};

// omega_j +- 50 max(chi, Gamma') over all qubits, 2001 points; for an empty
// qubit list, omega_c +- 50 gamma_c.
Grid default_grid(const SystemParams& sys);

int default_threads();

// f(i) for i in [0, n) on up to `threads` workers. Results land by index, so
// the output does not depend on scheduling. If any call throws, the
// exception of the lowest failing index is rethrown.
template <class F>
auto ordered_map(std::size_t n, F f, int threads) -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers = std::clamp<std::size_t>(threads > 0 ? threads : 1, 1, std::max<std::size_t>(n, 1));
    auto work = [&](std::size_t w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

Spectrum compute_spectrum(const SystemParams& sys, const SignalState& sig, const std::vector<double>& omega_p,
                          bool components, int threads);

Spectrum compute_comb_spectrum(const SystemParams& sys, const SignalState& sig, const std::vector<double>& omega_p,
                               int threads);

} // namespace qdetect::app
