#include "qdetect/specfun.hpp"

#include "qdetect/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qdetect::specfun {

namespace {

constexpr double kInvE = 0.36787944117144233; // 1/e
constexpr int kMaxIter = 100;

std::string fmt_c(cplx z)
{
    return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

// Series about the branch point in p = +-sqrt(2(ez+1)).
cplx branch_point_seed(cplx p)
{
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

cplx asymptotic_seed(cplx log_z, int k)
{
    const cplx l1 = log_z + cplx(0.0, 2.0 * std::numbers::pi * k);
    const cplx l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
}

cplx seed(int k, cplx z)
{
    const cplx p = std::sqrt(2.0 * (std::numbers::e * z + 1.0));
    const bool near_bp = std::abs(z + kInvE) < 0.3;
    const bool real_z = z.imag() == 0.0;

    if (k == 0) {
        if (near_bp)
            return branch_point_seed(p);
        if (std::abs(z) < 0.3)
            return z - z * z + 1.5 * z * z * z;
        if (real_z && z.real() > 0.0) {
            const double l = std::log1p(z.real());
            return l * (1.0 - std::log1p(l) / (2.0 + l));
        }
        return asymptotic_seed(std::log(z), 0);
    }
    if (k == -1) {
        if (near_bp && z.imag() >= 0.0)
            return branch_point_seed(-p);
        if (real_z && z.real() < 0.0 && z.real() > -kInvE) {
            const double l1 = std::log(-z.real());
            const double l2 = std::log(-l1);
            return l1 - l2 + l2 / l1;
        }
    }
    if (k == 1 && near_bp && z.imag() < 0.0)
        return branch_point_seed(-p);
    return asymptotic_seed(std::log(z), k);
}

} // namespace

cplx lambert_w(int branch, cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("lambert_w: non-finite argument");
    // Points on the negative real axis take the value from above the cut.
    if (z.imag() == 0.0)
        z = cplx(z.real(), 0.0);
    if (z == 0.0) {
        if (branch == 0)
            return 0.0;
        throw DomainError("lambert_w: W_k(0) is unbounded for k != 0");
    }
    if (z == cplx(-kInvE, 0.0) && (branch == 0 || branch == -1))
        return -1.0;

    cplx w = seed(branch, z);
    for (int it = 0; it < kMaxIter; ++it) {
        // Halley on f(w)/e^w = w - z e^{-w}.
        const cplx t = w - z * std::exp(-w);
        const cplx wp1 = w + 1.0;
        const cplx step = t / (wp1 - (w + 2.0) * t / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 4e-16 * std::abs(w) || std::abs(step) < 1e-300)
            break;
    }
    const double resid = std::abs(w * std::exp(w) - z);
    const double scale = std::max(1.0, std::abs(z));
    if (!(resid <= 1e-12 * scale))
        throw ConvergenceError("lambert_w: branch " + std::to_string(branch) + " at z=" + fmt_c(z)
                               + " stopped with residual " + std::to_string(resid / scale));
    return w;
}

cplx lambert_w_log(int branch, cplx log_z)
{
    if (!std::isfinite(log_z.real()) || !std::isfinite(log_z.imag()))
        throw DomainError("lambert_w_log: non-finite argument");
    // Moderate arguments go through the direct route.
    if (log_z.real() < 600.0)
        return lambert_w(branch, std::exp(log_z));

    // w + log w = log z + 2 pi i k, Newton from the asymptotic seed.
    const cplx target = log_z + cplx(0.0, 2.0 * std::numbers::pi * branch);
    cplx w = asymptotic_seed(log_z, branch);
    double resid = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
        const cplx g = w + std::log(w) - target;
        const cplx step = g / (1.0 + 1.0 / w);
        w -= step;
        resid = std::abs(g);
        if (std::abs(step) <= 4e-16 * std::abs(w))
            break;
    }
    resid = std::abs(w + std::log(w) - target);
    if (!(resid <= 1e-12 * std::max(1.0, std::abs(target))))
        throw ConvergenceError("lambert_w_log: branch " + std::to_string(branch)
                               + " stopped with residual " + std::to_string(resid));
    return w;
}

} // namespace qdetect::specfun
