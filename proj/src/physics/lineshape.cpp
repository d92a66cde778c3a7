#include "qdetect/lineshape.hpp"

#include "qdetect/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace qdetect {

LorentzFit fit_lorentzian(const std::vector<double>& omega, const std::vector<std::complex<double>>& f,
                          std::size_t first, std::size_t last)
{
    if (omega.size() != f.size() || last > omega.size() || first + 5 > last)
        throw ParameterError("fit_lorentzian: need at least 5 samples inside the grid");
    const std::size_t m = last - first;
    // Centre and scale the abscissa so the normal equations stay well conditioned.
    const double w_ref = 0.5 * (omega[first] + omega[last - 1]);
    const double scale = 0.5 * (omega[last - 1] - omega[first]);
    if (!(scale > 0.0))
        throw ParameterError("fit_lorentzian: window has zero width");

    Eigen::MatrixXcd a(m, 4);
    Eigen::VectorXcd rhs(m);
    double fmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = (omega[first + i] - w_ref) / scale;
        const auto fi = f[first + i];
        a(i, 0) = fi;
        a(i, 1) = 1.0;
        a(i, 2) = x;
        a(i, 3) = x * x;
        rhs(i) = fi * x;
        fmax = std::max(fmax, std::abs(fi));
    }
    // f = A/(x - p) + c0 + c1 x  <=>  f x = p f + K0 + K1 x + c1 x^2
    // with K1 = c0 - c1 p and K0 = A - c0 p.
    const Eigen::VectorXcd sol = a.colPivHouseholderQr().solve(rhs);
    const std::complex<double> p = sol(0), k0 = sol(1), k1 = sol(2), c1 = sol(3);
    const std::complex<double> c0 = k1 + c1 * p;

    LorentzFit fit;
    fit.pole = w_ref + scale * p;
    fit.residue = scale * (k0 + c0 * p);
    fit.background = c0;
    fit.slope = c1 / scale;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double w = omega[first + i];
        const auto model = fit.residue / (w - fit.pole) + fit.background + fit.slope * (w - w_ref);
        ss += std::norm(model - f[first + i]);
    }
    fit.rms_residual = fmax > 0.0 ? std::sqrt(ss / m) / fmax : 0.0;
    return fit;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1])
            idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
    return idx;
}

} // namespace qdetect
