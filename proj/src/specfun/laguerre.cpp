#include "qdetect/specfun.hpp"

#include "qdetect/error.hpp"

namespace qdetect::specfun {

cplx laguerre(int n, cplx x, double alpha)
{
    if (n < 0)
        throw DomainError("laguerre: negative degree");
    cplx prev = 1.0;
    if (n == 0)
        return prev;
    cplx cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const cplx next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / double(k + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace qdetect::specfun
