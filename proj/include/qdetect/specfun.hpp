#pragma once

#include <complex>

namespace qdetect::specfun {

using cplx = std::complex<double>;

// Branch k of the Lambert W function, w e^w = z. Branch 0 is real on
// [-1/e, inf), branch -1 is real on [-1/e, 0). On the negative real axis the
// value is continuous from above (Im z = +0).
cplx lambert_w(int branch, cplx z);

// Same function, but the argument is passed as its principal logarithm
// (Im in (-pi, pi]). Lets callers evaluate W(lambda e^lambda) for lambda far
// beyond the double range of e^lambda.
cplx lambert_w_log(int branch, cplx log_z);

// Complete elliptic integral of the first kind, modulus convention:
// K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t), 0 <= k < 1.
double elliptic_k(double k);

// K(k) given the complementary modulus k' = sqrt(1 - k^2). Accurate when k
// itself rounds to 1; switches to log(4/k') below k'^2 = 1e-12.
double elliptic_k_from_complement(double kp);

// Same, with log(k') supplied instead of k' (k' may underflow).
double elliptic_k_from_log_complement(double log_kp);

// Confluent hypergeometric 1F1(a; b; z).
cplx hyp1f1(cplx a, cplx b, cplx z);

// Tricomi U(a, b, z), principal branch, cut along the negative real axis.
cplx kummer_u(cplx a, cplx b, cplx z);

// Generalized exponential integral E_n(z) = int_1^inf e^{-zt} t^{-n} dt,
// analytically continued; cut along the negative real axis.
cplx expint_en(int n, cplx z);

// e^z E_n(z) without the overflow/underflow of the two factors.
cplx expint_en_scaled(int n, cplx z);

// Laguerre polynomial L_n^{(alpha)}(x) by the three-term recurrence.
cplx laguerre(int n, cplx x, double alpha = 0.0);

// log Gamma(z) for complex z (Lanczos, reflection for Re z < 1/2).
// Imaginary part is not reduced to (-pi, pi].
cplx log_gamma(cplx z);

} // namespace qdetect::specfun
