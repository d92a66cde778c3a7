#pragma once

#include "qdetect/detector.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

// Brute-force checks of the analytic responses in a truncated Fock space.
namespace qdetect::oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Cavity operators truncated at n_fock levels, optionally tensored with a
// qubit (index = 2 k + s, s = 0 ground, 1 excited). Immutable once built.
class FockOperatorSpace {
public:
    explicit FockOperatorSpace(int n_fock, bool with_qubit = false);

    int n_fock() const { return n_fock_; }
    bool has_qubit() const { return with_qubit_; }
    int dim() const { return with_qubit_ ? 2 * n_fock_ : n_fock_; }

    const Mat& a() const { return a_; }
    const Mat& adag() const { return adag_; }
    const Mat& number() const { return num_; }
    const Mat& identity() const { return id_; }
    // Qubit operators; throw if the space has no qubit factor.
    const Mat& sigma_minus() const;
    const Mat& sigma_plus() const;
    const Mat& sigma_z() const;

    // Basis index of |k, s>.
    int index(int k, int s = 0) const { return with_qubit_ ? 2 * k + s : k; }

private:
    int n_fock_;
    bool with_qubit_;
    Mat a_, adag_, num_, id_, sm_, sp_, sz_;
};

// <0| (w0 - w a^dag a - b a^dag - conj(b) a)^{-1} |0> by a dense solve on a
// cavity-only space.
std::complex<double> propagator_vacuum_element(const FockOperatorSpace& space, std::complex<double> w0,
                                               std::complex<double> w, std::complex<double> b);

// Displaced-frame model for one qubit, in the frame rotating at the signal
// frequency: H = -(delta/2) sz + chi (a^dag + beta*)(a + beta)(sz + 1)
// + (omega_c* - omega) a^dag a, delta = omega - omega_j, collapse operators
// sqrt(gamma_c) a, sqrt(Gamma) s-, sqrt(2 Gamma_phi) s+ s-. The sigma_x drive
// term is dropped, as in the analytic treatment. v_plus is the e^{-i nu t}
// part of the probe coupling for Omega_p = 2: a^dag + (g/Delta) s+.
struct LindbladModel {
    Mat h;
    std::vector<Mat> collapse;
    Mat v_plus;
    Mat sigma_minus;
    Mat a;
    Mat rho0;   // ground_state() of this model
    Mat h_eff;  // h - (i/2) sum C^dag C
    Mat source; // i [v_plus, rho0]
    double g = 0.0;
    double signal_omega = 0.0;
};

LindbladModel build_lindblad_model(const FockOperatorSpace& space, const SystemParams& sys, std::complex<double> beta,
                                   double signal_omega);

// L(rho) = -i[H, rho] + sum C rho C^dag - {C^dag C, rho}/2.
Mat lindblad_apply(const LindbladModel& m, const Mat& rho);

// Zeroth-order state: the joint kernel of a and s- (vacuum, ground qubit),
// found by SVD. Throws if it is not stationary under the model.
Mat ground_state(const LindbladModel& m, const FockOperatorSpace& space);

// Steady state from the null space of the full superoperator. Only for small
// truncations (dim <= 32).
Mat dense_steady_state(const LindbladModel& m);

// First-order response at probe frequency omega_p, both normalized by
// Omega_p/2: sigma_minus is g<s->', comparable to qubit_response_*, and
// a_expect is <a>'. residual is the relative residual of the first-order
// equation under the full Lindblad operator.
struct SteadyResponse {
    double omega_p = 0.0;
    std::complex<double> sigma_minus;
    std::complex<double> a_expect;
    double residual = 0.0;
};

SteadyResponse steady_response(const LindbladModel& m, const FockOperatorSpace& space, double omega_p);

// Convenience: one qubit, vacuum or coherent signal.
SteadyResponse lindblad_steady_response(const SystemParams& sys, const SignalState& sig, double omega_p, int n_fock);

} // namespace qdetect::oracle
