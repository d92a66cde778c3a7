#include "qdetect/oracle.hpp"

#include "qdetect/error.hpp"

#include <cmath>
#include <string>

namespace qdetect::oracle {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

Mat kron(const Mat& x, const Mat& y)
{
    Mat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
}

// Solve m x = rhs, refusing numerically singular systems.
Vec solve_checked(const Mat& m, const Vec& rhs, const char* who)
{
    Eigen::PartialPivLU<Mat> lu(m);
    // rcond() alone misses exactly zero pivots, so check the U diagonal too.
    const auto piv = lu.matrixLU().diagonal().cwiseAbs();
    if (!(lu.rcond() > 1e-14) || !(piv.minCoeff() > 1e-14 * piv.maxCoeff()))
        throw DomainError(std::string(who) + ": matrix is singular at this truncation (probe on an undamped pole?)");
    Vec x = lu.solve(rhs);
    if (!x.allFinite())
        throw ConvergenceError(std::string(who) + ": solve produced non-finite values");
    return x;
}

} // namespace

FockOperatorSpace::FockOperatorSpace(int n_fock, bool with_qubit) : n_fock_(n_fock), with_qubit_(with_qubit)
{
    if (n_fock < 4)
        throw ParameterError("FockOperatorSpace: n_fock must be >= 4");
    Mat a = Mat::Zero(n_fock, n_fock);
    Mat num = Mat::Zero(n_fock, n_fock);
    for (int k = 1; k < n_fock; ++k) {
        a(k - 1, k) = std::sqrt(double(k));
        num(k, k) = double(k);
    }
    if (!with_qubit) {
        a_ = a;
        num_ = num;
    } else {
        Mat sm = Mat::Zero(2, 2);
        sm(0, 1) = 1.0;
        Mat sz = Mat::Zero(2, 2);
        sz(0, 0) = -1.0;
        sz(1, 1) = 1.0;
        const Mat i2 = Mat::Identity(2, 2), in = Mat::Identity(n_fock, n_fock);
        a_ = kron(a, i2);
        sm_ = kron(in, sm);
        sp_ = sm_.adjoint();
        sz_ = kron(in, sz);
        num_ = kron(num, i2);
    }
    adag_ = a_.adjoint();
    id_ = Mat::Identity(dim(), dim());
}

const Mat& FockOperatorSpace::sigma_minus() const
{
    if (!with_qubit_)
        throw ParameterError("FockOperatorSpace: no qubit factor");
    return sm_;
}

const Mat& FockOperatorSpace::sigma_plus() const
{
    if (!with_qubit_)
        throw ParameterError("FockOperatorSpace: no qubit factor");
    return sp_;
}

const Mat& FockOperatorSpace::sigma_z() const
{
    if (!with_qubit_)
        throw ParameterError("FockOperatorSpace: no qubit factor");
    return sz_;
}

cplx propagator_vacuum_element(const FockOperatorSpace& space, cplx w0, cplx w, cplx b)
{
    if (space.has_qubit())
        throw ParameterError("propagator_vacuum_element: needs a cavity-only space");
    const Mat m = w0 * space.identity() - w * space.number() - b * space.adag() - std::conj(b) * space.a();
    Vec e0 = Vec::Zero(space.dim());
    e0(0) = 1.0;
    return solve_checked(m, e0, "propagator_vacuum_element")(0);
}

LindbladModel build_lindblad_model(const FockOperatorSpace& space, const SystemParams& sys, cplx beta,
                                   double signal_omega)
{
    if (!space.has_qubit())
        throw ParameterError("lindblad model: needs a space with a qubit factor");
    if (sys.qubits.size() != 1)
        throw ParameterError("lindblad model: exactly one qubit supported");
    if (!(sys.gamma_c > 0.0))
        throw ParameterError("lindblad model: gamma_c must be positive");
    const auto& q = sys.qubits[0];
    const CavityParams cav = sys.cavity();
    const double detuning = q.omega_q - cav.omega_c;
    const double g2 = q.chi * detuning;
    if (!(g2 >= 0.0))
        throw ParameterError("lindblad model: chi and omega_j - omega_c must have the same sign");

    LindbladModel m;
    m.g = std::sqrt(g2);
    m.signal_omega = signal_omega;
    const Mat& a = space.a();
    const Mat& ad = space.adag();
    const Mat& id = space.identity();
    const Mat& sz = space.sigma_z();
    const double delta = signal_omega - q.omega_q;
    const Mat shifted = (ad + std::conj(beta) * id) * (a + beta * id);
    m.h = -0.5 * delta * sz + q.chi * shifted * (sz + id) + (cav.omega_c_star - signal_omega) * space.number();

    m.collapse.push_back(std::sqrt(sys.gamma_c) * a);
    if (q.gamma > 0.0)
        m.collapse.push_back(std::sqrt(q.gamma) * space.sigma_minus());
    if (q.gamma_phi > 0.0)
        m.collapse.push_back(std::sqrt(2.0 * q.gamma_phi) * space.sigma_plus() * space.sigma_minus());

    const double ratio = detuning != 0.0 ? m.g / detuning : 0.0;
    m.v_plus = ad + ratio * space.sigma_plus();
    m.sigma_minus = space.sigma_minus();
    m.a = a;
    m.rho0 = ground_state(m, space);
    m.h_eff = m.h;
    for (const auto& c : m.collapse)
        m.h_eff -= 0.5 * I * (c.adjoint() * c);
    m.source = I * (m.v_plus * m.rho0 - m.rho0 * m.v_plus);
    return m;
}

Mat lindblad_apply(const LindbladModel& m, const Mat& rho)
{
    Mat out = -I * (m.h * rho - rho * m.h);
    for (const auto& c : m.collapse) {
        const Mat cdc = c.adjoint() * c;
        out += c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
    }
    return out;
}

Mat ground_state(const LindbladModel& m, const FockOperatorSpace& space)
{
    const int n = space.dim();
    Mat stack(2 * n, n);
    stack << space.a(), space.sigma_minus();
    Eigen::JacobiSVD<Mat> svd(stack, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (!(s(n - 1) < 1e-12) || (n > 1 && !(s(n - 2) > 1e-6)))
        throw ConvergenceError("ground_state: kernel of a and sigma- is not one-dimensional");
    const Vec v = svd.matrixV().col(n - 1);
    Mat rho = v * v.adjoint();
    rho /= rho.trace();
    const double stat = lindblad_apply(m, rho).norm();
    if (!(stat < 1e-9 * std::max(1.0, m.h.norm())))
        throw ConvergenceError("ground_state: kernel state is not stationary (|L rho| = " + std::to_string(stat) + ")");
    return rho;
}

Mat dense_steady_state(const LindbladModel& m)
{
    const Eigen::Index n = m.h.rows();
    if (n > 32)
        throw ParameterError("dense_steady_state: superoperator too large (dim > 32)");
    const Mat id = Mat::Identity(n, n);
    // Column-stacked vec: vec(A X B) = (B^T kron A) vec(X).
    Mat sup = -I * (kron(id, m.h) - kron(m.h.transpose(), id));
    for (const auto& c : m.collapse) {
        const Mat cdc = c.adjoint() * c;
        sup += kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
    }
    Eigen::BDCSVD<Mat> svd(sup, Eigen::ComputeFullV);
    const Vec v = svd.matrixV().col(sup.cols() - 1);
    Mat rho(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        rho.col(j) = v.segment(j * n, n);
    rho /= rho.trace();
    return rho;
}

SteadyResponse steady_response(const LindbladModel& m, const FockOperatorSpace& space, double omega_p)
{
    const int n = space.dim();
    const int r = space.index(0, 0);
    const cplx e_r = m.h(r, r);
    const double nu = omega_p - m.signal_omega;

    // rho_1 = e^{-i nu t} X + h.c. with (L + i nu) X = i [V+, rho0]. Since
    // <r|V+ = 0 and C|r> = 0, X = u <r| and the jump terms drop out:
    // (-i H_eff + i E_r + i nu) u = i V+ |r>.
    Mat sys = -I * m.h_eff + I * (e_r + nu) * Mat::Identity(n, n);
    Vec src = I * m.v_plus.col(r);
    // |r> itself is unsourced and decoupled (its equation is i nu u_r = 0), so
    // it is pinned to zero; otherwise nu = 0 would make the system singular.
    const double couple = sys.row(r).norm() - std::abs(sys(r, r)) + sys.col(r).norm() - std::abs(sys(r, r));
    if (!(couple <= 1e-12 * sys.norm()) || std::abs(src(r)) != 0.0)
        throw ConvergenceError("steady_response: reference state is coupled to the first-order sector");
    sys.row(r).setZero();
    sys.col(r).setZero();
    sys(r, r) = 1.0;
    src(r) = 0.0;
    const Vec u = solve_checked(sys, src, "steady_response");

    // Residual of the full equation, jump terms included. Every term of
    // L(u <r|) is an outer product, so it is assembled without n^3 products.
    Mat lhs = Mat::Zero(n, n);
    lhs.col(r) += -I * (m.h * u) + I * nu * u;
    lhs += I * u * m.h.row(r);
    for (const auto& c : m.collapse) {
        const Vec cu = c * u;
        lhs += cu * c.col(r).adjoint();
        lhs.col(r) -= 0.5 * (c.adjoint() * cu);
        lhs -= 0.5 * u * (c.col(r).adjoint() * c);
    }

    SteadyResponse out;
    out.omega_p = omega_p;
    out.sigma_minus = m.g * (m.sigma_minus.row(r) * u)(0);
    out.a_expect = (m.a.row(r) * u)(0);
    out.residual = (lhs - m.source).norm() / m.source.norm();
    return out;
}

SteadyResponse lindblad_steady_response(const SystemParams& sys, const SignalState& sig, double omega_p, int n_fock)
{
    const CavityParams cav = sys.cavity();
    cplx beta = 0.0;
    if (std::holds_alternative<Coherent>(sig.kind))
        beta = *cavity_photon_number(sig, cav).beta;
    else if (!std::holds_alternative<Vacuum>(sig.kind))
        throw ParameterError("lindblad oracle: only vacuum and coherent signals are supported");
    const FockOperatorSpace space(n_fock, true);
    const auto model = build_lindblad_model(space, sys, beta, sig.omega(cav));
    return steady_response(model, space, omega_p);
}

} // namespace qdetect::oracle
