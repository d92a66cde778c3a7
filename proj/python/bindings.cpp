#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdetect/app/cli.hpp"
#include "qdetect/app/output.hpp"
#include "qdetect/app/presets.hpp"
#include "qdetect/app/sweep.hpp"
#include "qdetect/atom.hpp"
#include "qdetect/cavity.hpp"
#include "qdetect/detector.hpp"
#include "qdetect/error.hpp"
#include "qdetect/oracle.hpp"
#include "qdetect/specfun.hpp"
#include "qdetect/waveguide.hpp"

#include <sstream>

namespace py = pybind11;
using namespace qdetect;

namespace {

py::tuple run_cli_py(const std::vector<std::string>& args)
{
    std::vector<std::string> full{"qdetect"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int rc = 0;
    {
        py::gil_scoped_release release;
        rc = app::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(rc, out.str(), err.str());
}

std::string sidecar_py(const Spectrum& sp, const std::string& label, bool include_data)
{
    app::SidecarInfo info;
    info.label = label;
    info.include_data = include_data;
    info.warnings = validity_warnings(sp.system, sp.signal);
    return spectrum_sidecar(sp, info).dump();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Qubit-based microwave photon detector: native core";

    // Later registrations are tried first, so the base goes in first.
    static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    // Special functions.
    m.def("lambert_w", &specfun::lambert_w, py::arg("branch"), py::arg("z"));
    m.def("elliptic_k", &specfun::elliptic_k, py::arg("k"));
    m.def("hyp1f1", &specfun::hyp1f1, py::arg("a"), py::arg("b"), py::arg("z"));
    m.def("kummer_u", &specfun::kummer_u, py::arg("a"), py::arg("b"), py::arg("z"));
    m.def("expint_en", &specfun::expint_en, py::arg("n"), py::arg("z"));
    m.def("laguerre", &specfun::laguerre, py::arg("n"), py::arg("x"), py::arg("alpha") = 0.0);

    // Waveguide.
    py::class_<CPW>(m, "CPW")
        .def(py::init<>())
        .def(py::init([](double w, double s, double h1, double h2, double eps1, double eps2) {
                 return CPW{w, s, h1, h2, eps1, eps2};
             }),
             py::arg("w"), py::arg("s"), py::arg("h1"), py::arg("h2"), py::arg("eps1_rel"), py::arg("eps2_rel"))
        .def_readwrite("w", &CPW::w)
        .def_readwrite("s", &CPW::s)
        .def_readwrite("h1", &CPW::h1)
        .def_readwrite("h2", &CPW::h2)
        .def_readwrite("eps1_rel", &CPW::eps1_rel)
        .def_readwrite("eps2_rel", &CPW::eps2_rel);
    py::class_<ParallelPlateTwoDielectric>(m, "ParallelPlate")
        .def(py::init<>())
        .def_readwrite("W", &ParallelPlateTwoDielectric::W)
        .def_readwrite("D1", &ParallelPlateTwoDielectric::D1)
        .def_readwrite("D2", &ParallelPlateTwoDielectric::D2)
        .def_readwrite("eps1_rel", &ParallelPlateTwoDielectric::eps1_rel)
        .def_readwrite("eps2_rel", &ParallelPlateTwoDielectric::eps2_rel);
    py::class_<WaveguideParams>(m, "WaveguideParams")
        .def_readonly("c_line", &WaveguideParams::c_line)
        .def_readonly("l_line", &WaveguideParams::l_line)
        .def_readonly("v", &WaveguideParams::v)
        .def_readonly("eps_eff", &WaveguideParams::eps_eff)
        .def_readonly("c_eff", &WaveguideParams::c_eff)
        .def_readonly("z", &WaveguideParams::z)
        .def_readonly("z_static", &WaveguideParams::z_static);
    py::enum_<EllipticArgument>(m, "EllipticArgument")
        .value("Parameter", EllipticArgument::Parameter)
        .value("Modulus", EllipticArgument::Modulus);
    m.def("cpw_params", &cpw_params, py::arg("geom"), py::arg("arg") = EllipticArgument::Parameter);
    m.def("parallel_plate_params", &parallel_plate_params, py::arg("geom"));
    m.def("cpw_full", &cpw_models::full);
    m.def("cpw_equal_dielectrics", &cpw_models::equal_dielectrics);
    m.def("cpw_half_planes", &cpw_models::half_planes);

    // Resonator.
    py::class_<ResonatorGeometry>(m, "ResonatorGeometry")
        .def(py::init([](double length, double gap_c, double line_c, double velocity) {
                 return ResonatorGeometry{length, gap_c, line_c, velocity};
             }),
             py::arg("length"), py::arg("gap_capacitance"), py::arg("line_capacitance"), py::arg("velocity"))
        .def_readwrite("length", &ResonatorGeometry::length_L)
        .def_readwrite("gap_capacitance", &ResonatorGeometry::gap_capacitance_C)
        .def_readwrite("line_capacitance", &ResonatorGeometry::line_capacitance_Cp)
        .def_readwrite("velocity", &ResonatorGeometry::velocity_c)
        .def("coupling_ratio", &ResonatorGeometry::coupling_ratio);
    py::class_<CavityMode>(m, "CavityMode")
        .def_readonly("n", &CavityMode::n)
        .def_readonly("omega_n", &CavityMode::omega_n)
        .def_readonly("gamma_n", &CavityMode::gamma_n)
        .def_readonly("q_factor", &CavityMode::q_factor);
    m.def("resonances", &resonances, py::arg("geom"), py::arg("n_max"));
    m.def("with_coupling_ratio", &with_coupling_ratio, py::arg("geom"), py::arg("ratio"));
    m.def(
        "bare_s_params",
        [](const ResonatorGeometry& g, double omega) {
            const SParams s = bare_s_params(g, omega);
            return py::make_tuple(s.s21, s.s11);
        },
        py::arg("geom"), py::arg("omega"), "(S21, S11) of the empty resonator");

    // Artificial atom.
    py::class_<AtomParams>(m, "AtomParams")
        .def(py::init([](double delta, double gamma1, double gamma_phi, std::complex<double> rabi) {
                 return AtomParams{delta, gamma1, gamma_phi, rabi};
             }),
             py::arg("delta_omega"), py::arg("gamma1"), py::arg("gamma_phi") = 0.0, py::arg("rabi") = 0.0)
        .def_readwrite("delta_omega", &AtomParams::delta_omega)
        .def_readwrite("gamma1", &AtomParams::gamma1)
        .def_readwrite("gamma_phi", &AtomParams::gamma_phi)
        .def_readwrite("rabi", &AtomParams::rabi);
    m.def(
        "atom_s_params",
        [](const AtomParams& p) {
            const AtomSParams s = atom_s_params(p);
            return py::make_tuple(s.s11, s.s21);
        },
        py::arg("params"), "(S11, S21) of the driven atom");
    m.def(
        "atom_steady_state",
        [](const AtomParams& p) {
            const AtomSteadyState s = atom_steady_state(p);
            return py::make_tuple(s.sigma_z, s.sigma_minus);
        },
        py::arg("params"), "(<sigma_z>, <sigma_minus>)");

    // Detector.
    py::class_<QubitParams>(m, "QubitParams")
        .def(py::init([](double omega_q, double chi, double gamma, double gamma_phi) {
                 return QubitParams{omega_q, chi, gamma, gamma_phi, std::nullopt};
             }),
             py::arg("omega_q"), py::arg("chi"), py::arg("gamma"), py::arg("gamma_phi") = 0.0)
        .def_readwrite("omega_q", &QubitParams::omega_q)
        .def_readwrite("chi", &QubitParams::chi)
        .def_readwrite("gamma", &QubitParams::gamma)
        .def_readwrite("gamma_phi", &QubitParams::gamma_phi)
        .def("gamma_prime", &QubitParams::gamma_prime);
    py::class_<CavityParams>(m, "CavityParams")
        .def_readonly("omega_c", &CavityParams::omega_c)
        .def_readonly("gamma_c", &CavityParams::gamma_c)
        .def_readonly("omega_c_star", &CavityParams::omega_c_star);
    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double omega_c, double gamma_c, std::vector<QubitParams> qubits) {
                 return SystemParams{omega_c, gamma_c, std::move(qubits)};
             }),
             py::arg("omega_c"), py::arg("gamma_c"), py::arg("qubits") = std::vector<QubitParams>{})
        .def_readwrite("omega_c", &SystemParams::omega_c)
        .def_readwrite("gamma_c", &SystemParams::gamma_c)
        .def_readwrite("qubits", &SystemParams::qubits)
        .def("cavity", &SystemParams::cavity);
    py::class_<SignalState>(m, "SignalState")
        .def_property_readonly("name", &SignalState::name)
        .def("omega", &SignalState::omega, py::arg("cavity"))
        .def("photon_number", [](const SignalState& s, const CavityParams& cav) {
            const PhotonNumber p = cavity_photon_number(s, cav);
            return py::make_tuple(p.nbar, p.flux);
        });
    m.def("make_signal", &app::make_signal, py::arg("state"), py::arg("nbar") = std::nullopt,
          py::arg("flux") = std::nullopt, py::arg("tau_c") = 0.0, py::arg("signal_omega") = std::nullopt,
          "Signal state by name (vacuum, coherent, incoherent, thermal); give nbar or flux, not both.");
    m.def("qubit_response", &qubit_response, py::arg("omega_p"), py::arg("qubit"), py::arg("cavity"),
          py::arg("signal"));
    m.def("qubit_response_coherent_hyp", &qubit_response_coherent_hyp, py::arg("omega_p"), py::arg("qubit"),
          py::arg("cavity"), py::arg("beta"), py::arg("signal_omega"));
    m.def("s21_probe", &s21_probe, py::arg("omega_p"), py::arg("system"), py::arg("signal"));
    m.def("s21_signal", &s21_signal, py::arg("omega"), py::arg("system"));
    m.def("comb_spectrum", &comb_spectrum, py::arg("omega_p"), py::arg("system"), py::arg("signal"));
    py::class_<CombLine>(m, "CombLine")
        .def_readonly("n", &CombLine::n)
        .def_readonly("weight", &CombLine::weight)
        .def_readonly("width", &CombLine::width);
    m.def("comb_lines", &comb_lines, py::arg("signal"), py::arg("cavity"));
    m.def("validity_warnings", &validity_warnings, py::arg("system"), py::arg("signal"));

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("omega_p", &Spectrum::omega_p)
        .def_readonly("s21", &Spectrum::s21)
        .def_readonly("cavity", &Spectrum::cavity)
        .def_readonly("qubit", &Spectrum::qubit)
        .def_readonly("system", &Spectrum::system)
        .def_readonly("signal", &Spectrum::signal)
        .def("sidecar_json", &sidecar_py, py::arg("label") = "", py::arg("include_data") = false);
    m.def("compute_spectrum", &app::compute_spectrum, py::arg("system"), py::arg("signal"), py::arg("omega_p"),
          py::arg("components") = false, py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("compute_comb_spectrum", &app::compute_comb_spectrum, py::arg("system"), py::arg("signal"),
          py::arg("omega_p"), py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("figure_of_merit", &figure_of_merit, py::arg("with_signal"), py::arg("vacuum"));

    py::class_<app::FigurePreset>(m, "Preset")
        .def_readonly("id", &app::FigurePreset::id)
        .def_readonly("description", &app::FigurePreset::description)
        .def_readonly("system", &app::FigurePreset::system)
        .def_readonly("nbar", &app::FigurePreset::nbar)
        .def_readonly("states", &app::FigurePreset::states)
        .def_readonly("tau_c", &app::FigurePreset::tau_c)
        .def_readonly("detunings", &app::FigurePreset::detunings);
    m.def("presets", &app::figure_presets, py::return_value_policy::reference);
    m.def("find_preset", &app::find_preset, py::arg("id"), py::return_value_policy::reference);

    // Truncated-Fock cross-check.
    py::class_<app::OracleCheck>(m, "OracleCheck")
        .def_readonly("max_deviation", &app::OracleCheck::max_deviation)
        .def_readonly("max_truncation", &app::OracleCheck::max_truncation)
        .def_readonly("max_residual", &app::OracleCheck::max_residual)
        .def_readonly("points", &app::OracleCheck::points);
    m.def("oracle_check", &app::oracle_check, py::arg("system"), py::arg("signal"), py::arg("omega_p"),
          py::arg("n_fock") = 40, py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    m.def(
        "lindblad_response",
        [](const SystemParams& sys, const SignalState& sig, double omega_p, int n_fock) {
            const auto r = oracle::lindblad_steady_response(sys, sig, omega_p, n_fock);
            return py::make_tuple(r.sigma_minus, r.residual);
        },
        py::arg("system"), py::arg("signal"), py::arg("omega_p"), py::arg("n_fock") = 40,
        "(qubit response, residual) from the truncated-Fock master equation");

    m.def("run_cli", &run_cli_py, py::arg("args"), "Run the command line tool; returns (exit code, stdout, stderr).");
}
