#include "qdetect/app/cli.hpp"

#include "qdetect/app/output.hpp"
#include "qdetect/atom.hpp"
#include "qdetect/cavity.hpp"
#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"
#include "qdetect/oracle.hpp"
#include "qdetect/waveguide.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>

namespace qdetect::app {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------- resolution

CPW read_cpw(const Table& t)
{
    CPW g;
    g.w = t.require("w", Dim::Length);
    g.s = t.require("s", Dim::Length);
    g.h1 = t.require("h1", Dim::Length);
    g.h2 = t.quantity("h2", Dim::Length, 0.0);
    g.eps1_rel = t.require("eps1", Dim::Dimensionless);
    g.eps2_rel = t.quantity("eps2", Dim::Dimensionless, g.eps1_rel);
    return g;
}

ParallelPlateTwoDielectric read_parallel_plate(const Table& t)
{
    ParallelPlateTwoDielectric g;
    g.W = t.require("W", Dim::Length);
    g.D1 = t.require("D1", Dim::Length);
    g.D2 = t.require("D2", Dim::Length);
    g.eps1_rel = t.require("eps1", Dim::Dimensionless);
    g.eps2_rel = t.quantity("eps2", Dim::Dimensionless, g.eps1_rel);
    return g;
}

struct LineChoice {
    WaveguideGeometry geometry;
    EllipticArgument argument = EllipticArgument::Parameter;
    std::string model;
};

LineChoice choose_line(const Config& cfg, const std::optional<std::string>& model_override)
{
    const Table* t = cfg.single("waveguide");
    std::optional<std::string> model_cfg = t ? t->text("model") : std::nullopt;
    LineChoice c;
    if (t) {
        if (auto e = t->text("elliptic")) {
            if (*e == "parameter")
                c.argument = EllipticArgument::Parameter;
            else if (*e == "modulus")
                c.argument = EllipticArgument::Modulus;
            else
                throw ConfigError("waveguide elliptic must be 'parameter' or 'modulus', got '" + *e + "'");
        }
    }
    c.model = model_override.value_or(model_cfg.value_or(t && t->has("geometry") ? "custom" : "full"));
    if (c.model == "full") {
        c.geometry = cpw_models::full();
    } else if (c.model == "equal") {
        c.geometry = cpw_models::equal_dielectrics();
    } else if (c.model == "half-planes") {
        c.geometry = cpw_models::half_planes();
    } else if (c.model == "custom") {
        if (!t)
            throw ConfigError("waveguide model 'custom' needs a [waveguide] section");
        const std::string geom = t->text("geometry").value_or("cpw");
        if (geom == "cpw")
            c.geometry = read_cpw(*t);
        else if (geom == "parallel_plate")
            c.geometry = read_parallel_plate(*t);
        else
            throw ConfigError("waveguide geometry must be 'cpw' or 'parallel_plate', got '" + geom + "'");
    } else {
        throw ConfigError("unknown waveguide model '" + c.model + "' (full, equal, half-planes, custom)");
    }
    return c;
}

std::string lower(std::string s)
{
    for (auto& ch : s)
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

std::optional<double> flag_quantity(const std::string& flag, const std::string& text, Dim dim, const char* unit)
{
    if (text.empty())
        return std::nullopt;
    try {
        return parse_quantity(text, dim, unit);
    } catch (const ConfigError& e) {
        throw ConfigError(flag + ": " + e.what());
    }
}

} // namespace

WaveguideParams resolve_line(const Config& cfg, const std::optional<std::string>& model_override)
{
    const auto c = choose_line(cfg, model_override);
    return waveguide_params(c.geometry, c.argument);
}

ResonatorGeometry resolve_resonator(const Config& cfg, const WaveguideParams& line)
{
    static const Table empty;
    const Table* t = cfg.single("resonator");
    const Table& r = t ? *t : empty;
    ResonatorGeometry g;
    g.length_L = r.quantity("length", Dim::Length, 6.666e-3);
    g.line_capacitance_Cp = r.quantity("line_capacitance", Dim::CapPerLength, line.c_line);
    g.velocity_c = r.quantity("velocity", Dim::Velocity, line.v);
    const auto gap = r.quantity("gap_capacitance", Dim::Capacitance);
    const auto ratio = r.quantity("coupling_ratio", Dim::Dimensionless);
    if (gap && ratio)
        throw ConfigError("[resonator]: give gap_capacitance or coupling_ratio, not both");
    if (gap)
        g.gap_capacitance_C = *gap;
    else
        g = with_coupling_ratio(g, ratio.value_or(0.005));
    if (!(g.length_L > 0 && g.gap_capacitance_C > 0 && g.line_capacitance_Cp > 0 && g.velocity_c > 0))
        throw ConfigError("[resonator]: length, capacitances and velocity must be positive");
    return g;
}

SystemParams resolve_system(const Config& cfg, const FigurePreset* preset, std::vector<std::string>* warnings)
{
    SystemParams sys;
    if (preset)
        sys = preset->system;

    std::optional<WaveguideParams> line;
    std::optional<ResonatorGeometry> geom;
    if (cfg.single("resonator")) {
        line = resolve_line(cfg);
        geom = resolve_resonator(cfg, *line);
        const auto mode = resonances(*geom, 1).front();
        sys.omega_c = mode.omega_n;
        sys.gamma_c = mode.gamma_n;
    }
    if (auto v = cfg.root.quantity("omega_c", Dim::Frequency))
        sys.omega_c = *v;
    if (auto v = cfg.root.quantity("gamma_c", Dim::Frequency))
        sys.gamma_c = *v;

    const auto qubits_key = cfg.root.text("qubits");
    if (qubits_key && *qubits_key != "none")
        throw ConfigError("qubits: only 'none' is accepted (use [qubit] sections otherwise)");
    const auto& blocks = cfg.section("qubit");
    if (qubits_key && !blocks.empty())
        throw ConfigError("qubits = none conflicts with [qubit] sections");
    if (qubits_key || !blocks.empty())
        sys.qubits.clear();
    for (const auto& t : blocks) {
        QubitParams q;
        if (t.has("e_j")) {
            if (!geom)
                throw ConfigError("[qubit] with circuit values (e_j, c_j, f_j, l_j) needs a [resonator] section");
            QubitPhysical p;
            p.e_j = t.require("e_j", Dim::Energy);
            p.c_j = t.require("c_j", Dim::Capacitance);
            p.f_j = t.require("f_j", Dim::Dimensionless);
            p.l_j = t.quantity("l_j", Dim::Length, 0.0);
            const auto d = derive_qubit(p, *line, *geom, sys.omega_c);
            q = d.qubit;
            if (warnings)
                warnings->insert(warnings->end(), d.warnings.begin(), d.warnings.end());
        } else {
            auto w = t.quantity("omega_q", Dim::Frequency);
            auto wj = t.quantity("omega_j", Dim::Frequency);
            if (w && wj)
                throw ConfigError("[qubit]: omega_q and omega_j are aliases; give one");
            if (!w && !wj)
                throw ConfigError("[qubit]: missing omega_q");
            q.omega_q = w ? *w : *wj;
            q.chi = t.require("chi", Dim::Frequency);
            q.gamma = t.require("gamma", Dim::Frequency);
        }
        q.gamma_phi = t.quantity("gamma_phi", Dim::Frequency, 0.0);
        const int count = t.integer("count").value_or(1);
        if (count < 1)
            throw ConfigError("[qubit]: count must be >= 1");
        for (int i = 0; i < count; ++i)
            sys.qubits.push_back(q);
    }
    if (!(sys.omega_c > 0.0))
        throw ConfigError("omega_c is required (config key, [resonator] section or --preset)");
    if (!(sys.gamma_c > 0.0))
        throw ConfigError("gamma_c must be positive");
    for (const auto& q : sys.qubits)
        if (!(q.omega_q > 0.0) || !(q.gamma >= 0.0) || !(q.gamma_phi >= 0.0))
            throw ConfigError("qubit frequencies must be positive and rates non-negative");
    return sys;
}

SignalState make_signal(const std::string& state, std::optional<double> nbar, std::optional<double> flux,
                        double tau_c, std::optional<double> signal_omega)
{
    if (nbar && flux)
        throw ConfigError("give either nbar or flux, not both");
    if ((nbar && !(*nbar >= 0.0)) || (flux && !(*flux >= 0.0)))
        throw ConfigError("nbar and flux must be non-negative");
    if (!(tau_c >= 0.0))
        throw ConfigError("tau_c must be non-negative");
    if (!nbar && !flux)
        nbar = 1.0;
    SignalState sig;
    sig.signal_omega = signal_omega;
    const std::string s = lower(state);
    if (s == "vacuum")
        sig.kind = Vacuum{};
    else if (s == "coherent")
        sig.kind = Coherent{flux, flux ? std::nullopt : nbar};
    else if (s == "incoherent")
        sig.kind = Incoherent{flux, flux ? std::nullopt : nbar};
    else if (s == "thermal")
        sig.kind = Thermal{flux, flux ? std::nullopt : nbar, tau_c};
    else
        throw ConfigError("unknown state '" + state + "' (vacuum, coherent, incoherent, thermal)");
    return sig;
}

SignalState resolve_signal(const Config& cfg, const FigurePreset* preset, const Overrides& ov, const CavityParams& cav)
{
    // Read every config key first so none is reported as unused.
    const auto state_cfg = cfg.root.text("state");
    const auto nbar_cfg = cfg.root.quantity("nbar", Dim::Dimensionless);
    const auto flux_cfg = cfg.root.quantity("flux", Dim::Rate);
    const auto tau_cfg = cfg.root.quantity("tau_c", Dim::Time);
    const auto det_cfg = cfg.root.quantity("detuning", Dim::Frequency);

    std::string state = "coherent";
    if (preset && !preset->states.empty())
        state = preset->states.front();
    if (state_cfg)
        state = *state_cfg;
    if (ov.state)
        state = *ov.state;

    std::optional<double> nbar, flux;
    if (ov.nbar || ov.flux) {
        nbar = ov.nbar;
        flux = ov.flux;
    } else if (nbar_cfg || flux_cfg) {
        nbar = nbar_cfg;
        flux = flux_cfg;
    } else if (preset) {
        nbar = preset->nbar;
    }
    const double tau = ov.tau_c.value_or(tau_cfg.value_or(0.0));
    const auto det = ov.detuning ? ov.detuning : det_cfg;
    std::optional<double> omega;
    if (det)
        omega = cav.omega_c_star + *det;
    return make_signal(state, nbar, flux, tau, omega);
}

Grid resolve_grid(const Config& cfg, const SystemParams& sys)
{
    Grid g = default_grid(sys);
    const Table* t = cfg.single("grid");
    if (!t)
        return g;
    const auto start = t->quantity("start", Dim::Frequency);
    const auto stop = t->quantity("stop", Dim::Frequency);
    const auto center = t->quantity("center", Dim::Frequency);
    const auto span = t->quantity("span", Dim::Frequency);
    if ((start || stop) && (center || span))
        throw ConfigError("[grid]: use start/stop or center/span");
    if (start || stop) {
        if (!start || !stop)
            throw ConfigError("[grid]: start and stop go together");
        g.start_hz = *start / si::two_pi;
        g.stop_hz = *stop / si::two_pi;
    } else if (center || span) {
        const double c = center ? *center : 0.5 * si::two_pi * (g.start_hz + g.stop_hz);
        const double s = span ? *span : si::two_pi * (g.stop_hz - g.start_hz);
        g.start_hz = (c - 0.5 * s) / si::two_pi;
        g.stop_hz = (c + 0.5 * s) / si::two_pi;
    }
    if (auto n = t->integer("points"))
        g.points = *n;
    if (g.points < 2)
        throw ConfigError("[grid]: points must be >= 2");
    if (!(g.stop_hz > g.start_hz))
        throw ConfigError("[grid]: stop must exceed start");
    return g;
}

OracleCheck oracle_check(const SystemParams& sys, const SignalState& sig, const std::vector<double>& omega_p,
                         int n_fock, int threads)
{
    if (sys.qubits.size() != 1)
        throw ParameterError("oracle check: needs exactly one qubit");
    const CavityParams cav = sys.cavity();
    cplx beta = 0.0;
    if (std::holds_alternative<Coherent>(sig.kind))
        beta = *cavity_photon_number(sig, cav).beta;
    else if (!std::holds_alternative<Vacuum>(sig.kind))
        throw ParameterError("oracle check: only vacuum and coherent signals have an oracle");
    const double w = sig.omega(cav);
    const oracle::FockOperatorSpace sp(n_fock, true), sp2(2 * n_fock, true);
    const auto m = oracle::build_lindblad_model(sp, sys, beta, w);
    const auto m2 = oracle::build_lindblad_model(sp2, sys, beta, w);
    struct Row {
        double dev, trunc, resid;
    };
    const auto rows = ordered_map(
        omega_p.size(),
        [&](std::size_t i) {
            const auto r = oracle::steady_response(m, sp, omega_p[i]);
            const auto r2 = oracle::steady_response(m2, sp2, omega_p[i]);
            const cplx want = qubit_response(omega_p[i], sys.qubits[0], cav, sig);
            return Row{std::abs(r.sigma_minus - want) / std::abs(want),
                       std::abs(r2.sigma_minus - r.sigma_minus) / std::abs(r.sigma_minus), r.residual};
        },
        threads);
    OracleCheck c;
    c.points = static_cast<int>(rows.size());
    for (const auto& r : rows) {
        c.max_deviation = std::max(c.max_deviation, r.dev);
        c.max_truncation = std::max(c.max_truncation, r.trunc);
        c.max_residual = std::max(c.max_residual, r.resid);
    }
    return c;
}

namespace {

// ---------------------------------------------------------------- commands

struct Args {
    std::string config, preset, state, nbar, flux, tau_c, detuning, model;
    std::string out = ".";
    std::string format = "csv";
    bool oracle_check = false;
    bool components = false;
    int threads = 0;
};

struct Ctx {
    Config cfg;
    Args args;
    Overrides ov;
    const FigurePreset* preset = nullptr;
    int threads = 1;
    std::vector<std::string> channels{"re", "im", "abs"};
    std::ostream& out;
    std::ostream& err;
};

Ctx make_ctx(const Args& a, std::ostream& out, std::ostream& err)
{
    Ctx c{a.config.empty() ? Config{} : load_config(a.config), a, {}, nullptr, 1, {"re", "im", "abs"}, out, err};
    auto& ov = c.ov;
    if (!a.preset.empty())
        ov.preset = a.preset;
    if (!a.state.empty())
        ov.state = a.state;
    ov.nbar = flag_quantity("--nbar", a.nbar, Dim::Dimensionless, nullptr);
    ov.flux = flag_quantity("--flux", a.flux, Dim::Rate, "Hz");
    ov.tau_c = flag_quantity("--tau-c", a.tau_c, Dim::Time, "s");
    ov.detuning = flag_quantity("--detuning", a.detuning, Dim::Frequency, "Hz");

    const auto preset_cfg = c.cfg.root.text("preset");
    if (ov.preset)
        c.preset = &find_preset(*ov.preset);
    else if (preset_cfg)
        c.preset = &find_preset(*preset_cfg);

    const auto threads_cfg = c.cfg.root.integer("threads");
    c.threads = a.threads > 0 ? a.threads : threads_cfg.value_or(default_threads());
    if (c.threads < 1)
        throw ConfigError("threads must be >= 1");
    if (auto ch = c.cfg.root.text("channels")) {
        c.channels.clear();
        std::string cur;
        for (char x : *ch + ",") {
            if (x == ',') {
                if (!cur.empty())
                    c.channels.push_back(cur);
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(x))) {
                cur += x;
            }
        }
        if (c.channels.empty())
            throw ConfigError("channels: list at least one of re, im, abs");
    }
    return c;
}

bool wants(const Ctx& c, const char* f)
{
    return c.args.format == f || c.args.format == "all";
}

fs::path out_path(const Ctx& c, const std::string& file)
{
    const fs::path dir(c.args.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir / file;
}

void emit(const Ctx& c, const std::string& file, const std::string& content)
{
    const auto p = out_path(c, file);
    write_file(p.string(), content);
    fmt::print(c.out, "wrote {}\n", p.string());
}

void emit_spectrum(const Ctx& c, const Spectrum& sp, const std::string& stem, SidecarInfo info)
{
    info.label = stem;
    info.include_data = wants(c, "json");
    if (wants(c, "csv")) {
        info.csv_file = stem + ".csv";
        emit(c, info.csv_file, csv_table(spectrum_columns(sp)));
    }
    if (wants(c, "svg")) {
        info.svg_file = stem + ".svg";
        std::vector<double> hz;
        for (double w : sp.omega_p)
            hz.push_back(w / si::two_pi);
        emit(c, info.svg_file, svg_plot(hz, spectrum_channels(sp, c.channels), stem + " (" + sp.signal.name() + ")"));
    }
    emit(c, stem + ".json", spectrum_sidecar(sp, info).dump(2) + "\n");
}

void print_warnings(const Ctx& c, const std::vector<std::string>& w)
{
    for (const auto& s : w)
        fmt::print(c.err, "warning: {}\n", s);
}

struct OracleSettings {
    int n_fock = 40;
    int points = 41;
    double tolerance = 1e-6;
};

OracleSettings read_oracle_settings(const Config& cfg)
{
    OracleSettings o;
    if (const Table* t = cfg.single("oracle")) {
        o.n_fock = t->integer("n_fock").value_or(o.n_fock);
        o.points = t->integer("points").value_or(o.points);
        o.tolerance = t->quantity("tolerance", Dim::Dimensionless, o.tolerance);
    }
    if (o.n_fock < 4 || o.points < 2 || !(o.tolerance > 0.0))
        throw ConfigError("[oracle]: n_fock >= 4, points >= 2 and tolerance > 0 required");
    return o;
}

// Up to 25 evenly spaced grid points plus the first comb lines.
std::vector<double> oracle_sample(const SystemParams& sys, const std::vector<double>& omega_p)
{
    std::vector<double> pts;
    const std::size_t n = omega_p.size(), k = std::min<std::size_t>(25, n);
    for (std::size_t i = 0; i < k; ++i)
        pts.push_back(omega_p[k > 1 ? i * (n - 1) / (k - 1) : 0]);
    const auto& q = sys.qubits.front();
    for (int j = 0; j < 4; ++j)
        pts.push_back(q.omega_q + 2.0 * q.chi * j);
    return pts;
}

void run_oracle_gate(const Ctx& c, const SystemParams& sys, const SignalState& sig, const std::vector<double>& omega_p,
                     const OracleSettings& o)
{
    if (sys.qubits.size() != 1 ||
        !(std::holds_alternative<Vacuum>(sig.kind) || std::holds_alternative<Coherent>(sig.kind))) {
        fmt::print(c.err, "note: oracle check skipped for {} signal with {} qubit(s)\n", sig.name(), sys.qubits.size());
        return;
    }
    const auto r = oracle_check(sys, sig, oracle_sample(sys, omega_p), o.n_fock, c.threads);
    fmt::print(c.out, "oracle check ({}): {} points, max deviation {:.3e}, truncation {:.3e}, residual {:.3e}\n",
               sig.name(), r.points, r.max_deviation, r.max_truncation, r.max_residual);
    if (!(r.max_deviation < o.tolerance))
        throw ConvergenceError(fmt::format("oracle deviation {:.3e} exceeds tolerance {:.1e}", r.max_deviation,
                                           o.tolerance));
}

int cmd_waveguide(const Args& a, std::ostream& out, std::ostream& err)
{
    Ctx c = make_ctx(a, out, err);
    const auto choice = choose_line(c.cfg, a.model.empty() ? std::nullopt : std::optional<std::string>(a.model));
    c.cfg.check_consumed();
    const auto p = waveguide_params(choice.geometry, choice.argument);
    const std::pair<const char*, double> rows[] = {
        {"c_line_F_per_m", p.c_line}, {"l_line_H_per_m", p.l_line}, {"v_m_per_s", p.v},
        {"v_over_c0", p.v / si::c0},  {"eps_eff", p.eps_eff},       {"c_eff_F_per_m", p.c_eff},
        {"z_ohm", p.z},               {"z_static_ohm", p.z_static}};
    fmt::print(out, "model = {}\n", choice.model);
    for (const auto& [k, v] : rows)
        fmt::print(out, "{} = {}\n", k, format_double(v));
    if (wants(c, "json")) {
        nlohmann::json j;
        j["format"] = "qdetect.waveguide";
        j["version"] = 1;
        j["model"] = choice.model;
        for (const auto& [k, v] : rows)
            j[k] = v;
        emit(c, "waveguide.json", j.dump(2) + "\n");
    }
    return 0;
}

int cmd_cavity(const Args& a, std::ostream& out, std::ostream& err)
{
    Ctx c = make_ctx(a, out, err);
    const auto line = resolve_line(c.cfg);
    const auto geom = resolve_resonator(c.cfg, line);
    const Table* rt = c.cfg.single("resonator");
    const int n_modes = rt ? rt->integer("modes").value_or(3) : 3;
    if (n_modes < 1)
        throw ConfigError("[resonator]: modes must be >= 1");
    const auto modes = resonances(geom, n_modes);
    Grid g;
    g.points = 2001;
    g.start_hz = 0.05 * modes.front().omega_n / si::two_pi;
    g.stop_hz = (modes.back().omega_n + 0.5 * modes.front().omega_n) / si::two_pi;
    if (const Table* t = c.cfg.single("grid")) {
        if (auto v = t->quantity("start", Dim::Frequency))
            g.start_hz = *v / si::two_pi;
        if (auto v = t->quantity("stop", Dim::Frequency))
            g.stop_hz = *v / si::two_pi;
        g.points = t->integer("points").value_or(g.points);
    }
    c.cfg.check_consumed();

    fmt::print(out, "coupling_ratio = {}\n", format_double(geom.coupling_ratio()));
    fmt::print(out, "{:>3} {:>24} {:>24} {:>24}\n", "n", "f_n_hz", "gamma_n_hz", "q_factor");
    for (const auto& m : modes)
        fmt::print(out, "{:>3} {:>24.17g} {:>24.17g} {:>24.17g}\n", m.n, m.omega_n / si::two_pi,
                   m.gamma_n / si::two_pi, m.q_factor);

    const auto w = g.omega();
    const auto s = ordered_map(w.size(), [&](std::size_t i) { return bare_s_params(geom, w[i]); }, c.threads);
    std::vector<Column> cols{{"omega_p_hz", {}}, {"re_s21", {}}, {"im_s21", {}}, {"abs_s21", {}},
                             {"re_s11", {}},     {"im_s11", {}}, {"abs_s11", {}}};
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double vals[] = {w[i] / si::two_pi, s[i].s21.real(), s[i].s21.imag(), std::abs(s[i].s21),
                               s[i].s11.real(),   s[i].s11.imag(), std::abs(s[i].s11)};
        for (std::size_t k = 0; k < cols.size(); ++k)
            cols[k].values.push_back(vals[k]);
    }
    if (wants(c, "csv"))
        emit(c, "cavity.csv", csv_table(cols));
    if (wants(c, "svg"))
        emit(c, "cavity.svg",
             svg_plot(cols[0].values, {{"abs_s21", cols[3].values}, {"abs_s11", cols[6].values}}, "bare cavity"));
    nlohmann::json j;
    j["format"] = "qdetect.cavity";
    j["version"] = 1;
    j["geometry"] = {{"length", geom.length_L},
                     {"gap_capacitance", geom.gap_capacitance_C},
                     {"line_capacitance", geom.line_capacitance_Cp},
                     {"velocity", geom.velocity_c},
                     {"coupling_ratio", geom.coupling_ratio()}};
    nlohmann::json jm = nlohmann::json::array();
    for (const auto& m : modes)
        jm.push_back({{"n", m.n}, {"omega_n", m.omega_n}, {"gamma_n", m.gamma_n}, {"q_factor", m.q_factor}});
    j["modes"] = jm;
    j["grid"] = {{"points", g.points}, {"omega_start", w.front()}, {"omega_stop", w.back()}};
    emit(c, "cavity.json", j.dump(2) + "\n");
    return 0;
}

int cmd_atom(const Args& a, std::ostream& out, std::ostream& err)
{
    Ctx c = make_ctx(a, out, err);
    static const Table empty;
    const Table* t = c.cfg.single("atom");
    const Table& at = t ? *t : empty;
    AtomParams base;
    base.gamma1 = at.quantity("gamma1", Dim::Frequency, si::two_pi * 1e6);
    base.gamma_phi = at.quantity("gamma_phi", Dim::Frequency, 0.0);
    const double rabi = at.quantity("rabi", Dim::Frequency, 0.0);
    const double phase = at.quantity("rabi_phase", Dim::Dimensionless, 0.0);
    base.rabi = std::polar(rabi, phase);
    if (!(base.gamma1 > 0.0) || !(base.gamma_phi >= 0.0))
        throw ConfigError("[atom]: gamma1 must be positive and gamma_phi non-negative");
    const double span = 20.0 * base.gamma_prime();
    Grid g{-span / si::two_pi, span / si::two_pi, 2001};
    if (const Table* gt = c.cfg.single("grid")) {
        if (auto v = gt->quantity("start", Dim::Frequency))
            g.start_hz = *v / si::two_pi;
        if (auto v = gt->quantity("stop", Dim::Frequency))
            g.stop_hz = *v / si::two_pi;
        g.points = gt->integer("points").value_or(g.points);
    }
    c.cfg.check_consumed();

    const auto d = g.omega();
    std::vector<Column> cols{{"delta_hz", {}},  {"re_s11", {}}, {"im_s11", {}}, {"abs_s11", {}},
                             {"re_s21", {}},    {"im_s21", {}}, {"abs_s21", {}}, {"sigma_z", {}}};
    for (double delta : d) {
        AtomParams p = base;
        p.delta_omega = delta;
        const auto s = atom_s_params(p);
        const auto ss = atom_steady_state(p);
        const double vals[] = {delta / si::two_pi, s.s11.real(), s.s11.imag(), std::abs(s.s11),
                               s.s21.real(),       s.s21.imag(), std::abs(s.s21), ss.sigma_z};
        for (std::size_t k = 0; k < cols.size(); ++k)
            cols[k].values.push_back(vals[k]);
    }
    if (wants(c, "csv"))
        emit(c, "atom.csv", csv_table(cols));
    if (wants(c, "svg"))
        emit(c, "atom.svg",
             svg_plot(cols[0].values, {{"abs_s11", cols[3].values}, {"abs_s21", cols[6].values}}, "artificial atom"));
    nlohmann::json j;
    j["format"] = "qdetect.atom";
    j["version"] = 1;
    j["gamma1"] = base.gamma1;
    j["gamma_phi"] = base.gamma_phi;
    j["rabi"] = {{"abs", rabi}, {"phase", phase}};
    j["grid"] = {{"points", g.points}, {"delta_start", d.front()}, {"delta_stop", d.back()}};
    emit(c, "atom.json", j.dump(2) + "\n");
    fmt::print(out, "gamma_prime_hz = {}\n", format_double(base.gamma_prime() / si::two_pi));
    return 0;
}

struct DetectSetup {
    SystemParams sys;
    SignalState sig;
    std::vector<double> omega_p;
    OracleSettings oracle;
    std::string label;
    bool components = false;
    std::vector<std::string> warnings;
};

DetectSetup resolve_detect(Ctx& c)
{
    DetectSetup d;
    d.sys = resolve_system(c.cfg, c.preset, &d.warnings);
    d.sig = resolve_signal(c.cfg, c.preset, c.ov, d.sys.cavity());
    d.omega_p = resolve_grid(c.cfg, d.sys).omega();
    d.oracle = read_oracle_settings(c.cfg);
    d.label = c.cfg.root.text("label").value_or("");
    d.components = c.args.components || c.cfg.root.boolean("components").value_or(false);
    c.cfg.check_consumed();
    for (const auto& w : validity_warnings(d.sys, d.sig))
        d.warnings.push_back(w);
    return d;
}

int cmd_detect(const Args& a, std::ostream& out, std::ostream& err)
{
    Ctx c = make_ctx(a, out, err);
    auto d = resolve_detect(c);
    print_warnings(c, d.warnings);
    const auto sp = compute_spectrum(d.sys, d.sig, d.omega_p, d.components, c.threads);
    SidecarInfo info;
    info.warnings = d.warnings;
    emit_spectrum(c, sp, d.label.empty() ? "detect_" + d.sig.name() : d.label, info);
    if (a.oracle_check)
        run_oracle_gate(c, d.sys, d.sig, d.omega_p, d.oracle);
    return 0;
}

int cmd_comb(const Args& a, std::ostream& out, std::ostream& err)
{
    Ctx c = make_ctx(a, out, err);
    auto d = resolve_detect(c);
    print_warnings(c, d.warnings);
    const auto lines = comb_lines(d.sig, d.sys.cavity());
    fmt::print(out, "{:>4} {:>24} {:>24}\n", "n", "weight", "width_hz");
    for (std::size_t i = 0; i < lines.size() && i < 20; ++i)
        fmt::print(out, "{:>4} {:>24.17g} {:>24.17g}\n", lines[i].n, lines[i].weight, lines[i].width / si::two_pi);
    if (lines.size() > 20)
        fmt::print(out, "... {} lines in total\n", lines.size());
    const auto sp = compute_comb_spectrum(d.sys, d.sig, d.omega_p, c.threads);
    SidecarInfo info;
    info.kind = "comb";
    info.lines = lines;
    info.warnings = d.warnings;
    emit_spectrum(c, sp, d.label.empty() ? "comb_" + d.sig.name() : d.label, info);
    return 0;
}

int cmd_oracle(const Args& a, std::ostream& out, std::ostream& err)
{
    Ctx c = make_ctx(a, out, err);
    SystemParams sys = resolve_system(c.cfg, c.preset);
    const SignalState sig = resolve_signal(c.cfg, c.preset, c.ov, sys.cavity());
    const OracleSettings o = read_oracle_settings(c.cfg);
    std::vector<double> omega_p;
    if (c.cfg.single("grid")) {
        omega_p = resolve_grid(c.cfg, sys).omega();
    } else if (!sys.qubits.empty()) {
        // Around the first few comb lines.
        const auto& q = sys.qubits.front();
        const double nb = std::holds_alternative<Vacuum>(sig.kind) ? 0.0 : cavity_photon_number(sig, sys.cavity()).nbar;
        const double hi = std::max(4.0, nb + 4.0 * std::sqrt(nb) + 2.0);
        Grid g{(q.omega_q - 2.0 * q.chi) / si::two_pi, (q.omega_q + 2.0 * q.chi * hi) / si::two_pi, o.points};
        if (g.stop_hz < g.start_hz)
            std::swap(g.start_hz, g.stop_hz);
        omega_p = g.omega();
    }
    c.cfg.check_consumed();
    if (sys.qubits.size() != 1)
        throw ConfigError("oracle: needs exactly one qubit");
    if (!(std::holds_alternative<Vacuum>(sig.kind) || std::holds_alternative<Coherent>(sig.kind)))
        throw ConfigError("oracle: only vacuum and coherent signals have an oracle");

    const CavityParams cav = sys.cavity();
    const cplx beta = std::holds_alternative<Coherent>(sig.kind) ? *cavity_photon_number(sig, cav).beta : cplx(0.0);
    const oracle::FockOperatorSpace sp(o.n_fock, true), sp2(2 * o.n_fock, true);
    const auto m = oracle::build_lindblad_model(sp, sys, beta, sig.omega(cav));
    const auto m2 = oracle::build_lindblad_model(sp2, sys, beta, sig.omega(cav));
    struct Row {
        cplx analytic, fock;
        double dev, trunc, resid;
    };
    const auto rows = ordered_map(
        omega_p.size(),
        [&](std::size_t i) {
            const auto r = oracle::steady_response(m, sp, omega_p[i]);
            const auto r2 = oracle::steady_response(m2, sp2, omega_p[i]);
            const cplx want = qubit_response(omega_p[i], sys.qubits[0], cav, sig);
            return Row{want, r.sigma_minus, std::abs(r.sigma_minus - want) / std::abs(want),
                       std::abs(r2.sigma_minus - r.sigma_minus) / std::abs(r.sigma_minus), r.residual};
        },
        c.threads);

    std::vector<Column> cols{{"omega_p_hz", {}}, {"re_analytic", {}}, {"im_analytic", {}}, {"re_oracle", {}},
                             {"im_oracle", {}},  {"rel_dev", {}},     {"trunc_dev", {}},   {"residual", {}}};
    double worst = 0.0, worst_trunc = 0.0;
    fmt::print(out, "{:>22} {:>12} {:>12} {:>12}\n", "omega_p_hz", "rel_dev", "trunc_dev", "residual");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double vals[] = {omega_p[i] / si::two_pi, r.analytic.real(), r.analytic.imag(), r.fock.real(),
                               r.fock.imag(),           r.dev,             r.trunc,            r.resid};
        for (std::size_t k = 0; k < cols.size(); ++k)
            cols[k].values.push_back(vals[k]);
        fmt::print(out, "{:>22.17g} {:>12.3e} {:>12.3e} {:>12.3e}\n", vals[0], r.dev, r.trunc, r.resid);
        worst = std::max(worst, r.dev);
        worst_trunc = std::max(worst_trunc, r.trunc);
    }
    fmt::print(out, "max rel_dev = {:.3e}, max trunc_dev = {:.3e} (n_fock {} vs {})\n", worst, worst_trunc, o.n_fock,
               2 * o.n_fock);
    if (wants(c, "csv"))
        emit(c, "oracle.csv", csv_table(cols));
    if (!(worst < o.tolerance))
        throw ConvergenceError(fmt::format("oracle deviation {:.3e} exceeds tolerance {:.1e}", worst, o.tolerance));
    return 0;
}

int cmd_figure(const Args& a, std::ostream& out, std::ostream& err)
{
    Ctx c = make_ctx(a, out, err);
    if (!c.preset)
        throw ConfigError("figure: --preset is required");
    const FigurePreset& p = *c.preset;
    std::vector<std::string> warnings;
    const SystemParams sys = resolve_system(c.cfg, &p, &warnings);
    const CavityParams cav = sys.cavity();
    // Signal keys are read once for the base values; the state list comes
    // from the preset unless --state/state picks one.
    Overrides ov = c.ov;
    const auto base = resolve_signal(c.cfg, &p, ov, cav);
    const auto omega_p = resolve_grid(c.cfg, sys).omega();
    const OracleSettings o = read_oracle_settings(c.cfg);
    c.cfg.check_consumed();
    print_warnings(c, warnings);

    std::vector<std::string> states = p.states;
    if (ov.state)
        states = {*ov.state};
    const auto pn = std::holds_alternative<Vacuum>(base.kind) ? PhotonNumber{} : cavity_photon_number(base, cav);
    const double nbar = std::holds_alternative<Vacuum>(base.kind) ? p.nbar : pn.nbar;
    const double tau_base = ov.tau_c.value_or(0.0);

    if (!p.detunings.empty()) {
        std::vector<Column> cols{{"omega_p_hz", {}}};
        for (double w : omega_p)
            cols[0].values.push_back(w / si::two_pi);
        nlohmann::json j;
        j["format"] = "qdetect.detuning_error";
        j["version"] = 1;
        j["preset"] = p.id;
        j["detunings"] = p.detunings;
        j["nbar"] = nbar;
        j["columns"] = nlohmann::json::array({"omega_p_hz"});
        for (const auto& st : states) {
            const auto sig = make_signal(st, nbar, std::nullopt, tau_base, std::nullopt);
            const auto e = detuning_error(sys, sig, p.detunings, omega_p);
            for (std::size_t k = 0; k < e.size(); ++k) {
                const std::string name = st + "_det" + std::to_string(k + 1);
                cols.push_back({name, e[k]});
                j["columns"].push_back(name);
            }
        }
        emit(c, p.id + "_detuning_error.csv", csv_table(cols));
        emit(c, p.id + "_detuning_error.json", j.dump(2) + "\n");
        return 0;
    }

    const auto vacuum = compute_spectrum(sys, make_signal("vacuum", std::nullopt, std::nullopt, 0.0, base.signal_omega),
                                         omega_p, false, c.threads);
    std::vector<Column> ratio{{"omega_p_hz", {}}};
    for (double w : omega_p)
        ratio[0].values.push_back(w / si::two_pi);

    for (const auto& st : states) {
        std::vector<std::pair<std::string, double>> runs;
        if (lower(st) == "thermal" && !p.tau_c.empty() && !ov.tau_c) {
            for (std::size_t k = 0; k < p.tau_c.size(); ++k)
                runs.emplace_back("thermal_tau" + std::to_string(k + 1), p.tau_c[k]);
        } else {
            runs.emplace_back(lower(st), tau_base);
        }
        for (const auto& [name, tau] : runs) {
            const auto sig = make_signal(st, nbar, std::nullopt, tau, base.signal_omega);
            auto w = validity_warnings(sys, sig);
            print_warnings(c, w);
            const auto sp = compute_spectrum(sys, sig, omega_p, true, c.threads);
            SidecarInfo info;
            info.warnings = w;
            emit_spectrum(c, sp, p.id + "_" + name, info);
            ratio.push_back({name, figure_of_merit(sp, vacuum)});
            if (a.oracle_check)
                run_oracle_gate(c, sys, sig, omega_p, o);
        }
    }
    emit(c, p.id + "_ratio.csv", csv_table(ratio));
    return 0;
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e))
        return 2;
    if (dynamic_cast<const IoError*>(&e))
        return 4;
    return 3;
}

std::string one_line(std::string s)
{
    for (auto& ch : s)
        if (ch == '\n' || ch == '\r')
            ch = ' ';
    return s;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Probe transmission of transmon qubits in a waveguide cavity", "qdetect"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Args a;

    auto add_io = [&](CLI::App* s) {
        s->add_option("--config", a.config, "key = value config file (or .json)");
        s->add_option("--out", a.out, "output directory")->capture_default_str();
        s->add_option("--format", a.format, "csv, json, svg or all")
            ->check(CLI::IsMember({"csv", "json", "svg", "all"}))
            ->capture_default_str();
        s->add_option("--threads", a.threads, "worker threads (default: all cores)");
    };
    auto add_signal = [&](CLI::App* s) {
        s->add_option("--preset", a.preset, "figure preset (fig1 ... fig10)");
        s->add_option("--state", a.state, "vacuum, coherent, incoherent or thermal")
            ->check(CLI::IsMember({"vacuum", "coherent", "incoherent", "thermal"}));
        s->add_option("--nbar", a.nbar, "mean cavity photon number on resonance");
        s->add_option("--flux", a.flux, "signal photon flux, Hz");
        s->add_option("--tau-c", a.tau_c, "thermal coherence time, s");
        s->add_option("--detuning", a.detuning, "signal detuning from omega_c*, Hz");
    };

    auto* wg = app.add_subcommand("waveguide", "transmission-line parameters");
    wg->add_option("--config", a.config, "key = value config file (or .json)");
    wg->add_option("--model", a.model, "full, equal, half-planes or custom")
        ->check(CLI::IsMember({"full", "equal", "half-planes", "custom"}));
    wg->add_option("--out", a.out, "output directory")->capture_default_str();
    wg->add_option("--format", a.format, "json writes waveguide.json")
        ->check(CLI::IsMember({"csv", "json", "svg", "all"}));

    auto* cav = app.add_subcommand("cavity", "bare resonator modes and S-parameters");
    add_io(cav);
    auto* atom = app.add_subcommand("atom", "artificial atom in an open line");
    add_io(atom);
    auto* det = app.add_subcommand("detect", "probe transmission with a signal field");
    add_io(det);
    add_signal(det);
    det->add_flag("--components", a.components, "add cavity and per-qubit columns");
    det->add_flag("--oracle-check", a.oracle_check, "compare against the truncated-Fock oracle");
    auto* comb = app.add_subcommand("comb", "well-resolved comb approximation");
    add_io(comb);
    add_signal(comb);
    auto* orc = app.add_subcommand("oracle", "analytic response vs truncated-Fock oracle");
    add_io(orc);
    add_signal(orc);
    auto* fig = app.add_subcommand("figure", "reproduce a figure preset");
    add_io(fig);
    add_signal(fig);
    fig->add_flag("--oracle-check", a.oracle_check, "compare against the truncated-Fock oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e, out, err);
        fmt::print(err, "qdetect: error: {}\n", one_line(e.what()));
        return 2;
    }

    try {
        if (wg->parsed())
            return cmd_waveguide(a, out, err);
        if (cav->parsed())
            return cmd_cavity(a, out, err);
        if (atom->parsed())
            return cmd_atom(a, out, err);
        if (det->parsed())
            return cmd_detect(a, out, err);
        if (comb->parsed())
            return cmd_comb(a, out, err);
        if (orc->parsed())
            return cmd_oracle(a, out, err);
        if (fig->parsed())
            return cmd_figure(a, out, err);
    } catch (const std::exception& e) {
        fmt::print(err, "qdetect: error: {}\n", one_line(e.what()));
        return exit_code_for(e);
    }
    return 2;
}

} // namespace qdetect::app
