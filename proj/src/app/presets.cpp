#include "qdetect/app/presets.hpp"

#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"

namespace qdetect::app {

namespace {

constexpr double GHz = si::two_pi * 1e9;
constexpr double MHz = si::two_pi * 1e6;
constexpr double kHz = si::two_pi * 1e3;

SystemParams make_system(double chi, double gamma_c, int n_qubits = 1)
{
    SystemParams s;
    s.omega_c = 9 * GHz;
    s.gamma_c = gamma_c;
    for (int i = 0; i < n_qubits; ++i)
        s.qubits.push_back({10 * GHz, chi, 250 * kHz, 0.0, std::nullopt});
    return s;
}

FigurePreset make(std::string id, std::string description, double chi, double gamma_c, double nbar = 1.0,
                  int n_qubits = 1)
{
    FigurePreset p;
    p.id = std::move(id);
    p.description = std::move(description);
    p.system = make_system(chi, gamma_c, n_qubits);
    p.nbar = nbar;
    p.states = {"coherent", "incoherent", "thermal"};
    return p;
}

std::vector<FigurePreset> build()
{
    std::vector<FigurePreset> v;
    v.push_back(make("fig1", "one qubit, high Q, resolved comb", 10 * MHz, 100 * kHz));
    v.push_back(make("fig2", "as fig1 with a lower cavity Q", 10 * MHz, 1 * MHz));
    v.push_back(make("fig2bis", "as fig1 with a smaller Stark shift", 1 * MHz, 100 * kHz));
    v.push_back(make("fig3", "smaller Stark shift and lower Q", 1 * MHz, 1 * MHz));
    v.push_back(make("fig35q", "five identical qubits", 1 * MHz, 1 * MHz, 1.0, 5));
    v.push_back(make("fig4", "very low Q; thermal and coherent coincide", 100 * kHz, 500 * MHz));
    v.push_back(make("fig5", "nbar = 2, low Q", 1 * MHz, 1 * MHz, 2.0));
    v.push_back(make("fig6", "nbar = 2, high Q", 1 * MHz, 100 * kHz, 2.0));

    auto fig7 = make("fig7", "thermal signal at three coherence times", 1 * MHz, 100 * kHz);
    fig7.tau_c = {1e-12 / si::two_pi, 1e-9 / si::two_pi, 1e-8 / si::two_pi};
    v.push_back(fig7);

    auto fig10 = make("fig10", "relative error under signal detuning", 1 * MHz, 100 * kHz);
    fig10.states = {"coherent", "incoherent"};
    fig10.detunings = {-fig10.system.gamma_c / 3.0, fig10.system.gamma_c / 3.0};
    v.push_back(fig10);
    return v;
}

} // namespace

const std::vector<FigurePreset>& figure_presets()
{
    static const std::vector<FigurePreset> presets = build();
    return presets;
}

const FigurePreset& find_preset(const std::string& id)
{
    for (const auto& p : figure_presets())
        if (p.id == id)
            return p;
    std::string known;
    for (const auto& p : figure_presets())
        known += (known.empty() ? "" : ", ") + p.id;
    throw ConfigError("unknown preset '" + id + "' (known: " + known + ")");
}

} // namespace qdetect::app
