#include "qdetect/app/output.hpp"

#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qdetect::app {

std::string format_double(double x)
{
    return fmt::format("{:.17g}", x);
}

std::string csv_table(const std::vector<Column>& columns)
{
    if (columns.empty())
        return {};
    const std::size_t n = columns.front().values.size();
    for (const auto& c : columns)
        if (c.values.size() != n)
            throw Error("csv_table: column '" + c.name + "' has a different length");
    fmt::memory_buffer buf;
    for (std::size_t j = 0; j < columns.size(); ++j)
        fmt::format_to(std::back_inserter(buf), "{}{}", j ? "," : "", columns[j].name);
    buf.push_back('\n');
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j)
            fmt::format_to(std::back_inserter(buf), "{}{:.17g}", j ? "," : "", columns[j].values[i]);
        buf.push_back('\n');
    }
    return fmt::to_string(buf);
}

CsvTable parse_csv(const std::string& text)
{
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw IoError("parse_csv: empty input");
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');)
        t.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t end = std::min(line.find(',', pos), line.size());
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
            if (ec != std::errc() || ptr != line.data() + end)
                throw IoError("parse_csv: bad number in '" + line + "'");
            row.push_back(v);
            pos = end + 1;
        }
        if (row.size() != t.header.size())
            throw IoError("parse_csv: row width does not match the header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

void push_complex(std::vector<Column>& cols, const std::string& name, const std::vector<cplx>& v, bool with_abs)
{
    Column re{"re_" + name, {}}, im{"im_" + name, {}}, ab{"abs_" + name, {}};
    for (const auto& z : v) {
        re.values.push_back(z.real());
        im.values.push_back(z.imag());
        ab.values.push_back(std::abs(z));
    }
    cols.push_back(std::move(re));
    cols.push_back(std::move(im));
    if (with_abs)
        cols.push_back(std::move(ab));
}

nlohmann::json signal_json(const SignalState& sig, const CavityParams& cav)
{
    nlohmann::json j;
    j["state"] = sig.name();
    j["omega"] = sig.omega(cav);
    j["detuning"] = sig.omega(cav) - cav.omega_c_star;
    if (std::holds_alternative<Vacuum>(sig.kind)) {
        j["nbar"] = 0.0;
        j["flux"] = 0.0;
    } else {
        const auto pn = cavity_photon_number(sig, cav);
        j["nbar"] = pn.nbar;
        j["flux"] = pn.flux;
    }
    if (const auto* th = std::get_if<Thermal>(&sig.kind))
        j["tau_c"] = th->tau_c;
    return j;
}

} // namespace

std::vector<Column> spectrum_columns(const Spectrum& sp)
{
    std::vector<Column> cols;
    Column f{"omega_p_hz", {}};
    for (double w : sp.omega_p)
        f.values.push_back(w / si::two_pi);
    cols.push_back(std::move(f));
    push_complex(cols, "s21", sp.s21, true);
    if (!sp.cavity.empty()) {
        push_complex(cols, "cavity", sp.cavity, false);
        for (std::size_t j = 0; j < sp.qubit.size(); ++j)
            push_complex(cols, "qubit" + std::to_string(j + 1), sp.qubit[j], false);
    }
    return cols;
}

nlohmann::json spectrum_sidecar(const Spectrum& sp, const SidecarInfo& info)
{
    const CavityParams cav = sp.system.cavity();
    nlohmann::json j;
    j["format"] = "qdetect.spectrum";
    j["version"] = 1;
    j["kind"] = info.kind;
    j["label"] = info.label;
    j["units"] = {{"frequency", "rad/s"}, {"time", "s"}, {"flux", "1/s"}, {"csv_frequency", "Hz"}};

    nlohmann::json qubits = nlohmann::json::array();
    for (const auto& q : sp.system.qubits)
        qubits.push_back({{"omega_q", q.omega_q},
                          {"chi", q.chi},
                          {"gamma", q.gamma},
                          {"gamma_phi", q.gamma_phi},
                          {"gamma_prime", q.gamma_prime()}});
    j["system"] = {{"omega_c", sp.system.omega_c},
                   {"gamma_c", sp.system.gamma_c},
                   {"omega_c_star", cav.omega_c_star},
                   {"qubits", qubits}};
    j["signal"] = signal_json(sp.signal, cav);
    j["grid"] = {{"points", sp.omega_p.size()},
                 {"omega_start", sp.omega_p.empty() ? 0.0 : sp.omega_p.front()},
                 {"omega_stop", sp.omega_p.empty() ? 0.0 : sp.omega_p.back()}};

    nlohmann::json columns = nlohmann::json::array();
    for (const auto& c : spectrum_columns(sp))
        columns.push_back(c.name);
    j["columns"] = columns;
    j["files"] = {{"csv", info.csv_file.empty() ? nlohmann::json(nullptr) : nlohmann::json(info.csv_file)},
                  {"svg", info.svg_file.empty() ? nlohmann::json(nullptr) : nlohmann::json(info.svg_file)}};
    j["warnings"] = info.warnings;

    if (info.kind == "comb") {
        nlohmann::json lines = nlohmann::json::array();
        for (const auto& l : info.lines)
            lines.push_back({{"n", l.n}, {"weight", l.weight}, {"width", l.width}});
        j["lines"] = lines;
    }
    if (info.include_data) {
        nlohmann::json data;
        data["omega_p"] = sp.omega_p;
        std::vector<double> re, im;
        for (const auto& z : sp.s21) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        data["re_s21"] = re;
        data["im_s21"] = im;
        j["data"] = data;
    }
    return j;
}

std::string svg_plot(const std::vector<double>& x, const std::vector<Channel>& channels, const std::string& title)
{
    constexpr double W = 800, H = 480, left = 70, right = 20, top = 40, bottom = 50;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    if (x.size() < 2)
        throw Error("svg_plot: need at least two points");
    double ymin = INFINITY, ymax = -INFINITY;
    for (const auto& c : channels) {
        if (c.y.size() != x.size())
            throw Error("svg_plot: channel '" + c.name + "' has the wrong length");
        for (double v : c.y) {
            if (std::isfinite(v)) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
    }
    if (!(ymax > ymin)) {
        ymin = (std::isfinite(ymin) ? ymin : 0.0) - 1.0;
        ymax = ymin + 2.0;
    }
    const double xmin = x.front(), xmax = x.back();
    auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * (W - left - right); };
    auto py = [&](double v) { return H - bottom - (v - ymin) / (ymax - ymin) * (H - top - bottom); };

    fmt::memory_buffer b;
    auto out = std::back_inserter(b);
    fmt::format_to(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                   W, H, W, H);
    fmt::format_to(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    fmt::format_to(out, "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n", left, title);
    fmt::format_to(out,
                   "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left,
                   top, W - left - right, H - top - bottom);
    fmt::format_to(out, "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{:.6g}</text>\n", left,
                   H - bottom + 18, xmin / 1e9);
    fmt::format_to(out,
                   "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                   "text-anchor=\"end\">{:.6g}</text>\n",
                   W - right, H - bottom + 18, xmax / 1e9);
    fmt::format_to(out,
                   "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                   "text-anchor=\"middle\">probe frequency (GHz)</text>\n",
                   0.5 * (W + left - right), H - 12);
    fmt::format_to(out,
                   "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                   "text-anchor=\"end\">{:.4g}</text>\n",
                   left - 4, top + 10, ymax);
    fmt::format_to(out,
                   "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                   "text-anchor=\"end\">{:.4g}</text>\n",
                   left - 4, H - bottom, ymin);
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const char* color = colors[c % std::size(colors)];
        fmt::format_to(out, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" data-channel=\"{}\" points=\"",
                       color, channels[c].name);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double v = channels[c].y[i];
            if (std::isfinite(v))
                fmt::format_to(out, "{}{:.2f},{:.2f}", i ? " " : "", px(x[i]), py(v));
        }
        fmt::format_to(out, "\"/>\n");
        fmt::format_to(out, "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}</text>\n",
                       W - right - 90, top + 16 + 16 * c, color, channels[c].name);
    }
    fmt::format_to(out, "</svg>\n");
    return fmt::to_string(b);
}

std::vector<Channel> spectrum_channels(const Spectrum& sp, const std::vector<std::string>& which)
{
    std::vector<Channel> out;
    for (const auto& w : which) {
        Channel c{w + "_s21", {}};
        for (const auto& z : sp.s21) {
            if (w == "re")
                c.y.push_back(z.real());
            else if (w == "im")
                c.y.push_back(z.imag());
            else if (w == "abs")
                c.y.push_back(std::abs(z));
            else
                throw ConfigError("unknown plot channel '" + w + "' (re, im, abs)");
        }
        out.push_back(std::move(c));
    }
    return out;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f)
        throw IoError("write to '" + path + "' failed");
}

} // namespace qdetect::app
