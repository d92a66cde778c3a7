#pragma once

#include "qdetect/detector.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qdetect::app {

// 17 significant digits; round-trips every double.
std::string format_double(double x);

// Named columns of equal length written as CSV with a header row.
struct Column {
    std::string name;
    std::vector<double> values;
};
std::string csv_table(const std::vector<Column>& columns);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(const std::string& text);

// omega_p_hz, re_s21, im_s21, abs_s21; with components also the cavity and
// per-qubit parts (re_cavity, im_cavity, re_qubit1, im_qubit1, ...).
std::vector<Column> spectrum_columns(const Spectrum& sp);

// Sidecar echoing the resolved parameters in SI angular units. The sampled
// data is embedded only when include_data is set.
struct SidecarInfo {
    std::string kind = "spectrum"; // "spectrum" or "comb"
    std::string label;
    std::string csv_file;          // empty if not written
    std::string svg_file;
    bool include_data = false;
    std::vector<std::string> warnings;
    std::vector<CombLine> lines;   // comb only
};
nlohmann::json spectrum_sidecar(const Spectrum& sp, const SidecarInfo& info);

// Line plot with one polyline per channel, x in GHz.
struct Channel {
    std::string name;
    std::vector<double> y;
};
std::string svg_plot(const std::vector<double>& x, const std::vector<Channel>& channels, const std::string& title);
std::vector<Channel> spectrum_channels(const Spectrum& sp, const std::vector<std::string>& which);

// Writes the whole string or throws IoError.
void write_file(const std::string& path, const std::string& content);

} // namespace qdetect::app
