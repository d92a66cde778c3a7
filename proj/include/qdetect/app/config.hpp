#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

// Run configuration: "key = value unit" text files (JSON accepted too).
namespace qdetect::app {

// What a value measures, which fixes the accepted unit suffixes.
enum class Dim {
    Dimensionless,
    Frequency,     // Hz family, stored angular (x 2 pi); "rad/s" is taken as is
    Rate,          // plain events per second (photon flux): Hz family or 1/s, no 2 pi
    Time,          // s
    Length,        // m
    Capacitance,   // F
    CapPerLength,  // F/m
    Velocity,      // m/s
    Energy,        // J
};

// Parse "9 GHz", "2.5e-9 s", "1" into SI. Frequencies come back angular.
// A missing unit is an error unless the dimension is dimensionless or
// default_unit is given.
double parse_quantity(const std::string& text, Dim dim, const char* default_unit = nullptr);

struct Entry {
    std::string text;
    int line = 0; // 0 when the value did not come from a text file
};

// One block of key/value pairs. Reads are recorded so leftovers can be
// reported as unknown keys.
class Table {
public:
    void set(const std::string& key, Entry e);
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::optional<double> quantity(const std::string& key, Dim dim) const;
    double quantity(const std::string& key, Dim dim, double fallback) const;
    double require(const std::string& key, Dim dim) const;
    std::optional<std::string> text(const std::string& key) const;
    std::optional<int> integer(const std::string& key) const;
    std::optional<bool> boolean(const std::string& key) const;

    // ConfigError naming the first key nobody asked for.
    void check_consumed(const std::string& where) const;

    const std::map<std::string, Entry>& values() const { return values_; }

private:
    const Entry* find(const std::string& key) const;
    std::map<std::string, Entry> values_;
    mutable std::set<std::string> used_;
};

// Top-level table plus named sections; a section name may repeat ([qubit]).
struct Config {
    Table root;
    std::map<std::string, std::vector<Table>> sections;
    std::string origin = "<none>";

    const std::vector<Table>& section(const std::string& name) const;
    // At most one block of this name; nullptr if absent.
    const Table* single(const std::string& name) const;
    void check_consumed() const;
};

Config parse_config_text(const std::string& text, const std::string& origin = "<string>");
Config parse_config_json(const std::string& text, const std::string& origin = "<string>");
// Chooses the parser from the extension (.json) or a leading '{'.
Config load_config(const std::string& path);

} // namespace qdetect::app
