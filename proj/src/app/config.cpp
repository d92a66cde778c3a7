#include "qdetect/app/config.hpp"

#include "qdetect/constants.hpp"
#include "qdetect/error.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace qdetect::app {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct UnitDef {
    const char* name;
    double factor;
};

// Scale factors to SI. Frequency factors are in Hz; the 2 pi is applied later.
const std::vector<UnitDef>& units_for(Dim dim)
{
    static const std::vector<UnitDef> none{{"1", 1.0}};
    static const std::vector<UnitDef> freq{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}};
    static const std::vector<UnitDef> rate{{"Hz", 1.0},  {"kHz", 1e3}, {"MHz", 1e6},
                                           {"GHz", 1e9}, {"1/s", 1.0}, {"/s", 1.0}};
    static const std::vector<UnitDef> time{{"s", 1.0},    {"ms", 1e-3},  {"us", 1e-6},
                                           {"ns", 1e-9},  {"ps", 1e-12}, {"fs", 1e-15}};
    static const std::vector<UnitDef> length{{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
    static const std::vector<UnitDef> cap{{"F", 1.0}, {"uF", 1e-6}, {"nF", 1e-9}, {"pF", 1e-12}, {"fF", 1e-15}, {"aF", 1e-18}};
    static const std::vector<UnitDef> cap_len{{"F/m", 1.0}, {"nF/m", 1e-9}, {"pF/m", 1e-12}};
    static const std::vector<UnitDef> vel{{"m/s", 1.0}};
    static const std::vector<UnitDef> energy{{"J", 1.0}, {"eV", si::e_charge}, {"meV", 1e-3 * si::e_charge},
                                             {"ueV", 1e-6 * si::e_charge}};
    switch (dim) {
    case Dim::Dimensionless: return none;
    case Dim::Frequency: return freq;
    case Dim::Rate: return rate;
    case Dim::Time: return time;
    case Dim::Length: return length;
    case Dim::Capacitance: return cap;
    case Dim::CapPerLength: return cap_len;
    case Dim::Velocity: return vel;
    case Dim::Energy: return energy;
    }
    return none;
}

const char* dim_name(Dim dim)
{
    switch (dim) {
    case Dim::Dimensionless: return "dimensionless";
    case Dim::Frequency: return "frequency";
    case Dim::Rate: return "rate";
    case Dim::Time: return "time";
    case Dim::Length: return "length";
    case Dim::Capacitance: return "capacitance";
    case Dim::CapPerLength: return "capacitance per length";
    case Dim::Velocity: return "velocity";
    case Dim::Energy: return "energy";
    }
    return "?";
}

std::string with_line(const std::string& msg, const Entry& e)
{
    return e.line > 0 ? msg + " (line " + std::to_string(e.line) + ")" : msg;
}

// The micro sign is accepted as a spelling of "u".
std::string normalize_unit(std::string u)
{
    const std::string micro = "\xC2\xB5";
    if (u.rfind(micro, 0) == 0)
        u = "u" + u.substr(micro.size());
    return u;
}

} // namespace

double parse_quantity(const std::string& text_in, Dim dim, const char* default_unit)
{
    const std::string text = trim(text_in);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first)
        throw ConfigError("expected a number in '" + text + "'");
    if (!std::isfinite(value))
        throw ConfigError("non-finite value '" + text + "'");
    std::string unit = normalize_unit(trim(std::string(ptr, last)));
    if (unit.empty()) {
        if (dim == Dim::Dimensionless)
            return value;
        if (!default_unit)
            throw ConfigError("'" + text + "' needs a " + dim_name(dim) + " unit");
        unit = default_unit;
    }
    if (dim == Dim::Frequency && unit == "rad/s")
        return value;
    for (const auto& u : units_for(dim)) {
        if (unit == u.name) {
            const double si_value = value * u.factor;
            return dim == Dim::Frequency ? si::two_pi * si_value : si_value;
        }
    }
    throw ConfigError("unit '" + unit + "' is not a " + std::string(dim_name(dim)) + " unit");
}

void Table::set(const std::string& key, Entry e)
{
    if (values_.count(key))
        throw ConfigError(with_line("duplicate key '" + key + "'", e));
    values_.emplace(key, std::move(e));
}

const Entry* Table::find(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        return nullptr;
    used_.insert(key);
    return &it->second;
}

std::optional<double> Table::quantity(const std::string& key, Dim dim) const
{
    const Entry* e = find(key);
    if (!e)
        return std::nullopt;
    try {
        return parse_quantity(e->text, dim);
    } catch (const ConfigError& err) {
        throw ConfigError(with_line(key + ": " + err.what(), *e));
    }
}

double Table::quantity(const std::string& key, Dim dim, double fallback) const
{
    return quantity(key, dim).value_or(fallback);
}

double Table::require(const std::string& key, Dim dim) const
{
    auto v = quantity(key, dim);
    if (!v)
        throw ConfigError("missing required key '" + key + "'");
    return *v;
}

std::optional<std::string> Table::text(const std::string& key) const
{
    const Entry* e = find(key);
    if (!e)
        return std::nullopt;
    return e->text;
}

std::optional<int> Table::integer(const std::string& key) const
{
    const Entry* e = find(key);
    if (!e)
        return std::nullopt;
    const std::string t = trim(e->text);
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(with_line(key + ": expected an integer, got '" + t + "'", *e));
    return v;
}

std::optional<bool> Table::boolean(const std::string& key) const
{
    const Entry* e = find(key);
    if (!e)
        return std::nullopt;
    const std::string t = trim(e->text);
    if (t == "true" || t == "yes" || t == "on" || t == "1")
        return true;
    if (t == "false" || t == "no" || t == "off" || t == "0")
        return false;
    throw ConfigError(with_line(key + ": expected true/false, got '" + t + "'", *e));
}

void Table::check_consumed(const std::string& where) const
{
    for (const auto& [key, e] : values_)
        if (!used_.count(key))
            throw ConfigError(with_line("unknown key '" + key + "' in " + where, e));
}

const std::vector<Table>& Config::section(const std::string& name) const
{
    static const std::vector<Table> empty;
    auto it = sections.find(name);
    return it == sections.end() ? empty : it->second;
}

const Table* Config::single(const std::string& name) const
{
    const auto& s = section(name);
    if (s.size() > 1)
        throw ConfigError("section [" + name + "] may appear only once in " + origin);
    return s.empty() ? nullptr : &s.front();
}

void Config::check_consumed() const
{
    root.check_consumed(origin);
    for (const auto& [name, blocks] : sections)
        for (const auto& t : blocks)
            t.check_consumed("[" + name + "] of " + origin);
}

Config parse_config_text(const std::string& text, const std::string& origin)
{
    Config cfg;
    cfg.origin = origin;
    Table* current = &cfg.root;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + ": unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty())
                throw ConfigError(where + ": empty section name");
            auto& blocks = cfg.sections[name];
            blocks.emplace_back();
            current = &blocks.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(where + ": empty key or value");
        try {
            current->set(key, {value, line_no});
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ": " + e.what());
        }
    }
    return cfg;
}

namespace {

std::string scalar_text(const nlohmann::json& v, const std::string& key)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_number()) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v.get<double>());
        return std::string(buf, ptr);
    }
    throw ConfigError("key '" + key + "': expected a string, number or boolean");
}

void fill_table(Table& t, const nlohmann::json& obj, const std::string& where)
{
    for (const auto& [key, v] : obj.items()) {
        if (v.is_object() || v.is_array())
            throw ConfigError(where + ": nested value for '" + key + "' is not allowed here");
        t.set(key, {scalar_text(v, key), 0});
    }
}

} // namespace

Config parse_config_json(const std::string& text, const std::string& origin)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError(origin + ": top level must be an object");
    Config cfg;
    cfg.origin = origin;
    for (const auto& [key, v] : doc.items()) {
        if (v.is_object()) {
            fill_table(cfg.sections[key].emplace_back(), v, origin);
        } else if (v.is_array()) {
            for (const auto& item : v) {
                if (!item.is_object())
                    throw ConfigError(origin + ": array '" + key + "' must hold objects");
                fill_table(cfg.sections[key].emplace_back(), item, origin);
            }
        } else {
            cfg.root.set(key, {scalar_text(v, key), 0});
        }
    }
    return cfg;
}

Config load_config(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    const bool json = (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) ||
                      trim(text).rfind('{', 0) == 0;
    return json ? parse_config_json(text, path) : parse_config_text(text, path);
}

} // namespace qdetect::app
