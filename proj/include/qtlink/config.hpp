#pragma once

#include "qtlink/archetypes.hpp"
#include "qtlink/montecarlo.hpp"
#include "qtlink/transducer.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qtlink {

// Flat key-value configuration file.
//
// Grammar, one entry per line:
//   key = value        keys match [a-z0-9_]+; values run to end of line
//   # comment          blank lines and full-line comments are ignored
// Duplicate keys are an error. Flags given on the command line win over
// file values.
class ConfigFile {
public:
    ConfigFile() = default;

    static ConfigFile parse(std::istream& in) {
        ConfigFile config;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::string trimmed = trim(line);
            if (trimmed.empty() || trimmed[0] == '#') continue;
            auto eq = trimmed.find('=');
            if (eq == std::string::npos) {
                throw std::runtime_error("config line " + std::to_string(line_no) + ": expected 'key = value'");
            }
            std::string key = trim(trimmed.substr(0, eq));
            std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty() || value.empty()) {
                throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key or value");
            }
            for (char c : key) {
                if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
                      c == '_')) {
                    throw std::runtime_error("config line " + std::to_string(line_no) + ": bad key '" + key + "'");
                }
            }
            if (!config.values_.emplace(key, value).second) {
                throw std::runtime_error("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
            }
        }
        return config;
    }

    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::optional<std::string> get_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<double> get_double(const std::string& key) const {
        auto raw = get_string(key);
        if (!raw) return std::nullopt;
        std::size_t used = 0;
        double value = std::stod(*raw, &used);
        if (used != raw->size()) throw std::runtime_error("config key '" + key + "': not a number: " + *raw);
        return value;
    }

    std::optional<std::uint64_t> get_u64(const std::string& key) const {
        auto raw = get_string(key);
        if (!raw) return std::nullopt;
        std::size_t used = 0;
        unsigned long long value = std::stoull(*raw, &used);
        if (used != raw->size()) throw std::runtime_error("config key '" + key + "': not an integer: " + *raw);
        return static_cast<std::uint64_t>(value);
    }

    std::optional<bool> get_bool(const std::string& key) const {
        auto raw = get_string(key);
        if (!raw) return std::nullopt;
        if (*raw == "true" || *raw == "1") return true;
        if (*raw == "false" || *raw == "0") return false;
        throw std::runtime_error("config key '" + key + "': expected true/false: " + *raw);
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    static std::string trim(const std::string& s) {
        std::size_t begin = 0, end = s.size();
        while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
        while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
        return s.substr(begin, end - begin);
    }

    std::map<std::string, std::string> values_;
};

// Shared transducer parameters from the config keys g0_hz, pump_photons,
// kappa_o_hz, kappa_m_hz, kappa_oe_hz, kappa_me_hz. Present only when all
// six keys are.
inline std::optional<TransducerParams> transducer_from_config(const ConfigFile& config) {
    const char* keys[] = {"g0_hz", "pump_photons", "kappa_o_hz", "kappa_m_hz", "kappa_oe_hz", "kappa_me_hz"};
    bool any = false, all = true;
    for (const char* key : keys) {
        if (config.has(key)) any = true;
        else all = false;
    }
    if (!any) return std::nullopt;
    if (!all) throw std::runtime_error("transducer parameters need all six kappa/g0/pump keys");
    TransducerParams p;
    p.g0_hz = *config.get_double("g0_hz");
    p.pump_photons = *config.get_double("pump_photons");
    p.kappa_o_hz = *config.get_double("kappa_o_hz");
    p.kappa_m_hz = *config.get_double("kappa_m_hz");
    p.kappa_oe_hz = *config.get_double("kappa_oe_hz");
    p.kappa_me_hz = *config.get_double("kappa_me_hz");
    p.validate();
    return p;
}

// Efficiency for one conversion role. Priority: the role-specific key
// (eta_up_source, eta_down_destination, eta_up_destination), then the
// generic eta override, then Eq.-(4)-style evaluation of the transducer
// parameter block.
inline std::optional<Efficiency> efficiency_from_config(const ConfigFile& config, const std::string& role_key) {
    if (auto direct = config.get_double(role_key)) return Efficiency(*direct);
    if (auto generic = config.get_double("eta")) return Efficiency(*generic);
    if (auto params = transducer_from_config(config)) return conversion_efficiency(*params);
    return std::nullopt;
}

inline std::optional<Archetype> archetype_from_string(const std::string& name) {
    if (name == "edqt") return Archetype::EDqt;
    if (name == "egt-dqt") return Archetype::EgtWithDqt;
    if (name == "egt-swap") return Archetype::EgtWithSwapping;
    return std::nullopt;
}

inline std::optional<DetectorKind> detector_from_string(const std::string& name) {
    if (name == "pnrd") return DetectorKind::Pnrd;
    if (name == "spd") return DetectorKind::Spd;
    return std::nullopt;
}

inline FiberLink fiber_from_config(const ConfigFile& config) {
    double length = config.get_double("fiber_length_km").value_or(0.0);
    double attenuation = config.get_double("attenuation_db_per_km").value_or(0.2);
    return FiberLink(length, attenuation);
}

} // namespace qtlink
