#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "levelea/levels.hpp"

namespace levelea {

/// Sectioned key = value configuration text. '#' and ';' start comments,
/// whitespace around keys and values is trimmed.
class IniConfig {
public:
    static IniConfig parse(const std::string& text) {
        IniConfig cfg;
        std::istringstream in(text);
        std::string line, section;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw std::invalid_argument("config line " + std::to_string(line_no) +
                                                ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": expected key = value");
            cfg.values_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        return cfg;
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = values_.find(section);
        return s != values_.end() && s->second.count(key) > 0;
    }

    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback = "") const {
        const auto s = values_.find(section);
        if (s == values_.end()) return fallback;
        const auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    }

    std::string require(const std::string& section, const std::string& key) const {
        if (!has(section, key))
            throw std::invalid_argument("config: missing [" + section + "] " + key);
        return get(section, key);
    }

    long long get_int(const std::string& section, const std::string& key, long long fallback) const {
        return has(section, key) ? std::stoll(get(section, key)) : fallback;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        return has(section, key) ? std::stod(get(section, key)) : fallback;
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        if (!has(section, key)) return fallback;
        const auto v = get(section, key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw std::invalid_argument("config: bad boolean [" + section + "] " + key + " = " + v);
    }

    std::vector<std::string> get_list(const std::string& section, const std::string& key) const {
        std::vector<std::string> out;
        std::istringstream in(get(section, key));
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    std::vector<int> get_int_list(const std::string& section, const std::string& key) const {
        std::vector<int> out;
        for (const auto& item : get_list(section, key)) out.push_back(std::stoi(item));
        return out;
    }

    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos) return "";
        const auto end = s.find_last_not_of(" \t\r\n");
        return s.substr(begin, end - begin + 1);
    }

private:
    std::map<std::string, std::map<std::string, std::string>> values_;
};

inline BoundMatrix bound_matrix_from_config(const IniConfig& cfg,
                                            const std::string& section = "matrix") {
    const int m = static_cast<int>(cfg.get_int(section, "m", -1));
    if (m < 1) throw std::invalid_argument("bound_matrix_from_config: missing dimension");
    const auto kind_text = cfg.get(section, "kind", "lower");
    BoundKind kind = BoundKind::Lower;
    if (kind_text == "upper") kind = BoundKind::Upper;
    else if (kind_text == "exact") kind = BoundKind::Exact;
    else if (kind_text != "lower")
        throw std::invalid_argument("bound_matrix_from_config: unknown kind " + kind_text);
    BoundMatrix mat(m, kind, cfg.get_double(section, "tol", 0.0));
    for (int i = 0; i <= m; ++i) {
        const auto cells = cfg.get_list(section, "row" + std::to_string(i));
        if (static_cast<int>(cells.size()) != m)
            throw std::invalid_argument("bound_matrix_from_config: row" + std::to_string(i) +
                                        " needs " + std::to_string(m) + " entries");
        for (int j = 1; j <= m; ++j) mat.at(i, j) = std::stod(cells[j - 1]);
    }
    mat.validate();
    return mat;
}

inline PopulationVector population_vector_from_config(const IniConfig& cfg,
                                                      const std::string& section = "population") {
    PopulationVector pv;
    if (cfg.get(section, "resolution", "expected") == "exact")
        pv.lambda = static_cast<int>(cfg.get_int(section, "lambda", 1));
    for (const auto& cell : cfg.get_list(section, "z")) pv.z.push_back(std::stod(cell));
    if (pv.z.empty()) throw std::invalid_argument("population_vector_from_config: missing z");
    pv.validate();
    return pv;
}

/// "name:key1=v1,key2=v2" -> (name, {key: value}).
inline std::pair<std::string, std::map<std::string, double>> parse_preset_string(
    const std::string& text) {
    const auto colon = text.find(':');
    std::pair<std::string, std::map<std::string, double>> out;
    out.first = IniConfig::trim(colon == std::string::npos ? text : text.substr(0, colon));
    if (colon == std::string::npos) return out;
    std::istringstream in(text.substr(colon + 1));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = IniConfig::trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("preset '" + text + "': expected key=value pairs");
        out.second[IniConfig::trim(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
    }
    return out;
}

}  // namespace levelea
