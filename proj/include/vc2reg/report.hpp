#pragma once

#include "vc2reg/core/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vc2reg {

// Report documents use nlohmann::json (std::map objects), so keys are always emitted sorted.
using Json = nlohmann::json;

// Every metric number is written as {"exact": "<p/q>", "decimal": <double>}; identifiers stay plain integers.
inline Json num(const Rational& r) {
    const double d = to_double(r);
    Json j;
    j["exact"] = to_string(r);
    // null when the double overflows or underflows to zero
    j["decimal"] = std::isfinite(d) && (d != 0 || r == 0) ? Json(d) : Json(nullptr);
    return j;
}
inline Json num(const BigInt& v) { return num(Rational(v)); }
inline Json num(std::size_t v) { return num(Rational(v)); }
inline Json num(int v) { return num(Rational(v)); }
inline Json num(long long v) { return num(Rational(v)); }

inline Rational num_value(const Json& j) { return parse_rational(j.at("exact").get<std::string>()); }

// Checks the numeric-pair convention everywhere in the tree and the presence of the top-level keys.
// Returns the list of problems, empty when the document is well formed.
inline std::vector<std::string> validate_report(const Json& doc) {
    std::vector<std::string> problems;
    for (const char* key : {"command", "parameters", "seed", "metrics"})
        if (!doc.is_object() || !doc.contains(key)) problems.push_back(std::string("missing top-level key '") + key + "'");
    auto walk = [&](auto&& self, const Json& j, const std::string& path) -> void {
        if (j.is_object()) {
            if (j.contains("exact")) {
                if (!j.contains("decimal")) problems.push_back(path + ": exact value without decimal");
                if (!j["exact"].is_string()) {
                    problems.push_back(path + ": exact value is not a string");
                } else {
                    try {
                        parse_rational(j["exact"].get<std::string>());
                    } catch (const std::exception&) {
                        problems.push_back(path + ": exact value does not parse");
                    }
                }
                if (j.contains("decimal") && !j["decimal"].is_number() && !j["decimal"].is_null())
                    problems.push_back(path + ": decimal is not a number");
                return;
            }
            for (auto it = j.begin(); it != j.end(); ++it) self(self, it.value(), path + "/" + it.key());
        } else if (j.is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i) self(self, j[i], path + "/" + std::to_string(i));
        } else if (j.is_number_float()) {
            problems.push_back(path + ": bare floating-point number");
        }
    };
    walk(walk, doc, "");
    return problems;
}

// Flattens a JSON table (array of flat objects) into CSV; numeric pairs become two columns.
inline std::string json_table_to_csv(const Json& rows) {
    std::vector<std::string> columns;
    auto add_col = [&](const std::string& c) {
        if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
    };
    auto flatten = [&](const Json& row) {
        std::vector<std::pair<std::string, std::string>> cells;
        for (auto it = row.begin(); it != row.end(); ++it) {
            const auto& v = it.value();
            if (v.is_object() && v.contains("exact")) {
                cells.push_back({it.key(), v["exact"].get<std::string>()});
                cells.push_back({it.key() + "_decimal", v["decimal"].dump()});
            } else if (v.is_string()) {
                cells.push_back({it.key(), v.get<std::string>()});
            } else {
                cells.push_back({it.key(), v.dump()});
            }
        }
        return cells;
    };
    std::vector<std::vector<std::pair<std::string, std::string>>> flat;
    for (const auto& r : rows) {
        flat.push_back(flatten(r));
        for (const auto& [k, _] : flat.back()) add_col(k);
    }
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << quote(columns[i]);
    out << "\n";
    for (const auto& cells : flat) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out << ",";
            for (const auto& [k, v] : cells)
                if (k == columns[i]) {
                    out << quote(v);
                    break;
                }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace vc2reg
