#pragma once

// Machine-readable output: JSON objects with decimal-string values (safe for
// arbitrary precision), RFC 4180 CSV, and the certificate file layout.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dioph/enumeration.hpp"

namespace dioph {

using ordered_json = nlohmann::ordered_json;

inline constexpr std::string_view tool_version = "0.1.0";

inline ordered_json to_json(std::span<const NamedValue> fields) {
    ordered_json j = ordered_json::object();
    for (const auto& f : fields) j[f.name] = f.value.str();
    return j;
}

/// {"x":"..","y":"..",...} keyed by the equation's field names.
inline ordered_json solution_json(Equation eq, const Tuple& t) {
    ordered_json j = ordered_json::object();
    const auto names = field_names(eq);
    for (std::size_t i = 0; i < t.size(); ++i) j[std::string(names[i])] = t[i].str();
    return j;
}

inline ordered_json trace_json(const ExtractionTrace& trace) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : trace.entries()) {
        arr.push_back(ordered_json{{"symbol", e.name}, {"value", e.value.str()}});
    }
    return arr;
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += csv_field(cells[i]);
    }
    line += "\n";
    return line;
}

inline std::string csv_header(std::span<const std::string_view> names) {
    return csv_row(std::vector<std::string>(names.begin(), names.end()));
}

inline std::string csv_solution(const Tuple& t) {
    std::vector<std::string> cells;
    cells.reserve(t.size());
    for (const Nat& v : t) cells.push_back(v.str());
    return csv_row(cells);
}

/// Certificate as JSON with a fixed key order; first_discrepancy only when present.
inline ordered_json certificate_json(const Certificate& c) {
    ordered_json j = ordered_json::object();
    j["equation"] = std::string(to_string(c.equation));
    j["bound"] = c.bound.str();
    j["bound_kind"] = std::string(to_string(c.bound_kind));
    j["method_a"] = c.method_a;
    j["method_b"] = c.method_b;
    j["count_a"] = std::to_string(c.count_a);
    j["count_b"] = std::to_string(c.count_b);
    j["digest"] = c.digest;
    j["status"] = std::string(to_string(c.status));
    if (c.first_discrepancy) j["first_discrepancy"] = solution_json(c.equation, *c.first_discrepancy);
    j["tool_version"] = std::string(tool_version);
    return j;
}

} // namespace dioph
