#pragma once

#include <json.hpp>

#include "c2/count.hpp"
#include "c2/denom.hpp"
#include "c2/graph.hpp"
#include "c2/identities.hpp"

// JSON report shapes for the CLI. Counts are rendered as decimal strings so
// no precision is lost; the schema string is versioned.
namespace c2 {

inline constexpr const char* json_schema = "c2tool/1";

inline nlohmann::json to_json(const CountResult& c) {
    return {{"q", c.q}, {"count", c.count.str()}, {"ambient", c.ambient}};
}

inline nlohmann::json to_json(const C2Report& rep) {
    nlohmann::json entries = nlohmann::json::array();
    for (auto& e : rep.entries)
        entries.push_back({{"q", e.q}, {"count", e.count.str()}, {"residue", e.residue}});
    nlohmann::json j{{"schema", json_schema}, {"method", rep.method}, {"entries", entries}};
    if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
    return j;
}

inline nlohmann::json to_json(const DenomTrace& tr) {
    nlohmann::json steps = nlohmann::json::array();
    for (auto& s : tr.steps) {
        nlohmann::json step{{"n", s.n}, {"poly", s.d.to_string()}};
        if (s.factorization)
            step["factorization"] = {s.factorization->first.to_string(), s.factorization->second.to_string()};
        if (s.linear_convention) step["linear_convention"] = true;
        if (s.variable_absent) step["variable_absent"] = true;
        if (!s.convention_validated) step["convention_validated"] = false;
        steps.push_back(std::move(step));
    }
    nlohmann::json j{{"schema", json_schema},
                     {"order", tr.order},
                     {"steps", steps},
                     {"status", to_string(tr.status)}};
    if (!tr.note.empty()) j["note"] = tr.note;
    return j;
}

inline nlohmann::json to_json(const CheckResult& c) {
    nlohmann::json j{{"name", c.name}, {"verdict", to_string(c.verdict)}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

inline nlohmann::json to_json(const std::vector<CheckResult>& cs) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& c : cs) arr.push_back(to_json(c));
    return {{"schema", json_schema}, {"checks", arr}};
}

} // namespace c2
