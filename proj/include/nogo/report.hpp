// report.hpp
// Machine-readable reports: JSON (canonical), flattened CSV and an aligned
// text table. Output is byte-stable for fixed inputs.

#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nogo/hv_models.hpp"
#include "nogo/nogo.hpp"
#include "nogo/sphere_quad.hpp"

namespace nogo {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

enum class Format { json, csv, text };

struct Report {
    std::string command;
    Json config = Json::object();
    Json results = Json::object();
    Json metadata = Json::object();
};

inline Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

inline Json to_json(const BlochReport& b) {
    return Json{{"bloch_vector", vec_json(b.bloch_vector)},
                {"bloch_norm_sq", b.bloch_norm_sq},
                {"purity", b.purity},
                {"passed", b.passed},
                {"saturated", b.saturated}};
}

inline Json to_json(const SpectrumSupportReport& s) {
    Json j{{"evaluations", s.evaluations}, {"violations", s.violations}, {"passed", s.passed()}};
    j["first_violation"] = s.first_violation ? Json(*s.first_violation) : Json(nullptr);
    return j;
}

inline Json to_json(const DistributionRuleReport& d) {
    return Json{{"theta", d.theta},       {"phi", d.phi},
                {"preimage_measure", d.preimage_measure},
                {"born", d.born},         {"deviation", d.deviation},
                {"tolerance", d.tolerance}, {"samples", d.samples},
                {"passed", d.passed}};
}

inline Json to_json(const LemmaReport& l) {
    return Json{{"eigenvalues", l.eigenvalues},
                {"preimage_measures", l.preimage_measures},
                {"born", l.born},
                {"partition_sum", l.partition_sum},
                {"point_sum", l.point_sum},
                {"trace_value", l.trace_value},
                {"preimages_disjoint", l.preimages_disjoint},
                {"rearrangement_holds", l.rearrangement_holds},
                {"distribution_rule_holds", l.distribution_rule_holds},
                {"trace_matches", l.trace_matches},
                {"passed", l.passed()}};
}

inline Json flags_json(const std::map<Proposition, PropositionFlag>& flags) {
    Json j = Json::object();
    for (const auto& [p, f] : flags) j[to_string(p)] = to_string(f);
    return j;
}

inline Json to_json(const ContrastReport& r) {
    Json j;
    j["model"] = r.model_label;
    j["model_state_dependence"] = r.model_state_dependence;
    j["quantum_value"] = r.quantum_value;
    j["hv_value"] = r.hv_value;
    j["bounds"] = Json{{"quantum", r.quantum_bound}, {"hv", r.hv_bound}};
    j["bloch_norm_sq"] = r.bloch_norm_sq;
    j["proposition_flags"] = flags_json(r.proposition_flags);
    j["errors_sigma"] = Json{{"hv_std_error", r.hv_std_error},
                             {"hv_band_2sigma", 2.0 * r.hv_std_error},
                             {"hv_band_4sigma", 4.0 * r.hv_std_error}};
    j["pure_state"] = r.pure_state;
    j["quantum_attains_max"] = r.quantum_attains_max;
    j["hv_attains_max"] = r.hv_attains_max;
    j["gap_ratio"] = r.gap_ratio ? Json(*r.gap_ratio) : Json(nullptr);
    j["contradiction"] = r.contradiction;
    j["distribution_rule"] = Json{{"checks", r.distribution_checks},
                                  {"failures", r.distribution_failures},
                                  {"max_deviation", r.distribution_max_deviation}};
    j["spectrum_support"] = to_json(r.spectrum);
    j["bloch"] = to_json(r.bloch);
    j["warnings"] = r.warnings;
    j["verdict"] = r.verdict;
    return j;
}

inline Json grid_json(const SphericalGrid& grid) {
    return Json{{"n_polar", grid.n_polar()}, {"n_azimuthal", grid.n_azimuthal()}};
}

inline Json metadata_json(std::uint64_t seed, const SphericalGrid& grid) {
    return Json{{"seed", seed}, {"rng_name", kRngName}, {"grid", grid_json(grid)}, {"version", kVersion}};
}

namespace detail {

// Depth-first (path, scalar) pairs; arrays are indexed, objects dotted.
inline void flatten(const Json& j, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

} // namespace detail

inline std::string emit_report(const Report& report, Format format) {
    Json doc;
    doc["command"] = report.command;
    doc["config"] = report.config;
    doc["results"] = report.results;
    doc["metadata"] = report.metadata;

    if (format == Format::json) return doc.dump(2) + "\n";

    std::vector<std::pair<std::string, std::string>> rows;
    detail::flatten(doc, "", rows);
    std::string out;
    if (format == Format::csv) {
        out = "key,value\n";
        for (const auto& [k, v] : rows) out += detail::csv_field(k) + "," + detail::csv_field(v) + "\n";
        return out;
    }
    std::size_t width = 3;
    for (const auto& row : rows) width = std::max(width, row.first.size());
    const auto line = [&](const std::string& k, const std::string& v) {
        out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
    };
    line("key", "value");
    line(std::string(width, '-'), "-----");
    for (const auto& [k, v] : rows) line(k, v);
    return out;
}

} // namespace nogo
