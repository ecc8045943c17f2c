#include "nogo/report.hpp"

#include <numbers>

#include "gtest/gtest.h"

using namespace nogo;

namespace {

Report sample_report() {
    Report r;
    r.command = "contrast";
    r.config = Json{{"state", Json::array({0.0, 0.0, 1.0})}, {"model", "deterministic"}};
    const ContrastReport c =
        inconsistency_report(state_from_bloch({0, 0, 1}), deterministic_model(hemisphere_assignment),
                             default_grid(), Budget::exact(), 1000);
    r.results = to_json(c);
    r.metadata = metadata_json(42, default_grid());
    return r;
}

} // namespace

TEST(EmitReport, QuantumValueRoundTripsExactly) {
    const std::string text = emit_report(sample_report(), Format::json);
    const Json parsed = Json::parse(text);
    const double q = parsed["results"]["quantum_value"].get<double>();
    EXPECT_NEAR(q, 4 * std::numbers::pi / 3, 1e-10);
    // Shortest round-trip formatting: reparsing the printed digits gives the same double.
    EXPECT_EQ(Json::parse(Json(q).dump()).get<double>(), q);
    EXPECT_NE(text.find("\"quantum_value\": 4.18879020478639"), std::string::npos);
    EXPECT_EQ(parsed["results"]["contradiction"], true);
    EXPECT_EQ(parsed["results"]["proposition_flags"]["BlochSphere"], "satisfied");
}

TEST(EmitReport, SchemaTopLevelKeysInOrder) {
    const Json parsed = Json::parse(emit_report(sample_report(), Format::json));
    std::vector<std::string> keys;
    for (auto it = parsed.begin(); it != parsed.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"command", "config", "results", "metadata"}));
    for (const char* k : {"quantum_value", "hv_value", "bounds", "bloch_norm_sq",
                          "proposition_flags", "errors_sigma"})
        EXPECT_TRUE(parsed["results"].contains(k)) << k;
    for (const char* k : {"seed", "rng_name", "grid", "version"})
        EXPECT_TRUE(parsed["metadata"].contains(k)) << k;
    EXPECT_EQ(parsed["metadata"]["rng_name"], kRngName);
}

TEST(EmitReport, EmptyResultsIsValidJson) {
    Report r;
    r.command = "verify-quantum";
    const Json parsed = Json::parse(emit_report(r, Format::json));
    EXPECT_TRUE(parsed["results"].is_object());
    EXPECT_TRUE(parsed["results"].empty());
}

TEST(EmitReport, ByteStable) {
    const Report r = sample_report();
    for (Format f : {Format::json, Format::csv, Format::text})
        EXPECT_EQ(emit_report(r, f), emit_report(sample_report(), f));
}

TEST(EmitReport, CsvFlattensResults) {
    const std::string csv = emit_report(sample_report(), Format::csv);
    EXPECT_EQ(csv.rfind("key,value\n", 0), 0u);
    EXPECT_NE(csv.find("results.quantum_value,4.18879020478639"), std::string::npos);
    EXPECT_NE(csv.find("results.proposition_flags.D,violated\n"), std::string::npos);
    EXPECT_NE(csv.find("config.state[2],1.0\n"), std::string::npos);
    EXPECT_NE(csv.find("results.verdict,propositions jointly inconsistent; gap ratio 3.000\n"),
              std::string::npos);
}

TEST(EmitReport, CsvQuotesFieldsWithCommas) {
    Report r;
    r.command = "x";
    r.results = Json{{"note", "a,b \"c\""}};
    const std::string csv = emit_report(r, Format::csv);
    EXPECT_NE(csv.find("results.note,\"a,b \"\"c\"\"\"\n"), std::string::npos) << csv;
}

TEST(EmitReport, TextIsAligned) {
    const std::string text = emit_report(sample_report(), Format::text);
    EXPECT_EQ(text.rfind("key ", 0), 0u);
    std::size_t value_col = std::string::npos;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string line = text.substr(pos, eol - pos);
        const std::size_t gap = line.find("  ");
        ASSERT_NE(gap, std::string::npos) << line;
        const std::size_t col = line.find_first_not_of(' ', gap);
        if (value_col == std::string::npos) value_col = col;
        EXPECT_EQ(col, value_col) << line;
        pos = eol + 1;
    }
}
