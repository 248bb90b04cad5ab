#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "bpc/runner/commands.hpp"
#include "bpc/runner/report_io.hpp"
#include "bpc/runner/verify.hpp"

using namespace bpc::runner;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& stem) {
    static int counter = 0;
    return fs::temp_directory_path() /
           (stem + "_" + std::to_string(++counter) + "_bpc_test");
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig small_bounds_config() {
    ExperimentConfig cfg = parse_config_text(R"({
        "p": [0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1],
        "z_values": [0, 1, 2],
        "seed": 42
    })");
    return cfg;
}

bool matches_type(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

// Minimal JSON-Schema walker covering what the shipped schemas use:
// type (incl. unions), required, properties, additionalProperties, items.
void validate_against_schema(const nlohmann::json& value, const nlohmann::json& schema,
                             const std::string& where) {
    if (schema.contains("type")) {
        const auto& t = schema.at("type");
        bool ok = false;
        if (t.is_string()) {
            ok = matches_type(value, t.get<std::string>());
        } else {
            for (const auto& tt : t) ok = ok || matches_type(value, tt.get<std::string>());
        }
        REQUIRE_MESSAGE(ok, where, ": type mismatch");
        if (value.is_null()) return;
    }
    if (value.is_object()) {
        if (schema.contains("required")) {
            for (const auto& req : schema.at("required")) {
                REQUIRE_MESSAGE(value.contains(req.get<std::string>()), where,
                                ": missing required key ", req.get<std::string>());
            }
        }
        if (schema.contains("properties")) {
            for (const auto& [key, sub] : schema.at("properties").items()) {
                if (value.contains(key)) {
                    validate_against_schema(value.at(key), sub, where + "." + key);
                }
            }
        }
        if (schema.contains("additionalProperties") &&
            schema.at("additionalProperties").is_object()) {
            for (const auto& [key, sub] : value.items()) {
                if (!schema.contains("properties") ||
                    !schema.at("properties").contains(key)) {
                    validate_against_schema(sub, schema.at("additionalProperties"),
                                            where + "." + key);
                }
            }
        }
    }
    if (value.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < value.size(); ++i) {
            validate_against_schema(value[i], schema.at("items"),
                                    where + "[" + std::to_string(i) + "]");
        }
    }
}

nlohmann::json load_schema(const std::string& name) {
    return nlohmann::json::parse(slurp(fs::path(BPC_DOCS_DIR) / name));
}

}  // namespace

TEST_CASE("config parsing: happy path and field diagnostics") {
    const ExperimentConfig cfg = parse_config_text(R"({
        "generator": {"distribution": "uniform", "n": 8, "a": 0.1, "b": 0.4},
        "instances": 3,
        "z_values": [0, 2],
        "mc_samples": 5000,
        "seed": 7,
        "threads": 2,
        "output_format": "json",
        "output_path": "x.json",
        "thm1_constants": {"c1": 1, "c2": 0, "c3": 1, "c4": 0}
    })");
    CHECK(cfg.generator->n == 8);
    CHECK(cfg.instances == 3);
    CHECK(cfg.z_values == std::vector<long long>{0, 2});
    CHECK(cfg.mc_samples == 5000);
    CHECK(cfg.seed == 7);
    CHECK(cfg.threads == 2);
    CHECK(cfg.output_format == OutputFormat::json);
    CHECK(cfg.thm1.has_value());

    CHECK_THROWS_WITH_AS(parse_config_text(R"({"p": [0.5], "z_values": []})"),
                         doctest::Contains("z_values"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"z_values": [0]})"),
                         doctest::Contains("'p' or 'generator'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"p": [1.5]})"),
                         doctest::Contains("outside (0, 1]"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"p": [0.5], "output_format": "xml"})"),
                         doctest::Contains("output_format"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("{\n  \"p\": [0.5,\n}"),
                         doctest::Contains("line"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("generators produce probabilities in (0, 1]") {
    ExperimentConfig cfg = parse_config_text(
        R"({"generator": {"distribution": "geometric-decay", "n": 12, "r": 0.5}})");
    const auto geo = generate_instance(cfg, 0);
    CHECK(geo.size() == 12);
    CHECK(geo[0] == doctest::Approx(0.5));
    CHECK(geo[11] == doctest::Approx(std::pow(0.5, 12)));

    cfg = parse_config_text(
        R"({"generator": {"distribution": "constant", "n": 4, "c": 0.25}})");
    for (double v : generate_instance(cfg, 0)) CHECK(v == 0.25);

    cfg = parse_config_text(
        R"({"generator": {"distribution": "uniform", "n": 64, "a": 0.2, "b": 0.3},
            "instances": 5, "seed": 9})");
    for (long long i = 0; i < 5; ++i) {
        for (double v : generate_instance(cfg, i)) {
            CHECK(v > 0.2);
            CHECK(v < 0.3);
        }
    }

    // the stratified sampler hits the exact sum-of-squares boundary regime
    const auto boundary = sample_mixed_instance(1, 4, 50);
    double s2 = 0.0;
    for (double v : boundary) s2 += v * v;
    CHECK(s2 == 1.0);
}

TEST_CASE("cmd_bounds: report shape, determinism, exit code") {
    ExperimentConfig cfg = small_bounds_config();
    const fs::path out = temp_file("bounds");
    cfg.output_path = out.string();

    std::ostringstream log;
    CHECK(cmd_bounds(cfg, log) == exit_ok);
    const std::string csv = slurp(out);
    CHECK(csv.starts_with(
        "instance_id,n,sum_p,sum_p2,z,nc1_value,nc1_applicable,nc2_value,"
        "nc2_applicable,nc3_value,nc3_applicable,nc4_value,nc4_applicable,"
        "nc5_stirling_value,nc5_stirling_applicable,nc5_combinatorial_value,"
        "nc5_combinatorial_applicable,nc6_value,nc6_applicable,nn1_value,"
        "nn1_applicable,nn4_value,nn4_applicable,bh_lower_value,bh_lower_applicable,"
        "bh_upper_value,bh_upper_applicable,thm1_large_value,thm1_large_applicable,"
        "thm1_small_value,thm1_small_applicable,exact_low,exact_high,q_tail,"
        "mc_point,mc_ci_low,mc_ci_high,sandwich_ok,agreement\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows

    CHECK(cmd_bounds(cfg, log) == exit_ok);
    CHECK(slurp(out) == csv);  // byte-identical rerun
    fs::remove(out);
}

TEST_CASE("cmd_bounds: inapplicable side conditions flag rows but do not fail") {
    ExperimentConfig cfg = parse_config_text(R"({
        "generator": {"distribution": "constant", "n": 10, "c": 0.5},
        "z_values": [0]
    })");
    const fs::path out = temp_file("bounds_flags");
    cfg.output_path = out.string();
    std::ostringstream log;
    CHECK(cmd_bounds(cfg, log) == exit_ok);  // sum p^2 = 2.5 > 1: flags only
    const std::string csv = slurp(out);
    const std::string row = csv.substr(csv.find('\n') + 1);
    // nc1_applicable and nc2_applicable are the 7th and 9th fields
    std::vector<std::string> fields;
    std::stringstream ss(row);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    CHECK(fields[6] == "false");
    CHECK(fields[8] == "false");
    fs::remove(out);
}

TEST_CASE("cmd_bounds: json output carries the documented structure") {
    ExperimentConfig cfg = small_bounds_config();
    cfg.output_format = OutputFormat::json;
    const fs::path out = temp_file("bounds_json");
    cfg.output_path = out.string();
    std::ostringstream log;
    REQUIRE(cmd_bounds(cfg, log) == exit_ok);

    const nlohmann::json doc = nlohmann::json::parse(slurp(out));
    CHECK(doc.at("schema") == "bpc-report-v1");
    CHECK(doc.at("command") == "bounds");
    CHECK(doc.at("seed") == 42);
    REQUIRE(doc.at("rows").is_array());
    REQUIRE(doc.at("rows").size() == 3);
    const auto& row = doc.at("rows")[0];
    for (const char* key : {"instance_id", "n", "sum_p", "sum_p2", "z", "bounds",
                            "exact", "q_tail", "mc", "sandwich_ok", "agreement"}) {
        CHECK(row.contains(key));
    }
    CHECK(row.at("mc").is_null());
    CHECK(row.at("sandwich_ok") == true);
    CHECK(row.at("bounds").contains("nc1"));
    CHECK(row.at("bounds").at("nc4").at("applicable") == true);
    CHECK(doc.at("summary").at("sandwich_failures") == 0);

    validate_against_schema(doc, load_schema("report.schema.json"), "report");
    fs::remove(out);
}

TEST_CASE("simulate json validates against the shipped schema; N=1 agrees") {
    ExperimentConfig cfg = parse_config_text(R"({
        "p": [0.3, 0.4], "z_values": [0], "mc_samples": 1,
        "output_format": "json"
    })");
    const fs::path out = temp_file("simulate_json");
    cfg.output_path = out.string();
    std::ostringstream log;
    // a single sample gives a wide interval; agreement is trivially true
    REQUIRE(cmd_simulate(cfg, log) == exit_ok);
    const nlohmann::json doc = nlohmann::json::parse(slurp(out));
    CHECK(doc.at("rows")[0].at("agreement") == true);
    CHECK(doc.at("rows")[0].at("bounds").is_null());
    validate_against_schema(doc, load_schema("report.schema.json"), "report");
    fs::remove(out);
}

TEST_CASE("cmd_simulate: agreement, determinism across runs and threads") {
    ExperimentConfig cfg = parse_config_text(R"({
        "p": [0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1],
        "z_values": [0, 1],
        "mc_samples": 40000,
        "seed": 11
    })");
    const fs::path out = temp_file("simulate");
    cfg.output_path = out.string();
    std::ostringstream log;

    cfg.threads = 1;
    REQUIRE(cmd_simulate(cfg, log) == exit_ok);
    const std::string first = slurp(out);

    REQUIRE(cmd_simulate(cfg, log) == exit_ok);
    CHECK(slurp(out) == first);

    cfg.threads = 8;
    REQUIRE(cmd_simulate(cfg, log) == exit_ok);
    CHECK(slurp(out) == first);

    CHECK(first.find("true") != std::string::npos);  // agreement column
    fs::remove(out);
}

TEST_CASE("unwritable output path maps to the I/O exit code") {
    ExperimentConfig cfg = small_bounds_config();
    cfg.output_path = "/nonexistent_dir_bpc/report.csv";
    std::ostringstream log;
    CHECK(cmd_bounds(cfg, log) == exit_io_error);
    CHECK(cmd_simulate(cfg, log) == exit_io_error);
    CHECK(cmd_verify(cfg, {}, log) == exit_io_error);
}

TEST_CASE("cmd_verify: clean sweep passes, corrupted constant trips nc2") {
    ExperimentConfig cfg = parse_config_text(R"({
        "generator": {"distribution": "mixed", "n": 12},
        "instances": 18,
        "z_values": [0, 1, 2, 3, 4],
        "seed": 5
    })");
    const fs::path out = temp_file("verify");
    cfg.output_path = out.string();
    std::ostringstream log;
    CHECK(cmd_verify(cfg, {}, log) == exit_ok);
    const std::string csv = slurp(out);
    CHECK(csv.starts_with("invariant,instances,checks,violations,worst_margin\n"));
    CHECK(csv.find("nc2_dominates_q") != std::string::npos);
    CHECK(csv.find("bh_bracket_contains_tv") != std::string::npos);

    VerifyOptions corrupt;
    corrupt.corrupt_nc2 = true;
    CHECK(cmd_verify(cfg, corrupt, log) == exit_invariant_violation);
    CHECK(log.str().find("nc2_dominates_q") != std::string::npos);
    fs::remove(out);
}

TEST_CASE("run_verify: adversarial instance at the sum-of-squares boundary") {
    ExperimentConfig cfg = parse_config_text(R"({
        "p": [0.5, 0.5, 0.5, 0.5],
        "z_values": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
    })");
    const VerifyOutcome out = run_verify(cfg, false);
    CHECK(out.ok);
    // sum p^2 = 1 exactly: nc1/nc2 must participate (condition is <=)
    for (const auto& s : out.stats) {
        if (s.name == "nc1_dominates_q" || s.name == "nc2_dominates_q") {
            CHECK(s.instances == 1);
            CHECK(s.violations == 0);
        }
    }
}

TEST_CASE("run_verify: default config outcome shape") {
    ExperimentConfig cfg = default_verify_config();
    cfg.instances = 24;  // keep the unit test quick; acceptance runs the full sweep
    const VerifyOutcome out = run_verify(cfg, false);
    CHECK(out.ok);
    CHECK(out.summary.violations == 0);
    CHECK(out.stats.size() == 16);
    for (const auto& s : out.stats) {
        CHECK(s.violations == 0);
        if (s.name == "nn1_dominates_q") CHECK(s.instances > 0);
        if (s.name == "nn4_dominates_q") CHECK(s.instances > 0);
        if (s.name == "nc3_dominates_q") CHECK(s.instances > 0);
    }
    CHECK(out.summary.nn1_tighter + out.summary.nc2_tighter > 0);
}

TEST_CASE("verify json report validates against the documented shape") {
    ExperimentConfig cfg = parse_config_text(R"({
        "generator": {"distribution": "mixed", "n": 10},
        "instances": 6,
        "z_values": [0, 1],
        "output_format": "json"
    })");
    const fs::path out = temp_file("verify_json");
    cfg.output_path = out.string();
    std::ostringstream log;
    REQUIRE(cmd_verify(cfg, {}, log) == exit_ok);
    const nlohmann::json doc = nlohmann::json::parse(slurp(out));
    CHECK(doc.at("schema") == "bpc-verify-v1");
    REQUIRE(doc.at("invariants").is_array());
    for (const auto& inv : doc.at("invariants")) {
        CHECK(inv.contains("name"));
        CHECK(inv.contains("checks"));
        CHECK(inv.contains("violations"));
        CHECK(inv.contains("worst_margin"));
    }
    CHECK(doc.at("summary").contains("violations"));
    validate_against_schema(doc, load_schema("verify.schema.json"), "verify");
    fs::remove(out);
}
