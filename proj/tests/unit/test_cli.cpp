#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "../../src/cli/run.hpp"

using namespace stheat;
using namespace stheat::cli;
using nlohmann::json;

namespace {

std::filesystem::path temp_file(const std::string& stem) {
    return std::filesystem::temp_directory_path() / ("stheat_test_" + stem);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunConfig small_config() {
    RunConfig cfg;
    cfg.nus = {1.0};
    cfg.h_cells = {5};
    cfg.k_cells = {40};
    return cfg;
}

}  // namespace

TEST_CASE("display precision rules") {
    CHECK(display_value(0.3014928440610985, false) == "0.3015");
    CHECK(display_value(0.3014928440610985, true) == "0.3015");
    CHECK(display_value(12.345678, false) == "12.3457");
    CHECK(display_value(12.345678, true) == "12.35");
    CHECK(display_value(9.99994, true) == "9.9999");
    CHECK(display_value(10.0, true) == "10.00");
}

TEST_CASE("full precision round-trips") {
    for (double v : {0.3014928440610985, 1.0 / 3.0, 58.032193371421599, 1e-12, 0.0}) {
        const std::string s = full_precision(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("markdown renderer shape") {
    TextTable t;
    t.header = {"a", "bb"};
    t.rows = {{"1", "2"}, {"3", "4"}};
    const std::string md = render_markdown(t);
    CHECK(md.find("| a") != std::string::npos);
    CHECK(md.find("---") != std::string::npos);
    const std::string csv = render_csv(t);
    CHECK(csv.rfind("a,bb\n", 0) == 0);
}

TEST_CASE("table command emits the frozen eta value as JSON") {
    RunConfig cfg = small_config();
    cfg.format = OutputFormat::json;
    const auto path = temp_file("table_eta.json");
    cfg.out_path = path.string();

    REQUIRE(cmd_table(cfg, TableKind::eta) == 0);
    const json doc = json::parse(slurp(path));
    REQUIRE(doc.contains("cells"));
    REQUIRE(doc["cells"].size() == 1);
    const auto& cell = doc["cells"][0];
    CHECK(cell["nu"].get<double>() == 1.0);
    CHECK(cell["h_cells"].get<int>() == 5);
    CHECK(cell["k_cells"].get<int>() == 40);
    CHECK(cell["eta"]["value"].get<double>() ==
          doctest::Approx(0.3014928440610985).epsilon(1e-9));
    std::filesystem::remove(path);
}

TEST_CASE("csv and json table payloads agree at full precision") {
    RunConfig cfg = small_config();
    cfg.k_cells = {40, 80};

    const auto jpath = temp_file("payload.json");
    cfg.format = OutputFormat::json;
    cfg.out_path = jpath.string();
    REQUIRE(cmd_table(cfg, TableKind::gamma) == 0);
    const json doc = json::parse(slurp(jpath));

    const auto cpath = temp_file("payload.csv");
    cfg.format = OutputFormat::csv;
    cfg.out_path = cpath.string();
    REQUIRE(cmd_table(cfg, TableKind::gamma) == 0);
    const std::string csv = slurp(cpath);

    // every JSON value must appear verbatim in the CSV text
    for (const auto& cell : doc["cells"])
        for (const char* q : {"gamma1", "gamma0", "gammaT"}) {
            const std::string printed = full_precision(cell[q]["value"].get<double>());
            CHECK(csv.find(printed) != std::string::npos);
        }
    std::filesystem::remove(jpath);
    std::filesystem::remove(cpath);
}

TEST_CASE("constants command reports the corrected constants") {
    RunConfig cfg = small_config();
    cfg.format = OutputFormat::json;
    const auto path = temp_file("constants.json");
    cfg.out_path = path.string();

    REQUIRE(cmd_constants(cfg) == 0);
    const json doc = json::parse(slurp(path));
    REQUIRE(doc.contains("C1_tilde"));
    CHECK(doc["C1_tilde"]["value"].get<double>() == doctest::Approx(0.49093).epsilon(1e-4));
    CHECK(doc["c0_tilde"]["value"].get<double>() == doctest::Approx(0.27753).epsilon(1e-4));
    CHECK(doc["eta"]["value"].get<double>() ==
          doctest::Approx(0.3014928440610985).epsilon(1e-9));
    REQUIRE(doc.contains("bounds"));
    CHECK(doc["bounds"].size() == 4);
    std::filesystem::remove(path);
}

TEST_CASE("constants command rejects sweep configurations") {
    RunConfig cfg = small_config();
    cfg.k_cells = {40, 80};
    cfg.format = OutputFormat::json;
    const auto path = temp_file("constants_sweep.json");
    cfg.out_path = path.string();
    CHECK(cmd_constants(cfg) == 1);
    std::filesystem::remove(path);
}

TEST_CASE("validate command accepts a verified case") {
    RunConfig cfg;
    cfg.nus = {1.0};
    cfg.h_cells = {8};
    cfg.k_cells = {16};
    cfg.case_label = "u2";
    cfg.format = OutputFormat::json;
    const auto path = temp_file("validate.json");
    cfg.out_path = path.string();

    REQUIRE(cmd_validate(cfg) == 0);
    const json doc = json::parse(slurp(path));
    CHECK(doc["all_ok"].get<bool>());
    REQUIRE(doc.contains("checks"));
    CHECK(doc["checks"].size() >= 5);
    for (const auto& c : doc["checks"]) CHECK(c["ok"].get<bool>());
    std::filesystem::remove(path);
}

TEST_CASE("parse_format") {
    CHECK(parse_format("markdown") == OutputFormat::markdown);
    CHECK(parse_format("csv") == OutputFormat::csv);
    CHECK(parse_format("json") == OutputFormat::json);
    CHECK_THROWS_AS(parse_format("yaml"), std::invalid_argument);
}
