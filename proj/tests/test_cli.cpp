#include "doctest.h"

#include <fstream>
#include <sstream>

#include "ffb/cli.hpp"
#include "ffb/error.hpp"

using namespace ffb;
using nlohmann::json;

namespace {

json parse_report(const std::string& output) { return json::parse(output); }

// minimal structural validator for the schema documents under docs/schemas
bool type_matches(const json& value, const std::string& type) {
    if (type == "string") return value.is_string();
    if (type == "number") return value.is_number();
    if (type == "boolean") return value.is_boolean();
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "null") return value.is_null();
    return false;
}

bool validate_against(const json& report, const json& schema) {
    if (report.value("schema", "") != schema.at("id").get<std::string>()) return false;
    for (auto& [key, type] : schema.at("required").items()) {
        if (!report.contains(key)) return false;
        bool ok = false;
        if (type.is_array()) {
            for (const auto& t : type) ok = ok || type_matches(report[key], t.get<std::string>());
        } else {
            ok = type_matches(report[key], type.get<std::string>());
        }
        if (!ok) return false;
    }
    return true;
}

json load_schema(const std::string& name) {
    for (const char* prefix : {"docs/schemas/", "../docs/schemas/", "../../docs/schemas/"}) {
        std::ifstream in(prefix + name + ".schema.json");
        if (in) return json::parse(in);
    }
    throw std::runtime_error("schema file not found: " + name);
}

Invocation base_invocation(const std::string& sub) {
    Invocation inv;
    inv.subcommand = sub;
    inv.field = "5";
    inv.nvars = 3;
    inv.poly = "x1*x2*x3";
    return inv;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sum dispatch matches the worked example") {
    auto inv = base_invocation("sum");
    auto result = dispatch(inv);
    REQUIRE(result.exit_code == 0);
    auto report = parse_report(result.output);
    CHECK(report["magnitude"] == 45.0);
    CHECK(report["counts"] == std::vector<std::uint64_t>{61, 16, 16, 16, 16});
    CHECK(validate_against(report, load_schema("sum")));
}

TEST_CASE("quad dispatch") {
    Invocation inv;
    inv.subcommand = "quad";
    inv.field = "5";
    inv.nvars = 2;
    inv.poly = "x1^2 + x1*x2";
    auto result = dispatch(inv);
    REQUIRE(result.exit_code == 0);
    auto report = parse_report(result.output);
    CHECK(report["rank"] == 2);
    CHECK(report["t"] == 1);
    CHECK(report["alpha"].is_null());
    CHECK(validate_against(report, load_schema("quad")));
}

TEST_CASE("rank dispatch") {
    Invocation inv;
    inv.subcommand = "rank";
    inv.field = "7";
    inv.nvars = 3;
    inv.poly = "x1^3 + x2^3 + x3^3";
    inv.max_r = 3;
    auto result = dispatch(inv);
    REQUIRE(result.exit_code == 0);
    auto report = parse_report(result.output);
    CHECK(report["found"] == true);
    CHECK(report["r"] == 2);
    CHECK(report["algebraic_rank"] == 4);
    CHECK(validate_against(report, load_schema("rank")));
}

TEST_CASE("slice, bias, profile and product dispatches validate") {
    Invocation inv;
    inv.subcommand = "slice";
    inv.field = "5";
    inv.nvars = 6;
    inv.poly = "x1*x3*x4 + x2*x5*x6";
    inv.r = 2;
    auto result = dispatch(inv);
    REQUIRE(result.exit_code == 0);
    auto report = parse_report(result.output);
    CHECK(report["classification"]["case"] == "case2");
    CHECK(validate_against(report, load_schema("slice")));

    auto binv = base_invocation("bias");
    auto bres = dispatch(binv);
    CHECK(validate_against(parse_report(bres.output), load_schema("bias")));

    auto pinv = base_invocation("profile");
    pinv.nmax = 2;
    auto pres = dispatch(pinv);
    CHECK(validate_against(parse_report(pres.output), load_schema("profile")));

    Invocation prod;
    prod.subcommand = "product";
    prod.field = "5";
    prod.nvars = 3;
    prod.poly = "x1";
    prod.poly2 = "x2*x3";
    auto prodres = dispatch(prod);
    REQUIRE(prodres.exit_code == 0);
    auto prodrep = parse_report(prodres.output);
    CHECK(prodrep["measurements"]["B"] == 61);
    CHECK(validate_against(prodrep, load_schema("product")));
}

TEST_CASE("echo completeness: replaying the echo reproduces the bytes") {
    for (auto sub : {"sum", "bias", "quad"}) {
        Invocation inv = base_invocation(sub);
        if (std::string(sub) == "quad") inv.poly = "x1*x2 + x3^2";
        auto first = dispatch(inv);
        REQUIRE(first.exit_code == 0);
        auto echo = parse_report(first.output)["invocation"];
        auto replayed = dispatch(invocation_from_json(echo));
        CHECK(first.output == replayed.output);
    }
}

TEST_CASE("exit codes") {
    auto bad = base_invocation("sum");
    bad.poly = "x1 +* x2";
    auto r1 = dispatch(bad);
    CHECK(r1.exit_code == 2);
    auto err = parse_report(r1.output);
    CHECK(err["error"]["code"] == "ParseError");

    auto big = base_invocation("sum");
    big.budget = 10;
    auto r2 = dispatch(big);
    CHECK(r2.exit_code == 3);
    CHECK(parse_report(r2.output)["error"]["code"] == "BudgetExceeded");

    auto unknown_var = base_invocation("sum");
    unknown_var.poly = "x9";
    CHECK(dispatch(unknown_var).exit_code == 2);
}

TEST_CASE("profile csv format") {
    auto inv = base_invocation("profile");
    inv.field = "3";
    inv.nvars = 2;
    inv.poly = "x1*x2";
    inv.nmax = 2;
    inv.format = "csv";
    auto result = dispatch(inv);
    REQUIRE(result.exit_code == 0);
    std::istringstream lines(result.output);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,magnitude,btilde,b");
    std::string row;
    std::getline(lines, row);
    CHECK(row.substr(0, 4) == "1,3,");
}

TEST_CASE("command line parsing") {
    auto inv = parse_invocation(
        tokenize_command_line("sum --field 5 --nvars 3 --poly \"x1*x2*x3\" --n 1"));
    CHECK(inv.subcommand == "sum");
    CHECK(inv.field == "5");
    CHECK(inv.nvars == 3);
    CHECK(inv.poly == "x1*x2*x3");

    auto sliced = parse_invocation(tokenize_command_line(
        "slice --field 5 --nvars 6 --poly x1*x3*x4+x2*x5*x6 --r 2 --theta 3"));
    CHECK(sliced.r == 2);
    CHECK(sliced.theta == 3);

    CHECK_THROWS_AS(parse_invocation({"frobnicate"}), Error);
}

TEST_CASE("batch processing") {
    std::istringstream three(
        "sum --field 5 --nvars 2 --poly x1*x2\n"
        "sum --field 3 --nvars 2 --poly x1*x2\n"
        "quad --field 5 --nvars 2 --poly x1*x2\n");
    auto out = run_batch(three, "json");
    std::istringstream reports(out.output);
    std::string line;
    int count = 0, errors = 0;
    while (std::getline(reports, line)) {
        ++count;
        if (parse_report(line).contains("error")) ++errors;
    }
    CHECK(count == 3);
    CHECK(errors == 0);

    std::istringstream with_bad(
        "sum --field 5 --nvars 2 --poly x1*x2\n"
        "sum --field nonsense\n"
        "sum --field 7 --nvars 2 --poly x1*x2\n");
    auto out2 = run_batch(with_bad, "json");
    std::istringstream reports2(out2.output);
    count = errors = 0;
    while (std::getline(reports2, line)) {
        ++count;
        if (parse_report(line).contains("error")) ++errors;
    }
    CHECK(count == 3);
    CHECK(errors == 1);

    std::istringstream empty("");
    CHECK(run_batch(empty, "json").output.empty());
}

TEST_CASE("verify subcommand with a selection") {
    Invocation inv;
    inv.subcommand = "verify";
    inv.suites = {"gauss-magnitude", "known-sums"};
    auto result = dispatch(inv);
    REQUIRE(result.exit_code == 0);
    auto report = parse_report(result.output);
    CHECK(report["all_pass"] == true);
    REQUIRE(report["suites"].size() == 2);
    CHECK(report["suites"][0]["id"] == "gauss-magnitude");
    CHECK(validate_against(report, load_schema("verify")));

    // byte-identical reruns
    auto again = dispatch(inv);
    CHECK(result.output == again.output);
}

}  // TEST_SUITE
