#include <doctest.h>

#include <sstream>

#include "cli.hpp"

using nlohmann::json;

namespace {

const std::string kData = GSALG_TEST_DATA;

struct Outcome {
    int code;
    std::string out, err;
    json report() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
    for (auto& a : args)
        if (a.rfind("@", 0) == 0) a = kData + "/" + a.substr(1);
    std::ostringstream out, err;
    int code = gsalg::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("hilbert series of one quadratic monomial") {
    auto r = run({"hilbert", "--gens", "2", "--relations", "@yx.txt", "--max-degree", "12", "--json"});
    REQUIRE(r.code == gsalg::cli::kComputed);
    auto j = r.report();
    CHECK(j["schema"] == gsalg::cli::kSchema);
    CHECK(j["status"] == "ok");
    json expect = json::array();
    for (int k = 2; k <= 13; ++k) expect.push_back(std::to_string(k));
    CHECK(j["result"]["series"]["series"] == expect);
    CHECK(j["result"]["gs_min_series"]["series"] == expect);
    CHECK(j["result"]["bound_attained"] == true);
    CHECK(j["conditions"] == json{"gs_inequality"});
    CHECK(j["config"]["subcommand"] == "hilbert");
    CHECK(j.contains("seed"));
}

TEST_CASE("certificate from a degree profile") {
    auto r = run({"certify", "--profile", "@cubic_profile.json", "--partial-degree", "3"});
    REQUIRE(r.code == 0);
    auto w = r.report()["result"]["witness"];
    CHECK(w["t"] == "4/5");
    CHECK(w["value"] == "-11/125");
    // r_2 = 1 only touches zero at the boundary t = 1.
    auto none = run({"certify", "--gens", "2", "--count", "2:1", "--partial-degree", "2"});
    CHECK(none.code == gsalg::cli::kFailed);
    CHECK(none.report()["status"] != "ok");
}

TEST_CASE("commutative quotient example") {
    auto r = run({"quotient", "--gens", "2", "--relations", "@comm2.txt", "--precision", "8"});
    REQUIRE(r.code == 0);
    auto res = r.report()["result"];
    CHECK(res["findim"]["k"] == 3);
    CHECK(res["findim"]["dims"] == json{2, 1, 0, 0, 0, 0, 0, 0});
    CHECK(res["commutativity"]["status"] == "commutative-at-precision-8");
    CHECK(res["threshold"]["threshold"] == 2);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == gsalg::cli::kUsage);
    CHECK(run({"frobnicate"}).code == gsalg::cli::kUsage);
    CHECK(run({"hilbert", "--gens", "2", "--max-degree", "-3"}).code == gsalg::cli::kUsage);
    auto parse = run({"quotient", "--gens", "2", "--relations", "@unbalanced.txt"});
    CHECK(parse.code == gsalg::cli::kUsage);
    CHECK(parse.err.find("line 1, column 5") != std::string::npos);
    CHECK(run({"hilbert", "--gens", "2", "--relations", "@missing.txt"}).code == gsalg::cli::kUsage);
    CHECK(run({"quotient", "--gens", "2", "--precision", "30"}).code == gsalg::cli::kUsage);
    // The two-level profile violates the chain upper bound.
    CHECK(run({"schedule", "--profile", "@two_levels.json"}).code == gsalg::cli::kFailed);
}

TEST_CASE("byte-identical reruns") {
    std::vector<std::vector<std::string>> cases{
        {"ladder", "--strategy", "random", "--seed", "7", "-L", "3", "--decompose", "8"},
        {"quotient", "--explore-gap", "--gens", "2", "--trials", "5", "--precision", "6", "--seed", "3"},
        {"c35", "--count", "2"},
        {"bounds", "--profile", "@two_levels.json", "--n", "1024"},
    };
    for (const auto& args : cases) {
        auto a = run(args), b = run(args);
        CHECK(a.out == b.out);
        CHECK(a.code == b.code);
        CHECK_FALSE(a.out.empty());
    }
    auto s1 = run({"quotient", "--explore-gap", "--gens", "2", "--trials", "5", "--precision", "6", "--seed", "3"});
    auto s2 = run({"quotient", "--explore-gap", "--gens", "2", "--trials", "5", "--precision", "6", "--seed", "4"});
    CHECK(s1.report()["seed"] == 3);
    CHECK(s2.report()["seed"] == 4);
}

TEST_CASE("gap search precision defaults") {
    CHECK(run({"quotient", "--explore-gap", "--gens", "2", "--trials", "1"}).report()["config"]["precision"] == 8);
    auto three = run({"quotient", "--explore-gap", "--gens", "3", "--trials", "2"}).report();
    CHECK(three["config"]["precision"] == 5);
    CHECK(three["result"]["exploration"]["relations"] == 5);
    CHECK(three["result"]["threshold"]["open_gap_status"] == "undecided");
}

TEST_CASE("text mode flattens the JSON report") {
    auto j = run({"hilbert", "--gens", "2", "--relations", "@yx.txt", "-N", "3"});
    auto t = run({"hilbert", "--gens", "2", "--relations", "@yx.txt", "-N", "3", "--text"});
    REQUIRE(t.code == 0);
    CHECK(t.out.find("schema = gsalg-report/1") != std::string::npos);
    CHECK(t.out.find("result.series.series = [\"2\",\"3\",\"4\"]") != std::string::npos);
    auto jj = j.report();
    jj["config"]["output"] = "text";
    CHECK(t.out == gsalg::cli::flatten_text(jj));
}

TEST_CASE("every subcommand reports config and conditions") {
    std::vector<std::vector<std::string>> cases{
        {"ladder", "-L", "3", "--absorption", "6"},
        {"schedule", "--degrees", "@degrees_300.json"},
        {"c35", "--count", "1"},
        {"certify", "--gens", "2", "--count", "3:1"},
    };
    for (const auto& args : cases) {
        auto r = run(args);
        CAPTURE(args[0]);
        REQUIRE_FALSE(r.out.empty());
        auto j = r.report();
        CHECK(j["config"]["subcommand"] == args[0]);
        CHECK(j["conditions"].is_array());
        CHECK(j.contains("seed"));
    }
}

}  // TEST_SUITE
