#include "test_support.hpp"

#include "cli.hpp"
#include "robocim/service.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace robocim {
namespace {

using namespace robocim::testing;
using nlohmann::json;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "robocim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string path(const char* name) { return fixture_path(name).string(); }

TEST(CliTest, ValidateMinimal) {
    auto r = run({"validate", path("minimal.json")});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(CliTest, ValidateReportsDiagnostics) {
    CatalogDocument doc = canonical_chain_document();
    doc.products[2].attributes.erase(doc.products[2].attributes.begin());
    auto file = std::filesystem::temp_directory_path() / "robocim_cli_missing_type.json";
    {
        std::ofstream os(file);
        os << serialize_catalog(doc);
    }
    auto r = run({"validate", file.string()});
    std::filesystem::remove(file);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("missing_type"), std::string::npos);
}

TEST(CliTest, ValidateBrokenJson) {
    auto file = std::filesystem::temp_directory_path() / "robocim_cli_broken.json";
    {
        std::ofstream os(file);
        os << "{\"format_version\": 1, \"products\": [";
    }
    auto r = run({"validate", file.string()});
    std::filesystem::remove(file);
    EXPECT_EQ(r.code, 1);
}

TEST(CliTest, ConfigureSingleJson) {
    auto r = run({"configure", path("single.json"), "--application", "any", "--size", "4", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto body = json::parse(r.out);
    EXPECT_EQ(body["configurations"].size(), 1u);
}

TEST(CliTest, ConfigureRejectsSizeThree) {
    EXPECT_EQ(run({"configure", path("single.json"), "--size", "3"}).code, 2);
}

TEST(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"configure", path("single.json")}).code, 2);
    EXPECT_EQ(run({"configure", path("single.json"), "--size", "4", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"configure", path("single.json"), "--size", "4", "--min-justification", "rumour"}).code, 2);
    EXPECT_EQ(run({"configure", path("single.json"), "--size", "4", "--application", "welding"}).code, 2);
}

TEST(CliTest, MissingFile) {
    EXPECT_EQ(run({"validate", path("nope.json")}).code, 3);
    EXPECT_EQ(run({"configure", path("nope.json"), "--size", "4"}).code, 3);
}

TEST(CliTest, TableFormat) {
    auto r = run({"configure", path("single.json"), "--size", "4", "--format", "table"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("default"), std::string::npos);
    EXPECT_NE(r.out.find("1 configuration(s)"), std::string::npos);
}

TEST(CliTest, JsonMatchesServiceBody) {
    Catalog c = fixture("twenty_products.json");
    auto r = run({"configure", path("twenty_products.json"), "--application", "pick-and-place", "--size", "4",
                  "--min-justification", "observation", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    auto response = handle_request(c, {}, "POST", "/api/configure", {},
                                   R"({"application":"pick-and-place","size_k":4,"min_justification":"observation"})");
    EXPECT_EQ(r.out, response.body);
}

TEST(CliTest, ExplainMediatedConfiguration) {
    auto r = run({"explain", path("misleading_incompatibility.json"), "--size", "5", "--config-index", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("dc_special"), std::string::npos);
    EXPECT_NE(r.out.find("Certainty:"), std::string::npos);

    auto j = run({"explain", path("single.json"), "--size", "4", "--config-index", "0", "--format", "json"});
    ASSERT_EQ(j.code, 0);
    EXPECT_EQ(json::parse(j.out)["certainty"], "default");
}

TEST(CliTest, ExplainIndexOutOfRange) {
    EXPECT_EQ(run({"explain", path("single.json"), "--size", "4", "--config-index", "1"}).code, 2);
}

TEST(CliTest, Uncertain) {
    auto r = run({"uncertain", path("inconsistent_sources.json"), "--min-justification", "primary",
                  "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto body = json::parse(r.out);
    ASSERT_EQ(body["uncertain"].size(), 1u);
    EXPECT_EQ(body["uncertain"][0]["reason"], "below_threshold");
}

TEST(CliTest, MaxResultsFromEnvironment) {
    ::setenv("ROBOCIM_MAX_RESULTS", "2", 1);
    auto r = run({"configure", path("twenty_products.json"), "--size", "4", "--format", "json"});
    ::unsetenv("ROBOCIM_MAX_RESULTS");
    ASSERT_EQ(r.code, 0);
    auto body = json::parse(r.out);
    EXPECT_EQ(body["configurations"].size(), 2u);
    EXPECT_EQ(body["truncated"], true);
}

}  // namespace
}  // namespace robocim
