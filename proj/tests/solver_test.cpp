#include "test_support.hpp"

#include "robocim/solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace robocim {
namespace {

using namespace robocim::testing;
using JL = JustificationLevel;

QueryRequirements query(std::string application, int k,
                        std::optional<JL> threshold = std::nullopt) {
    QueryRequirements req;
    req.application = std::move(application);
    req.size_k = k;
    req.min_justification = threshold;
    return req;
}

TEST(EnumerateTest, SingleOfEachRole) {
    Catalog c = fixture("single.json");
    auto result = enumerate_configurations(c, query("any", 4));
    ASSERT_EQ(result.size(), 1u);
    EXPECT_EQ(result[0].products, (std::vector<std::string>{"arm1", "eecd1", "grip1", "dc1"}));
    EXPECT_EQ(result[0].certainty, Certainty::default_assumption);
    EXPECT_EQ(result[0].catalog_fingerprint, c.fingerprint());
    // Output port first, pairs sorted.
    for (const auto& [a, b] : result[0].matching) {
        EXPECT_EQ(c.find_product(a.product)->find_port(a.port)->orientation, Orientation::output);
        EXPECT_EQ(c.find_product(b.product)->find_port(b.port)->orientation, Orientation::input);
    }
    EXPECT_TRUE(std::is_sorted(result[0].matching.begin(), result[0].matching.end()));
}

TEST(EnumerateTest, SecondEecdDoublesTheResult) {
    Catalog c = fixture("single_two_eecd.json");
    auto result = enumerate_configurations(c, query("any", 4));
    ASSERT_EQ(result.size(), 2u);
    EXPECT_TRUE(canonical_less(result[0], result[1]));
}

TEST(EnumerateTest, ScrewdrivingWithoutScrewdrivers) {
    Catalog c = fixture("single.json");
    EXPECT_TRUE(enumerate_configurations(c, query("screwdriving", 4)).empty());
    EXPECT_EQ(enumerate_configurations(c, query("pick-and-place", 4)).size(), 1u);
}

TEST(EnumerateTest, OracleAgreesOnSingle) {
    Catalog c = fixture("single.json");
    EXPECT_EQ(enumerate_bruteforce(c, query("any", 4)), enumerate_configurations(c, query("any", 4)));
}

TEST(EnumerateTest, AllPairsConfigurationIncompatible) {
    CatalogDocument doc = canonical_chain_document();
    for (std::size_t i = 0; i < doc.products.size(); ++i)
        for (std::size_t j = i + 1; j < doc.products.size(); ++j)
            doc.claims.push_back(make_claim(Polarity::incompatible, ClaimScope::configuration,
                                            doc.products[i].id, doc.products[j].id, JL::observation));
    Catalog c(doc);
    EXPECT_TRUE(enumerate_configurations(c, query("any", 4)).empty());
    EXPECT_TRUE(enumerate_bruteforce(c, query("any", 4)).empty());
}

TEST(EnumerateTest, InvalidQueries) {
    Catalog c = fixture("single.json");
    EXPECT_THROW(enumerate_configurations(c, query("any", 3)), InvalidQuery);
    EXPECT_THROW(enumerate_configurations(c, query("any", 6)), InvalidQuery);
    EXPECT_THROW(enumerate_configurations(c, query("welding", 4)), InvalidQuery);
    EXPECT_THROW(enumerate_bruteforce(c, query("any", 3)), InvalidQuery);
}

TEST(EnumerateTest, BruteforceRefusesLargeCatalogs) {
    RandomCatalogs gen(5);
    Catalog c(gen.document({15, 15, 0}));
    EXPECT_THROW(enumerate_bruteforce(c, query("any", 4)), CatalogTooLarge);
    EXPECT_NO_THROW(enumerate_configurations(c, query("any", 4)));
}

TEST(EnumerateTest, TwentyProductFixture) {
    Catalog c = fixture("twenty_products.json");
    auto any4 = enumerate_configurations(c, query("any", 4));
    auto pick = enumerate_configurations(c, query("pick-and-place", 4));
    auto screw = enumerate_configurations(c, query("screwdriving", 4));
    auto any5 = enumerate_configurations(c, query("any", 5));
    EXPECT_EQ(pick.size() + screw.size(), any4.size());
    EXPECT_LT(screw.size(), pick.size());
    EXPECT_LT(any5.size(), any4.size());
    EXPECT_FALSE(any5.empty());
    for (const auto& cfg : any5) {
        ASSERT_EQ(cfg.products.size(), 5u);
        EXPECT_EQ(c.find_product(cfg.products[1])->type(), "flange_adapter");
    }
}

TEST(EnumerateTest, ModbusPairRoutedThroughControlBox) {
    Catalog c = fixture("misleading_compatibility.json");
    auto result = enumerate_configurations(c, query("any", 4));
    ASSERT_EQ(result.size(), 1u);
    EXPECT_EQ(result[0].products, (std::vector<std::string>{"arm_m", "eecd_m", "grip_m", "dc_box"}));
    for (const auto& [a, b] : result[0].matching) {
        EXPECT_FALSE(a.product == "arm_m" && b.product == "grip_m");
        EXPECT_FALSE(a.product == "grip_m" && b.product == "arm_m");
    }
}

TEST(EnumerateTest, MissingPropertyExcludesPair) {
    Catalog c = fixture("missing_property.json");
    auto result = enumerate_configurations(c, query("any", 4));
    ASSERT_EQ(result.size(), 1u);
    EXPECT_EQ(result[0].products[1], "eecd_plain");
}

TEST(EnumerateTest, CertaintyIsWeakestConnection) {
    Catalog c = fixture("inconsistent_sources.json");
    auto result = enumerate_configurations(c, query("any", 4));
    ASSERT_EQ(result.size(), 1u);
    EXPECT_EQ(result[0].certainty, Certainty::secondary);
    EXPECT_EQ(enumerate_configurations(c, query("any", 4, JL::secondary)).size(), 1u);
    EXPECT_TRUE(enumerate_configurations(c, query("any", 4, JL::empirical)).empty());
}

// Property: every emitted configuration re-passes the checker, and its
// certainty is the weakest evidence among its connections.
TEST(EnumerateProperty, SelfConsistencyAndCertainty) {
    RandomCatalogs gen(201);
    int seen = 0;
    for (int trial = 0; trial < 400; ++trial) {
        Catalog c(gen.document());
        QueryRequirements req = gen.query();
        for (const auto& cfg : enumerate_configurations(c, req)) {
            ++seen;
            EXPECT_TRUE(check_configuration(c, cfg.products, cfg.matching, req).empty());
            ASSERT_EQ(cfg.explanations.size(), cfg.matching.size());
            Certainty weakest = Certainty::primary;
            for (const auto& ev : cfg.explanations) {
                auto v = resolve_compatibility(c, ev.connection.first.product,
                                               ev.connection.second.product, ClaimScope::direct);
                EXPECT_EQ(ev.grade, certainty_of(v));
                weakest = std::min(weakest, ev.grade);
            }
            EXPECT_EQ(cfg.certainty, weakest);
            if (req.min_justification) { EXPECT_GE(cfg.certainty, certainty_of(*req.min_justification)); }
        }
    }
    EXPECT_GT(seen, 80);
}

TEST(EnumerateProperty, MatchesOracle) {
    RandomCatalogs gen(203);
    for (int trial = 0; trial < 60; ++trial) {
        Catalog c(gen.document({4, 10, 6}));
        QueryRequirements req = gen.query();
        ASSERT_EQ(enumerate_configurations(c, req), enumerate_bruteforce(c, req)) << "trial " << trial;
    }
}

TEST(EnumerateProperty, Deterministic) {
    RandomCatalogs gen(207);
    for (int trial = 0; trial < 30; ++trial) {
        CatalogDocument doc = gen.document();
        QueryRequirements req = gen.query();
        EXPECT_EQ(enumerate_configurations(Catalog(doc), req), enumerate_configurations(Catalog(doc), req));
    }
}

TEST(ExplainTest, DefaultOnlyConfiguration) {
    Catalog c = fixture("single.json");
    auto cfg = enumerate_configurations(c, query("any", 4)).at(0);
    auto doc = explain(c, cfg);
    EXPECT_EQ(doc.certainty, Certainty::default_assumption);
    EXPECT_EQ(to_string(doc.certainty), "default");
    ASSERT_EQ(doc.connections.size(), 4u);
    for (const auto& conn : doc.connections) {
        EXPECT_EQ(conn.basis, "default assumption");
        EXPECT_NE(conn.text.find("default assumption: same interface, no contrary evidence"),
                  std::string::npos);
        EXPECT_FALSE(conn.justification.has_value());
    }
    EXPECT_TRUE(doc.conditions.empty());
}

TEST(ExplainTest, PrimaryClaimSource) {
    Catalog c = fixture("inconsistent_sources.json");
    auto cfg = enumerate_configurations(c, query("any", 4)).at(0);
    auto doc = explain(c, cfg);
    auto it = std::find_if(doc.connections.begin(), doc.connections.end(),
                           [](const auto& conn) { return conn.to.product == "grip1" && conn.from.product == "eecd1"; });
    ASSERT_NE(it, doc.connections.end());
    EXPECT_EQ(it->basis, "claim");
    ASSERT_TRUE(it->justification.has_value());
    EXPECT_EQ(it->justification->level, JL::primary);
    EXPECT_NE(it->text.find("grip1 datasheet"), std::string::npos);
}

TEST(ExplainTest, MediatorIsNamed) {
    Catalog c = fixture("misleading_incompatibility.json");
    auto result = enumerate_configurations(c, query("any", 5));
    ASSERT_EQ(result.size(), 1u);
    auto doc = explain(c, result[0]);
    ASSERT_EQ(doc.conditions.size(), 1u);
    EXPECT_EQ(doc.conditions[0].mediator, "dc_special");
    EXPECT_NE(doc.to_text().find("dc_special"), std::string::npos);
}

TEST(ExplainTest, StaleCatalog) {
    Catalog c = fixture("single.json");
    auto cfg = enumerate_configurations(c, query("any", 4)).at(0);
    CatalogDocument changed = c.document();
    changed.products[0].display_name += " v2";
    EXPECT_THROW(explain(Catalog(changed), cfg), StaleConfiguration);
}

TEST(UncertainTest, ClaimFreeCatalogListsEveryMatchingPair) {
    Catalog c = fixture("single.json");
    auto report = report_uncertain(c, query("any", 4));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& e : report) {
        EXPECT_EQ(e.reason, UncertaintyReason::default_only);
        pairs.push_back({e.product_a, e.product_b});
    }
    EXPECT_EQ(pairs, (std::vector<std::pair<std::string, std::string>>{
                         {"arm1", "dc1"}, {"arm1", "eecd1"}, {"dc1", "grip1"}, {"eecd1", "grip1"}}));
}

TEST(UncertainTest, ConflictingClaims) {
    CatalogDocument doc = canonical_chain_document();
    doc.claims = {
        make_claim(Polarity::incompatible, ClaimScope::direct, "arm", "eecd", JL::secondary),
        make_claim(Polarity::compatible, ClaimScope::direct, "arm", "eecd", JL::secondary),
    };
    auto report = report_uncertain(Catalog(doc), query("any", 4));
    auto it = std::find_if(report.begin(), report.end(), [](const UncertaintyEntry& e) {
        return e.product_a == "arm" && e.product_b == "eecd";
    });
    ASSERT_NE(it, report.end());
    EXPECT_EQ(it->reason, UncertaintyReason::conflict);
}

TEST(UncertainTest, ThresholdFiltersEvidence) {
    Catalog c = fixture("inconsistent_sources.json");
    EXPECT_TRUE(report_uncertain(c, query("any", 4)).empty());
    EXPECT_TRUE(report_uncertain(c, query("any", 4, JL::secondary)).empty());
    auto report = report_uncertain(c, query("any", 4, JL::primary));
    ASSERT_EQ(report.size(), 1u);
    EXPECT_EQ(report[0].product_a, "arm1");
    EXPECT_EQ(report[0].product_b, "eecd1");
    EXPECT_EQ(report[0].reason, UncertaintyReason::below_threshold);
}

}  // namespace
}  // namespace robocim
