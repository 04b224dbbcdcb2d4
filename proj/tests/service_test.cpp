#include "test_support.hpp"

#include "robocim/service.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <thread>

namespace robocim {
namespace {

using namespace robocim::testing;
using nlohmann::json;

class HandleRequestTest : public ::testing::Test {
protected:
    ApiResponse get(const Catalog& c, std::string_view path,
                    std::multimap<std::string, std::string> params = {}) {
        return handle_request(c, options, "GET", path, params, "");
    }
    ApiResponse post(const Catalog& c, std::string_view path, std::string_view body) {
        return handle_request(c, options, "POST", path, {}, body);
    }
    ServiceOptions options;
    Catalog twenty = fixture("twenty_products.json");
    Catalog single = fixture("single.json");
};

TEST_F(HandleRequestTest, Applications) {
    auto r = get(twenty, "/api/applications");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(json::parse(r.body), json({"any", "pick-and-place", "screwdriving"}));
}

TEST_F(HandleRequestTest, Health) {
    auto body = json::parse(get(twenty, "/api/health").body);
    EXPECT_EQ(body["status"], "ok");
    EXPECT_EQ(body["products"], 20);
}

TEST_F(HandleRequestTest, CatalogRoundTrips) {
    auto r = get(twenty, "/api/catalog");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(parse_catalog(r.body).document(), twenty.document());
}

TEST_F(HandleRequestTest, ProductsFilteredByType) {
    auto all = json::parse(get(twenty, "/api/products").body);
    EXPECT_EQ(all.size(), 20u);
    auto arms = json::parse(get(twenty, "/api/products", {{"type", "robotic_arm"}}).body);
    ASSERT_FALSE(arms.empty());
    for (const auto& p : arms) {
        bool is_arm = false;
        for (const auto& a : p["attributes"])
            if (a["name"] == "type" && a["value"] == "robotic_arm") is_arm = true;
        EXPECT_TRUE(is_arm) << p["id"];
    }
}

TEST_F(HandleRequestTest, ConfigureWithoutScrewdrivers) {
    auto r = post(single, "/api/configure", R"({"application":"screwdriving","size_k":4})");
    ASSERT_EQ(r.status, 200);
    auto body = json::parse(r.body);
    EXPECT_EQ(body["configurations"], json::array());
    EXPECT_EQ(body["truncated"], false);
}

TEST_F(HandleRequestTest, ConfigureSingle) {
    auto r = post(single, "/api/configure", R"({"application":"any","size_k":4})");
    ASSERT_EQ(r.status, 200);
    auto body = json::parse(r.body);
    ASSERT_EQ(body["configurations"].size(), 1u);
    auto& cfg = body["configurations"][0];
    EXPECT_EQ(cfg["certainty"], "default");
    EXPECT_EQ(cfg["products"], json({"arm1", "eecd1", "grip1", "dc1"}));
    EXPECT_EQ(cfg["matching"].size(), 4u);
    EXPECT_TRUE(cfg["matching"][0][0].is_array());
}

TEST_F(HandleRequestTest, InvalidSize) {
    auto r = post(single, "/api/configure", R"({"application":"any","size_k":3})");
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(json::parse(r.body)["error_code"], "invalid_size");
}

TEST_F(HandleRequestTest, BadRequests) {
    auto code = [&](std::string_view body) {
        auto r = post(single, "/api/configure", body);
        EXPECT_EQ(r.status, 400) << body;
        return json::parse(r.body)["error_code"].get<std::string>();
    };
    EXPECT_EQ(code("{not json"), "invalid_json");
    EXPECT_EQ(code("[1]"), "invalid_body");
    EXPECT_EQ(code(R"({"application":"any","size_k":4,"colour":"red"})"), "unknown_field");
    EXPECT_EQ(code(R"({"application":"welding","size_k":4})"), "unknown_application");
    EXPECT_EQ(code(R"({"size_k":4})"), "invalid_application");
    EXPECT_EQ(code(R"({"application":"any","size_k":"4"})"), "invalid_size");
    EXPECT_EQ(code(R"({"application":"any","size_k":4,"min_justification":"rumour"})"),
              "invalid_justification");
    EXPECT_EQ(code(R"({"application":"any","size_k":4,"extra_required_attributes":[{"attribute":"x"}]})"),
              "invalid_extra");
}

TEST_F(HandleRequestTest, RoutingErrors) {
    EXPECT_EQ(get(single, "/api/nothing").status, 404);
    EXPECT_EQ(get(single, "/api/configure").status, 405);
    EXPECT_EQ(post(single, "/api/health", "").status, 405);
}

TEST_F(HandleRequestTest, Uncertain) {
    auto r = get(single, "/api/uncertain");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(json::parse(r.body)["uncertain"].size(), 4u);
    EXPECT_EQ(get(single, "/api/uncertain", {{"min_justification", "bogus"}}).status, 400);
}

TEST_F(HandleRequestTest, Truncation) {
    options.max_results = 3;
    auto body = json::parse(post(twenty, "/api/configure", R"({"application":"any","size_k":4})").body);
    EXPECT_EQ(body["configurations"].size(), 3u);
    EXPECT_EQ(body["truncated"], true);
}

TEST_F(HandleRequestTest, ResponsesAreReproducible) {
    const char* request = R"({"application":"pick-and-place","size_k":4,"min_justification":null})";
    auto first = post(twenty, "/api/configure", request);
    auto second = post(twenty, "/api/configure", request);
    EXPECT_EQ(first.body, second.body);
    EXPECT_EQ(first.body, api::configure_body(twenty, api::parse_configure_request(std::string_view(request)),
                                              options.max_results));
}

TEST_F(HandleRequestTest, ReturnedConfigurationsVerifyOffline) {
    auto body = json::parse(post(twenty, "/api/configure", R"({"application":"any","size_k":5})").body);
    QueryRequirements req;
    req.size_k = 5;
    ASSERT_FALSE(body["configurations"].empty());
    for (const auto& cfg : body["configurations"]) {
        auto products = cfg["products"].get<std::vector<std::string>>();
        Matching m;
        for (const auto& pair : cfg["matching"])
            m.push_back({{pair[0][0], pair[0][1]}, {pair[1][0], pair[1][1]}});
        EXPECT_TRUE(check_configuration(twenty, products, m, req).empty());
    }
}

TEST(ServiceTest, RejectsInvalidCatalog) {
    CatalogDocument doc = canonical_chain_document();
    doc.products[0].attributes.clear();
    EXPECT_THROW(Service(Catalog(doc)), ServiceStartupError);
}

TEST(ServiceTest, BindAddressParsing) {
    EXPECT_EQ(parse_bind_address("127.0.0.1:8080"), (std::pair<std::string, int>{"127.0.0.1", 8080}));
    EXPECT_THROW(parse_bind_address("localhost"), std::invalid_argument);
    EXPECT_THROW(parse_bind_address("localhost:http"), std::invalid_argument);
    EXPECT_THROW(parse_bind_address("localhost:70000"), std::invalid_argument);
}

TEST(ServiceTest, ServesOverLoopback) {
    Service service(fixture("twenty_products.json"), {.max_results = 1000, .cors_origin = "http://ui.local"});
    int port = service.bind("127.0.0.1", 0);
    ASSERT_GT(port, 0);
    std::thread server([&] { service.listen(); });
    service.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/api/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "http://ui.local");
    EXPECT_EQ(health->get_header_value("Content-Type"), "application/json");

    auto apps = client.Get("/api/applications");
    ASSERT_TRUE(apps);
    EXPECT_EQ(json::parse(apps->body), json({"any", "pick-and-place", "screwdriving"}));

    const std::string request = R"({"application":"screwdriving","size_k":4})";
    auto configured = client.Post("/api/configure", request, "application/json");
    ASSERT_TRUE(configured);
    EXPECT_EQ(configured->status, 200);
    QueryRequirements req;
    req.application = "screwdriving";
    EXPECT_EQ(configured->body, api::configure_body(service.catalog(), req, 1000));

    auto bad = client.Post("/api/configure", R"({"application":"any","size_k":3})", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    EXPECT_EQ(json::parse(bad->body)["error_code"], "invalid_size");

    auto preflight = client.Options("/api/configure");
    ASSERT_TRUE(preflight);
    EXPECT_EQ(preflight->status, 204);

    service.stop();
    server.join();
}

}  // namespace
}  // namespace robocim
