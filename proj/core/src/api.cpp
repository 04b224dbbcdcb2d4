#include "robocim/api.hpp"

#include <charconv>
#include <cstdlib>

namespace robocim::api {

using nlohmann::json;

std::size_t max_results_from_env(std::size_t fallback) {
    const char* raw = std::getenv(kMaxResultsEnv);
    if (!raw || !*raw) return fallback;
    std::string_view text(raw);
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || value == 0) return fallback;
    return value;
}

std::optional<JustificationLevel> parse_threshold(std::string_view text) {
    return parse_justification_level(text);
}

QueryRequirements parse_configure_request(const json& body) {
    if (!body.is_object()) throw RequestError("invalid_body", "request body must be a JSON object");
    for (const auto& [key, _] : body.items()) {
        if (key != "application" && key != "size_k" && key != "min_justification" &&
            key != "extra_required_attributes")
            throw RequestError("unknown_field", "unknown field '" + key + "'");
    }

    QueryRequirements req;
    auto app = body.find("application");
    if (app == body.end() || !app->is_string())
        throw RequestError("invalid_application", "'application' must be a string");
    req.application = app->get<std::string>();

    auto size = body.find("size_k");
    if (size == body.end() || !size->is_number_integer())
        throw RequestError("invalid_size", "'size_k' must be an integer");
    req.size_k = size->get<int>();

    if (auto level = body.find("min_justification"); level != body.end() && !level->is_null()) {
        if (!level->is_string())
            throw RequestError("invalid_justification", "'min_justification' must be a string");
        req.min_justification = parse_threshold(level->get<std::string>());
        if (!req.min_justification)
            throw RequestError("invalid_justification",
                               "unknown justification level '" + level->get<std::string>() + "'");
    }

    if (auto extra = body.find("extra_required_attributes"); extra != body.end()) {
        if (!extra->is_array())
            throw RequestError("invalid_extra", "'extra_required_attributes' must be an array");
        for (const auto& item : *extra) {
            auto field = [&](const char* name) {
                if (!item.is_object() || !item.contains(name) || !item[name].is_string())
                    throw RequestError("invalid_extra",
                                       std::string("extra requirement needs string field '") +
                                           name + "'");
                return item[name].get<std::string>();
            };
            req.extra_required_attributes.push_back(
                {field("product_type"), field("attribute"), field("value")});
        }
    }
    return req;
}

QueryRequirements parse_configure_request(std::string_view body) {
    json parsed;
    try {
        parsed = json::parse(body);
    } catch (const json::parse_error& e) {
        throw RequestError("invalid_json", e.what());
    }
    return parse_configure_request(parsed);
}

ordered_json to_json(const QueryRequirements& req) {
    ordered_json extra = ordered_json::array();
    for (const auto& e : req.extra_required_attributes)
        extra.push_back({{"product_type", e.product_type}, {"attribute", e.attribute}, {"value", e.value}});
    return ordered_json{
        {"application", req.application},
        {"size_k", req.size_k},
        {"min_justification",
         req.min_justification ? ordered_json(to_string(*req.min_justification)) : ordered_json()},
        {"extra_required_attributes", std::move(extra)},
    };
}

namespace {

ordered_json port_ref(const PortRef& r) { return ordered_json::array({r.product, r.port}); }

ordered_json connection_entry(const ExplanationDocument::Connection& c, VerdictStatus status) {
    return ordered_json{
        {"kind", "connection"},
        {"from", port_ref(c.from)},
        {"to", port_ref(c.to)},
        {"port_type", c.port_type},
        {"basis", c.basis},
        {"status", to_string(status)},
        {"justification", c.justification ? robocim::to_json(*c.justification) : ordered_json()},
        {"text", c.text},
    };
}

ordered_json condition_entry(const ExplanationDocument::Condition& c) {
    return ordered_json{
        {"kind", "condition"},
        {"pair", ordered_json::array({c.product_a, c.product_b})},
        {"mediator", c.mediator},
        {"justification", robocim::to_json(c.justification)},
        {"text", c.text},
    };
}

}  // namespace

ordered_json to_json(const ExplanationDocument& doc) {
    ordered_json connections = ordered_json::array();
    for (const auto& c : doc.connections) {
        connections.push_back({{"from", port_ref(c.from)},
                               {"to", port_ref(c.to)},
                               {"port_type", c.port_type},
                               {"basis", c.basis},
                               {"justification",
                                c.justification ? robocim::to_json(*c.justification) : ordered_json()},
                               {"text", c.text}});
    }
    ordered_json conditions = ordered_json::array();
    for (const auto& c : doc.conditions) conditions.push_back(condition_entry(c));
    return ordered_json{{"products", doc.products},
                        {"certainty", to_string(doc.certainty)},
                        {"connections", std::move(connections)},
                        {"conditions", std::move(conditions)}};
}

ordered_json to_json(const Catalog& catalog, const Configuration& cfg) {
    ordered_json matching = ordered_json::array();
    for (const auto& [a, b] : cfg.matching)
        matching.push_back(ordered_json::array({port_ref(a), port_ref(b)}));

    ExplanationDocument doc = explain(catalog, cfg);
    ordered_json explanations = ordered_json::array();
    for (std::size_t i = 0; i < doc.connections.size(); ++i)
        explanations.push_back(connection_entry(doc.connections[i], cfg.explanations[i].status));
    for (const auto& c : doc.conditions) explanations.push_back(condition_entry(c));

    return ordered_json{{"products", cfg.products},
                        {"matching", std::move(matching)},
                        {"certainty", to_string(cfg.certainty)},
                        {"explanations", std::move(explanations)}};
}

ordered_json to_json(const UncertaintyEntry& entry) {
    return ordered_json{{"pair", ordered_json::array({entry.product_a, entry.product_b})},
                        {"reason", to_string(entry.reason)},
                        {"details", entry.details}};
}

QueryResult run_query(const Catalog& catalog, const QueryRequirements& req,
                      std::size_t max_results) {
    QueryResult result;
    result.query = req;
    result.configurations = enumerate_configurations(catalog, req);
    if (result.configurations.size() > max_results) {
        result.configurations.resize(max_results);
        result.truncated = true;
    }
    result.uncertain = report_uncertain(catalog, req);
    return result;
}

ordered_json to_json(const Catalog& catalog, const QueryResult& result) {
    ordered_json configurations = ordered_json::array();
    for (const auto& cfg : result.configurations) configurations.push_back(to_json(catalog, cfg));
    ordered_json uncertain = ordered_json::array();
    for (const auto& u : result.uncertain) uncertain.push_back(to_json(u));
    return ordered_json{{"query", to_json(result.query)},
                        {"configurations", std::move(configurations)},
                        {"truncated", result.truncated},
                        {"uncertain", std::move(uncertain)}};
}

std::string to_body(const ordered_json& value) { return value.dump(2) + "\n"; }

std::string configure_body(const Catalog& catalog, const QueryRequirements& req,
                           std::size_t max_results) {
    return to_body(to_json(catalog, run_query(catalog, req, max_results)));
}

ordered_json uncertain_json(const Catalog& catalog, const QueryRequirements& req) {
    ordered_json entries = ordered_json::array();
    for (const auto& u : report_uncertain(catalog, req)) entries.push_back(to_json(u));
    return ordered_json{
        {"min_justification",
         req.min_justification ? ordered_json(to_string(*req.min_justification)) : ordered_json()},
        {"uncertain", std::move(entries)}};
}

ordered_json error_json(std::string_view code, std::string_view message) {
    return ordered_json{{"error_code", code}, {"message", message}};
}

}  // namespace robocim::api
