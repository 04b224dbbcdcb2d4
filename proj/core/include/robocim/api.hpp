#pragma once

#include "robocim/catalog_json.hpp"
#include "robocim/solver.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

// Request parsing and result serialization shared by the CLI and the HTTP
// service, so both emit byte-identical bodies for the same query.
namespace robocim::api {

inline constexpr std::size_t kDefaultMaxResults = 1000;
inline constexpr const char* kMaxResultsEnv = "ROBOCIM_MAX_RESULTS";

/// Cap from ROBOCIM_MAX_RESULTS when set to a positive integer.
std::size_t max_results_from_env(std::size_t fallback = kDefaultMaxResults);

/// Malformed request body.  `code` is machine-readable.
class RequestError : public std::invalid_argument {
public:
    RequestError(std::string code, const std::string& message)
        : std::invalid_argument(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Decodes a ConfigureRequest body (application, size_k, optional
/// min_justification and extra_required_attributes).
QueryRequirements parse_configure_request(const nlohmann::json& body);
QueryRequirements parse_configure_request(std::string_view body);

std::optional<JustificationLevel> parse_threshold(std::string_view text);

ordered_json to_json(const QueryRequirements& req);
ordered_json to_json(const Catalog& catalog, const Configuration& cfg);
ordered_json to_json(const UncertaintyEntry& entry);
ordered_json to_json(const ExplanationDocument& doc);

struct QueryResult {
    QueryRequirements query;
    std::vector<Configuration> configurations;
    bool truncated = false;
    std::vector<UncertaintyEntry> uncertain;
};

/// Validates, enumerates, truncates to `max_results` and collects the
/// uncertainty report.  Throws InvalidQuery.
QueryResult run_query(const Catalog& catalog, const QueryRequirements& req,
                      std::size_t max_results);

ordered_json to_json(const Catalog& catalog, const QueryResult& result);

/// Two-space indented JSON followed by a newline.
std::string to_body(const ordered_json& value);

std::string configure_body(const Catalog& catalog, const QueryRequirements& req,
                           std::size_t max_results);

/// Body of the uncertainty report: {"min_justification", "uncertain"}.
ordered_json uncertain_json(const Catalog& catalog, const QueryRequirements& req);

ordered_json error_json(std::string_view code, std::string_view message);

}  // namespace robocim::api
