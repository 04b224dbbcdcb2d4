#pragma once

#include "robocim/api.hpp"
#include "robocim/catalog.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace robocim {

struct ServiceOptions {
    std::size_t max_results = api::kDefaultMaxResults;
    /// Value of Access-Control-Allow-Origin.
    std::string cors_origin = "*";
};

struct ApiResponse {
    int status = 200;
    std::string body;
};

/// Routes one request against the catalog.  Endpoints:
///   GET  /api/health
///   GET  /api/catalog
///   GET  /api/applications
///   GET  /api/products[?type=...]
///   POST /api/configure
///   GET  /api/uncertain[?min_justification=...]
/// Errors are {"error_code", "message"} with a 4xx status.
ApiResponse handle_request(const Catalog& catalog, const ServiceOptions& options,
                           std::string_view method, std::string_view path,
                           const std::multimap<std::string, std::string>& params,
                           std::string_view body);

class ServiceStartupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// HTTP front end over an immutable catalog.
class Service {
public:
    /// Throws ServiceStartupError when the catalog has diagnostics.
    explicit Service(Catalog catalog, ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds without serving.  Port 0 picks a free port.  Returns the bound
    /// port; throws ServiceStartupError on failure.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    void listen();
    void wait_until_ready() const;
    void stop();

    const Catalog& catalog() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// "HOST:PORT" split; throws std::invalid_argument.
std::pair<std::string, int> parse_bind_address(std::string_view address);

/// Loads and validates the catalog, binds and blocks serving requests.
void serve(const std::filesystem::path& catalog_path, const std::string& bind_address,
           ServiceOptions options = {});

}  // namespace robocim
