#include "robocim/service.hpp"

#include <httplib.h>

#include <charconv>
#include <sstream>

namespace robocim {

namespace {

ApiResponse error(int status, std::string_view code, std::string_view message) {
    return {status, api::to_body(api::error_json(code, message))};
}

ApiResponse ok(const ordered_json& body) { return {200, api::to_body(body)}; }

std::optional<std::string> param(const std::multimap<std::string, std::string>& params,
                                 const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second;
}

std::string hex(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << v;
    return out.str();
}

}  // namespace

ApiResponse handle_request(const Catalog& catalog, const ServiceOptions& options,
                           std::string_view method, std::string_view path,
                           const std::multimap<std::string, std::string>& params,
                           std::string_view body) {
    const bool get = method == "GET";

    if (path == "/api/health") {
        if (!get) return error(405, "method_not_allowed", "use GET");
        return ok({{"status", "ok"},
                   {"products", catalog.products().size()},
                   {"catalog_fingerprint", hex(catalog.fingerprint())}});
    }
    if (path == "/api/catalog") {
        if (!get) return error(405, "method_not_allowed", "use GET");
        return ok(to_json(catalog.document()));
    }
    if (path == "/api/applications") {
        if (!get) return error(405, "method_not_allowed", "use GET");
        return ok(ordered_json(catalog.application_names()));
    }
    if (path == "/api/products") {
        if (!get) return error(405, "method_not_allowed", "use GET");
        auto type = param(params, "type");
        ordered_json out = ordered_json::array();
        for (const auto& p : catalog.products()) {
            if (type && p.type() != *type) continue;
            out.push_back(to_json(p));
        }
        return ok(out);
    }
    if (path == "/api/uncertain") {
        if (!get) return error(405, "method_not_allowed", "use GET");
        QueryRequirements req;
        if (auto level = param(params, "min_justification"); level && !level->empty()) {
            req.min_justification = api::parse_threshold(*level);
            if (!req.min_justification)
                return error(400, "invalid_justification", "unknown justification level '" + *level + "'");
        }
        return ok(api::uncertain_json(catalog, req));
    }
    if (path == "/api/configure") {
        if (method != "POST") return error(405, "method_not_allowed", "use POST");
        try {
            auto req = api::parse_configure_request(body);
            return {200, api::configure_body(catalog, req, options.max_results)};
        } catch (const api::RequestError& e) {
            return error(400, e.code(), e.what());
        } catch (const InvalidQuery& e) {
            return error(400, e.code(), e.what());
        }
    }
    return error(404, "not_found", "no such endpoint: " + std::string(path));
}

struct Service::Impl {
    Catalog catalog;
    ServiceOptions options;
    httplib::Server server;

    Impl(Catalog c, ServiceOptions o) : catalog(std::move(c)), options(std::move(o)) {}

    void respond(const httplib::Request& request, httplib::Response& response) {
        std::multimap<std::string, std::string> params(request.params.begin(), request.params.end());
        ApiResponse r;
        try {
            r = handle_request(catalog, options, request.method, request.path, params, request.body);
        } catch (const std::exception& e) {
            r = error(500, "internal_error", e.what());
        }
        response.status = r.status;
        response.set_content(r.body, "application/json");
    }
};

Service::Service(Catalog catalog, ServiceOptions options) {
    auto diagnostics = validate_catalog(catalog);
    if (!diagnostics.empty()) {
        std::ostringstream out;
        out << "catalog has " << diagnostics.size() << " diagnostic(s); first: " << diagnostics.front();
        throw ServiceStartupError(out.str());
    }
    impl_ = std::make_unique<Impl>(std::move(catalog), std::move(options));

    auto& server = impl_->server;
    server.set_default_headers({
        {"Access-Control-Allow-Origin", impl_->options.cors_origin},
        {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
        {"Access-Control-Allow-Headers", "Content-Type"},
    });
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        impl_->respond(req, res);
    };
    server.Get(R"(/api/.*)", handler);
    server.Post(R"(/api/.*)", handler);
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
    });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        res.set_content(api::to_body(api::error_json("not_found", "no such endpoint: " + req.path)),
                        "application/json");
    });
}

Service::~Service() {
    if (impl_) impl_->server.stop();
}

int Service::bind(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                          : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0)
        throw ServiceStartupError("cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

void Service::stop() { impl_->server.stop(); }

const Catalog& Service::catalog() const noexcept { return impl_->catalog; }

std::pair<std::string, int> parse_bind_address(std::string_view address) {
    auto colon = address.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
        throw std::invalid_argument("bind address must be HOST:PORT");
    std::string_view port_text = address.substr(colon + 1);
    int port = -1;
    auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || end != port_text.data() + port_text.size() || port < 0 || port > 65535)
        throw std::invalid_argument("invalid port in bind address '" + std::string(address) + "'");
    return {std::string(address.substr(0, colon)), port};
}

void serve(const std::filesystem::path& catalog_path, const std::string& bind_address,
           ServiceOptions options) {
    auto [host, port] = parse_bind_address(bind_address);
    Service service(load_catalog(catalog_path), std::move(options));
    service.bind(host, port);
    service.listen();
}

}  // namespace robocim
