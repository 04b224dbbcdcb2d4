#include "cli.hpp"

#include "robocim/api.hpp"
#include "robocim/service.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

namespace robocim::cli {

namespace {

struct QueryFlags {
    std::string application{kAnyApplication};
    int size = 4;
    std::string min_justification;
};

void add_query_flags(CLI::App* cmd, QueryFlags& flags) {
    cmd->add_option("--application", flags.application, "Application name")
        ->capture_default_str();
    cmd->add_option("--size", flags.size, "Number of products in a configuration (4 or 5)")
        ->required()
        ->check(CLI::IsMember({4, 5}));
    cmd->add_option("--min-justification", flags.min_justification,
                    "Certainty threshold: primary, empirical, secondary or observation")
        ->check(CLI::IsMember({"primary", "empirical", "secondary", "observation"}));
}

QueryRequirements to_query(const QueryFlags& flags) {
    QueryRequirements req;
    req.application = flags.application;
    req.size_k = flags.size;
    if (!flags.min_justification.empty())
        req.min_justification = api::parse_threshold(flags.min_justification);
    return req;
}

// Loads and validates; diagnostics go to `err`.
std::optional<Catalog> load_valid(const std::string& path, std::ostream& err, int& code) {
    try {
        Catalog catalog = load_catalog(path);
        auto diagnostics = validate_catalog(catalog);
        if (!diagnostics.empty()) {
            for (const auto& d : diagnostics) err << d << "\n";
            code = kValidationFailure;
            return std::nullopt;
        }
        return catalog;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        code = kIoError;
    } catch (const CatalogError& e) {
        err << "error: " << e.what() << "\n";
        code = kValidationFailure;
    }
    return std::nullopt;
}

std::string product_label(const Catalog& catalog, const std::string& id) {
    const Product* p = catalog.find_product(id);
    return p && !p->display_name.empty() ? p->display_name : id;
}

void print_table(const Catalog& catalog, const api::QueryResult& result, std::ostream& out) {
    out << std::left << std::setw(5) << "#" << std::setw(12) << "certainty" << "products\n";
    for (std::size_t i = 0; i < result.configurations.size(); ++i) {
        const auto& cfg = result.configurations[i];
        std::string names;
        for (const auto& id : cfg.products) {
            if (!names.empty()) names += " | ";
            names += product_label(catalog, id);
        }
        out << std::left << std::setw(5) << i << std::setw(12) << to_string(cfg.certainty) << names
            << "\n";
    }
    out << result.configurations.size() << " configuration(s)";
    if (result.truncated) out << " (truncated)";
    out << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Knowledge-based configurator for modular robot systems", "robocim"};
    app.require_subcommand(1);

    std::string catalog_path;
    QueryFlags query;
    std::string format;
    std::size_t config_index = 0;
    std::string bind_address;
    std::string cors_origin = "*";

    auto* validate = app.add_subcommand("validate", "Check a catalog; diagnostics go to stderr");
    validate->add_option("catalog", catalog_path, "Catalog file")->required();

    auto* configure = app.add_subcommand("configure", "Enumerate valid configurations");
    configure->add_option("catalog", catalog_path, "Catalog file")->required();
    add_query_flags(configure, query);
    configure->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->default_str("table");

    auto* explain_cmd = app.add_subcommand("explain", "Explain one configuration of a query");
    explain_cmd->add_option("catalog", catalog_path, "Catalog file")->required();
    explain_cmd->add_option("--config-index", config_index, "Zero-based result index")->required();
    add_query_flags(explain_cmd, query);
    explain_cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->default_str("text");

    auto* uncertain = app.add_subcommand("uncertain", "List product pairs with uncertain compatibility");
    uncertain->add_option("catalog", catalog_path, "Catalog file")->required();
    uncertain->add_option("--min-justification", query.min_justification, "Certainty threshold")
        ->check(CLI::IsMember({"primary", "empirical", "secondary", "observation"}));
    uncertain->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "table"}))
        ->default_str("table");

    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
    serve_cmd->add_option("catalog", catalog_path, "Catalog file")->required();
    serve_cmd->add_option("--bind", bind_address, "HOST:PORT")->required();
    serve_cmd->add_option("--cors-origin", cors_origin, "Access-Control-Allow-Origin value")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }

    int code = kOk;
    const std::size_t max_results = api::max_results_from_env();

    if (*validate) {
        try {
            Catalog catalog = load_catalog(catalog_path);
            auto diagnostics = validate_catalog(catalog);
            for (const auto& d : diagnostics) err << d << "\n";
            if (!diagnostics.empty()) return kValidationFailure;
            out << "ok: " << catalog.products().size() << " products, "
                << catalog.claims().size() << " claims\n";
            return kOk;
        } catch (const IoError& e) {
            err << "error: " << e.what() << "\n";
            return kIoError;
        } catch (const CatalogError& e) {
            err << "error: " << e.what() << "\n";
            return kValidationFailure;
        }
    }

    if (*serve_cmd) {
        auto catalog = load_valid(catalog_path, err, code);
        if (!catalog) return code;
        try {
            auto [host, port] = parse_bind_address(bind_address);
            Service service(std::move(*catalog), ServiceOptions{max_results, cors_origin});
            int bound = service.bind(host, port);
            err << "serving on " << host << ":" << bound << "\n";
            service.listen();
            return kOk;
        } catch (const std::invalid_argument& e) {
            err << "usage error: " << e.what() << "\n";
            return kUsageError;
        } catch (const ServiceStartupError& e) {
            err << "error: " << e.what() << "\n";
            return kIoError;
        }
    }

    auto catalog = load_valid(catalog_path, err, code);
    if (!catalog) return code;

    try {
        if (*uncertain) {
            QueryRequirements req;
            if (!query.min_justification.empty())
                req.min_justification = api::parse_threshold(query.min_justification);
            if (format == "json") {
                out << api::to_body(api::uncertain_json(*catalog, req));
            } else {
                auto entries = report_uncertain(*catalog, req);
                for (const auto& u : entries)
                    out << std::left << std::setw(16) << to_string(u.reason) << u.product_a << " <-> "
                        << u.product_b << "  (" << u.details << ")\n";
                out << entries.size() << " uncertain pair(s)\n";
            }
            return kOk;
        }

        auto req = to_query(query);
        if (*configure) {
            auto result = api::run_query(*catalog, req, max_results);
            if (format == "json") {
                out << api::to_body(api::to_json(*catalog, result));
            } else {
                print_table(*catalog, result, out);
            }
            return kOk;
        }

        if (*explain_cmd) {
            auto configurations = enumerate_configurations(*catalog, req);
            if (config_index >= configurations.size()) {
                err << "usage error: --config-index " << config_index << " out of range ("
                    << configurations.size() << " configuration(s))\n";
                return kUsageError;
            }
            auto doc = explain(*catalog, configurations[config_index]);
            if (format == "json") {
                out << api::to_body(api::to_json(doc));
            } else {
                out << doc.to_text();
            }
            return kOk;
        }
    } catch (const InvalidQuery& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace robocim::cli
