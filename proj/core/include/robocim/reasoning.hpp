#pragma once

#include "robocim/catalog.hpp"

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace robocim {

enum class VerdictStatus {
    compatible_by_default,
    compatible_by_evidence,
    incompatible,
    conditionally_incompatible,
    conflict,
};

std::string_view to_string(VerdictStatus status);

/// Outcome of weighing every claim about a product pair.
struct CompatibilityVerdict {
    VerdictStatus status = VerdictStatus::compatible_by_default;
    std::vector<CompatibilityClaim> supporting_claims;
    /// Strongest supporting evidence; empty for the default assumption.
    std::optional<JustificationLevel> strength;
    /// Set iff status is conditionally_incompatible.
    std::optional<std::string> mediator;

    bool allows_connection() const noexcept {
        return status == VerdictStatus::compatible_by_default ||
               status == VerdictStatus::compatible_by_evidence;
    }
};

struct PortRef {
    std::string product;
    std::string port;

    auto operator<=>(const PortRef&) const = default;
};

using PortPair = std::pair<PortRef, PortRef>;
using Matching = std::vector<PortPair>;

struct ConnectionCheck {
    PortRef port_a;
    PortRef port_b;
    CompatibilityVerdict verdict;
    bool structural_ok = false;

    bool allowed() const noexcept { return structural_ok && verdict.allows_connection(); }
};

struct ExtraRequirement {
    std::string product_type;
    std::string attribute;
    std::string value;

    bool operator==(const ExtraRequirement&) const = default;
};

struct QueryRequirements {
    std::string application{kAnyApplication};
    int size_k = 4;
    std::optional<JustificationLevel> min_justification;
    std::vector<ExtraRequirement> extra_required_attributes;
};

class UnknownProduct : public std::invalid_argument {
public:
    explicit UnknownProduct(const std::string& id)
        : std::invalid_argument("unknown product: " + id) {}
};

class UnknownPort : public std::invalid_argument {
public:
    explicit UnknownPort(const PortRef& ref)
        : std::invalid_argument("unknown port: " + ref.product + "/" + ref.port) {}
};

/// Rejected query; `code` is a stable machine-readable identifier
/// ("invalid_size", "unknown_application").
class InvalidQuery : public std::invalid_argument {
public:
    InvalidQuery(std::string code, const std::string& message)
        : std::invalid_argument(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Throws InvalidQuery for a size outside {4, 5} or an unknown application.
void validate_query(const Catalog& catalog, const QueryRequirements& req);

/// Default reasoning over compatibility claims.
///
/// Claims about (a, b) in either order are collected, including claims whose
/// subject is the series of a or b.  Direct scope additionally considers
/// configuration-scope incompatibility claims.  Without claims the pair is
/// compatible by default.  With one polarity, that polarity wins.  With both,
/// the strictly stronger justification wins; at equal strength a
/// product-level claim beats a series-level one, otherwise the result is a
/// conflict.  A claim carrying a mediator condition denies a direct
/// connection except through that mediator and counts on the incompatible
/// side.
CompatibilityVerdict resolve_compatibility(const Catalog& catalog, std::string_view a,
                                           std::string_view b, ClaimScope scope);

/// Structural agreement (distinct ports on distinct products, opposite
/// orientation, equal port type) plus the direct-scope verdict of the owners.
ConnectionCheck check_port_connection(const Catalog& catalog, const PortRef& a, const PortRef& b);

/// Matching-independent rules: product count, required product types,
/// flange adapter presence, application subtype, extra attribute
/// requirements, required ports and configuration-scope incompatibility.
std::vector<Diagnostic> check_product_set(const Catalog& catalog,
                                          std::span<const std::string> products,
                                          const QueryRequirements& req);

/// Full validity check of a configuration; empty iff valid.
std::vector<Diagnostic> check_configuration(const Catalog& catalog,
                                            std::span<const std::string> products,
                                            const Matching& matching,
                                            const QueryRequirements& req);

/// Required-port rules for the product's type (see Catalog::port_rules()).
/// The built-in rule accepts any port type containing "robot" followed by
/// "flange".
std::vector<Diagnostic> required_ports_check(const Catalog& catalog, const Product& product);

/// Role position used for canonical product ordering; unknown types sort
/// last.
int role_rank(std::string_view type);

}  // namespace robocim
