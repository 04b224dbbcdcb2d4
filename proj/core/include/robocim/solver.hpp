#pragma once

#include "robocim/catalog.hpp"
#include "robocim/reasoning.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace robocim {

/// Weakest evidence grade in a configuration.  Ordered weakest first, so
/// the usual comparison operators rank grades.
enum class Certainty {
    default_assumption,
    observation,
    secondary,
    empirical,
    primary,
};

std::string_view to_string(Certainty certainty);
Certainty certainty_of(JustificationLevel level);
/// Certainty of a single connection verdict (default when unsupported).
Certainty certainty_of(const CompatibilityVerdict& verdict);

/// Why one connection is considered sound.
struct ConnectionEvidence {
    PortPair connection;  // output side first
    std::string port_type;
    VerdictStatus status = VerdictStatus::compatible_by_default;
    /// Strongest supporting claim; empty for the default assumption.
    std::optional<CompatibilityClaim> claim;
    Certainty grade = Certainty::default_assumption;

    bool operator==(const ConnectionEvidence&) const = default;
};

/// A pair that may coexist only through a mediator, and the claim saying so.
struct MediatedPair {
    std::string product_a;
    std::string product_b;
    std::string mediator;
    CompatibilityClaim claim;

    bool operator==(const MediatedPair&) const = default;
};

struct Configuration {
    /// Canonical role order: arm, [flange adapter], eecd, end-effector,
    /// data connection.
    std::vector<std::string> products;
    /// Each pair has its output port first; pairs are sorted.
    Matching matching;
    Certainty certainty = Certainty::default_assumption;
    std::vector<ConnectionEvidence> explanations;
    std::vector<MediatedPair> conditions;
    std::uint64_t catalog_fingerprint = 0;

    bool operator==(const Configuration&) const = default;
};

/// Canonical ordering of result lists: by product-id list, then matching.
bool canonical_less(const Configuration& a, const Configuration& b);

/// Builds a Configuration from an accepted product set and matching:
/// canonicalizes order and attaches the evidence trail.
Configuration make_configuration(const Catalog& catalog, std::vector<std::string> products,
                                 Matching matching);

/// All valid configurations for `req` in canonical order.  Backtracks over
/// role slots, pruning on configuration-scope incompatibility, application
/// and attribute requirements and port balance, then enumerates every
/// admissible total port matching.  Throws InvalidQuery.
std::vector<Configuration> enumerate_configurations(const Catalog& catalog,
                                                    const QueryRequirements& req);

class CatalogTooLarge : public std::invalid_argument {
public:
    explicit CatalogTooLarge(std::size_t n)
        : std::invalid_argument("brute-force enumeration is limited to " +
                                std::to_string(kLimit) + " products, catalog has " +
                                std::to_string(n)) {}
    static constexpr std::size_t kLimit = 14;
};

/// Reference enumeration: every size-k subset, every perfect matching of its
/// ports, filtered by check_configuration.  Throws CatalogTooLarge above 14
/// products.
std::vector<Configuration> enumerate_bruteforce(const Catalog& catalog,
                                                const QueryRequirements& req);

enum class UncertaintyReason { default_only, conflict, below_threshold };

std::string_view to_string(UncertaintyReason reason);

struct UncertaintyEntry {
    std::string product_a;  // lexicographically smaller id
    std::string product_b;
    UncertaintyReason reason = UncertaintyReason::default_only;
    std::string details;

    bool operator==(const UncertaintyEntry&) const = default;
};

/// Pairs with at least one structurally possible connection whose direct
/// verdict is default-only, conflicting, or backed only by evidence below
/// `req.min_justification`.  Sorted by pair, then reason.
std::vector<UncertaintyEntry> report_uncertain(const Catalog& catalog,
                                               const QueryRequirements& req);

// ---------------------------------------------------------------------------
// Explanations

class StaleConfiguration : public std::runtime_error {
public:
    StaleConfiguration()
        : std::runtime_error("configuration was produced against a different catalog") {}
};

struct ExplanationDocument {
    struct Connection {
        PortRef from;
        PortRef to;
        std::string port_type;
        std::string from_display;
        std::string to_display;
        /// "claim" or "default assumption".
        std::string basis;
        std::optional<Justification> justification;
        std::string text;
    };
    struct Condition {
        std::string product_a;
        std::string product_b;
        std::string mediator;
        std::string mediator_display;
        Justification justification;
        std::string text;
    };

    std::vector<std::string> products;
    std::vector<Connection> connections;
    std::vector<Condition> conditions;
    Certainty certainty = Certainty::default_assumption;

    std::string to_text() const;
};

/// Throws StaleConfiguration when `catalog` is not the one `cfg` came from.
ExplanationDocument explain(const Catalog& catalog, const Configuration& cfg);

}  // namespace robocim
