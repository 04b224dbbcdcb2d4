#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace robocim {

/// Provenance strength of a piece of information.  Declaration order is
/// strongest first; use justification_stronger() rather than comparing the
/// underlying values.
enum class JustificationLevel {
    primary,      // OEM data sheet or manual
    empirical,    // physical experiment
    secondary,    // another OEM's documentation
    observation,  // domain-expert assumption
};

inline constexpr JustificationLevel kAllJustificationLevels[] = {
    JustificationLevel::primary, JustificationLevel::empirical,
    JustificationLevel::secondary, JustificationLevel::observation};

/// Ordinal strength: primary = 3 ... observation = 0.
constexpr int strength_rank(JustificationLevel level) {
    return 3 - static_cast<int>(level);
}

/// True iff `a` is strictly stronger than `b`.
constexpr bool justification_stronger(JustificationLevel a, JustificationLevel b) {
    return strength_rank(a) > strength_rank(b);
}

std::string_view to_string(JustificationLevel level);
std::optional<JustificationLevel> parse_justification_level(std::string_view text);

struct Justification {
    JustificationLevel level = JustificationLevel::observation;
    std::string source;

    bool operator==(const Justification&) const = default;
};

struct AttributeValue {
    std::string value;
    Justification justification;

    bool operator==(const AttributeValue&) const = default;
};

struct Attribute {
    std::string name;
    AttributeValue value;
    /// Set on effective products when the attribute came from a series.
    std::optional<std::string> inherited_from;

    bool operator==(const Attribute&) const = default;
};

enum class Orientation { input, output };

std::string_view to_string(Orientation orientation);

struct Port {
    std::string id;
    Orientation orientation = Orientation::input;
    /// Interface identifier, compared by exact string equality.
    AttributeValue port_type;
    std::optional<std::string> inherited_from;

    bool operator==(const Port&) const = default;
};

namespace product_type {
inline constexpr std::string_view robotic_arm = "robotic_arm";
inline constexpr std::string_view eecd = "eecd";
inline constexpr std::string_view end_effector = "end_effector";
inline constexpr std::string_view data_connection = "data_connection";
inline constexpr std::string_view flange_adapter = "flange_adapter";

bool is_known(std::string_view type);
}  // namespace product_type

struct Product {
    std::string id;
    std::string display_name;
    std::string manufacturer;
    std::optional<std::string> series_id;
    std::vector<Attribute> attributes;
    std::vector<Port> ports;

    const Attribute* find_attribute(std::string_view name) const;
    const Port* find_port(std::string_view port_id) const;
    /// Value of the "type" attribute, or empty when absent.
    std::string_view type() const;

    bool operator==(const Product&) const = default;
};

struct ProductSeries {
    std::string id;
    std::string display_name;
    std::vector<Attribute> attributes;
    std::vector<Port> ports;

    bool operator==(const ProductSeries&) const = default;
};

enum class Polarity { compatible, incompatible };
enum class ClaimScope { direct, configuration };

std::string_view to_string(Polarity polarity);
std::string_view to_string(ClaimScope scope);

/// Defeasible evidence about a pair of products (or series).
struct CompatibilityClaim {
    Polarity polarity = Polarity::compatible;
    ClaimScope scope = ClaimScope::direct;
    std::string subject_a;
    std::string subject_b;
    /// Product through which the subjects may still be connected.
    std::optional<std::string> mediator;
    Justification justification;

    bool operator==(const CompatibilityClaim&) const = default;
};

struct ApplicationSpec {
    std::string name;
    std::optional<std::string> end_effector_subtype;

    bool operator==(const ApplicationSpec&) const = default;
};

inline constexpr std::string_view kAnyApplication = "any";

/// Products of `product_type` must expose at least one port whose type is
/// one of `members`.
struct PortRule {
    std::string product_type;
    std::string port_type_class;
    std::vector<std::string> members;

    bool operator==(const PortRule&) const = default;
};

/// Source form of a catalog, exactly as written on disk.  Products hold only
/// their locally declared attributes and ports.
struct CatalogDocument {
    int format_version = 1;
    std::vector<ProductSeries> series;
    std::vector<Product> products;
    std::vector<CompatibilityClaim> claims;
    std::vector<ApplicationSpec> applications;
    std::optional<std::vector<PortRule>> port_rules;

    bool operator==(const CatalogDocument&) const = default;
};

// ---------------------------------------------------------------------------
// Errors

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public CatalogError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class SchemaError : public CatalogError {
public:
    using CatalogError::CatalogError;
};

class ReferenceError : public CatalogError {
public:
    explicit ReferenceError(std::string id);
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class DuplicateIdError : public CatalogError {
public:
    explicit DuplicateIdError(std::string id);
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------

/// Applies series inheritance: series attributes/ports are added unless the
/// product declares one with the same name/id, which replaces it outright.
/// Inherited entries are tagged with the series id.  Idempotent.
Product resolve_series_inheritance(const Product& product, const ProductSeries& series);

/// Immutable, reference-checked knowledge base.
class Catalog {
public:
    /// Throws ReferenceError or DuplicateIdError.
    explicit Catalog(CatalogDocument document);

    const CatalogDocument& document() const noexcept { return document_; }

    /// Effective products (series inheritance applied), in document order.
    std::span<const Product> products() const noexcept { return products_; }
    std::span<const ProductSeries> series() const noexcept { return document_.series; }
    std::span<const CompatibilityClaim> claims() const noexcept { return document_.claims; }
    std::span<const ApplicationSpec> applications() const noexcept {
        return document_.applications;
    }

    const Product* find_product(std::string_view id) const;
    const ProductSeries* find_series(std::string_view id) const;
    /// "any" resolves even when the catalog does not declare it.
    std::optional<ApplicationSpec> find_application(std::string_view name) const;
    /// Declared application names plus "any", sorted.
    std::vector<std::string> application_names() const;
    /// Explicit rules from the file, or the built-in arm flange rule.
    bool has_explicit_port_rules() const noexcept { return document_.port_rules.has_value(); }
    std::span<const PortRule> port_rules() const noexcept;

    /// 64-bit FNV-1a hash of the canonical serialization.
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

private:
    CatalogDocument document_;
    std::vector<Product> products_;
    std::map<std::string, std::size_t, std::less<>> product_index_;
    std::map<std::string, std::size_t, std::less<>> series_index_;
    std::uint64_t fingerprint_ = 0;
};

/// A violated invariant, tagged with a stable code and the offending id.
struct Diagnostic {
    std::string code;
    std::string subject;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

std::ostream& operator<<(std::ostream& os, const Diagnostic& d);

CatalogDocument parse_catalog_document(std::string_view json_text);
Catalog parse_catalog(std::string_view json_text);
/// Throws IoError when the file cannot be read.
Catalog load_catalog(const std::filesystem::path& path);

/// Canonical JSON text (two-space indent, trailing newline).
std::string serialize_catalog(const CatalogDocument& document);

std::vector<Diagnostic> validate_catalog(const Catalog& catalog);

}  // namespace robocim
