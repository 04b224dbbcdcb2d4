#include "robocim/catalog.hpp"

#include "robocim/reasoning.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace robocim {

std::string_view to_string(JustificationLevel level) {
    switch (level) {
        case JustificationLevel::primary: return "primary";
        case JustificationLevel::empirical: return "empirical";
        case JustificationLevel::secondary: return "secondary";
        case JustificationLevel::observation: return "observation";
    }
    return "unknown";
}

std::optional<JustificationLevel> parse_justification_level(std::string_view text) {
    for (auto level : kAllJustificationLevels) {
        if (to_string(level) == text) return level;
    }
    return std::nullopt;
}

std::string_view to_string(Orientation orientation) {
    return orientation == Orientation::input ? "input" : "output";
}

std::string_view to_string(Polarity polarity) {
    return polarity == Polarity::compatible ? "compatible" : "incompatible";
}

std::string_view to_string(ClaimScope scope) {
    return scope == ClaimScope::direct ? "direct" : "configuration";
}

bool product_type::is_known(std::string_view type) {
    return type == robotic_arm || type == eecd || type == end_effector ||
           type == data_connection || type == flange_adapter;
}

const Attribute* Product::find_attribute(std::string_view name) const {
    auto it = std::find_if(attributes.begin(), attributes.end(),
                           [&](const Attribute& a) { return a.name == name; });
    return it == attributes.end() ? nullptr : &*it;
}

const Port* Product::find_port(std::string_view port_id) const {
    auto it = std::find_if(ports.begin(), ports.end(),
                           [&](const Port& p) { return p.id == port_id; });
    return it == ports.end() ? nullptr : &*it;
}

std::string_view Product::type() const {
    const Attribute* attr = find_attribute("type");
    return attr ? std::string_view(attr->value.value) : std::string_view();
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : CatalogError("parse error at line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

ReferenceError::ReferenceError(std::string id)
    : CatalogError("unresolved reference: " + id), id_(std::move(id)) {}

DuplicateIdError::DuplicateIdError(std::string id)
    : CatalogError("duplicate id: " + id), id_(std::move(id)) {}

Product resolve_series_inheritance(const Product& product, const ProductSeries& series) {
    Product out = product;
    out.attributes.clear();
    out.ports.clear();

    for (const Attribute& inherited : series.attributes) {
        if (product.find_attribute(inherited.name)) continue;
        Attribute a = inherited;
        a.inherited_from = series.id;
        out.attributes.push_back(std::move(a));
    }
    out.attributes.insert(out.attributes.end(), product.attributes.begin(),
                          product.attributes.end());

    for (const Port& inherited : series.ports) {
        if (product.find_port(inherited.id)) continue;
        Port p = inherited;
        p.inherited_from = series.id;
        out.ports.push_back(std::move(p));
    }
    out.ports.insert(out.ports.end(), product.ports.begin(), product.ports.end());

    // Keep a stable order independent of whether an entry was already
    // resolved: by name / id.
    std::stable_sort(out.attributes.begin(), out.attributes.end(),
                     [](const Attribute& l, const Attribute& r) { return l.name < r.name; });
    std::stable_sort(out.ports.begin(), out.ports.end(),
                     [](const Port& l, const Port& r) { return l.id < r.id; });
    return out;
}

namespace {

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

const std::vector<PortRule>& default_port_rules() {
    static const std::vector<PortRule> rules = {
        {std::string(product_type::robotic_arm), "robot_flange", {}},
    };
    return rules;
}

}  // namespace

Catalog::Catalog(CatalogDocument document) : document_(std::move(document)) {
    for (std::size_t i = 0; i < document_.series.size(); ++i) {
        const auto& id = document_.series[i].id;
        if (!series_index_.emplace(id, i).second) throw DuplicateIdError(id);
    }
    for (std::size_t i = 0; i < document_.products.size(); ++i) {
        const auto& id = document_.products[i].id;
        if (series_index_.contains(id) || !product_index_.emplace(id, i).second)
            throw DuplicateIdError(id);
    }
    std::set<std::string, std::less<>> app_names;
    for (const auto& app : document_.applications) {
        if (!app_names.insert(app.name).second) throw DuplicateIdError(app.name);
    }

    products_.reserve(document_.products.size());
    for (const Product& p : document_.products) {
        if (p.series_id) {
            const ProductSeries* s = find_series(*p.series_id);
            if (!s) throw ReferenceError(*p.series_id);
            products_.push_back(resolve_series_inheritance(p, *s));
        } else {
            products_.push_back(p);
        }
    }

    auto resolves = [&](const std::string& id) {
        return product_index_.contains(id) || series_index_.contains(id);
    };
    for (const auto& claim : document_.claims) {
        if (!resolves(claim.subject_a)) throw ReferenceError(claim.subject_a);
        if (!resolves(claim.subject_b)) throw ReferenceError(claim.subject_b);
        if (claim.mediator && !product_index_.contains(*claim.mediator))
            throw ReferenceError(*claim.mediator);
    }

    fingerprint_ = fnv1a(serialize_catalog(document_));
}

const Product* Catalog::find_product(std::string_view id) const {
    auto it = product_index_.find(id);
    return it == product_index_.end() ? nullptr : &products_[it->second];
}

const ProductSeries* Catalog::find_series(std::string_view id) const {
    auto it = series_index_.find(id);
    return it == series_index_.end() ? nullptr : &document_.series[it->second];
}

std::optional<ApplicationSpec> Catalog::find_application(std::string_view name) const {
    for (const auto& app : document_.applications) {
        if (app.name == name) return app;
    }
    if (name == kAnyApplication) return ApplicationSpec{std::string(kAnyApplication), {}};
    return std::nullopt;
}

std::vector<std::string> Catalog::application_names() const {
    std::set<std::string> names{std::string(kAnyApplication)};
    for (const auto& app : document_.applications) names.insert(app.name);
    return {names.begin(), names.end()};
}

std::span<const PortRule> Catalog::port_rules() const noexcept {
    if (document_.port_rules) return *document_.port_rules;
    return default_port_rules();
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
    return os << "[" << d.code << "] " << d.subject << ": " << d.message;
}

Catalog parse_catalog(std::string_view json_text) {
    return Catalog(parse_catalog_document(json_text));
}

Catalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open catalog file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read catalog file: " + path.string());
    return parse_catalog(buffer.str());
}

namespace {

void check_value(std::vector<Diagnostic>& out, const std::string& owner,
                 const std::string& what, const AttributeValue& v) {
    if (v.value.empty())
        out.push_back({"empty_value", owner, what + " has an empty value"});
    if (v.justification.source.empty())
        out.push_back({"empty_source", owner, what + " has a justification without source"});
}

void check_container(std::vector<Diagnostic>& out, const std::string& owner,
                     std::span<const Attribute> attributes, std::span<const Port> ports) {
    std::set<std::string, std::less<>> names;
    for (const auto& a : attributes) {
        if (!names.insert(a.name).second)
            out.push_back({"duplicate_attribute", owner,
                           "attribute '" + a.name + "' declared more than once"});
        check_value(out, owner, "attribute '" + a.name + "'", a.value);
    }
    std::set<std::string, std::less<>> port_ids;
    for (const auto& p : ports) {
        if (!port_ids.insert(p.id).second)
            out.push_back({"duplicate_port", owner, "port '" + p.id + "' declared more than once"});
        check_value(out, owner, "port '" + p.id + "' type", p.port_type);
    }
}

}  // namespace

std::vector<Diagnostic> validate_catalog(const Catalog& catalog) {
    std::vector<Diagnostic> out;

    for (const auto& s : catalog.series()) check_container(out, s.id, s.attributes, s.ports);

    for (const Product& p : catalog.products()) {
        check_container(out, p.id, p.attributes, p.ports);
        if (p.ports.empty())
            out.push_back({"no_ports", p.id, "product must have at least one port"});

        auto types = std::count_if(p.attributes.begin(), p.attributes.end(),
                                   [](const Attribute& a) { return a.name == "type"; });
        if (types == 0) {
            out.push_back({"missing_type", p.id, "product has no 'type' attribute"});
        } else if (types == 1 && !product_type::is_known(p.type())) {
            out.push_back({"unknown_type", p.id,
                           "product type '" + std::string(p.type()) + "' is not recognised"});
        }
        for (auto& d : required_ports_check(catalog, p)) out.push_back(std::move(d));
    }

    for (std::size_t i = 0; i < catalog.claims().size(); ++i) {
        const auto& c = catalog.claims()[i];
        const std::string subject = "claim#" + std::to_string(i);
        if (c.subject_a == c.subject_b)
            out.push_back({"claim_subjects", subject, "subjects must be distinct"});
        if (c.mediator) {
            if (c.scope != ClaimScope::direct)
                out.push_back({"claim_condition", subject,
                               "mediator condition requires scope 'direct'"});
            if (*c.mediator == c.subject_a || *c.mediator == c.subject_b)
                out.push_back({"claim_condition", subject, "mediator must differ from subjects"});
        }
        if (c.justification.source.empty())
            out.push_back({"empty_source", subject, "justification without source"});
    }

    for (const auto& app : catalog.applications()) {
        if (app.name.empty())
            out.push_back({"application_name", "application", "application name is empty"});
        if (app.name == kAnyApplication && app.end_effector_subtype)
            out.push_back({"application_any", app.name,
                           "'any' must not require an end-effector subtype"});
    }

    if (catalog.has_explicit_port_rules()) {
        for (const auto& rule : catalog.port_rules()) {
            if (rule.members.empty())
                out.push_back({"port_rule", rule.product_type,
                               "port rule '" + rule.port_type_class + "' has no members"});
        }
    }
    return out;
}

}  // namespace robocim
