#include "robocim/catalog_json.hpp"

#include <algorithm>
#include <initializer_list>

namespace robocim {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Encoding

ordered_json to_json(const Justification& j) {
    return ordered_json{{"level", to_string(j.level)}, {"source", j.source}};
}

namespace {

ordered_json value_json(const AttributeValue& v) {
    return ordered_json{{"value", v.value}, {"justification", to_json(v.justification)}};
}

}  // namespace

ordered_json to_json(const Attribute& a) {
    ordered_json out{{"name", a.name},
                     {"value", a.value.value},
                     {"justification", to_json(a.value.justification)}};
    if (a.inherited_from) out["inherited_from"] = *a.inherited_from;
    return out;
}

ordered_json to_json(const Port& p) {
    ordered_json out{{"id", p.id},
                     {"orientation", to_string(p.orientation)},
                     {"port_type", value_json(p.port_type)}};
    if (p.inherited_from) out["inherited_from"] = *p.inherited_from;
    return out;
}

namespace {

template <typename T>
ordered_json array_of(const std::vector<T>& items) {
    ordered_json out = ordered_json::array();
    for (const auto& item : items) out.push_back(to_json(item));
    return out;
}

}  // namespace

ordered_json to_json(const Product& p) {
    ordered_json out{{"id", p.id}, {"display_name", p.display_name}, {"manufacturer", p.manufacturer}};
    if (p.series_id) out["series_id"] = *p.series_id;
    out["attributes"] = array_of(p.attributes);
    out["ports"] = array_of(p.ports);
    return out;
}

ordered_json to_json(const ProductSeries& s) {
    return ordered_json{{"id", s.id},
                        {"display_name", s.display_name},
                        {"attributes", array_of(s.attributes)},
                        {"ports", array_of(s.ports)}};
}

ordered_json to_json(const CompatibilityClaim& c) {
    ordered_json out{{"polarity", to_string(c.polarity)},
                     {"scope", to_string(c.scope)},
                     {"subjects", ordered_json::array({c.subject_a, c.subject_b})}};
    if (c.mediator) out["condition"] = ordered_json{{"mediator", *c.mediator}};
    out["justification"] = to_json(c.justification);
    return out;
}

ordered_json to_json(const ApplicationSpec& a) {
    ordered_json out{{"name", a.name}};
    if (a.end_effector_subtype) out["end_effector_subtype"] = *a.end_effector_subtype;
    return out;
}

ordered_json to_json(const PortRule& r) {
    return ordered_json{{"product_type", r.product_type},
                        {"port_type_class", r.port_type_class},
                        {"members", r.members}};
}

ordered_json to_json(const CatalogDocument& doc) {
    ordered_json out{{"format_version", doc.format_version},
                     {"series", array_of(doc.series)},
                     {"products", array_of(doc.products)},
                     {"claims", array_of(doc.claims)},
                     {"applications", array_of(doc.applications)}};
    if (doc.port_rules) out["port_rules"] = array_of(*doc.port_rules);
    return out;
}

std::string serialize_catalog(const CatalogDocument& document) {
    return to_json(document).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Decoding.  Every object is checked against its allowed keys so that a
// misspelt field is reported instead of silently ignored.

namespace {

class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) fail("expected an object");
    }

    void allow_only(std::initializer_list<std::string_view> keys) const {
        for (const auto& [key, _] : node_.items()) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                fail("unknown key '" + key + "'");
        }
    }

    bool has(std::string_view key) const { return node_.contains(key); }

    const json& required(std::string_view key) const {
        auto it = node_.find(key);
        if (it == node_.end()) fail("missing required field '" + std::string(key) + "'");
        return *it;
    }

    std::string string(std::string_view key) const {
        const json& v = required(key);
        if (!v.is_string()) fail("field '" + std::string(key) + "' must be a string");
        return v.get<std::string>();
    }

    std::optional<std::string> optional_string(std::string_view key) const {
        if (!has(key)) return std::nullopt;
        return string(key);
    }

    const json& array(std::string_view key) const {
        const json& v = required(key);
        if (!v.is_array()) fail("field '" + std::string(key) + "' must be an array");
        return v;
    }

    const json* optional_array(std::string_view key) const {
        if (!has(key)) return nullptr;
        return &array(key);
    }

    std::string child(std::string_view key) const { return path_ + "." + std::string(key); }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& message) const {
        throw SchemaError(path_ + ": " + message);
    }

private:
    const json& node_;
    std::string path_;
};

std::string indexed(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

Justification read_justification(const json& node, const std::string& path) {
    Reader r(node, path);
    r.allow_only({"level", "source"});
    auto level_text = r.string("level");
    auto level = parse_justification_level(level_text);
    if (!level) r.fail("unknown justification level '" + level_text + "'");
    return {*level, r.string("source")};
}

Attribute read_attribute(const json& node, const std::string& path) {
    Reader r(node, path);
    r.allow_only({"name", "value", "justification"});
    Attribute a;
    a.name = r.string("name");
    a.value.value = r.string("value");
    a.value.justification = read_justification(r.required("justification"), r.child("justification"));
    return a;
}

Port read_port(const json& node, const std::string& path) {
    Reader r(node, path);
    r.allow_only({"id", "orientation", "port_type"});
    Port p;
    p.id = r.string("id");
    if (!r.has("orientation")) r.fail("port must have an orientation ('input' or 'output')");
    auto orientation = r.string("orientation");
    if (orientation == "input") {
        p.orientation = Orientation::input;
    } else if (orientation == "output") {
        p.orientation = Orientation::output;
    } else {
        r.fail("port orientation must be 'input' or 'output', got '" + orientation + "'");
    }
    Reader type(r.required("port_type"), r.child("port_type"));
    type.allow_only({"value", "justification"});
    p.port_type.value = type.string("value");
    p.port_type.justification =
        read_justification(type.required("justification"), type.child("justification"));
    return p;
}

template <typename T, typename Fn>
std::vector<T> read_list(const json* array, const std::string& path, Fn read) {
    std::vector<T> out;
    if (!array) return out;
    for (std::size_t i = 0; i < array->size(); ++i) out.push_back(read((*array)[i], indexed(path, i)));
    return out;
}

ProductSeries read_series(const json& node, const std::string& path) {
    Reader r(node, path);
    r.allow_only({"id", "display_name", "attributes", "ports"});
    ProductSeries s;
    s.id = r.string("id");
    s.display_name = r.optional_string("display_name").value_or("");
    s.attributes = read_list<Attribute>(r.optional_array("attributes"), r.child("attributes"), read_attribute);
    s.ports = read_list<Port>(r.optional_array("ports"), r.child("ports"), read_port);
    return s;
}

Product read_product(const json& node, const std::string& path) {
    Reader r(node, path);
    r.allow_only({"id", "display_name", "manufacturer", "series_id", "attributes", "ports"});
    Product p;
    p.id = r.string("id");
    p.display_name = r.string("display_name");
    p.manufacturer = r.string("manufacturer");
    p.series_id = r.optional_string("series_id");
    p.attributes = read_list<Attribute>(r.optional_array("attributes"), r.child("attributes"), read_attribute);
    p.ports = read_list<Port>(r.optional_array("ports"), r.child("ports"), read_port);
    return p;
}

CompatibilityClaim read_claim(const json& node, const std::string& path) {
    Reader r(node, path);
    r.allow_only({"polarity", "scope", "subjects", "condition", "justification"});
    CompatibilityClaim c;
    auto polarity = r.string("polarity");
    if (polarity == "compatible") {
        c.polarity = Polarity::compatible;
    } else if (polarity == "incompatible") {
        c.polarity = Polarity::incompatible;
    } else {
        r.fail("polarity must be 'compatible' or 'incompatible'");
    }
    auto scope = r.string("scope");
    if (scope == "direct") {
        c.scope = ClaimScope::direct;
    } else if (scope == "configuration") {
        c.scope = ClaimScope::configuration;
    } else {
        r.fail("scope must be 'direct' or 'configuration'");
    }
    const json& subjects = r.array("subjects");
    if (subjects.size() != 2 || !subjects[0].is_string() || !subjects[1].is_string())
        r.fail("subjects must be an array of exactly two ids");
    c.subject_a = subjects[0].get<std::string>();
    c.subject_b = subjects[1].get<std::string>();
    if (r.has("condition")) {
        Reader cond(r.required("condition"), r.child("condition"));
        cond.allow_only({"mediator"});
        c.mediator = cond.string("mediator");
    }
    c.justification = read_justification(r.required("justification"), r.child("justification"));
    return c;
}

ApplicationSpec read_application(const json& node, const std::string& path) {
    Reader r(node, path);
    r.allow_only({"name", "end_effector_subtype"});
    return {r.string("name"), r.optional_string("end_effector_subtype")};
}

PortRule read_port_rule(const json& node, const std::string& path) {
    Reader r(node, path);
    r.allow_only({"product_type", "port_type_class", "members"});
    PortRule rule;
    rule.product_type = r.string("product_type");
    rule.port_type_class = r.string("port_type_class");
    const json& members = r.array("members");
    for (const auto& m : members) {
        if (!m.is_string()) r.fail("port rule members must be strings");
        rule.members.push_back(m.get<std::string>());
    }
    return rule;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    // nlohmann reports the 1-based index of the last byte read.
    std::size_t line = 1, column = 1;
    std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace

CatalogDocument parse_catalog_document(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        auto [line, column] = line_column(json_text, e.byte);
        throw ParseError(e.what(), line, column);
    }

    Reader r(root, "$");
    r.allow_only({"format_version", "series", "products", "claims", "applications", "port_rules"});

    CatalogDocument doc;
    const json& version = r.required("format_version");
    if (!version.is_number_integer()) r.fail("format_version must be an integer");
    doc.format_version = version.get<int>();
    if (doc.format_version != 1)
        r.fail("unsupported format_version " + std::to_string(doc.format_version));

    doc.series = read_list<ProductSeries>(r.optional_array("series"), "$.series", read_series);
    doc.products = read_list<Product>(&r.array("products"), "$.products", read_product);
    doc.claims = read_list<CompatibilityClaim>(r.optional_array("claims"), "$.claims", read_claim);
    doc.applications =
        read_list<ApplicationSpec>(r.optional_array("applications"), "$.applications", read_application);
    if (r.has("port_rules"))
        doc.port_rules = read_list<PortRule>(&r.array("port_rules"), "$.port_rules", read_port_rule);
    return doc;
}

}  // namespace robocim
