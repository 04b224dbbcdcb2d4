#include "robocim/reasoning.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace robocim {

std::string_view to_string(VerdictStatus status) {
    switch (status) {
        case VerdictStatus::compatible_by_default: return "compatible_by_default";
        case VerdictStatus::compatible_by_evidence: return "compatible_by_evidence";
        case VerdictStatus::incompatible: return "incompatible";
        case VerdictStatus::conditionally_incompatible: return "conditionally_incompatible";
        case VerdictStatus::conflict: return "conflict";
    }
    return "unknown";
}

int role_rank(std::string_view type) {
    if (type == product_type::robotic_arm) return 0;
    if (type == product_type::flange_adapter) return 1;
    if (type == product_type::eecd) return 2;
    if (type == product_type::end_effector) return 3;
    if (type == product_type::data_connection) return 4;
    return 5;
}

void validate_query(const Catalog& catalog, const QueryRequirements& req) {
    if (req.size_k != 4 && req.size_k != 5)
        throw InvalidQuery("invalid_size", "size_k must be 4 or 5, got " + std::to_string(req.size_k));
    if (!catalog.find_application(req.application))
        throw InvalidQuery("unknown_application", "unknown application '" + req.application + "'");
}

namespace {

const Product& require_product(const Catalog& catalog, std::string_view id) {
    const Product* p = catalog.find_product(id);
    if (!p) throw UnknownProduct(std::string(id));
    return *p;
}

bool subject_matches(const std::string& subject, const Product& p) {
    return subject == p.id || (p.series_id && subject == *p.series_id);
}

// A mediator condition restricts how the subjects may be connected, so such
// claims are weighed against plain compatibility claims.
bool denies_direct(const CompatibilityClaim& c) {
    return c.polarity == Polarity::incompatible || c.mediator.has_value();
}

struct Side {
    std::vector<const CompatibilityClaim*> claims;
    int best_rank = -1;

    void add(const CompatibilityClaim& c) {
        claims.push_back(&c);
        best_rank = std::max(best_rank, strength_rank(c.justification.level));
    }
    bool empty() const { return claims.empty(); }

    int best_specificity(const Catalog& catalog) const {
        int best = 0;
        for (const auto* c : claims) {
            if (strength_rank(c->justification.level) != best_rank) continue;
            int s = (catalog.find_product(c->subject_a) ? 1 : 0) +
                    (catalog.find_product(c->subject_b) ? 1 : 0);
            best = std::max(best, s);
        }
        return best;
    }

    JustificationLevel level() const {
        return kAllJustificationLevels[3 - best_rank];
    }
};

std::vector<CompatibilityClaim> copy_claims(const std::vector<const CompatibilityClaim*>& claims) {
    std::vector<CompatibilityClaim> out;
    out.reserve(claims.size());
    for (const auto* c : claims) out.push_back(*c);
    return out;
}

CompatibilityVerdict support_verdict(const Side& side) {
    CompatibilityVerdict v;
    v.status = VerdictStatus::compatible_by_evidence;
    v.supporting_claims = copy_claims(side.claims);
    v.strength = side.level();
    return v;
}

CompatibilityVerdict deny_verdict(const Side& side) {
    CompatibilityVerdict v;
    v.supporting_claims = copy_claims(side.claims);
    v.strength = side.level();

    std::optional<std::string> mediator;
    bool unconditioned = false;
    for (const auto* c : side.claims) {
        if (strength_rank(c->justification.level) != side.best_rank) continue;
        if (!c->mediator) {
            unconditioned = true;
        } else if (!mediator || *c->mediator < *mediator) {
            mediator = c->mediator;
        }
    }
    if (unconditioned) {
        v.status = VerdictStatus::incompatible;
    } else {
        v.status = VerdictStatus::conditionally_incompatible;
        v.mediator = mediator;
    }
    return v;
}

}  // namespace

CompatibilityVerdict resolve_compatibility(const Catalog& catalog, std::string_view a,
                                           std::string_view b, ClaimScope scope) {
    const Product& pa = require_product(catalog, a);
    const Product& pb = require_product(catalog, b);
    if (pa.id == pb.id) throw std::invalid_argument("compatibility of a product with itself");

    Side support, deny;
    for (const auto& c : catalog.claims()) {
        bool forward = subject_matches(c.subject_a, pa) && subject_matches(c.subject_b, pb);
        bool backward = subject_matches(c.subject_a, pb) && subject_matches(c.subject_b, pa);
        if (!forward && !backward) continue;

        bool in_scope = c.scope == scope ||
                        (scope == ClaimScope::direct && c.scope == ClaimScope::configuration &&
                         c.polarity == Polarity::incompatible);
        if (!in_scope) continue;

        if (denies_direct(c)) {
            deny.add(c);
        } else {
            support.add(c);
        }
    }

    if (support.empty() && deny.empty()) return {};
    if (deny.empty()) return support_verdict(support);
    if (support.empty()) return deny_verdict(deny);

    if (support.best_rank > deny.best_rank) return support_verdict(support);
    if (deny.best_rank > support.best_rank) return deny_verdict(deny);

    int support_spec = support.best_specificity(catalog);
    int deny_spec = deny.best_specificity(catalog);
    if (support_spec > deny_spec) return support_verdict(support);
    if (deny_spec > support_spec) return deny_verdict(deny);

    CompatibilityVerdict v;
    v.status = VerdictStatus::conflict;
    v.supporting_claims = copy_claims(support.claims);
    for (const auto* c : deny.claims) v.supporting_claims.push_back(*c);
    v.strength = support.level();
    return v;
}

ConnectionCheck check_port_connection(const Catalog& catalog, const PortRef& a, const PortRef& b) {
    const Product* pa = catalog.find_product(a.product);
    const Product* pb = catalog.find_product(b.product);
    const Port* port_a = pa ? pa->find_port(a.port) : nullptr;
    const Port* port_b = pb ? pb->find_port(b.port) : nullptr;
    if (!port_a) throw UnknownPort(a);
    if (!port_b) throw UnknownPort(b);

    ConnectionCheck check{a, b, {}, false};
    check.structural_ok = a != b && a.product != b.product &&
                          port_a->orientation != port_b->orientation &&
                          port_a->port_type.value == port_b->port_type.value;
    if (a.product != b.product)
        check.verdict = resolve_compatibility(catalog, a.product, b.product, ClaimScope::direct);
    return check;
}

std::vector<Diagnostic> required_ports_check(const Catalog& catalog, const Product& product) {
    std::vector<Diagnostic> out;
    for (const PortRule& rule : catalog.port_rules()) {
        if (rule.product_type != product.type()) continue;
        bool satisfied = std::any_of(product.ports.begin(), product.ports.end(), [&](const Port& p) {
            const std::string& t = p.port_type.value;
            if (rule.members.empty()) {
                auto robot = t.find("robot");
                return robot != std::string::npos && t.find("flange", robot + 5) != std::string::npos;
            }
            return std::find(rule.members.begin(), rule.members.end(), t) != rule.members.end();
        });
        if (!satisfied)
            out.push_back({"required_port", product.id,
                           "product of type '" + rule.product_type + "' lacks a port of class '" +
                               rule.port_type_class + "'"});
    }
    return out;
}

std::vector<Diagnostic> check_product_set(const Catalog& catalog,
                                          std::span<const std::string> products,
                                          const QueryRequirements& req) {
    std::vector<Diagnostic> out;
    std::vector<const Product*> members;
    for (const auto& id : products) members.push_back(&require_product(catalog, id));

    if (static_cast<int>(products.size()) != req.size_k)
        out.push_back({"size", "configuration",
                       "expected " + std::to_string(req.size_k) + " products, got " +
                           std::to_string(products.size())});

    std::set<std::string_view> seen;
    for (const auto* p : members) {
        if (!seen.insert(p->id).second)
            out.push_back({"duplicate_product", p->id, "product listed more than once"});
    }

    for (const auto* p : members) {
        if (std::count_if(p->attributes.begin(), p->attributes.end(),
                          [](const Attribute& a) { return a.name == "type"; }) > 1)
            out.push_back({"ambiguous_type", p->id, "product declares more than one type"});
    }

    std::map<std::string_view, int> type_count;
    for (const auto* p : members) ++type_count[p->type()];
    std::vector<std::string_view> required = {product_type::robotic_arm, product_type::eecd,
                                              product_type::end_effector,
                                              product_type::data_connection};
    if (req.size_k == 5) required.push_back(product_type::flange_adapter);
    for (auto type : required) {
        if (type_count[type] != 1)
            out.push_back({"required_types", std::string(type),
                           "configuration must contain exactly one product of type '" +
                               std::string(type) + "', found " + std::to_string(type_count[type])});
    }
    if (req.size_k != 5 && type_count[product_type::flange_adapter] != 0)
        out.push_back({"required_types", std::string(product_type::flange_adapter),
                       "flange adapters only appear in five-product configurations"});

    auto app = catalog.find_application(req.application);
    if (!app) {
        out.push_back({"unknown_application", req.application, "application is not in the catalog"});
    } else if (app->end_effector_subtype) {
        for (const auto* p : members) {
            if (p->type() != product_type::end_effector) continue;
            const Attribute* subtype = p->find_attribute("subtype");
            if (!subtype || subtype->value.value != *app->end_effector_subtype)
                out.push_back({"application_subtype", p->id,
                               "application '" + app->name + "' requires an end-effector of subtype '" +
                                   *app->end_effector_subtype + "'"});
        }
    }

    for (const auto& extra : req.extra_required_attributes) {
        bool any = false;
        for (const auto* p : members) {
            if (p->type() != extra.product_type) continue;
            any = true;
            const Attribute* attr = p->find_attribute(extra.attribute);
            if (!attr || attr->value.value != extra.value)
                out.push_back({"extra_requirement", p->id,
                               "requires " + extra.attribute + "=" + extra.value});
        }
        if (!any)
            out.push_back({"extra_requirement", extra.product_type,
                           "no product of this type to carry " + extra.attribute + "=" + extra.value});
    }

    for (const auto* p : members) {
        for (auto& d : required_ports_check(catalog, *p)) out.push_back(std::move(d));
    }

    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (members[i]->id == members[j]->id) continue;
            auto v = resolve_compatibility(catalog, members[i]->id, members[j]->id,
                                           ClaimScope::configuration);
            if (v.status == VerdictStatus::incompatible || v.status == VerdictStatus::conflict)
                out.push_back({v.status == VerdictStatus::incompatible ? "configuration_incompatible"
                                                                       : "configuration_conflict",
                               members[i]->id + "," + members[j]->id,
                               "products must not coexist in one configuration"});
        }
    }
    return out;
}

namespace {

using Adjacency = std::map<std::string, std::set<std::string>>;

bool path_through(const Adjacency& graph, const std::string& from, const std::string& to,
                  const std::string& via) {
    // Simple-path DFS; configurations have at most a handful of products.
    std::set<std::string> visited{from};
    bool found = false;
    auto dfs = [&](auto&& self, const std::string& node, bool passed) -> void {
        if (found) return;
        auto it = graph.find(node);
        if (it == graph.end()) return;
        for (const auto& next : it->second) {
            if (visited.contains(next)) continue;
            if (next == to) {
                if (passed) found = true;
                continue;
            }
            visited.insert(next);
            self(self, next, passed || next == via);
            visited.erase(next);
        }
    };
    dfs(dfs, from, false);
    return found;
}

std::string describe(const PortRef& r) { return r.product + "/" + r.port; }

}  // namespace

std::vector<Diagnostic> check_configuration(const Catalog& catalog,
                                            std::span<const std::string> products,
                                            const Matching& matching,
                                            const QueryRequirements& req) {
    std::vector<Diagnostic> out = check_product_set(catalog, products, req);
    std::set<std::string, std::less<>> in_config(products.begin(), products.end());

    std::map<PortRef, int> usage;
    for (const auto& id : products) {
        for (const Port& port : require_product(catalog, id).ports) usage[{id, port.id}] = 0;
    }

    Adjacency graph;
    for (const auto& id : products) graph[id];

    for (const auto& [a, b] : matching) {
        const std::string where = describe(a) + "<->" + describe(b);
        ConnectionCheck check = check_port_connection(catalog, a, b);

        bool foreign = false;
        for (const PortRef* r : {&a, &b}) {
            if (!in_config.contains(r->product)) {
                out.push_back({"foreign_port", describe(*r),
                               "port belongs to a product outside the configuration"});
                foreign = true;
            } else if (++usage[*r] == 2) {
                out.push_back({"port_reused", describe(*r), "port is connected more than once"});
            }
        }
        if (a == b) {
            out.push_back({"self_connection", where, "a port cannot be connected to itself"});
            continue;
        }
        if (!check.structural_ok) {
            const Port* pa = catalog.find_product(a.product)->find_port(a.port);
            const Port* pb = catalog.find_product(b.product)->find_port(b.port);
            if (a.product == b.product)
                out.push_back({"same_product", where, "ports of one product cannot be connected"});
            if (pa->orientation == pb->orientation)
                out.push_back({"orientation", where, "connected ports need opposite orientation"});
            if (pa->port_type.value != pb->port_type.value)
                out.push_back({"interface_mismatch", where, "connected ports need the same port type"});
            continue;
        }
        if (!foreign) {
            graph[a.product].insert(b.product);
            graph[b.product].insert(a.product);
        }
        const auto& v = check.verdict;
        if (!v.allows_connection()) {
            std::string code = v.status == VerdictStatus::conflict ? "direct_conflict"
                               : v.status == VerdictStatus::conditionally_incompatible
                                   ? "conditional_incompatible"
                                   : "direct_incompatible";
            out.push_back({code, where, "products may not be connected directly"});
            continue;
        }
        if (req.min_justification) {
            if (v.status == VerdictStatus::compatible_by_default) {
                out.push_back({"evidence_threshold", where,
                               "connection rests on the default assumption"});
            } else if (justification_stronger(*req.min_justification, *v.strength)) {
                out.push_back({"evidence_threshold", where,
                               "connection evidence is below " +
                                   std::string(to_string(*req.min_justification))});
            }
        }
    }

    for (const auto& [ref, count] : usage) {
        if (count == 0) out.push_back({"unused_port", describe(ref), "every port must be connected"});
    }

    // Connectivity of the product graph.
    if (!products.empty() && in_config.size() == products.size()) {
        std::set<std::string> reached{products.front()};
        std::vector<std::string> stack{products.front()};
        while (!stack.empty()) {
            auto node = stack.back();
            stack.pop_back();
            for (const auto& next : graph[node]) {
                if (reached.insert(next).second) stack.push_back(next);
            }
        }
        if (reached.size() != in_config.size())
            out.push_back({"disconnected", "configuration", "products do not form one connected system"});
    }

    // Mediated pairs must be linked by a route through the mediator.
    for (auto i = in_config.begin(); i != in_config.end(); ++i) {
        for (auto j = std::next(i); j != in_config.end(); ++j) {
            auto v = resolve_compatibility(catalog, *i, *j, ClaimScope::direct);
            if (v.status != VerdictStatus::conditionally_incompatible) continue;
            const std::string pair = *i + "," + *j;
            if (!in_config.contains(*v.mediator)) {
                out.push_back({"mediator_missing", pair,
                               "pair requires mediator '" + *v.mediator + "' in the configuration"});
            } else if (!path_through(graph, *i, *j, *v.mediator)) {
                out.push_back({"mediator_not_on_path", pair,
                               "pair must be connected through '" + *v.mediator + "'"});
            }
        }
    }

    if (req.size_k == 5) {
        const Product* adapter = nullptr;
        for (const auto& id : in_config) {
            const Product& p = require_product(catalog, id);
            if (p.type() == product_type::flange_adapter) adapter = &p;
        }
        if (adapter) {
            for (auto type : {product_type::robotic_arm, product_type::eecd}) {
                bool linked = false;
                for (const auto& n : graph[adapter->id]) {
                    if (catalog.find_product(n)->type() == type) linked = true;
                }
                if (!linked)
                    out.push_back({"flange_adapter_placement", adapter->id,
                                   "flange adapter must connect directly to the " + std::string(type)});
            }
        }
    }
    return out;
}

}  // namespace robocim
