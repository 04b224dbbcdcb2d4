#include "robocim/solver.hpp"

#include <sstream>

namespace robocim {

namespace {

std::string display(const Catalog& catalog, const std::string& id) {
    const Product* p = catalog.find_product(id);
    if (!p) throw StaleConfiguration();
    return p->display_name.empty() ? id : p->display_name;
}

}  // namespace

ExplanationDocument explain(const Catalog& catalog, const Configuration& cfg) {
    if (cfg.catalog_fingerprint != catalog.fingerprint()) throw StaleConfiguration();

    ExplanationDocument doc;
    doc.products = cfg.products;
    doc.certainty = cfg.certainty;

    for (const auto& ev : cfg.explanations) {
        ExplanationDocument::Connection c;
        c.from = ev.connection.first;
        c.to = ev.connection.second;
        c.port_type = ev.port_type;
        c.from_display = display(catalog, c.from.product);
        c.to_display = display(catalog, c.to.product);

        std::ostringstream text;
        text << c.from.product << "/" << c.from.port << " (output) -> " << c.to.product << "/"
             << c.to.port << " (input) over '" << c.port_type << "': ";
        if (ev.claim) {
            c.basis = "claim";
            c.justification = ev.claim->justification;
            text << to_string(ev.claim->polarity) << " claim, "
                 << to_string(ev.claim->justification.level) << " evidence from '"
                 << ev.claim->justification.source << "'";
        } else {
            c.basis = "default assumption";
            text << "default assumption: same interface, no contrary evidence";
        }
        c.text = text.str();
        doc.connections.push_back(std::move(c));
    }

    for (const auto& m : cfg.conditions) {
        ExplanationDocument::Condition c;
        c.product_a = m.product_a;
        c.product_b = m.product_b;
        c.mediator = m.mediator;
        c.mediator_display = display(catalog, m.mediator);
        c.justification = m.claim.justification;
        c.text = m.product_a + " and " + m.product_b +
                 " may only be connected through data connection '" + m.mediator + "' (" +
                 c.mediator_display + "), which this configuration routes through; " +
                 std::string(to_string(m.claim.justification.level)) + " evidence from '" +
                 m.claim.justification.source + "'";
        doc.conditions.push_back(std::move(c));
    }
    return doc;
}

std::string ExplanationDocument::to_text() const {
    std::ostringstream out;
    out << "Configuration:";
    for (const auto& p : products) out << " " << p;
    out << "\nCertainty: " << to_string(certainty) << "\n";
    out << "Connections:\n";
    for (const auto& c : connections) out << "  - " << c.text << "\n";
    if (!conditions.empty()) {
        out << "Enabling conditions:\n";
        for (const auto& c : conditions) out << "  - " << c.text << "\n";
    }
    return out.str();
}

}  // namespace robocim
