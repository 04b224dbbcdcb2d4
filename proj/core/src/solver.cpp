#include "robocim/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace robocim {

std::string_view to_string(Certainty certainty) {
    switch (certainty) {
        case Certainty::default_assumption: return "default";
        case Certainty::observation: return "observation";
        case Certainty::secondary: return "secondary";
        case Certainty::empirical: return "empirical";
        case Certainty::primary: return "primary";
    }
    return "unknown";
}

Certainty certainty_of(JustificationLevel level) {
    return static_cast<Certainty>(strength_rank(level) + 1);
}

Certainty certainty_of(const CompatibilityVerdict& verdict) {
    if (verdict.status == VerdictStatus::compatible_by_default || !verdict.strength)
        return Certainty::default_assumption;
    return certainty_of(*verdict.strength);
}

std::string_view to_string(UncertaintyReason reason) {
    switch (reason) {
        case UncertaintyReason::default_only: return "default_only";
        case UncertaintyReason::conflict: return "conflict";
        case UncertaintyReason::below_threshold: return "below_threshold";
    }
    return "unknown";
}

bool canonical_less(const Configuration& a, const Configuration& b) {
    if (a.products != b.products) return a.products < b.products;
    return a.matching < b.matching;
}

namespace {

const Product& product_of(const Catalog& catalog, const std::string& id) {
    const Product* p = catalog.find_product(id);
    if (!p) throw UnknownProduct(id);
    return *p;
}

const CompatibilityClaim* strongest(const std::vector<CompatibilityClaim>& claims,
                                    VerdictStatus status) {
    const CompatibilityClaim* best = nullptr;
    for (const auto& c : claims) {
        bool on_side = status == VerdictStatus::compatible_by_evidence
                           ? c.polarity == Polarity::compatible && !c.mediator
                           : true;
        if (!on_side) continue;
        if (!best || justification_stronger(c.justification.level, best->justification.level))
            best = &c;
    }
    return best;
}

}  // namespace

Configuration make_configuration(const Catalog& catalog, std::vector<std::string> products,
                                 Matching matching) {
    Configuration cfg;
    std::sort(products.begin(), products.end(), [&](const std::string& l, const std::string& r) {
        int rl = role_rank(product_of(catalog, l).type());
        int rr = role_rank(product_of(catalog, r).type());
        return rl != rr ? rl < rr : l < r;
    });
    cfg.products = std::move(products);

    for (auto& [a, b] : matching) {
        const Port* pa = product_of(catalog, a.product).find_port(a.port);
        if (!pa) throw UnknownPort(a);
        if (pa->orientation == Orientation::input) std::swap(a, b);
    }
    std::sort(matching.begin(), matching.end());
    cfg.matching = std::move(matching);

    cfg.certainty = Certainty::primary;
    for (const auto& [out, in] : cfg.matching) {
        ConnectionEvidence ev;
        ev.connection = {out, in};
        ev.port_type = product_of(catalog, out.product).find_port(out.port)->port_type.value;
        auto verdict = resolve_compatibility(catalog, out.product, in.product, ClaimScope::direct);
        ev.status = verdict.status;
        if (const auto* claim = strongest(verdict.supporting_claims, verdict.status);
            claim && verdict.status != VerdictStatus::compatible_by_default)
            ev.claim = *claim;
        ev.grade = certainty_of(verdict);
        cfg.certainty = std::min(cfg.certainty, ev.grade);
        cfg.explanations.push_back(std::move(ev));
    }
    if (cfg.matching.empty()) cfg.certainty = Certainty::default_assumption;

    std::vector<std::string> ids = cfg.products;
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            auto v = resolve_compatibility(catalog, ids[i], ids[j], ClaimScope::direct);
            if (v.status != VerdictStatus::conditionally_incompatible) continue;
            MediatedPair m{ids[i], ids[j], *v.mediator, {}};
            for (const auto& c : v.supporting_claims) {
                if (c.mediator == v.mediator) {
                    m.claim = c;
                    break;
                }
            }
            cfg.conditions.push_back(std::move(m));
        }
    }
    cfg.catalog_fingerprint = catalog.fingerprint();
    return cfg;
}

// ---------------------------------------------------------------------------
// Backtracking search

namespace {

class Search {
public:
    Search(const Catalog& catalog, const QueryRequirements& req) : catalog_(catalog), req_(req) {
        slot_types_ = {product_type::robotic_arm};
        if (req.size_k == 5) slot_types_.push_back(product_type::flange_adapter);
        slot_types_.insert(slot_types_.end(), {product_type::eecd, product_type::end_effector,
                                               product_type::data_connection});

        for (std::size_t i = 0; i < catalog.products().size(); ++i)
            index_.emplace(catalog.products()[i].id, i);

        app_ = catalog.find_application(req.application);
        build_candidates();
        build_balance_bounds();
    }

    std::vector<Configuration> run() {
        if (infeasible_) return {};
        chosen_.clear();
        net_.assign(port_types_.size(), 0);
        descend(0);
        std::sort(results_.begin(), results_.end(), canonical_less);
        return std::move(results_);
    }

private:
    const Product& product(std::size_t i) const { return catalog_.products()[i]; }

    bool passes_unary_filters(const Product& p) const {
        if (!required_ports_check(catalog_, p).empty()) return false;
        if (p.type() == product_type::end_effector && app_ && app_->end_effector_subtype) {
            const Attribute* subtype = p.find_attribute("subtype");
            if (!subtype || subtype->value.value != *app_->end_effector_subtype) return false;
        }
        for (const auto& extra : req_.extra_required_attributes) {
            if (extra.product_type != p.type()) continue;
            const Attribute* a = p.find_attribute(extra.attribute);
            if (!a || a->value.value != extra.value) return false;
        }
        return true;
    }

    void build_candidates() {
        for (const auto& extra : req_.extra_required_attributes) {
            if (std::find(slot_types_.begin(), slot_types_.end(), extra.product_type) ==
                slot_types_.end())
                infeasible_ = true;
        }
        candidates_.resize(slot_types_.size());
        for (std::size_t s = 0; s < slot_types_.size(); ++s) {
            for (std::size_t i = 0; i < catalog_.products().size(); ++i) {
                const Product& p = product(i);
                if (p.type() != slot_types_[s]) continue;
                // A product whose "type" is declared twice is never counted
                // as exactly one of a kind.
                if (std::count_if(p.attributes.begin(), p.attributes.end(),
                                  [](const Attribute& a) { return a.name == "type"; }) != 1)
                    continue;
                if (passes_unary_filters(p)) candidates_[s].push_back(i);
            }
            if (candidates_[s].empty()) infeasible_ = true;
        }
    }

    // Net outputs minus inputs per port type; a total matching needs every
    // net to be zero, so partial assignments are bounded by what the
    // remaining slots can still contribute.
    void build_balance_bounds() {
        std::set<std::string> types;
        for (const auto& slot : candidates_)
            for (auto i : slot)
                for (const auto& port : product(i).ports) types.insert(port.port_type.value);
        port_types_.assign(types.begin(), types.end());

        auto type_index = [&](const std::string& t) {
            return static_cast<std::size_t>(
                std::lower_bound(port_types_.begin(), port_types_.end(), t) - port_types_.begin());
        };
        net_of_.clear();
        for (const auto& slot : candidates_) {
            for (auto i : slot) {
                auto& net = net_of_[i];
                net.assign(port_types_.size(), 0);
                for (const auto& port : product(i).ports)
                    net[type_index(port.port_type.value)] +=
                        port.orientation == Orientation::output ? 1 : -1;
            }
        }

        const std::size_t slots = candidates_.size();
        suffix_min_.assign(slots + 1, std::vector<int>(port_types_.size(), 0));
        suffix_max_.assign(slots + 1, std::vector<int>(port_types_.size(), 0));
        for (std::size_t s = slots; s-- > 0;) {
            for (std::size_t t = 0; t < port_types_.size(); ++t) {
                int lo = 0, hi = 0;
                bool first = true;
                for (auto i : candidates_[s]) {
                    int v = net_of_[i][t];
                    lo = first ? v : std::min(lo, v);
                    hi = first ? v : std::max(hi, v);
                    first = false;
                }
                suffix_min_[s][t] = suffix_min_[s + 1][t] + lo;
                suffix_max_[s][t] = suffix_max_[s + 1][t] + hi;
            }
        }
    }

    const CompatibilityVerdict& verdict(std::size_t a, std::size_t b, ClaimScope scope) {
        auto key = std::make_tuple(std::min(a, b), std::max(a, b), scope);
        auto it = verdicts_.find(key);
        if (it == verdicts_.end())
            it = verdicts_.emplace(key, resolve_compatibility(catalog_, product(a).id,
                                                              product(b).id, scope)).first;
        return it->second;
    }

    bool coexists(std::size_t a, std::size_t b) {
        auto status = verdict(a, b, ClaimScope::configuration).status;
        return status != VerdictStatus::incompatible && status != VerdictStatus::conflict;
    }

    void descend(std::size_t slot) {
        if (slot == candidates_.size()) {
            enumerate_matchings();
            return;
        }
        for (auto i : candidates_[slot]) {
            bool ok = std::all_of(chosen_.begin(), chosen_.end(),
                                  [&](std::size_t j) { return coexists(i, j); });
            if (!ok) continue;

            const auto& net = net_of_[i];
            bool balanced = true;
            for (std::size_t t = 0; t < net_.size() && balanced; ++t) {
                int now = net_[t] + net[t];
                if (now + suffix_min_[slot + 1][t] > 0 || now + suffix_max_[slot + 1][t] < 0)
                    balanced = false;
            }
            if (!balanced) continue;

            for (std::size_t t = 0; t < net_.size(); ++t) net_[t] += net[t];
            chosen_.push_back(i);
            descend(slot + 1);
            chosen_.pop_back();
            for (std::size_t t = 0; t < net_.size(); ++t) net_[t] -= net[t];
        }
    }

    struct PortSlot {
        std::size_t product;  // catalog index
        const Port* port;
    };

    bool connectable(const PortSlot& a, const PortSlot& b) {
        if (a.product == b.product) return false;
        if (a.port->orientation == b.port->orientation) return false;
        if (a.port->port_type.value != b.port->port_type.value) return false;
        const auto& v = verdict(a.product, b.product, ClaimScope::direct);
        if (!v.allows_connection()) return false;
        if (req_.min_justification) {
            if (v.status == VerdictStatus::compatible_by_default) return false;
            if (justification_stronger(*req_.min_justification, *v.strength)) return false;
        }
        return true;
    }

    void enumerate_matchings() {
        ports_.clear();
        for (auto i : chosen_)
            for (const auto& port : product(i).ports) ports_.push_back({i, &port});
        const std::size_t n = ports_.size();
        if (n % 2 != 0) return;

        allowed_.assign(n, std::vector<char>(n, 0));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                allowed_[a][b] = allowed_[b][a] = connectable(ports_[a], ports_[b]) ? 1 : 0;

        partner_.assign(n, kUnmatched);
        match_from(0);
    }

    static constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

    void match_from(std::size_t start) {
        std::size_t first = start;
        while (first < ports_.size() && partner_[first] != kUnmatched) ++first;
        if (first == ports_.size()) {
            accept_matching();
            return;
        }
        for (std::size_t other = first + 1; other < ports_.size(); ++other) {
            if (partner_[other] != kUnmatched || !allowed_[first][other]) continue;
            partner_[first] = other;
            partner_[other] = first;
            match_from(first + 1);
            partner_[first] = partner_[other] = kUnmatched;
        }
    }

    std::size_t position(std::size_t catalog_index) const {
        return static_cast<std::size_t>(std::find(chosen_.begin(), chosen_.end(), catalog_index) -
                                        chosen_.begin());
    }

    void accept_matching() {
        const std::size_t k = chosen_.size();
        std::vector<std::vector<char>> adjacent(k, std::vector<char>(k, 0));
        for (std::size_t a = 0; a < ports_.size(); ++a) {
            std::size_t b = partner_[a];
            std::size_t pa = position(ports_[a].product), pb = position(ports_[b].product);
            adjacent[pa][pb] = adjacent[pb][pa] = 1;
        }

        // Union-find connectivity.
        std::vector<std::size_t> parent(k);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                if (adjacent[a][b]) parent[find(a)] = find(b);
        for (std::size_t a = 1; a < k; ++a)
            if (find(a) != find(0)) return;

        if (!mediators_satisfied(adjacent)) return;

        if (req_.size_k == 5) {
            // Slots are arm, flange adapter, eecd, ...
            if (!adjacent[1][0] || !adjacent[1][2]) return;
        }

        std::vector<std::string> ids;
        for (auto i : chosen_) ids.push_back(product(i).id);
        Matching matching;
        for (std::size_t a = 0; a < ports_.size(); ++a) {
            std::size_t b = partner_[a];
            if (b < a) continue;
            matching.push_back({{product(ports_[a].product).id, ports_[a].port->id},
                                {product(ports_[b].product).id, ports_[b].port->id}});
        }
        results_.push_back(make_configuration(catalog_, std::move(ids), std::move(matching)));
    }

    // True when some ordering of intermediate products forms a route from
    // `from` to `to` that visits `via`.
    static bool routed_through(const std::vector<std::vector<char>>& adjacent, std::size_t from,
                               std::size_t to, std::size_t via) {
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < adjacent.size(); ++i)
            if (i != from && i != to && i != via) others.push_back(i);
        const std::size_t subsets = std::size_t{1} << others.size();
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            std::vector<std::size_t> inner{via};
            for (std::size_t b = 0; b < others.size(); ++b)
                if (mask & (std::size_t{1} << b)) inner.push_back(others[b]);
            std::sort(inner.begin(), inner.end());
            do {
                std::size_t prev = from;
                bool ok = true;
                for (auto node : inner) {
                    if (!adjacent[prev][node]) {
                        ok = false;
                        break;
                    }
                    prev = node;
                }
                if (ok && adjacent[prev][to]) return true;
            } while (std::next_permutation(inner.begin(), inner.end()));
        }
        return false;
    }

    bool mediators_satisfied(const std::vector<std::vector<char>>& adjacent) {
        const std::size_t k = chosen_.size();
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                const auto& v = verdict(chosen_[a], chosen_[b], ClaimScope::direct);
                if (v.status != VerdictStatus::conditionally_incompatible) continue;
                auto it = index_.find(*v.mediator);
                if (it == index_.end()) return false;
                std::size_t via = position(it->second);
                if (via == k) return false;
                if (!routed_through(adjacent, a, b, via)) return false;
            }
        }
        return true;
    }

    const Catalog& catalog_;
    const QueryRequirements& req_;
    std::optional<ApplicationSpec> app_;
    std::vector<std::string_view> slot_types_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<std::vector<std::size_t>> candidates_;
    bool infeasible_ = false;

    std::vector<std::string> port_types_;
    std::map<std::size_t, std::vector<int>> net_of_;
    std::vector<std::vector<int>> suffix_min_, suffix_max_;
    std::vector<int> net_;

    std::map<std::tuple<std::size_t, std::size_t, ClaimScope>, CompatibilityVerdict> verdicts_;

    std::vector<std::size_t> chosen_;
    std::vector<PortSlot> ports_;
    std::vector<std::vector<char>> allowed_;
    std::vector<std::size_t> partner_;
    std::vector<Configuration> results_;
};

}  // namespace

std::vector<Configuration> enumerate_configurations(const Catalog& catalog,
                                                    const QueryRequirements& req) {
    validate_query(catalog, req);
    return Search(catalog, req).run();
}

// ---------------------------------------------------------------------------
// Brute force

namespace {

void all_perfect_matchings(std::vector<PortRef>& ports, std::vector<char>& used, Matching& current,
                           const std::function<void(const Matching&)>& visit) {
    std::size_t first = 0;
    while (first < ports.size() && used[first]) ++first;
    if (first == ports.size()) {
        visit(current);
        return;
    }
    used[first] = 1;
    for (std::size_t other = first + 1; other < ports.size(); ++other) {
        if (used[other]) continue;
        used[other] = 1;
        current.push_back({ports[first], ports[other]});
        all_perfect_matchings(ports, used, current, visit);
        current.pop_back();
        used[other] = 0;
    }
    used[first] = 0;
}

}  // namespace

std::vector<Configuration> enumerate_bruteforce(const Catalog& catalog,
                                                const QueryRequirements& req) {
    const auto products = catalog.products();
    if (products.size() > CatalogTooLarge::kLimit) throw CatalogTooLarge(products.size());
    validate_query(catalog, req);

    std::vector<Configuration> out;
    const std::size_t n = products.size();
    const std::size_t k = static_cast<std::size_t>(req.size_k);
    if (k > n) return out;

    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        std::vector<std::string> ids;
        for (auto i : pick) ids.push_back(products[i].id);

        // Product-level rules do not depend on the matching.
        if (check_product_set(catalog, ids, req).empty()) {
            std::vector<PortRef> ports;
            for (auto i : pick)
                for (const auto& port : products[i].ports) ports.push_back({products[i].id, port.id});
            std::vector<char> used(ports.size(), 0);
            Matching current;
            all_perfect_matchings(ports, used, current, [&](const Matching& m) {
                if (check_configuration(catalog, ids, m, req).empty())
                    out.push_back(make_configuration(catalog, ids, m));
            });
        }

        // Next combination in lexicographic order.
        std::size_t pos = k;
        while (pos > 0 && pick[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) break;
        ++pick[pos - 1];
        for (std::size_t j = pos; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

// ---------------------------------------------------------------------------

std::vector<UncertaintyEntry> report_uncertain(const Catalog& catalog,
                                               const QueryRequirements& req) {
    std::vector<const Product*> products;
    for (const auto& p : catalog.products()) products.push_back(&p);
    std::sort(products.begin(), products.end(),
              [](const Product* l, const Product* r) { return l->id < r->id; });

    auto connectable = [](const Product& a, const Product& b) {
        for (const auto& pa : a.ports)
            for (const auto& pb : b.ports)
                if (pa.orientation != pb.orientation && pa.port_type.value == pb.port_type.value)
                    return true;
        return false;
    };

    std::vector<UncertaintyEntry> out;
    for (std::size_t i = 0; i < products.size(); ++i) {
        for (std::size_t j = i + 1; j < products.size(); ++j) {
            const Product& a = *products[i];
            const Product& b = *products[j];
            if (!connectable(a, b)) continue;
            auto v = resolve_compatibility(catalog, a.id, b.id, ClaimScope::direct);
            if (v.status == VerdictStatus::compatible_by_default) {
                out.push_back({a.id, b.id, UncertaintyReason::default_only,
                               "same interface, no evidence either way"});
            } else if (v.status == VerdictStatus::conflict) {
                out.push_back({a.id, b.id, UncertaintyReason::conflict,
                               "contradictory claims at " + std::string(to_string(*v.strength)) +
                                   " strength"});
            } else if (req.min_justification &&
                       justification_stronger(*req.min_justification, *v.strength)) {
                out.push_back({a.id, b.id, UncertaintyReason::below_threshold,
                               std::string(to_string(v.status)) + " backed only by " +
                                   std::string(to_string(*v.strength)) + " evidence"});
            }
        }
    }
    return out;
}

}  // namespace robocim
