#pragma once

#include "robocim/catalog.hpp"

#include <nlohmann/json.hpp>

namespace robocim {

using ordered_json = nlohmann::ordered_json;

// JSON encoders shared by the catalog writer, the result serializer and the
// HTTP service.  Key order is fixed.
ordered_json to_json(const Justification& j);
ordered_json to_json(const Attribute& a);
ordered_json to_json(const Port& p);
ordered_json to_json(const Product& p);
ordered_json to_json(const ProductSeries& s);
ordered_json to_json(const CompatibilityClaim& c);
ordered_json to_json(const ApplicationSpec& a);
ordered_json to_json(const PortRule& r);
ordered_json to_json(const CatalogDocument& doc);

}  // namespace robocim
